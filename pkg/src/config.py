import yaml
import sys
from pathlib import Path
from pydantic import BaseModel, Field
from pydantic_settings import BaseSettings, SettingsConfigDict
from typing import Literal, Dict, Any, List

from . import constants
from .schemas.solver_schemas import SolverConfig
from .schemas.fairness_schemas import PenaltyConfig, FairBatchConfig

ROOT_DIR = Path(__file__).resolve().parent.parent


class AppSettings(BaseModel):
    title: str = "lossbalance"
    description: str = "Train regression and classification models under the equalized loss fairness constraint."
    version: str = "1.0.0"


class LoggingSettings(BaseModel):
    level: str = "INFO"


class FairnessSettings(BaseModel):
    epsilon: float = Field(0.01, gt=0.0)
    eta: float = Field(0.002, ge=0.0)


class FeatureMapSettings(BaseModel):
    hidden_units: int = Field(125, gt=0)
    activation: Literal[constants.ACTIVATION_SIGMOID, constants.ACTIVATION_IDENTITY] = constants.ACTIVATION_SIGMOID
    lr: float = Field(0.001, gt=0.0)
    epochs: int = Field(2000, gt=0)


class DataSettings(BaseModel):
    train_ratio: float = Field(0.7, gt=0.0, lt=1.0)
    seeds: List[int] = [0, 1, 2, 3, 4]


class SweepSettings(BaseModel):
    gammas: List[float] = [0.025, 0.05, 0.1, 0.15, 0.2]


class Settings(BaseSettings):

    model_config = SettingsConfigDict(
        env_file=ROOT_DIR / '.env',
        env_file_encoding='utf-8',
        env_nested_delimiter='__',
        extra='ignore'
    )

    app: AppSettings = AppSettings()
    logging: LoggingSettings = LoggingSettings()
    solver: SolverConfig = SolverConfig()
    fairness: FairnessSettings = FairnessSettings()
    penalty: PenaltyConfig = PenaltyConfig()
    fairbatch: FairBatchConfig = FairBatchConfig()
    feature_map: FeatureMapSettings = FeatureMapSettings()
    data: DataSettings = DataSettings()
    sweep: SweepSettings = SweepSettings()

    threads: int = Field(1, gt=0, alias=constants.ENV_THREADS)

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls,
        init_settings,
        env_settings,
        dotenv_settings,
        file_secret_settings,
    ):
        def yaml_source() -> Dict[str, Any]:
            yaml_config_path = ROOT_DIR / "config.yaml"
            if not yaml_config_path.is_file():
                return {}
            try:
                with open(yaml_config_path, "r") as f:
                    return yaml.safe_load(f) or {}
            except (yaml.YAMLError, IOError) as e:
                print(f"ERROR: Could not load or parse config.yaml: {e}", file=sys.stderr)
                return {}

        return (init_settings, env_settings, dotenv_settings, yaml_source, file_secret_settings)


settings = Settings()
