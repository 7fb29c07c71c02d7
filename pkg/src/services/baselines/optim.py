import numpy as np
import torch


class AdamStepper:
    """torch.optim.Adam (default betas and eps) over a single weight vector whose gradient is supplied by the caller."""

    def __init__(self, start: np.ndarray, lr: float):
        self.param = torch.nn.Parameter(torch.tensor(np.asarray(start, dtype=np.float64)))
        self.optimizer = torch.optim.Adam([self.param], lr=lr)

    @property
    def w(self) -> np.ndarray:
        return self.param.detach().numpy().copy()

    def step(self, gradient: np.ndarray) -> np.ndarray:
        self.param.grad = torch.tensor(np.asarray(gradient, dtype=np.float64))
        self.optimizer.step()
        return self.w
