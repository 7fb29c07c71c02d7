LOSS_SQUARED_ERROR = "squared_error"
LOSS_BINARY_CROSS_ENTROPY = "binary_cross_entropy"
LOSS_KINDS = [LOSS_SQUARED_ERROR, LOSS_BINARY_CROSS_ENTROPY]
CLI_LOSS_ALIASES = {"mse": LOSS_SQUARED_ERROR, "bce": LOSS_BINARY_CROSS_ENTROPY}

GROUP_ALL = "all"

ACTIVATION_SIGMOID = "sigmoid"
ACTIVATION_IDENTITY = "identity"
FEATURE_MAP_SEED_PLACEHOLDER = "{seed}"

ALGO_OPTIMAL = "alg2"
ALGO_SUBOPTIMAL = "alg3"
ALGO_PENALTY = "penalty"
ALGO_LINEAR_RELAXATION = "linre"
ALGO_FAIRBATCH = "fairbatch"
ALGORITHMS = [ALGO_OPTIMAL, ALGO_SUBOPTIMAL, ALGO_PENALTY, ALGO_LINEAR_RELAXATION, ALGO_FAIRBATCH]
ALGO_EL_MINIMIZER = "el_minimizer"
ALGO_UNCONSTRAINED = "unconstrained"

COMMAND_TRAIN = "train"
COMMAND_SWEEP = "sweep"
COMMAND_REPORT = "report"
COMMAND_PRETRAIN = "pretrain"

SPLIT_TRAIN = "train"
SPLIT_TEST = "test"

RESULT_COLUMNS = ["algo", "gamma", "seed", "split", "loss", "loss_g0", "loss_g1", "gap", "runtime_ms"]
RESULT_KEY_COLUMNS = ["algo", "gamma", "seed", "split"]
CURVE_COLUMNS = ["gamma", "gap", "loss", "gap_std", "loss_std", "n_seeds"]
CURVE_FILE_TEMPLATE = "curve_{algo}.csv"

ENV_THREADS = "LOSSBALANCE_THREADS"

EXIT_OK = 0
EXIT_INPUT_ERROR = 2
EXIT_SCHEMA_ERROR = 3
EXIT_SOLVER_FAILURE = 4

SR_FLOOR = 0.05
SR_CEILING = 0.95

LOG_CELL_STARTED = "Cell started: {label}"
LOG_CELL_FINISHED = "Cell finished: {label} - Completed in {elapsed:.4f}s"
LOG_CELL_FAILED = "Cell failed: {label}"

LOG_NEWTON_ITERATION = "Newton iter {iteration}: f={value:.12g} |grad|={grad_norm:.3e} step={step:.3e}"
LOG_NEWTON_GRADIENT_FALLBACK = "Newton step failed to decrease the objective at iter {iteration}; falling back to a gradient step."
LOG_NEWTON_CONVERGED = "Unconstrained solve converged in {iterations} iterations (|grad|={grad_norm:.3e})."
LOG_NEWTON_FLAT_STEP = "Objective flat to machine precision at iter {iteration} (|grad|={grad_norm:.3e}); taking the full Newton step."
LOG_DUAL_INACTIVE = "Level {level:.6g}: unconstrained minimizer is feasible (con={con:.6g}); constraint inactive."
LOG_DUAL_BRACKET = "Level {level:.6g}: dual bracket found at mu={mu_high:.6g} after {expansions} expansions."
LOG_DUAL_SAMPLE = "Dual sample mu={mu:.6g} con={con:.12g} target={level:.12g}"
LOG_DUAL_DONE = "Level {level:.6g}: active at mu={mu:.6g} (con={con:.12g}) after {iterations} dual iterations."

LOG_EL_GROUP_OPTIMA = "Group optima computed: L0(wG0)={l0_g0:.6g} L1(wG1)={l1_g1:.6g} L(wO)={l_o:.6g}"
LOG_EL_ASSUMPTION = "Assumption check: margins=({m0:.6g}, {m1:.6g}) holds={holds}"
LOG_EL_ITERATION = "{algo} iter {iteration}: [{start:.8g}, {end:.8g}] mid={mid:.8g} value={value:.8g}"
LOG_EL_UNCONSTRAINED_FEASIBLE = "Unconstrained optimum already satisfies {gamma}-EL (gap={gap:.6g}); returning it."
LOG_EL_BRANCH_DONE = "Branch {sign}gamma: L={loss:.8g} gap={gap:.6g} tolerance={tolerance:.3e}"
LOG_EL_BRANCH_FAILED = "Branch {sign}gamma failed: {error}"
LOG_EL_BRANCH_CHOSEN = "Selected branch {sign}gamma with L={loss:.8g}."
LOG_EL_DISADVANTAGED = "Disadvantaged group at unconstrained optimum: {group} (g(0)={g0:.6g})."

LOG_PENALTY_STAGE = "Penalty stage t={t:.6g}: objective {start:.8g} -> {end:.8g} (gap={gap:.6g})"
LOG_PENALTY_STOPPED = "Penalty method stopped after {iterations} iterations (t={t:.6g})."
LOG_LINRE_INACTIVE = "Relaxed constraint inactive at the unconstrained optimum (r={residual:.6g}, gamma={gamma})."
LOG_LINRE_ACTIVE = "Relaxed constraint active on the {side} side (r={residual:.6g}, gamma={gamma})."
LOG_FAIRBATCH_EPOCH = "FairBatch epoch {epoch}: L0={l0:.6g} L1={l1:.6g} L={loss:.8g} SR=({sr0:.4f}, {sr1:.4f})"
LOG_FAIRBATCH_STOPPED = "FairBatch stopped after {epochs} epochs."

LOG_FEATURE_MAP_TRAINING = "Pre-training a {hidden_units}-unit {activation} network for {epochs} epochs (lr={lr})."
LOG_FEATURE_MAP_TRAINED = "Pre-training finished: final loss {loss:.6g}."
LOG_FEATURE_MAP_SAVED = "Feature map saved to {path}"

LOG_DATA_LOADING = "Loading dataset: {path}"
LOG_DATA_DROPPED = "Dropped {count} rows with missing or out-of-scope values."
LOG_DATA_LOADED = "Dataset loaded: n={n} (n0={n0}, n1={n1}), {d} feature columns."
LOG_DATA_SPLIT = "Split seed={seed}: train={n_train}, test={n_test}"

LOG_PREFLIGHT_START = "--- Starting input checks for command '{command}' ---"
LOG_PREFLIGHT_PASSED = "--- Input checks PASSED ---"
LOG_PREFLIGHT_FAILED = "--- Input checks FAILED ---"
LOG_PREFLIGHT_OK = "✅ {check}: {detail}"
LOG_PREFLIGHT_MISSING = "❌ {check}: not found at {path}"

LOG_RUN_START = "Running {cells} cells with {threads} worker thread(s)."
LOG_RUN_COMPLETE = "Run complete. {rows} result rows written to {path}"
LOG_REPORT_DUPLICATES = "Dropped {count} duplicate (algo, gamma, seed, split) rows."
LOG_REPORT_CURVE = "Wrote {rows} curve points to {path}"
LOG_CLI_ERROR = "{kind}: {error}"
LOG_FIXTURE_WRITTEN = "Wrote {rows} rows to {csv_path} and the schema to {schema_path}"

ERROR_MESSAGE_DIMENSION = "Dimension mismatch: expected {expected}, got {actual}."
ERROR_MESSAGE_NON_FINITE_WEIGHTS = "Weight vector contains non-finite entries."
ERROR_MESSAGE_EMPTY_GROUP = "Group {group} has no samples."
ERROR_MESSAGE_BCE_TARGETS = "Binary cross-entropy requires targets in {{0, 1}}."
ERROR_MESSAGE_NON_FINITE_START = "Objective is not finite at the starting point."
ERROR_MESSAGE_NEWTON_BUDGET = "Newton iteration budget ({budget}) exhausted; |grad|={grad_norm:.3e}."
ERROR_MESSAGE_NEWTON_STALLED = "Line search failed at iter {iteration}; |grad|={grad_norm:.3e}."
ERROR_MESSAGE_INFEASIBLE_LEVEL = "Level {level:.12g} is below the constraint minimum {floor:.12g}."
ERROR_MESSAGE_DUAL_BRACKET = "No dual bracket found up to mu={mu_max:.3g} (con={con:.12g} > level={level:.12g})."
ERROR_MESSAGE_ASSUMPTION = "Assumption violated: {detail} (margins m0={m0:.6g}, m1={m1:.6g}, gamma={gamma})."
ERROR_MESSAGE_BRANCHES_FAILED = "Both +gamma and -gamma branches failed to produce a feasible solution."
ERROR_MESSAGE_SEGMENT_ASSUMPTION = "g(1)={g1:.6g} exceeds gamma={gamma}; the segment never reaches the fairness band."
ERROR_MESSAGE_DIVERGED = "{algo} diverged at iteration {iteration}: objective is not finite."
ERROR_MESSAGE_DATASET_NOT_FOUND = "dataset not found: {path}"
ERROR_MESSAGE_SCHEMA_NOT_FOUND = "schema not found: {path}"
ERROR_MESSAGE_FEATURE_MAP_NOT_FOUND = "feature map not found: {path}"
ERROR_MESSAGE_RESULTS_NOT_FOUND = "results file not found: {path}"
ERROR_MESSAGE_OUTPUT_NOT_WRITABLE = "output directory not usable: {path}"
ERROR_MESSAGE_MISSING_COLUMNS = "Missing columns: {columns}"
ERROR_MESSAGE_UNPARSEABLE = "Unparseable value {value!r} at row {row}, column {column!r}."
ERROR_MESSAGE_MISSING_VALUE = "Missing value at row {row}, column {column!r}."
ERROR_MESSAGE_GROUP_VALUE = "Out-of-scope group value {value!r} at row {row}."
ERROR_MESSAGE_DEGENERATE_SPLIT = "Degenerate split: ratio={ratio} seed={seed} leaves a split without {what}."
ERROR_MESSAGE_SPLIT_RATIO = "Split ratio must lie in (0, 1); got {ratio}."
ERROR_MESSAGE_SCHEMA_INVALID = "Invalid schema file {path}: {error}"
ERROR_MESSAGE_RESULT_COLUMNS = "Results file {path} has columns {actual}; expected {expected}."
ERROR_MESSAGE_FEATURE_MAP_INPUT = "Feature map expects {expected} input features; dataset has {actual}."
ERROR_MESSAGE_FEATURE_MAP_SPLIT = "Feature map was pre-trained on the train split of seed={map_seed}, ratio={map_ratio}; cannot apply it to seed={seed}, ratio={ratio}."
ERROR_MESSAGE_FEATURE_MAP_TEMPLATE = "Writing maps for several seeds needs {placeholder} in the output path: {path}"
ERROR_MESSAGE_UNKNOWN_ALGO = "Unknown algorithm: {algo}"
ERROR_MESSAGE_GRID_DIMENSION = "Grid search supports dimensions 1 and 2; got {dim}."
ERROR_MESSAGE_REQUIRES_DATA = "{algo} needs a dataset-backed problem."
