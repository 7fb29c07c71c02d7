"""
Two-group quadratic problems L_a(w) = (w - c_a)^T Q_a (w - c_a) + d_a with
oracles that do not go through the bisection algorithms.
"""
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from src import constants
from src.core.objectives import LossProblem, QuadraticObjective
from src.exceptions import AssumptionViolationError

logger = logging.getLogger(__name__)


class SyntheticQuadratic(LossProblem):

    def __init__(
        self,
        curvatures: Sequence[np.ndarray],
        centers: Sequence[np.ndarray],
        offsets: Sequence[float] = (0.0, 0.0),
        group_weights: Tuple[float, float] = (0.5, 0.5),
    ):
        objectives = []
        for curvature, center, offset in zip(curvatures, centers, offsets):
            curvature = np.atleast_2d(np.asarray(curvature, dtype=float))
            if not np.allclose(curvature, curvature.T):
                raise ValueError("curvature matrices must be symmetric")
            if np.linalg.eigvalsh(curvature).min() <= 0.0:
                raise ValueError("curvature matrices must be positive definite")
            objectives.append(QuadraticObjective(curvature, center, offset))
        if len(objectives) != 2 or objectives[0].dim != objectives[1].dim:
            raise ValueError("expected two groups of equal dimension")
        p0, p1 = (float(p) for p in group_weights)
        if not (0.0 <= p0 <= 1.0 and abs(p0 + p1 - 1.0) <= 1e-12):
            raise ValueError(f"group_weights must be a distribution over two groups; got {group_weights}")
        self._objectives = objectives
        self._weights = (p0, p1)

    @classmethod
    def scalar(
        cls,
        center_0: float,
        center_1: float,
        group_weights: Tuple[float, float] = (0.5, 0.5),
        offsets: Tuple[float, float] = (0.0, 0.0),
    ) -> "SyntheticQuadratic":
        """1-D instance L_a(w) = (w - c_a)^2 + d_a."""
        return cls([[[1.0]], [[1.0]]], [[center_0], [center_1]], offsets, group_weights)

    @classmethod
    def random(
        cls,
        dim: int,
        rng: np.random.Generator,
        min_margin: float = 0.0,
        max_tries: int = 1000,
    ) -> "SyntheticQuadratic":
        """Draw instances until both assumption margins exceed ``min_margin``."""
        for _ in range(max_tries):
            curvatures = []
            for _group in range(2):
                a = rng.normal(size=(dim, dim)) / np.sqrt(dim)
                curvatures.append(a @ a.T + 0.5 * np.eye(dim))
            centers = [rng.normal(scale=1.5, size=dim) for _group in range(2)]
            offsets = rng.uniform(0.0, 0.5, size=2)
            p0 = rng.uniform(0.2, 0.8)
            problem = cls(curvatures, centers, offsets, (p0, 1.0 - p0))
            if min(problem.assumption_margins()) > min_margin:
                return problem
        raise RuntimeError(f"no instance with margins above {min_margin} after {max_tries} draws")

    @property
    def dim(self) -> int:
        return self._objectives[0].dim

    @property
    def group_weights(self) -> Tuple[float, float]:
        return self._weights

    def group_objective(self, group: int) -> QuadraticObjective:
        return self._objectives[group]

    def group_optimum(self, group: int) -> np.ndarray:
        return self._objectives[group].center.copy()

    def assumption_margins(self) -> Tuple[float, float]:
        """(L_1(c_0) - L_0(c_0), L_0(c_1) - L_1(c_1))."""
        c0, c1 = self.group_optimum(0), self.group_optimum(1)
        l0_g0, l1_g0, _ = self.group_losses(c0)
        l0_g1, l1_g1, _ = self.group_losses(c1)
        return l1_g0 - l0_g0, l0_g1 - l1_g1

    def pareto_point(self, mu: float) -> np.ndarray:
        """argmin (p_0 + mu) L_0 + (p_1 - mu) L_1 for mu in [-p_0, p_1]."""
        q0, q1 = self._objectives[0].curvature, self._objectives[1].curvature
        c0, c1 = self._objectives[0].center, self._objectives[1].center
        a, b = self._weights[0] + mu, self._weights[1] - mu
        return np.linalg.solve(a * q0 + b * q1, a * q0 @ c0 + b * q1 @ c1)

    def batch_losses(self, points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """L_0 and L_1 at every row of ``points``."""
        losses = []
        for objective in self._objectives:
            diff = points - objective.center
            losses.append(np.einsum("ij,jk,ik->i", diff, objective.curvature, diff) + objective.offset)
        return losses[0], losses[1]


def synth_oracle_solve(problem: SyntheticQuadratic, gamma: float) -> Tuple[np.ndarray, float]:
    """
    Optimal gamma-EL point through the Pareto parametrization.

    Along w(mu) the gap L_0 - L_1 falls from m_1 (at mu = -p_0, w = c_1) to
    -m_0 (at mu = p_1, w = c_0); each side of the band is one brentq root.
    """
    p0, p1 = problem.group_weights

    def gap(mu: float) -> float:
        l0, l1, _ = problem.group_losses(problem.pareto_point(mu))
        return l0 - l1

    w_o = problem.pareto_point(0.0)
    l0, l1, loss = problem.group_losses(w_o)
    if abs(l0 - l1) <= gamma:
        return w_o, loss

    margins = problem.assumption_margins()
    if not (margins[0] > gamma and margins[1] > gamma):
        raise AssumptionViolationError(
            constants.ERROR_MESSAGE_ASSUMPTION.format(
                detail="both margins must exceed gamma", m0=margins[0], m1=margins[1], gamma=gamma
            ),
            margins=margins,
        )

    candidates: List[Tuple[np.ndarray, float]] = []
    for target in ((gamma, -gamma) if gamma > 0.0 else (0.0,)):
        mu = brentq(lambda m: gap(m) - target, -p0, p1, xtol=1e-14, rtol=1e-14, maxiter=500)
        w = problem.pareto_point(mu)
        candidates.append((w, problem.group_losses(w)[2]))
    return min(candidates, key=lambda item: item[1])


def _search_half_width(problem: SyntheticQuadratic) -> float:
    # the Pareto curve stays within cond(Q_1) * |c_1 - c_0| of c_0
    c0, c1 = problem.group_optimum(0), problem.group_optimum(1)
    conditions = [np.linalg.cond(problem.group_objective(a).curvature) for a in (0, 1)]
    return 1.05 * max(conditions) * np.linalg.norm(c1 - c0) + 1e-3


def _gap_form(problem: SyntheticQuadratic) -> Tuple[np.ndarray, np.ndarray, float]:
    """(A, b, c) with L_0(w) - L_1(w) = w^T A w - 2 b^T w + c."""
    f0, f1 = problem.group_objective(0), problem.group_objective(1)
    a = f0.curvature - f1.curvature
    b = f0.curvature @ f0.center - f1.curvature @ f1.center
    c = f0.center @ f0.curvature @ f0.center - f1.center @ f1.curvature @ f1.center + f0.offset - f1.offset
    return a, b, float(c)


def _grid_search_line(problem: SyntheticQuadratic, gamma: float, points: int, levels: int, half_width: float):
    center = float(problem.group_optimum(0)[0])
    p0, p1 = problem.group_weights
    best_w, best_loss = None, np.inf
    for _level in range(levels):
        grid = np.linspace(center - half_width, center + half_width, points).reshape(-1, 1)
        spacing = 2.0 * half_width / (points - 1)
        l0, l1 = problem.batch_losses(grid)
        f0, f1 = problem.group_objective(0), problem.group_objective(1)
        gap_slope = 2.0 * ((grid - f0.center) @ f0.curvature - (grid - f1.center) @ f1.curvature)[:, 0]
        feasible = np.abs(l0 - l1) <= gamma + 0.5 * spacing * np.abs(gap_slope)
        if not feasible.any():
            break
        overall = np.where(feasible, p0 * l0 + p1 * l1, np.inf)
        index = int(np.argmin(overall))
        best_w, best_loss = grid[index].copy(), float(overall[index])
        center, half_width = float(best_w[0]), 4.0 * spacing
    return best_w, best_loss


def _grid_search_plane(problem: SyntheticQuadratic, gamma: float, points: int, levels: int, half_width: float):
    # grid over the first coordinate; the second solves the quadratic gap(x, y) = +-gamma exactly
    a, b, c = _gap_form(problem)
    center = float(problem.group_optimum(0)[0])
    p0, p1 = problem.group_weights
    targets = (gamma, -gamma) if gamma > 0.0 else (0.0,)
    best_w, best_loss = None, np.inf
    for _level in range(levels):
        xs = np.linspace(center - half_width, center + half_width, points)
        spacing = 2.0 * half_width / (points - 1)
        candidates = []
        for target in targets:
            quad = np.full_like(xs, a[1, 1])
            lin = 2.0 * a[0, 1] * xs - 2.0 * b[1]
            const = a[0, 0] * xs ** 2 - 2.0 * b[0] * xs + c - target
            if abs(a[1, 1]) > 1e-12:
                disc = lin ** 2 - 4.0 * quad * const
                real = disc >= 0.0
                root = np.sqrt(np.where(real, disc, 0.0))
                for sign in (1.0, -1.0):
                    ys = (-lin + sign * root) / (2.0 * quad)
                    candidates.append(np.column_stack([xs[real], ys[real]]))
            else:
                solvable = np.abs(lin) > 1e-12
                ys = -const[solvable] / lin[solvable]
                candidates.append(np.column_stack([xs[solvable], ys]))
        stacked = np.vstack(candidates) if candidates else np.empty((0, 2))
        if stacked.shape[0] == 0:
            break
        l0, l1 = problem.batch_losses(stacked)
        overall = p0 * l0 + p1 * l1
        index = int(np.argmin(overall))
        if overall[index] < best_loss:
            best_w, best_loss = stacked[index].copy(), float(overall[index])
        center, half_width = float(stacked[index, 0]), 4.0 * spacing
    return best_w, best_loss


def grid_search_solve(
    problem: SyntheticQuadratic,
    gamma: float,
    points: int = 2001,
    levels: int = 6,
    half_width: Optional[float] = None,
) -> Tuple[np.ndarray, float]:
    """
    Brute-force gamma-EL optimum for dims 1 and 2, zooming the grid around the best point at every level.

    In one dimension a grid point is feasible when |gap| <= gamma + h |gap'| / 2.
    In two dimensions the grid runs over the first coordinate and the band
    boundary is solved for the second one in closed form.
    """
    dim = problem.dim
    if dim not in (1, 2):
        raise ValueError(constants.ERROR_MESSAGE_GRID_DIMENSION.format(dim=dim))

    l0, l1, loss = problem.group_losses(problem.pareto_point(0.0))
    if abs(l0 - l1) <= gamma:
        return problem.pareto_point(0.0), loss

    half_width = half_width if half_width is not None else _search_half_width(problem)
    search = _grid_search_line if dim == 1 else _grid_search_plane
    best_w, best_loss = search(problem, gamma, points, levels, half_width)
    if best_w is None:
        raise RuntimeError("grid search found no feasible point")
    return best_w, best_loss
