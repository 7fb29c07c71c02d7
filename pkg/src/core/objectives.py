"""Smooth objectives with value / gradient / Hessian oracles, and the two-group problem interface."""
from abc import ABC, abstractmethod
from typing import Sequence, Tuple

import numpy as np


class Objective(ABC):

    @abstractmethod
    def value(self, w: np.ndarray) -> float:
        raise NotImplementedError

    @abstractmethod
    def gradient(self, w: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    @abstractmethod
    def hessian(self, w: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    @property
    @abstractmethod
    def dim(self) -> int:
        raise NotImplementedError

    def __call__(self, w: np.ndarray) -> float:
        return self.value(w)


class QuadraticObjective(Objective):
    """(w - c)^T Q (w - c) + offset."""

    def __init__(self, curvature: np.ndarray, center: np.ndarray, offset: float = 0.0):
        self.curvature = np.atleast_2d(np.asarray(curvature, dtype=float))
        self.center = np.atleast_1d(np.asarray(center, dtype=float))
        self.offset = float(offset)

    @property
    def dim(self) -> int:
        return self.center.size

    def value(self, w: np.ndarray) -> float:
        diff = np.asarray(w, dtype=float) - self.center
        return float(diff @ self.curvature @ diff) + self.offset

    def gradient(self, w: np.ndarray) -> np.ndarray:
        return 2.0 * self.curvature @ (np.asarray(w, dtype=float) - self.center)

    def hessian(self, w: np.ndarray) -> np.ndarray:
        return 2.0 * self.curvature


class AffineObjective(Objective):
    """a^T w + b; convex but not strictly, so only usable as a constraint."""

    def __init__(self, slope: np.ndarray, intercept: float = 0.0):
        self.slope = np.asarray(slope, dtype=float)
        self.intercept = float(intercept)

    @property
    def dim(self) -> int:
        return self.slope.size

    def value(self, w: np.ndarray) -> float:
        return float(self.slope @ w) + self.intercept

    def gradient(self, w: np.ndarray) -> np.ndarray:
        return self.slope.copy()

    def hessian(self, w: np.ndarray) -> np.ndarray:
        return np.zeros((self.slope.size, self.slope.size))


class ShiftedObjective(Objective):
    """f(w) + shift, e.g. L~_1 = L_1 + gamma."""

    def __init__(self, base: Objective, shift: float):
        self.base = base
        self.shift = float(shift)

    @property
    def dim(self) -> int:
        return self.base.dim

    def value(self, w: np.ndarray) -> float:
        return self.base.value(w) + self.shift

    def gradient(self, w: np.ndarray) -> np.ndarray:
        return self.base.gradient(w)

    def hessian(self, w: np.ndarray) -> np.ndarray:
        return self.base.hessian(w)


class CombinedObjective(Objective):
    """sum_k coef_k * f_k(w)."""

    def __init__(self, terms: Sequence[Objective], coefficients: Sequence[float]):
        if len(terms) != len(coefficients):
            raise ValueError("terms and coefficients must have the same length")
        self.terms = list(terms)
        self.coefficients = [float(c) for c in coefficients]

    @property
    def dim(self) -> int:
        return self.terms[0].dim

    def value(self, w: np.ndarray) -> float:
        return float(sum(c * f.value(w) for c, f in zip(self.coefficients, self.terms) if c != 0.0))

    def gradient(self, w: np.ndarray) -> np.ndarray:
        total = np.zeros(np.asarray(w).shape, dtype=float)
        for c, f in zip(self.coefficients, self.terms):
            if c != 0.0:
                total += c * f.gradient(w)
        return total

    def hessian(self, w: np.ndarray) -> np.ndarray:
        size = np.asarray(w).size
        total = np.zeros((size, size), dtype=float)
        for c, f in zip(self.coefficients, self.terms):
            if c != 0.0:
                total += c * f.hessian(w)
        return total


class LossProblem(ABC):
    """Two group losses L_0, L_1 over a shared weight vector, mixed with weights (p_0, p_1)."""

    @property
    @abstractmethod
    def dim(self) -> int:
        raise NotImplementedError

    @property
    @abstractmethod
    def group_weights(self) -> Tuple[float, float]:
        raise NotImplementedError

    @abstractmethod
    def group_objective(self, group: int) -> Objective:
        raise NotImplementedError

    def overall_objective(self) -> Objective:
        p0, p1 = self.group_weights
        return CombinedObjective([self.group_objective(0), self.group_objective(1)], [p0, p1])

    def group_losses(self, w: np.ndarray) -> Tuple[float, float, float]:
        """(L_0(w), L_1(w), p_0 L_0(w) + p_1 L_1(w))."""
        p0, p1 = self.group_weights
        l0 = self.group_objective(0).value(w)
        l1 = self.group_objective(1).value(w)
        return l0, l1, p0 * l0 + p1 * l1

    def zero_weights(self) -> np.ndarray:
        return np.zeros(self.dim)
