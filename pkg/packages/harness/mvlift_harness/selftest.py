"""Closed-form Procrustes fits checked against a multi-start numeric minimizer."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from mvlift_geometry import alignment_objective, fit_points
from scipy.optimize import minimize
from scipy.spatial.transform import Rotation

RELATIVE_TOLERANCE = 1e-6
DETERMINANT_TOLERANCE = 1e-9
OPTIMIZER_STARTS = 5


@dataclass(frozen=True)
class ProcrustesCase:
    index: int
    frames: int
    joints: int
    mirrored: bool
    fitted_objective: float
    oracle_objective: float
    determinant: float

    @property
    def passed(self) -> bool:
        optimal = self.fitted_objective <= self.oracle_objective + RELATIVE_TOLERANCE * max(
            self.oracle_objective, 1.0
        )
        return bool(optimal and abs(self.determinant - 1.0) <= DETERMINANT_TOLERANCE)


def _objective(vector: np.ndarray, source: np.ndarray, target: np.ndarray) -> float:
    # log scale keeps the search on proper similarities; a negative scale would mirror
    rotation = Rotation.from_rotvec(vector[1:4]).as_matrix()
    residual = np.exp(vector[0]) * source @ rotation + vector[4:7] - target
    return float(np.sum(residual**2))


def numeric_alignment_objective(
    source: np.ndarray,
    target: np.ndarray,
    rng: np.random.Generator,
    starts: int = OPTIMIZER_STARTS,
) -> float:
    """Best least-squares similarity objective found by L-BFGS-B from several starts."""
    best = np.inf
    for start in range(starts):
        rotvec = np.zeros(3) if start == 0 else Rotation.random(None, rng).as_rotvec()
        rotation = Rotation.from_rotvec(rotvec).as_matrix()
        translation = target.mean(axis=0) - source.mean(axis=0) @ rotation
        x0 = np.concatenate([[0.0], rotvec, translation])
        result = minimize(
            _objective,
            x0,
            args=(source, target),
            method="L-BFGS-B",
            options={"maxiter": 2000, "ftol": 1e-15, "gtol": 1e-10},
        )
        best = min(best, float(result.fun))
    return best


def _pair(rng: np.random.Generator, mirrored: bool) -> tuple[np.ndarray, np.ndarray, int, int]:
    frames = int(rng.integers(1, 9))
    joints = int(rng.integers(4, 18))
    source = rng.normal(scale=200.0, size=(frames * joints, 3))
    rotation = Rotation.random(None, rng).as_matrix()
    target = rng.uniform(0.5, 2.0) * source @ rotation + rng.normal(scale=500.0, size=3)
    if mirrored:
        target = target * np.array([-1.0, 1.0, 1.0])
    target = target + rng.normal(scale=20.0, size=target.shape)
    return source, target, frames, joints


def procrustes_selftest(pairs: int = 100, seed: int = 0) -> list[ProcrustesCase]:
    """``pairs`` ordinary and ``pairs`` mirrored random sequence pairs."""
    rng = np.random.default_rng(seed)
    cases = []
    for mirrored in (False, True):
        for _ in range(pairs):
            source, target, frames, joints = _pair(rng, mirrored)
            xf = fit_points(source, target)
            cases.append(
                ProcrustesCase(
                    index=len(cases),
                    frames=frames,
                    joints=joints,
                    mirrored=mirrored,
                    fitted_objective=alignment_objective(xf, source, target),
                    oracle_objective=numeric_alignment_objective(source, target, rng),
                    determinant=float(np.linalg.det(xf.rotation)),
                )
            )
    return cases
