"""Threshold scans and witness optimization.

Detection thresholds of one-parameter state families are located by
bisection on a sign change, guarded by a coarse pre-scan that verifies
the crossing is unique.  Witness optimization is derivative-free
(Nelder-Mead with uniform random restarts) over parameterizations that
are admissible by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import minimize

from .criteria import (
    VIOLATION_TOL,
    AdmissibilityError,
    UncertaintyReport,
    is_admissible,
    ppt_min_eigenvalue,
    srpt_evaluate,
)
from .hilbert import DensityMatrix, Observable, PSD_TOL, StateVector, hermitian_eigensystem
from .states import schmidt_state, werner
from .witnesses import Prop2Params, prop1_pair, prop2_observable, werner_bipartite_pair

PRESCAN_POINTS = 21
NM_MAX_ITER = 500
NM_XATOL = 1e-8
PROP2_NORM_BOUND = 4.0


@dataclass(frozen=True)
class ThresholdResult:
    """Bisection output: the critical mixing parameter with its bracket."""

    x_critical: float
    bracket: tuple[float, float]
    tolerance: float
    evaluations: int

    def to_dict(self) -> dict:
        return {
            "x_critical": self.x_critical,
            "bracket_lo": self.bracket[0],
            "bracket_hi": self.bracket[1],
            "tolerance": self.tolerance,
            "evaluations": self.evaluations,
        }


@dataclass(frozen=True)
class SearchResult:
    best_params: np.ndarray
    best_report: UncertaintyReport
    restarts_used: int


@dataclass(frozen=True)
class WernerFormulaAudit:
    """Numeric Werner threshold next to two readings of the closed formula.

    linear_formula uses the radicand 1 + 32 r with r = Re(e^{i phi} a* b);
    squared_formula uses 1 + 32 r^2.  Both readings are reported so a
    disagreement is surfaced rather than silently resolved.
    """

    result: ThresholdResult
    linear_formula: float
    squared_formula: float
    linear_agrees: bool
    squared_agrees: bool

    def to_dict(self) -> dict:
        out = self.result.to_dict()
        out.update(
            {
                "linear_formula": self.linear_formula,
                "squared_formula": self.squared_formula,
                "linear_agrees": self.linear_agrees,
                "squared_agrees": self.squared_agrees,
            }
        )
        return out


class NoCrossingError(RuntimeError):
    """The pre-scan found no sign change on [0, 1]."""


def _bisect_crossing(
    crossing: Callable[[float], float], threshold: float, tol: float
) -> ThresholdResult:
    xs = np.linspace(0.0, 1.0, PRESCAN_POINTS)
    evaluations = 0
    flags = []
    for x in xs:
        flags.append(crossing(float(x)) > threshold)
        evaluations += 1

    changes = [i for i in range(len(flags) - 1) if flags[i] != flags[i + 1]]
    if not changes:
        raise NoCrossingError("no sign change found on [0, 1]")
    if len(changes) > 1 or flags[0]:
        raise ValueError(f"crossing is not monotone on the pre-scan grid: flags {flags}")

    lo, hi = float(xs[changes[0]]), float(xs[changes[0] + 1])
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        evaluations += 1
        if crossing(mid) > threshold:
            hi = mid
        else:
            lo = mid
    return ThresholdResult(0.5 * (lo + hi), (lo, hi), tol, evaluations)


def threshold_scan(
    family: Callable[[float], DensityMatrix],
    a: Observable,
    b: Observable,
    k: int = 0,
    tol: float = 1e-6,
    violation_tol: float = VIOLATION_TOL,
) -> ThresholdResult:
    """Critical x above which the SRPT pair (a, b) detects family(x)."""
    for label, obs in (("A", a), ("B", b)):
        report = is_admissible(obs, k)
        if not report.admissible:
            raise AdmissibilityError(label, report.residual)

    def crossing(x: float) -> float:
        return srpt_evaluate(family(x), a, b, k, check_admissibility=False,
                             violation_tol=violation_tol).slack

    return _bisect_crossing(crossing, violation_tol, tol)


def ppt_threshold_scan(
    family: Callable[[float], DensityMatrix], k: int = 0, tol: float = 1e-6
) -> ThresholdResult:
    """Critical x above which family(x) fails the PPT test."""

    def crossing(x: float) -> float:
        return -ppt_min_eigenvalue(family(x), k)

    return _bisect_crossing(crossing, PSD_TOL, tol)


# --- witness optimization ------------------------------------------------------


def _clipped_prop2(values: np.ndarray) -> Prop2Params:
    """Compactify the search space: vector norms <= 4, |eta| <= 4."""
    v = np.array(values, dtype=float).reshape(13)
    for start in (0, 3, 6, 9):
        norm = np.linalg.norm(v[start:start + 3])
        if norm > PROP2_NORM_BOUND:
            v[start:start + 3] *= PROP2_NORM_BOUND / norm
    v[12] = np.clip(v[12], -PROP2_NORM_BOUND, PROP2_NORM_BOUND)
    return Prop2Params.from_array(v)


def _maximize_prop2(rho: DensityMatrix, restarts: int, seed) -> SearchResult:
    if rho.space.dims != (2, 2):
        raise ValueError(f"the prop2 family needs a (2, 2) space, got {rho.space.dims}")

    def negative_slack(theta: np.ndarray) -> float:
        a = prop2_observable(_clipped_prop2(theta[:13]))
        b = prop2_observable(_clipped_prop2(theta[13:]))
        return -srpt_evaluate(rho, a, b, 0, check_admissibility=False).slack

    rng = np.random.default_rng(seed)
    best_value = math.inf
    best_theta = None
    for _ in range(restarts):
        theta0 = rng.uniform(-2.0, 2.0, size=26)
        res = minimize(
            negative_slack,
            theta0,
            method="Nelder-Mead",
            options={"maxiter": NM_MAX_ITER, "xatol": NM_XATOL, "fatol": 1e-12},
        )
        if res.fun < best_value:
            best_value = res.fun
            best_theta = res.x

    a = prop2_observable(_clipped_prop2(best_theta[:13]))
    b = prop2_observable(_clipped_prop2(best_theta[13:]))
    for label, obs in (("A", a), ("B", b)):
        report = is_admissible(obs, 0)
        if not report.admissible:
            raise AdmissibilityError(label, report.residual)
    best_report = srpt_evaluate(rho, a, b, 0, check_admissibility=False)
    return SearchResult(np.array(best_theta), best_report, restarts)


def _pure_vector(rho: DensityMatrix) -> StateVector:
    vals, vecs = hermitian_eigensystem(rho.matrix)
    if vals[-1] < 1.0 - 1e-9:
        raise ValueError("the prop1 family needs a pure state (rank-1 density matrix)")
    return StateVector(rho.space, vecs[:, -1])


def schmidt_aligned_prop1(psi: StateVector, i0: int, i1: int) -> tuple[Observable, Observable]:
    """Projector/flip pair rotated into the local Schmidt frames of psi.

    The rotation is chosen so that evaluating the SRPT report in the
    computational basis reproduces, term by term, the report of the plain
    pair on the Schmidt-form state: the partial transpose conjugates the
    first local frame, so the first factor is rotated by its conjugate.
    """
    d1, d2 = psi.space.dims
    u, _, vt = np.linalg.svd(psi.amplitudes.reshape(d1, d2))
    a_std, b_std = prop1_pair(psi.space, i0, i1)
    frame = np.kron(u.conj(), vt.T)
    a = Observable(psi.space, frame @ a_std.matrix @ frame.conj().T)
    b = Observable(psi.space, frame @ b_std.matrix @ frame.conj().T)
    return a, b


def _maximize_prop1(rho: DensityMatrix, restarts: int) -> SearchResult:
    if rho.space.num_subsystems != 2:
        raise ValueError(f"the prop1 family needs a bipartite space, got {rho.space.dims}")
    psi = _pure_vector(rho)
    levels = min(rho.space.dims)

    best = None
    best_pair = None
    for i0 in range(levels):
        for i1 in range(i0 + 1, levels):
            a, b = schmidt_aligned_prop1(psi, i0, i1)
            report = srpt_evaluate(rho, a, b, 0, check_admissibility=False)
            if best is None or report.slack > best[1].slack:
                best = (np.array([i0, i1], dtype=float), report)
                best_pair = (a, b)

    for label, obs in zip(("A", "B"), best_pair):
        report = is_admissible(obs, 0)
        if not report.admissible:
            raise AdmissibilityError(label, report.residual)
    return SearchResult(best[0], best[1], 0)


def maximize_violation(
    rho: DensityMatrix, family: str, restarts: int = 20, seed=None
) -> SearchResult:
    """Maximize SRPT slack over an admissible-by-construction witness family.

    family "prop2": two independent admissible two-qubit observables on a
    (2, 2) space, optimized with Nelder-Mead restarts.  family "prop1":
    Schmidt-aligned projector/flip pairs for a pure bipartite state,
    enumerated over level pairs.
    """
    if family == "prop2":
        return _maximize_prop2(rho, restarts, seed)
    if family == "prop1":
        return _maximize_prop1(rho, restarts)
    raise ValueError(f"unknown witness family {family!r}")


def werner_phi_threshold(
    a: complex, b: complex, phi: float, tol: float = 1e-6, agreement_tol: float = 1e-4
) -> WernerFormulaAudit:
    """Numeric Werner detection threshold plus both closed-formula readings.

    The threshold is always taken from the bisection scan, never from a
    formula; the two formula values are attached for comparison.
    """
    a, b = complex(a), complex(b)
    norm = abs(a) ** 2 + abs(b) ** 2
    if abs(norm - 1.0) > 1e-12:
        raise ValueError(f"|a|^2 + |b|^2 = {norm}, expected 1")

    psi = schmidt_state((a, b), (2, 2))
    obs_a, obs_b = werner_bipartite_pair(phi)
    result = threshold_scan(lambda x: werner(psi, x), obs_a, obs_b, tol=tol)

    r = (np.exp(1j * phi) * np.conj(a) * b).real
    linear = 2.0 / (1.0 + math.sqrt(1.0 + 32.0 * r)) if 1.0 + 32.0 * r >= 0 else math.nan
    squared = 2.0 / (1.0 + math.sqrt(1.0 + 32.0 * r * r))
    return WernerFormulaAudit(
        result,
        linear,
        squared,
        linear_agrees=abs(result.x_critical - linear) <= agreement_tol,
        squared_agrees=abs(result.x_critical - squared) <= agreement_tol,
    )
