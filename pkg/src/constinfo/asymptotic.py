"""High-snr tail approximations and the exact-vs-limit verification harness.

Each supported metric vanishes like K * Q(sqrt(rho) d / 2) where d is the
minimum distance and K depends only on the constellation, distribution, and
(for the bit-level metrics) the labeling. verify_limit sweeps an snr grid,
evaluates the exact metric in log domain, and reports the ratio to the
asymptote together with a convergence verdict.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .constellation import (
    Constellation,
    InputDistribution,
    a_constant,
    b_constant,
    db_to_snr,
    log_q_function,
    med,
    q_function,
)
from .labeling import Labeling, d_constant
from .exact import (
    QuadratureSpec,
    log_bep_exact,
    log_bicm_mmse_exact,
    log_conditional_entropy_exact,
    log_gmi_gap_exact,
    log_mmse_exact,
    log_sep_exact,
)
from . import report as _report

__all__ = [
    "METRICS",
    "asym_conditional_entropy",
    "asym_mmse",
    "asym_sep",
    "asym_bicm_gmi_gap",
    "asym_bicm_mmse",
    "asym_bep",
    "limit_constant",
    "mpam_gap_constant",
    "mpam_mmse_constant",
    "mpam_sep_constant",
    "AsymptoticReport",
    "verify_limit",
]

# quadrature is trusted while 2 * (sqrt(rho) d / 2)^2 <= _XI_MAX * nodes;
# beyond that the integrand's shifted bump outruns the rule's resolution
# (empirically ~1% relative error at the boundary, collapsing past it)
_XI_MAX = 0.5

# grid points whose Q value drops below this are outside the contract
_Q_FLOOR_LOG = math.log(1e-300)

_REQUIRED_SPAN_DB = 15.0


def _arg(c: Constellation, rho) -> np.ndarray:
    return np.sqrt(np.asarray(rho, dtype=float)) * med(c) / 2.0


def asym_conditional_entropy(c: Constellation, p: InputDistribution, rho):
    """Tail approximation of H(X|Y) (equivalently of H(X) - MI)."""
    return math.pi * b_constant(c, p) * q_function(_arg(c, rho))


def asym_mmse(c: Constellation, p: InputDistribution, rho):
    """Tail approximation of the MMSE."""
    d = med(c)
    return math.pi * d * d / 4.0 * b_constant(c, p) * q_function(_arg(c, rho))


def asym_sep(c: Constellation, p: InputDistribution, rho):
    """Tail approximation of the symbol error probability."""
    return b_constant(c, p) * q_function(_arg(c, rho))


def asym_bicm_gmi_gap(c: Constellation, p: InputDistribution, lab: Labeling, rho):
    """Tail approximation of H(X) - GMI."""
    return math.pi * d_constant(c, p, lab) * q_function(_arg(c, rho))


def asym_bicm_mmse(c: Constellation, p: InputDistribution, lab: Labeling, rho):
    """Tail approximation of the bit-level MMSE."""
    d = med(c)
    return math.pi * d * d / 4.0 * d_constant(c, p, lab) * q_function(_arg(c, rho))


def asym_bep(c: Constellation, p: InputDistribution, lab: Labeling, rho):
    """Tail approximation of the bit error probability."""
    return d_constant(c, p, lab) / lab.bits * q_function(_arg(c, rho))


def mpam_gap_constant(points: int) -> float:
    """Limit constant of H - MI for uniform equally spaced constellations."""
    return 2.0 * math.pi * (points - 1) / points


def mpam_mmse_constant(points: int, es: float = 1.0) -> float:
    """Limit constant of the MMSE for uniform equally spaced constellations."""
    return 6.0 * math.pi * es / (points * (points + 1))


def mpam_sep_constant(points: int) -> float:
    """Limit constant of the SEP for uniform equally spaced constellations."""
    return 2.0 * (points - 1) / points


def _const_gap(c, p, lab):
    return math.pi * b_constant(c, p)


def _const_mmse(c, p, lab):
    d = med(c)
    return math.pi * d * d / 4.0 * b_constant(c, p)


def _const_sep(c, p, lab):
    return b_constant(c, p)


def _const_gmi_gap(c, p, lab):
    return math.pi * d_constant(c, p, lab)


def _const_bicm_mmse(c, p, lab):
    d = med(c)
    return math.pi * d * d / 4.0 * d_constant(c, p, lab)


def _const_bep(c, p, lab):
    return d_constant(c, p, lab) / lab.bits


# metric name -> (log-domain exact fn, limit-constant fn, needs labeling,
# uses quadrature)
METRICS = {
    "conditional_entropy": (log_conditional_entropy_exact, _const_gap, False, True),
    "mmse": (log_mmse_exact, _const_mmse, False, True),
    "sep": (log_sep_exact, _const_sep, False, False),
    "gmi_gap": (log_gmi_gap_exact, _const_gmi_gap, True, True),
    "bicm_mmse": (log_bicm_mmse_exact, _const_bicm_mmse, True, True),
    "bep": (log_bep_exact, _const_bep, True, False),
}


def limit_constant(
    metric: str,
    c: Constellation,
    p: InputDistribution,
    lab: Labeling | None = None,
) -> float:
    """Constant K of the tail approximation K * Q(sqrt(rho) d / 2)."""
    _, const_fn, needs_lab, _ = _metric_entry(metric)
    if needs_lab and lab is None:
        raise ValueError(f"metric {metric!r} requires a labeling")
    return float(const_fn(c, p, lab))


def _metric_entry(metric: str):
    try:
        return METRICS[metric]
    except KeyError:
        raise ValueError(
            f"unknown metric {metric!r}; expected one of {sorted(METRICS)}"
        ) from None


@dataclass(frozen=True)
class AsymptoticReport:
    """Exact metric values against the tail approximation on an snr grid.

    ``exact`` is the linear metric value (it may underflow to zero deep in
    the tail); ``ratio`` is always computed in log domain and stays finite.
    ``truncated`` counts requested grid points dropped because they were
    outside the quadrature's trust region or below the Q floor.
    """

    metric: str
    rho_db: np.ndarray
    exact: np.ndarray
    asymptotic: np.ndarray
    ratio: np.ndarray
    constant: float
    converged: bool
    truncated: int
    nodes: int | None = None

    def _meta(self) -> dict:
        return {
            "metric": self.metric,
            "constant": self.constant,
            "converged": bool(self.converged),
            "truncated_points": self.truncated,
            "nodes": self.nodes,
        }

    def _rows(self):
        return [
            [float(r), float(e), float(a), float(t)]
            for r, e, a, t in zip(self.rho_db, self.exact, self.asymptotic, self.ratio)
        ]

    _COLUMNS = ["rho_db", "exact", "asymptotic", "ratio"]

    def to_csv(self, path=None) -> str:
        return _report.write_table(path, self._meta(), self._COLUMNS, self._rows(), "csv")

    def to_json(self, path=None) -> str:
        return _report.write_table(path, self._meta(), self._COLUMNS, self._rows(), "json")


def verify_limit(
    metric: str,
    c: Constellation,
    p: InputDistribution,
    lab: Labeling | None = None,
    *,
    grid_db,
    quad: QuadratureSpec | None = None,
    band: float = 0.08,
) -> AsymptoticReport:
    """Compare an exact metric against its tail approximation on a dB grid.

    The grid must be strictly increasing and span at least 15 dB. Points
    where Q(sqrt(rho) d / 2) falls below 1e-300, or that lie beyond the
    quadrature trust region for quadrature-based metrics, are dropped with a
    warning. The verdict requires the last three surviving ratios to sit
    within ``band`` of 1 and to approach 1 monotonically.
    """
    log_fn, const_fn, needs_lab, uses_quad = _metric_entry(metric)
    if needs_lab and lab is None:
        raise ValueError(f"metric {metric!r} requires a labeling")
    grid_db = np.asarray(grid_db, dtype=float)
    if grid_db.ndim != 1 or grid_db.size < 2:
        raise ValueError("grid must be a 1-D array of at least two dB values")
    if np.any(np.diff(grid_db) <= 0.0):
        raise ValueError("grid must be strictly increasing")
    if grid_db[-1] - grid_db[0] < _REQUIRED_SPAN_DB:
        raise ValueError("grid must span at least 15 dB")

    quad = quad if quad is not None else QuadratureSpec()
    rho = db_to_snr(grid_db)
    arg = _arg(c, rho)
    log_q = log_q_function(arg)
    keep = log_q >= _Q_FLOOR_LOG
    if not np.all(keep):
        warnings.warn(
            f"{metric}: dropped {int(np.count_nonzero(~keep))} grid point(s) where "
            "the Q factor falls below 1e-300",
            stacklevel=2,
        )
    if uses_quad:
        reach = 2.0 * arg * arg <= _XI_MAX * quad.nodes
        if not np.all(reach):
            warnings.warn(
                f"{metric}: dropped {int(np.count_nonzero(keep & ~reach))} grid "
                f"point(s) beyond the trust region of a {quad.nodes}-node rule; "
                "increase the node count to go deeper",
                stacklevel=2,
            )
        keep &= reach
    if np.count_nonzero(keep) < 3:
        raise ValueError("fewer than three grid points survive truncation")

    kept_db = grid_db[keep]
    kept_rho = rho[keep]
    kept_log_q = log_q[keep]
    constant = float(const_fn(c, p, lab))
    args = (c, p) if not needs_lab else (c, p, lab)
    if uses_quad:
        log_exact = np.array([log_fn(*args, r, quad) for r in kept_rho])
    else:
        log_exact = np.array([log_fn(*args, r) for r in kept_rho])
    log_asym = math.log(constant) + kept_log_q
    ratio = np.exp(log_exact - log_asym)
    # deviations below the floor are indistinguishable from roundoff (the
    # closed-form metrics can match the asymptote exactly), so treat them as
    # equal when judging the monotone approach
    dev = np.maximum(np.abs(ratio[-3:] - 1.0), 1e-9)
    converged = bool(np.all(dev <= band) and dev[0] >= dev[1] >= dev[2])
    return AsymptoticReport(
        metric=metric,
        rho_db=kept_db,
        exact=np.exp(log_exact),
        asymptotic=np.exp(log_asym),
        ratio=ratio,
        constant=constant,
        converged=converged,
        truncated=int(np.count_nonzero(~keep)),
        nodes=quad.nodes if uses_quad else None,
    )
