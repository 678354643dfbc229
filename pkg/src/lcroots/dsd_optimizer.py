"""Minimizers of the squared distance d^2_theta(t) for degree >= 4.

Two strategies:

* TwoPhase: stochastic global search (Gaussian proposals, geometric cooling)
  started at t = 1, followed by a damped-Newton polish. Mirrors the
  reference workflow, including its one-minimum-at-a-time limitation and the
  rejection of negative minimizers.
* GridDiscretize: sample the finite-difference derivative of d^2 on a
  uniform t-grid over [0, t_max], locate every negative-to-positive zero
  crossing, polish each inside its bracketing cell, and return the global
  minimum together with the full list of local minima.

Both are deterministic: GridDiscretize uses no randomness at all, TwoPhase
derives its stream from (seed, theta_index) so a sweep re-run reproduces
every result bit for bit regardless of worker count.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .complex_geometry import ReciprocalPole
from .lzc_engine import dsd, normalize_theta, unit_direction
from .polynomial import MonicPolynomial

# relative Im tolerance deciding that the base ray passes through the origin
_POLE_RAY_TOL = 1e-12


class OptimizerMethod(enum.Enum):
    TWO_PHASE = "twophase"
    GRID_DISCRETIZE = "grid"


class MinStatus(enum.Enum):
    OK = "ok"
    REJECTED_NEGATIVE = "rejected_negative"
    NO_CONVERGENCE = "no_convergence"


@dataclass(frozen=True)
class OptimizerConfig:
    method: OptimizerMethod = OptimizerMethod.GRID_DISCRETIZE
    max_iterations: int = 2000
    initial_temperature: float = 12.0
    evals_per_temperature: int = 200
    seed: int = 0
    grid_t_max: float | None = None
    grid_points: int = 8192
    polish_iterations: int = 60
    polish_tolerance: float = 1e-12

    def __post_init__(self):
        if self.max_iterations < 1 or self.evals_per_temperature < 1:
            raise ValueError("iteration counts must be >= 1")
        if self.grid_points < 2 or self.polish_iterations < 1:
            raise ValueError("grid_points must be >= 2 and polish_iterations >= 1")
        if self.initial_temperature <= 0.0 or self.polish_tolerance <= 0.0:
            raise ValueError("temperature and tolerances must be > 0")
        if self.grid_t_max is not None and not self.grid_t_max > 0.0:
            raise ValueError("grid_t_max must be > 0")


@dataclass(frozen=True)
class MinResult:
    """Outcome of one minimization; errors travel as status, never exceptions.

    OK guarantees t_star >= 0 and min_value >= 0. all_minima lists every
    polished local minimum as (t, value) sorted by t ascending; it is filled
    by GridDiscretize only (TwoPhase tracks a single minimum).
    """

    t_star: float | None
    min_value: float | None
    status: MinStatus
    all_minima: tuple[tuple[float, float], ...] = field(default=())


def dsd_derivative(p: MonicPolynomial, theta: float, t: float) -> float:
    """Central finite difference of d^2_theta at t, step max(1e-6, 1e-6 |t|).

    A pole of the z-circumference inside the stencil propagates as
    ReciprocalPole.
    """
    h = max(1e-6, 1e-6 * abs(t))
    return (dsd(p, theta, t + h) - dsd(p, theta, t - h)) / (2.0 * h)


def default_grid_span(p: MonicPolynomial) -> float:
    """Default upper end of the t search range.

    4 * (1 + max|C_k|), additionally capped by the coefficient root bound
    |P1| + 2 * max_k |C_k|^(1/k) (no root, hence no minimizer of interest,
    can lie beyond it) with a 5 percent margin.
    """
    cmax = max(abs(c) for c in p.coeffs)
    raw = 4.0 * (1.0 + cmax)
    bound = max(abs(c) ** (1.0 / (k + 1)) for k, c in enumerate(p.coeffs))
    cap = 1.05 * (abs(p.fixed_point) + 2.0 * bound)
    return min(raw, max(cap, 1.0))


def _pole_parameter(p: MonicPolynomial, theta: float) -> float | None:
    # positive real t with P1 + t v = 0, when the ray crosses the origin
    th = normalize_theta(theta)
    v = unit_direction(th)
    w = -p.fixed_point / v
    if abs(p.fixed_point) == 0.0:
        return None
    if abs(w.imag) <= _POLE_RAY_TOL * abs(p.fixed_point) and w.real > 0.0:
        return w.real
    return None


def _safe_dsd(p: MonicPolynomial, theta: float, t: float) -> float:
    try:
        val = dsd(p, theta, t)
    except ReciprocalPole:
        return math.inf
    if math.isnan(val):
        return math.inf
    return val


def _dsd_grid(p: MonicPolynomial, theta: float, ts: np.ndarray) -> np.ndarray:
    # vectorized d^2 over a t array; poles become +inf
    th = normalize_theta(theta)
    v = unit_direction(th)
    p1 = p.fixed_point
    c = p.coeffs
    n = p.degree
    z = p1 + ts * v
    acc = np.full(ts.shape, c[1], dtype=np.complex128)
    for j in range(2, n - 1):
        acc = acc * z + c[j]
    zp = z.copy()
    for _ in range(n - 3):
        zp = zp * z
    tc = acc - (p1 - ts * v) * zp
    if (n + 1) % 2 == 1:
        tc = -tc
    cn = c[-1] if n % 2 == 0 else -c[-1]
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        zc = cn / z
        d = tc - zc
        out = d.real * d.real + d.imag * d.imag
    return np.where(np.isnan(out), np.inf, out)


def _fd_grid(p: MonicPolynomial, theta: float, ts: np.ndarray) -> np.ndarray:
    h = np.maximum(1e-6, 1e-6 * np.abs(ts))
    with np.errstate(invalid="ignore"):
        g = (_dsd_grid(p, theta, ts + h) - _dsd_grid(p, theta, ts - h)) / (2.0 * h)
    return g


def _polish_bracketed(p: MonicPolynomial, theta: float, lo: float, hi: float,
                      t0: float, cfg: OptimizerConfig) -> tuple[float, bool]:
    """Damped Newton on the FD derivative inside [lo, hi]; g(lo)<0<g(hi).

    Falls back to bisection whenever the FD second derivative is unusable or
    Newton leaves the bracket. Converged when the step drops below
    polish_tolerance * max(1, |t|).
    """
    def g_at(t):
        try:
            return dsd_derivative(p, theta, t)
        except ReciprocalPole:
            return math.inf
    t = t0
    g = g_at(t)
    for _ in range(cfg.polish_iterations):
        if g == 0.0:
            return t, True
        if math.isfinite(g):
            if g < 0.0:
                lo = t
            else:
                hi = t
        h2 = max(1e-6, 1e-6 * abs(t))
        gp = (g_at(t + h2) - g_at(t - h2)) / (2.0 * h2)
        t_new = None
        if math.isfinite(g) and math.isfinite(gp) and gp > 0.0:
            t_new = t - g / gp
        if t_new is None or not (lo < t_new < hi):
            t_new = 0.5 * (lo + hi)
        step = abs(t_new - t)
        t = t_new
        g = g_at(t)
        if step <= cfg.polish_tolerance * max(1.0, abs(t)):
            return t, True
    return t, False


def _minimize_grid(p: MonicPolynomial, theta: float,
                   cfg: OptimizerConfig) -> MinResult:
    hi = cfg.grid_t_max if cfg.grid_t_max is not None else default_grid_span(p)
    t_pole = _pole_parameter(p, theta)
    if t_pole is not None and t_pole < hi:
        # the z-circumference is undefined at the pole and switches branches
        # past it; keep the scan on the near side
        hi = t_pole * (1.0 - 1e-9)
    if hi <= 0.0:
        return MinResult(None, None, MinStatus.NO_CONVERGENCE)
    ts = np.linspace(0.0, hi, cfg.grid_points)
    g = _fd_grid(p, theta, ts)
    finite = np.isfinite(g)
    left = g[:-1]
    right = g[1:]
    cross = (left <= 0.0) & (right > 0.0) & finite[:-1] & finite[1:]
    idx = np.nonzero(cross)[0]
    minima = []
    for i in idx:
        gl = float(left[i])
        gr = float(right[i])
        lo, up = float(ts[i]), float(ts[i + 1])
        if gl == gr:
            t0 = lo
        else:
            t0 = lo + gl * (up - lo) / (gl - gr)
        t_min, ok = _polish_bracketed(p, theta, lo, up, t0, cfg)
        if ok:
            minima.append((t_min, _safe_dsd(p, theta, t_min)))
    if not minima:
        return MinResult(None, None, MinStatus.NO_CONVERGENCE)
    minima.sort(key=lambda m: m[0])
    t_star, min_value = min(minima, key=lambda m: m[1])
    return MinResult(t_star, min_value, MinStatus.OK, tuple(minima))


def _minimize_two_phase(p: MonicPolynomial, theta: float, cfg: OptimizerConfig,
                        theta_index: int) -> MinResult:
    rng = np.random.default_rng((cfg.seed, theta_index))
    t = 1.0
    f = _safe_dsd(p, theta, t)
    best_t, best_f = t, f
    stages = max(1, math.ceil(cfg.max_iterations / cfg.evals_per_temperature))
    temp = cfg.initial_temperature
    done = 0
    for _ in range(stages):
        for _ in range(cfg.evals_per_temperature):
            if done >= cfg.max_iterations:
                break
            done += 1
            cand = t + float(rng.normal(0.0, 0.1 * temp))
            fc = _safe_dsd(p, theta, cand)
            if fc <= f or float(rng.random()) < math.exp(-(fc - f) / temp):
                t, f = cand, fc
            if f < best_f:
                best_t, best_f = t, f
        temp *= 0.9

    # local bracket around the stochastic best, then the shared polisher
    def g_at(x):
        try:
            return dsd_derivative(p, theta, x)
        except ReciprocalPole:
            return math.inf
    delta = max(1e-3, 1e-3 * abs(best_t))
    lo = hi = None
    for _ in range(48):
        gl = g_at(best_t - delta)
        gr = g_at(best_t + delta)
        if math.isfinite(gl) and math.isfinite(gr) and gl <= 0.0 < gr:
            lo, hi = best_t - delta, best_t + delta
            break
        delta *= 2.0
    if lo is None:
        return MinResult(None, None, MinStatus.NO_CONVERGENCE)
    t_min, ok = _polish_bracketed(p, theta, lo, hi, best_t, cfg)
    if not ok:
        return MinResult(None, None, MinStatus.NO_CONVERGENCE)
    if t_min < 0.0:
        return MinResult(None, None, MinStatus.REJECTED_NEGATIVE)
    return MinResult(t_min, _safe_dsd(p, theta, t_min), MinStatus.OK)


def minimize_dsd(p: MonicPolynomial, theta: float,
                 config: OptimizerConfig | None = None,
                 theta_index: int = 0) -> MinResult:
    """Minimize d^2_theta(t) over t >= 0 for degree >= 4.

    theta_index keys the TwoPhase random stream together with config.seed;
    GridDiscretize ignores it. Outcomes are reported through MinResult.status.
    """
    if p.degree < 4:
        raise ValueError("DSD minimization requires degree >= 4")
    cfg = config if config is not None else OptimizerConfig()
    if cfg.method is OptimizerMethod.GRID_DISCRETIZE:
        return _minimize_grid(p, theta, cfg)
    return _minimize_two_phase(p, theta, cfg, theta_index)
