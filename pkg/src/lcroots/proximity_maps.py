"""Discrete theta-sweeps and the proximity maps built from them.

A partition discretizes an angular window [from, to) into N support angles
theta_k = from + (to - from) k / N. Sweeping the per-angle machinery over the
support yields the E map (the weighted errors e_A/e_B per angle, with the
minimizer value/parameter and estimate point as aux arrays for degree >= 4)
and, by forward difference quotients of those aux arrays, the DD2 map (on the
minimum value) and the DT map (on the minimizer parameter). Sign crossings of
any map, linearly interpolated, are the root direction candidates; each
candidate angle is then re-examined to produce a ranked estimate table.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .dsd_optimizer import MinStatus, OptimizerConfig, minimize_dsd
from .lzc_engine import best_estimate, build_frame
from .polynomial import MonicPolynomial

_CHUNK = 256           # fixed sweep chunk so worker count cannot reorder work
_ROW_SALT = 0x9E3779B9  # keys the RNG stream for re-optimization at crossings
_DEDUP_RX_TOL = 1e-6


@dataclass(frozen=True)
class PartitionSpec:
    """Half-open angular window [start, stop) split into count angles.

    is_global marks a full-circle sweep, which activates wraparound handling
    (the stop angle is the start angle again).
    """

    start: float
    stop: float
    count: int
    is_global: bool

    def __post_init__(self):
        if self.count < 2:
            raise ValueError("partition needs at least 2 angles")
        if not self.stop > self.start:
            raise ValueError("empty angular window")

    @classmethod
    def global_circle(cls, count: int) -> "PartitionSpec":
        return cls(-math.pi, math.pi, count, True)

    @property
    def step(self) -> float:
        return (self.stop - self.start) / self.count

    def angles(self) -> list[float]:
        span = self.stop - self.start
        return [self.start + span * k / self.count for k in range(self.count)]


@dataclass(frozen=True)
class ProximityMap:
    """One map over a partition; None marks an undefined entry.

    E maps fill values_a/values_b (the two error branches) and, for
    degree >= 4, the aux arrays; derivative maps fill values_a only.
    """

    kind: str  # 'E', 'DD2' or 'DT'
    partition: PartitionSpec
    support: tuple[float, ...]
    values_a: tuple[float | None, ...] | None
    values_b: tuple[float | None, ...] | None
    aux_min_f: tuple[float | None, ...] | None = None
    aux_min_t: tuple[float | None, ...] | None = None
    aux_rx: tuple[complex | None, ...] | None = None
    aux_ap: tuple[complex | None, ...] | None = None


@dataclass(frozen=True)
class EstimateRow:
    """One ranked root estimate; d2_quality stays None on the cubic path."""

    rx: complex
    theta_hat: float
    delta_quality: float
    d2_quality: float | None


def _sweep_point(p: MonicPolynomial, theta: float, k: int,
                 config: OptimizerConfig | None):
    if p.degree == 3:
        fr = build_frame(p, theta)
        return (fr.e_a, fr.e_b, None, None, None, fr.anchor_point)
    res = minimize_dsd(p, theta, config, theta_index=k)
    if res.status is not MinStatus.OK:
        return (None, None, None, None, None, None)
    fr = build_frame(p, theta, res.t_star, res.min_value)
    return (fr.e_a, fr.e_b, res.min_value, res.t_star, fr.rx, fr.anchor_point)


def build_e_map(p: MonicPolynomial, partition: PartitionSpec,
                config: OptimizerConfig | None = None,
                workers: int = 1) -> ProximityMap:
    """Sweep the partition and collect both error branches per angle.

    Work is split into fixed-size chunks assembled in partition order, so the
    result is bit-identical for any worker count.
    """
    if p.degree < 3:
        raise ValueError("maps require degree >= 3")
    angles = partition.angles()

    def run_chunk(lo: int):
        hi = min(lo + _CHUNK, len(angles))
        return [_sweep_point(p, angles[k], k, config) for k in range(lo, hi)]

    starts = range(0, len(angles), _CHUNK)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(run_chunk, starts))
    else:
        chunks = [run_chunk(lo) for lo in starts]
    rows = [pt for chunk in chunks for pt in chunk]

    ea, eb, minf, mint, rx, ap = (tuple(r[i] for r in rows) for i in range(6))
    if p.degree == 3:
        minf = mint = rx = None
    return ProximityMap("E", partition, tuple(angles), ea, eb,
                        minf, mint, rx, ap)


def find_crossings(support, values, tol: float) -> list[tuple[float, float]]:
    """Sign crossings of a sampled curve, linearly interpolated.

    Adjacent defined pairs with v_i * v_{i+1} <= 0 and |v_i - v_{i+1}| <= tol
    yield (theta_hat, delta); larger jumps are abrupt crossings (the curve
    tore, it did not cross) and pairs touching an undefined entry are skipped.
    Pairs where both samples are exactly zero are skipped too: the
    interpolation is 0/0 there, and a flat-zero stretch (a constant source)
    carries no crossing information.
    """
    out = []
    for i in range(len(support) - 1):
        a = values[i]
        b = values[i + 1]
        if a is None or b is None:
            continue
        if a * b > 0.0:
            continue
        d = abs(a - b)
        if d > tol or a == b:
            continue
        th = support[i] + a * (support[i + 1] - support[i]) / (a - b)
        out.append((th, d))
    return out


def e_map_crossings(pm: ProximityMap, tol: float) -> list[tuple[float, float]]:
    """Crossings of both error branches; global maps wrap the first sample
    around to +pi before scanning."""
    support = list(pm.support)
    values_a = list(pm.values_a)
    values_b = list(pm.values_b)
    if pm.partition.is_global:
        support = support + [math.pi]
        values_a = values_a + [values_a[0]]
        values_b = values_b + [values_b[0]]
    return (find_crossings(support, values_a, tol)
            + find_crossings(support, values_b, tol))


def gap_intervals(support, values) -> list[tuple[float, float]]:
    """Maximal undefined runs whose flanking defined values have opposite
    signs, reported as the flanking support interval."""
    out = []
    n = len(values)
    i = 0
    while i < n:
        if values[i] is not None:
            i += 1
            continue
        j = i
        while j < n and values[j] is None:
            j += 1
        if i > 0 and j < n and values[i - 1] * values[j] < 0.0:
            out.append((support[i - 1], support[j]))
        i = j
    return out


def map_gaps(pm: ProximityMap) -> list[tuple[float, float]]:
    """Merged gap intervals over every value array the map carries."""
    raw = []
    for vals in (pm.values_a, pm.values_b):
        if vals is not None:
            raw.extend(gap_intervals(pm.support, vals))
    raw.sort()
    merged: list[list[float]] = []
    for lo, hi in raw:
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return [(lo, hi) for lo, hi in merged]


def build_derivative_map(p: MonicPolynomial, source, partition: PartitionSpec,
                         tol: float, kind: str,
                         config: OptimizerConfig | None = None,
                         ) -> tuple[ProximityMap, list[EstimateRow]]:
    """Difference-quotient map over a sweep aux array, plus its estimates.

    Quotients (source_k - source_{k-1}) / dtheta sit at the midpoints
    theta_k - dtheta/2 for k = 1..N-1; a global partition prepends the
    wraparound quotient (source_0 - source_{N-1}) / dtheta at
    theta_0 - dtheta/2, a regional one simply has N-1 entries. Crossing
    candidates are re-minimized to attach a d2 quality, and rows come back
    sorted by it.
    """
    if kind not in ("DD2", "DT"):
        raise ValueError("derivative map kind must be 'DD2' or 'DT'")
    if tol is None:
        raise ValueError(f"{kind} map requires an explicit crossing tolerance")
    if source is None:
        raise ValueError("derivative maps need the sweep aux arrays (degree >= 4)")
    angles = partition.angles()
    n = partition.count
    dth = partition.step
    support = []
    quots: list[float | None] = []
    for k in range(1, n):
        support.append(angles[k] - dth / 2.0)
        if source[k] is None or source[k - 1] is None:
            quots.append(None)
        else:
            quots.append((source[k] - source[k - 1]) / dth)
    if partition.is_global:
        if source[0] is None or source[n - 1] is None:
            wrap = None
        else:
            wrap = (source[0] - source[n - 1]) / dth
        support = [angles[0] - dth / 2.0] + support
        quots = [wrap] + quots
    pm = ProximityMap(kind, partition, tuple(support), tuple(quots), None)
    crossings = find_crossings(pm.support, pm.values_a, tol)
    rows = estimate_roots_general(p, crossings, config)
    return pm, rows


def estimate_roots_general(p: MonicPolynomial, crossings,
                           config: OptimizerConfig | None = None,
                           ) -> list[EstimateRow]:
    """Fresh minimization at each crossing angle; degree >= 4.

    Crossings whose re-minimization is rejected (negative minimizer) or does
    not converge are dropped with a warning. Rows are sorted by d2 quality,
    best first.
    """
    rows = []
    for i, (th, delta) in enumerate(crossings):
        res = minimize_dsd(p, th, config, theta_index=_ROW_SALT + i)
        if res.status is not MinStatus.OK or res.t_star is None:
            warnings.warn(
                f"crossing at theta={th:.7f} dropped ({res.status.value})",
                stacklevel=2)
            continue
        rx = best_estimate(p, th, res.t_star)
        rows.append(EstimateRow(rx, th, delta, res.min_value))
    rows.sort(key=lambda r: r.d2_quality)
    return rows


def _cubic_pick(fr) -> tuple[complex, complex] | None:
    # branch with the smaller |e|; only the positive-radical branch when the
    # negative one is undefined
    ea, eb = fr.e_a, fr.e_b
    if ea is not None and eb is not None:
        if abs(ea) <= abs(eb):
            return fr.proj_i0[0], fr.proj_c0[0]
        return fr.proj_i0[1], fr.proj_c0[1]
    if eb is not None:
        return fr.proj_i0[1], fr.proj_c0[1]
    if ea is not None:
        return fr.proj_i0[0], fr.proj_c0[0]
    return None


def estimate_roots_cubic(p: MonicPolynomial, crossings) -> list[EstimateRow]:
    """Estimate rows for degree 3: no optimizer, the root estimate is the
    midpoint (i0 + c0)/2 of the better projection pair at a fresh frame.

    Crossings whose fresh frame has no usable intersection are dropped with
    a warning. Rows are sorted by delta quality, best first.
    """
    rows = []
    for th, delta in crossings:
        fr = build_frame(p, th)
        pick = _cubic_pick(fr)
        if pick is None:
            warnings.warn(
                f"crossing at theta={th:.7f} dropped (no intersection)",
                stacklevel=2)
            continue
        i0, c0 = pick
        rows.append(EstimateRow(0.5 * (i0 + c0), th, delta, None))
    rows.sort(key=lambda r: r.delta_quality)
    return rows


def rescue_missing_root(p: MonicPolynomial, pm: ProximityMap,
                        ) -> EstimateRow | None:
    """Fallback for a cubic whose global E map produced fewer crossings than
    roots: take the support angle where the two error branches are closest
    while sign-opposed, and estimate there.

    Returns None when no sign-opposed sample exists.
    """
    best_k = None
    best_d = math.inf
    for k in range(len(pm.support)):
        a = pm.values_a[k]
        b = pm.values_b[k]
        if a is None or b is None:
            continue
        if a * b >= 0.0:
            continue
        d = abs(a - b)
        if d < best_d:
            best_d = d
            best_k = k
    if best_k is None:
        return None
    th = pm.support[best_k]
    fr = build_frame(p, th)
    pick = _cubic_pick(fr)
    if pick is None:
        return None
    i0, c0 = pick
    return EstimateRow(0.5 * (i0 + c0), th, best_d, None)


def dedupe_rows(rows: list[EstimateRow], step: float) -> list[EstimateRow]:
    """Drop near-duplicates (angles within step/2 and estimates within 1e-6),
    keeping the better-quality row. Input must already be sorted best first."""
    kept: list[EstimateRow] = []
    for r in rows:
        dup = any(abs(r.theta_hat - k.theta_hat) < step / 2.0
                  and abs(r.rx - k.rx) < _DEDUP_RX_TOL for k in kept)
        if not dup:
            kept.append(r)
    return kept


@dataclass(frozen=True)
class SolveOutcome:
    maps: dict
    tables: dict
    gaps: dict
    rescue_used: bool


def solve_pipeline(p: MonicPolynomial, partition: PartitionSpec,
                   config: OptimizerConfig | None = None,
                   kinds=("e", "dd2", "dt"),
                   tol_e: float = 1.0,
                   tol_dd2: float | None = None,
                   tol_dt: float | None = None,
                   workers: int = 1,
                   dedup: bool = False) -> SolveOutcome:
    """Run the full map/estimate pipeline for degree >= 3.

    Degree 3 always resolves to the E map alone (plus the rescue routine on a
    global sweep that found fewer than 3 crossings). Derivative maps demand
    their own explicit tolerance.
    """
    if p.degree < 3:
        raise ValueError("maps require degree >= 3")
    kinds = tuple(k.lower() for k in kinds)
    maps: dict = {}
    tables: dict = {}
    gaps: dict = {}
    rescue_used = False

    em = build_e_map(p, partition, config, workers)
    if p.degree == 3:
        crossings = e_map_crossings(em, tol_e)
        rows = estimate_roots_cubic(p, crossings)
        if partition.is_global and len(crossings) < 3:
            extra = rescue_missing_root(p, em)
            if extra is not None:
                rows = rows + [extra]
                rescue_used = True
        if dedup:
            rows = dedupe_rows(rows, partition.step)
        maps["e"] = em
        tables["e"] = rows
        gaps["e"] = map_gaps(em)
        return SolveOutcome(maps, tables, gaps, rescue_used)

    if "e" in kinds:
        crossings = e_map_crossings(em, tol_e)
        rows = estimate_roots_general(p, crossings, config)
        if dedup:
            rows = dedupe_rows(rows, partition.step)
        maps["e"] = em
        tables["e"] = rows
        gaps["e"] = map_gaps(em)
    if "dd2" in kinds:
        pm, rows = build_derivative_map(p, em.aux_min_f, partition, tol_dd2,
                                        "DD2", config)
        if dedup:
            rows = dedupe_rows(rows, partition.step)
        maps["dd2"] = pm
        tables["dd2"] = rows
        gaps["dd2"] = map_gaps(pm)
    if "dt" in kinds:
        pm, rows = build_derivative_map(p, em.aux_min_t, partition, tol_dt,
                                        "DT", config)
        if dedup:
            rows = dedupe_rows(rows, partition.step)
        maps["dt"] = pm
        tables["dt"] = rows
        gaps["dt"] = map_gaps(pm)
    return SolveOutcome(maps, tables, gaps, rescue_used)
