"""HTTP JSON API behind the browser explorer.

Four endpoints around a tiny in-memory session store:

    POST /api/polynomial   register coefficients, get a session token
    GET  /api/frame        one-angle geometry plus sampled display curves
    GET  /api/map          one sweep: value arrays, crossings, gap intervals
    POST /api/solve        the full ranked-estimate pipeline, served as JSON

Every numeric field is a plain double, complex values ride as [re, im]
pairs and undefined entries as null, so a browser client needs nothing
beyond JSON.parse. With the default fixed-grid minimizer any GET is
deterministic in its full query string and may be cached as such.
Sessions are immutable after creation and live only as long as the
process; there is no auth and no persistence.
"""

from __future__ import annotations

import json
import math
import os
import secrets
import threading
import time
from dataclasses import dataclass

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .complex_geometry import ReciprocalPole
from .dsd_optimizer import (
    MinStatus,
    OptimizerConfig,
    OptimizerMethod,
    default_grid_span,
    minimize_dsd,
)
from .lzc_engine import (LzCFrame, build_frame, dsd, solve_quadratic,
                         terminal_curve_point, zc_point)
from .polynomial import MonicPolynomial, coeffs_from_json, theta_root
from .proximity_maps import (
    PartitionSpec,
    build_derivative_map,
    build_e_map,
    e_map_crossings,
    estimate_roots_cubic,
    estimate_roots_general,
    find_crossings,
    map_gaps,
    solve_pipeline,
)

MAP_POINT_CAP = 200000
FRAME_SAMPLES = 600
CIRCLE_SAMPLES = 256

_DEFAULTS = OptimizerConfig()
_KIND_TOLS = {"e": 1.0, "dd2": 2.0, "dt": 2.0}


@dataclass(frozen=True)
class SessionPolynomial:
    id: str
    polynomial: MonicPolynomial
    created_at: float


class SessionStore:
    """Token-keyed polynomial registry; writes and reads share one lock."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._items: dict[str, SessionPolynomial] = {}

    def add(self, p: MonicPolynomial) -> SessionPolynomial:
        with self._lock:
            sid = secrets.token_hex(8)
            while sid in self._items:  # pragma: no cover - 64-bit collision
                sid = secrets.token_hex(8)
            rec = SessionPolynomial(sid, p, time.time())
            self._items[sid] = rec
            return rec

    def get(self, sid: str) -> SessionPolynomial | None:
        with self._lock:
            return self._items.get(sid)


# ------------------------------------------------------------ serialization

def _pair(z: complex | None):
    return None if z is None else [z.real, z.imag]


def _num(x):
    # JSON has no NaN or Infinity; a non-finite value is undefined here
    if x is None or not math.isfinite(x):
        return None
    return float(x)


def _num_list(vals):
    return None if vals is None else [_num(v) for v in vals]


def _pair_list(vals):
    return None if vals is None else [_pair(z) for z in vals]


def _row_payload(rows):
    return [{"rx": _pair(r.rx), "theta_hat": r.theta_hat,
             "delta": r.delta_quality, "d2": _num(r.d2_quality)}
            for r in rows]


def _crossing_payload(crossings):
    return [{"theta": th, "delta": delta} for th, delta in crossings]


def _gap_payload(gaps):
    return [[lo, hi] for lo, hi in gaps]


def _frame_payload(p: MonicPolynomial, frame: LzCFrame,
                   cfg: OptimizerConfig, reason: str | None):
    span = cfg.grid_t_max if cfg.grid_t_max is not None else default_grid_span(p)
    tmax = 1.2 * max(frame.t_star or 0.0, span)
    ts = [tmax * i / (FRAME_SAMPLES - 1) for i in range(FRAME_SAMPLES)]

    l1 = [_pair(frame.p1 + t * frame.v_theta) for t in ts]
    tl = None
    if frame.anchor_point is not None and frame.v_tl is not None:
        tl = [_pair(frame.anchor_point + (t * t) * frame.v_tl) for t in ts]
    tc = None
    dsd_curve = None
    if p.degree >= 4:
        tc = [_pair(terminal_curve_point(p, frame.theta, t)) for t in ts]
        vals = []
        for t in ts:
            try:
                vals.append(_num(dsd(p, frame.theta, t)))
            except ReciprocalPole:
                vals.append(None)
        dsd_curve = vals

    zc = None
    zc_points = None
    if frame.zc is not None:
        zc = {"center": _pair(frame.zc.center), "radius": frame.zc.radius}
        zc_points = [_pair(frame.zc.center + frame.zc.radius *
                           complex(math.cos(a), math.sin(a)))
                     for a in (2.0 * math.pi * k / CIRCLE_SAMPLES
                               for k in range(CIRCLE_SAMPLES + 1))]

    # t=0 fixed point of the reciprocal image and the minimizer's image on
    # it; both are marker positions the explorer cannot derive client-side
    pc = None
    zc_t_star = None
    try:
        pc = _pair(zc_point(p, frame.theta, 0.0))
    except ReciprocalPole:
        pass
    if frame.t_star is not None:
        try:
            zc_t_star = _pair(zc_point(p, frame.theta, frame.t_star))
        except ReciprocalPole:
            pass

    inter = None
    if frame.intersections is not None:
        it = frame.intersections
        inter = {"i1": _pair(it.i1), "i2": _pair(it.i2),
                 "t1": _num(it.t1), "t2": _num(it.t2),
                 "relevance": it.relevance}

    return {
        "degree": p.degree,
        "theta": frame.theta,
        "p1": _pair(frame.p1),
        "v_theta": _pair(frame.v_theta),
        "t_star": _num(frame.t_star),
        "min_d2": _num(frame.min_d2),
        "rx": _pair(frame.rx),
        "anchor_point": _pair(frame.anchor_point),
        "v_tl": _pair(frame.v_tl),
        "zc": zc,
        "pc": pc,
        "zc_t_star": zc_t_star,
        "intersections": inter,
        "proj_i0": [_pair(frame.proj_i0[0]), _pair(frame.proj_i0[1])],
        "proj_c0": [_pair(frame.proj_c0[0]), _pair(frame.proj_c0[1])],
        "e_a": _num(frame.e_a),
        "e_b": _num(frame.e_b),
        "t_samples": ts,
        "l1": l1,
        "tc": tc,
        "tl": tl,
        "zc_points": zc_points,
        "dsd_curve": dsd_curve,
        "reason": reason,
    }


# ------------------------------------------------------------------ helpers

def _bad(msg: str, code: int = 400):
    return HTTPException(status_code=code, detail=msg)


def _config(method: str, maxit: int, temp: float,
            tmax: float | None, seed: int) -> OptimizerConfig:
    if method not in ("grid", "twophase"):
        raise _bad("method must be grid or twophase")
    m = (OptimizerMethod.GRID_DISCRETIZE if method == "grid"
         else OptimizerMethod.TWO_PHASE)
    return OptimizerConfig(method=m, max_iterations=maxit,
                           initial_temperature=temp, grid_t_max=tmax,
                           seed=seed)


def _partition(lo: float, hi: float, n: int, cap: int) -> PartitionSpec:
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi <= lo:
        raise _bad("bad partition: need finite from < to")
    if n < 2:
        raise _bad("bad partition: need n >= 2")
    if n > cap:
        raise _bad(f"partition too fine: n > {cap}", 413)
    return PartitionSpec(lo, hi, n, lo == -math.pi and hi == math.pi)


def create_app(map_cap: int = MAP_POINT_CAP,
               workers: int | None = None) -> FastAPI:
    """Build the API app; map_cap bounds sweep sizes, workers the sweep pool."""
    if workers is None:
        workers = min(4, os.cpu_count() or 1)
    app = FastAPI(title="lcroots explorer API")
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])
    store = SessionStore()

    def session(sid: str) -> SessionPolynomial:
        rec = store.get(sid)
        if rec is None:
            raise _bad("unknown id", 404)
        return rec

    async def json_body(request: Request):
        raw = await request.body()
        if not raw:
            raise _bad("empty body")
        try:
            return json.loads(raw)
        except ValueError:
            raise _bad("body is not valid JSON")

    @app.post("/api/polynomial", status_code=201)
    async def create_polynomial(request: Request):
        body = await json_body(request)
        items = body.get("coefficients") if isinstance(body, dict) else body
        if not isinstance(items, (list, tuple)):
            raise _bad("coefficients must be a list")
        try:
            coeffs = coeffs_from_json(items)
            p = MonicPolynomial(tuple(coeffs))
        except (ValueError, TypeError) as exc:
            raise _bad(str(exc))
        if p.degree < 2:
            raise _bad("degree >= 2 required")
        rec = store.add(p)
        return {"id": rec.id, "degree": p.degree}

    @app.get("/api/frame")
    def frame(id: str,
              theta: float,
              method: str = "grid",
              maxit: int = _DEFAULTS.max_iterations,
              temp: float = _DEFAULTS.initial_temperature,
              tmax: float | None = None,
              seed: int = _DEFAULTS.seed):
        rec = session(id)
        p = rec.polynomial
        if not math.isfinite(theta):
            raise _bad("theta must be finite")
        if p.degree < 3:
            raise _bad("frame needs degree >= 3")
        cfg = _config(method, maxit, temp, tmax, seed)
        if p.degree == 3:
            fr = build_frame(p, theta)
        else:
            res = minimize_dsd(p, theta, cfg)
            if res.status is not MinStatus.OK:
                fr = build_frame(p, theta)
                reason = f"no admissible minimizer ({res.status.value})"
                return JSONResponse(status_code=422,
                                    content=_frame_payload(p, fr, cfg, reason))
            fr = build_frame(p, theta, res.t_star, res.min_value)
        if fr.zc is None:
            reason = "degenerate z-circumference: the base line passes through the origin"
            return JSONResponse(status_code=422,
                                content=_frame_payload(p, fr, cfg, reason))
        return _frame_payload(p, fr, cfg, None)

    @app.get("/api/map")
    def sweep(id: str,
              kind: str = "e",
              theta_from: float = Query(default=-math.pi, alias="from"),
              theta_to: float = Query(default=math.pi, alias="to"),
              n: int = 2500,
              tol: float | None = None,
              with_estimates: bool = False,
              method: str = "grid",
              maxit: int = _DEFAULTS.max_iterations,
              temp: float = _DEFAULTS.initial_temperature,
              tmax: float | None = None,
              seed: int = _DEFAULTS.seed):
        rec = session(id)
        p = rec.polynomial
        if kind not in _KIND_TOLS:
            raise _bad("kind must be one of e, dd2, dt")
        if p.degree < 3:
            raise _bad("maps need degree >= 3")
        if kind != "e" and p.degree == 3:
            raise _bad("derivative maps need degree >= 4")
        part = _partition(theta_from, theta_to, n, map_cap)
        cfg = _config(method, maxit, temp, tmax, seed)
        if tol is None:
            tol = _KIND_TOLS[kind]

        em = build_e_map(p, part, cfg, workers)
        estimates = None
        if kind == "e":
            pm = em
            crossings = e_map_crossings(em, tol)
            if with_estimates:
                rows = (estimate_roots_cubic(p, crossings) if p.degree == 3
                        else estimate_roots_general(p, crossings, cfg))
                estimates = _row_payload(rows)
        else:
            source = em.aux_min_f if kind == "dd2" else em.aux_min_t
            pm, rows = build_derivative_map(p, source, part, tol,
                                            kind.upper(), cfg)
            crossings = find_crossings(pm.support, pm.values_a, tol)
            if with_estimates:
                estimates = _row_payload(rows)

        return {
            "kind": kind,
            "n": n,
            "from": part.start,
            "to": part.stop,
            "is_global": part.is_global,
            "step": part.step,
            "tol": tol,
            "support": list(pm.support),
            "values_a": _num_list(pm.values_a),
            "values_b": _num_list(pm.values_b),
            "min_f": _num_list(pm.aux_min_f),
            "min_t": _num_list(pm.aux_min_t),
            "rx": _pair_list(pm.aux_rx),
            "ap": _pair_list(pm.aux_ap),
            "crossings": _crossing_payload(crossings),
            "gaps": _gap_payload(map_gaps(pm)),
            "estimates": estimates,
        }

    @app.post("/api/solve")
    async def solve(request: Request):
        body = await json_body(request)
        if not isinstance(body, dict) or "id" not in body:
            raise _bad("body must be a JSON object with an id")
        rec = session(str(body["id"]))
        p = rec.polynomial
        opts = body.get("options") or {}
        if not isinstance(opts, dict):
            raise _bad("options must be an object")

        if p.degree == 2:
            sol = solve_quadratic(p)
            rows = []
            for root in (sol.r1, sol.r2):
                try:
                    th = theta_root(p, root)
                except ValueError:
                    th = 0.0
                rows.append({"rx": _pair(root), "theta_hat": th,
                             "delta": 0.0, "d2": None})
            return {"degree": 2, "tables": {"e": rows},
                    "gaps": {"e": []}, "rescue_used": False}

        try:
            lo = float(opts.get("from", -math.pi))
            hi = float(opts.get("to", math.pi))
            n = int(opts.get("n", 2500))
            kinds = opts.get("kinds", ["e", "dd2", "dt"])
            if isinstance(kinds, str):
                kinds = [k for k in kinds.split(",") if k]
            kinds = tuple(str(k).lower() for k in kinds)
            tol_e = float(opts.get("tol_e", 1.0))
            tol_dd2 = float(opts.get("tol_dd2", 2.0))
            tol_dt = float(opts.get("tol_dt", 2.0))
            cfg = _config(str(opts.get("method", "grid")),
                          int(opts.get("maxit", _DEFAULTS.max_iterations)),
                          float(opts.get("temp", _DEFAULTS.initial_temperature)),
                          (None if opts.get("tmax") is None
                           else float(opts["tmax"])),
                          int(opts.get("seed", _DEFAULTS.seed)))
        except (ValueError, TypeError) as exc:
            raise _bad(f"bad options: {exc}")
        if any(k not in _KIND_TOLS for k in kinds):
            raise _bad("kinds must come from e, dd2, dt")
        part = _partition(lo, hi, n, map_cap)
        try:
            outcome = solve_pipeline(p, part, cfg, kinds, tol_e,
                                     tol_dd2, tol_dt, workers)
        except ValueError as exc:
            raise _bad(str(exc))
        return {
            "degree": p.degree,
            "tables": {k: _row_payload(rows)
                       for k, rows in outcome.tables.items()},
            "gaps": {k: _gap_payload(g) for k, g in outcome.gaps.items()},
            "rescue_used": outcome.rescue_used,
        }

    return app
