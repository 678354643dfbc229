"""End-to-end checks of the HTTP API through the in-process test client.

Numeric content is cross-checked two ways: payloads must agree bit for bit
with the library calls they wrap (JSON doubles round-trip exactly), and the
headline numbers must land on the same reference values the map and frame
suites pin directly.
"""

import dataclasses
import math

import numpy as np
import pytest
from fastapi.testclient import TestClient

from lcroots import (
    MonicPolynomial,
    PartitionSpec,
    build_derivative_map,
    build_e_map,
    build_frame,
    dsd,
    minimize_dsd,
    solve_pipeline,
)
from lcroots.lzc_engine import zc_point
from lcroots.service import SessionStore, create_app

DEG7 = [[0.75236627, 0.7632200], [-0.88646602, -0.0588508],
        [-0.36898968, -0.8967600], [0.61107101, 0.4171449],
        [-0.11086361, 0.3804181], [-0.12915236, -0.2105427],
        [0.03085174, 0.0215915]]
CUBIC_A = [[0.19699632, 1.1229974], [-0.54949766, -0.3353859],
           [0.09869309, 0.0054156]]
CUBIC_RESCUE = [[-0.4040959, -0.6278018], [-0.0231298, -0.1811857],
                [0.2672721, -0.5804607]]
CUBIC_DOUBLE = [[-5, -8], [3, 22], [-19, -62]]
QUAD = [[1, 1], [2, 2]]

# global E sweep of CUBIC_A at N=1000: three crossings, one per root
CUBIC_A_THETAS = (0.9936258, 0.7284104, -2.6919246)
CUBIC_A_RX = (0.2370095 - 0.0462304j, 0.2938045 - 0.2115416j,
              -0.7278063 - 0.8652316j)


def poly(coeffs):
    return MonicPolynomial(tuple(complex(re, im) for re, im in coeffs))


def register(client, coeffs):
    r = client.post("/api/polynomial", json={"coefficients": coeffs})
    assert r.status_code == 201
    return r.json()["id"]


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


@pytest.fixture(scope="module")
def deg7_id(client):
    return register(client, DEG7)


@pytest.fixture(scope="module")
def cubic_a_id(client):
    return register(client, CUBIC_A)


class TestSessionStore:
    def test_roundtrip(self):
        store = SessionStore()
        p = poly(CUBIC_A)
        rec = store.add(p)
        assert store.get(rec.id) is rec
        assert rec.polynomial is p
        assert rec.created_at > 0

    def test_unknown_id_is_none(self):
        assert SessionStore().get("deadbeef") is None

    def test_ids_unique(self):
        store = SessionStore()
        p = poly(QUAD)
        ids = {store.add(p).id for _ in range(64)}
        assert len(ids) == 64

    def test_sessions_immutable(self):
        rec = SessionStore().add(poly(QUAD))
        with pytest.raises(dataclasses.FrozenInstanceError):
            rec.id = "other"


class TestCreatePolynomial:
    def test_creates_cubic(self, client):
        r = client.post("/api/polynomial", json={"coefficients": CUBIC_A})
        assert r.status_code == 201
        body = r.json()
        assert body["degree"] == 3
        assert isinstance(body["id"], str) and len(body["id"]) == 16

    def test_distinct_ids(self, client):
        assert register(client, QUAD) != register(client, QUAD)

    def test_accepts_bare_list_and_mixed_entries(self, client):
        r = client.post("/api/polynomial",
                        json=[[1, 2], "0 0", "3+4i", {"re": 5}])
        assert r.status_code == 201
        assert r.json()["degree"] == 4

    def test_degree_two_accepted(self, client):
        r = client.post("/api/polynomial", json={"coefficients": QUAD})
        assert r.status_code == 201
        assert r.json()["degree"] == 2

    def test_empty_body_rejected(self, client):
        assert client.post("/api/polynomial", content=b"").status_code == 400

    def test_degree_one_rejected(self, client):
        r = client.post("/api/polynomial", json={"coefficients": [[1, 0]]})
        assert r.status_code == 400
        assert r.json()["detail"] == "degree >= 2 required"

    def test_malformed_json_rejected(self, client):
        r = client.post("/api/polynomial", content=b"{nope",
                        headers={"content-type": "application/json"})
        assert r.status_code == 400

    def test_non_list_coefficients_rejected(self, client):
        r = client.post("/api/polynomial", json={"coefficients": 5})
        assert r.status_code == 400

    def test_unparseable_entry_rejected(self, client):
        r = client.post("/api/polynomial", json={"coefficients": ["zzz", [1, 2]]})
        assert r.status_code == 400


class TestFrame:
    def test_reference_minimum(self, client, deg7_id):
        r = client.get("/api/frame", params={"id": deg7_id, "theta": 0.73136})
        assert r.status_code == 200
        f = r.json()
        assert f["t_star"] == pytest.approx(1.2465, rel=1e-4)
        assert f["min_d2"] == pytest.approx(4.2053e-3, rel=5e-4)
        assert f["degree"] == 7
        assert f["reason"] is None

    def test_matches_direct_computation(self, client, deg7_id):
        f = client.get("/api/frame",
                       params={"id": deg7_id, "theta": 0.73136}).json()
        p = poly(DEG7)
        res = minimize_dsd(p, 0.73136)
        fr = build_frame(p, 0.73136, res.t_star, res.min_value)
        assert f["t_star"] == res.t_star
        assert f["min_d2"] == res.min_value
        assert complex(*f["rx"]) == fr.rx
        assert complex(*f["p1"]) == fr.p1
        assert f["e_a"] == fr.e_a and f["e_b"] == fr.e_b
        assert f["zc"]["radius"] == fr.zc.radius

    def test_fixed_point_and_minimizer_markers(self, client, deg7_id):
        f = client.get("/api/frame",
                       params={"id": deg7_id, "theta": 0.73136}).json()
        p = poly(DEG7)
        assert complex(*f["pc"]) == zc_point(p, 0.73136, 0.0)
        assert complex(*f["zc_t_star"]) == zc_point(p, 0.73136, f["t_star"])
        # the minimizer's image lies on the circle, the t=0 point is fixed
        center = complex(*f["zc"]["center"])
        assert abs(complex(*f["zc_t_star"]) - center) == pytest.approx(
            f["zc"]["radius"], rel=1e-9)
        g = client.get("/api/frame",
                       params={"id": deg7_id, "theta": -2.1}).json()
        assert g["pc"] == f["pc"]

    def test_sampled_curves(self, client, deg7_id):
        f = client.get("/api/frame",
                       params={"id": deg7_id, "theta": 0.73136}).json()
        assert len(f["t_samples"]) == 600
        assert len(f["l1"]) == len(f["tc"]) == len(f["tl"]) == 600
        assert len(f["dsd_curve"]) == 600
        assert len(f["zc_points"]) == 257
        p1 = complex(*f["p1"])
        v = complex(*f["v_theta"])
        k = 123
        t = f["t_samples"][k]
        assert complex(*f["l1"][k]) == p1 + t * v
        anchor = complex(*f["anchor_point"])
        v_tl = complex(*f["v_tl"])
        assert complex(*f["tl"][k]) == anchor + t * t * v_tl
        assert f["dsd_curve"][k] == dsd(poly(DEG7), 0.73136, t)
        # curve spans past t* and its sampled minimum sits at the true one
        assert f["t_samples"][-1] > f["t_star"]
        # 600 display samples bracket the true minimum to grid resolution
        best = min(v for v in f["dsd_curve"] if v is not None)
        assert f["min_d2"] <= best < f["min_d2"] * 1.01
        center = complex(*f["zc"]["center"])
        for pt in f["zc_points"][::64]:
            assert abs(complex(*pt) - center) == pytest.approx(f["zc"]["radius"])

    def test_zc_identical_across_pi(self, client, deg7_id):
        a = client.get("/api/frame",
                       params={"id": deg7_id, "theta": 0.73136}).json()
        b = client.get("/api/frame",
                       params={"id": deg7_id, "theta": 0.73136 + math.pi}).json()
        ca, cb = a["zc"], b["zc"]
        assert abs(complex(*ca["center"]) - complex(*cb["center"])) < 1e-12
        assert abs(ca["radius"] - cb["radius"]) < 1e-12

    def test_cubic_frame_fields(self, client, cubic_a_id):
        r = client.get("/api/frame", params={"id": cubic_a_id, "theta": 1.0})
        assert r.status_code == 200
        f = r.json()
        # no optimizer on the cubic path, so no t-star and no d2 material
        assert f["t_star"] is None and f["min_d2"] is None
        assert f["tc"] is None and f["dsd_curve"] is None
        assert f["tl"] is not None
        assert -1.0 < f["e_a"] <= 1.0 and -1.0 < f["e_b"] <= 1.0
        assert f["intersections"]["relevance"] in (0, 1, 2)

    def test_tangential_contact_near_double_root(self, client):
        sid = register(client, CUBIC_DOUBLE)
        f = client.get("/api/frame", params={"id": sid, "theta": 2.034}).json()
        it = f["intersections"]
        i1, i2 = complex(*it["i1"]), complex(*it["i2"])
        assert it["relevance"] == 2
        assert abs(i1 - i2) < 2e-2  # the two contact points collapse into one
        # and the better branch's projection midpoint sits on the double root
        branch = 0 if abs(f["e_a"]) <= abs(f["e_b"]) else 1
        mid = 0.5 * (complex(*f["proj_i0"][branch])
                     + complex(*f["proj_c0"][branch]))
        assert abs(mid - (2 + 5j)) < 5e-3

    def test_unknown_id(self, client):
        r = client.get("/api/frame", params={"id": "missing", "theta": 0.5})
        assert r.status_code == 404

    def test_degree_two_rejected(self, client):
        sid = register(client, QUAD)
        r = client.get("/api/frame", params={"id": sid, "theta": 0.5})
        assert r.status_code == 400

    @pytest.mark.parametrize("bad", ["inf", "-inf", "nan"])
    def test_nonfinite_theta_rejected(self, client, deg7_id, bad):
        r = client.get("/api/frame", params={"id": deg7_id, "theta": bad})
        assert r.status_code == 400

    def test_degenerate_cubic_reports_nulls_and_reason(self, client):
        # C1 = 0 puts the fixed point at the origin: every sweep line hits it
        sid = register(client, [[0, 0], [2, 2], [3, 3]])
        r = client.get("/api/frame", params={"id": sid, "theta": 0.5})
        assert r.status_code == 422
        f = r.json()
        assert f["zc"] is None and f["e_a"] is None and f["e_b"] is None
        assert "degenerate" in f["reason"]

    def test_degenerate_quartic_still_carries_estimate(self, client):
        sid = register(client, [[0, 0], [0, 0], [0, 0], [16, 0]])
        r = client.get("/api/frame", params={"id": sid, "theta": math.pi / 4})
        assert r.status_code == 422
        f = r.json()
        assert f["t_star"] == pytest.approx(2.0, abs=1e-6)
        assert complex(*f["rx"]) == pytest.approx(2 * np.exp(1j * math.pi / 4))
        assert f["zc"] is None and "degenerate" in f["reason"]


class TestMap:
    def test_global_crossings_match_reference(self, client, cubic_a_id):
        r = client.get("/api/map", params={"id": cubic_a_id, "n": 1000})
        assert r.status_code == 200
        m = r.json()
        assert m["is_global"] and len(m["support"]) == 1000
        got = sorted(c["theta"] for c in m["crossings"])
        assert got == pytest.approx(sorted(CUBIC_A_THETAS), abs=1e-5)

    def test_estimates_match_reference(self, client, cubic_a_id):
        m = client.get("/api/map", params={"id": cubic_a_id, "n": 1000,
                                           "with_estimates": "true"}).json()
        rows = m["estimates"]
        assert len(rows) == 3
        for want in CUBIC_A_RX:
            best = min(rows, key=lambda r: abs(complex(*r["rx"]) - want))
            assert abs(complex(*best["rx"]) - want) < 1e-5
            assert best["d2"] is None

    def test_payload_equals_library_sweep(self, client, cubic_a_id):
        m = client.get("/api/map", params={"id": cubic_a_id, "n": 500}).json()
        pm = build_e_map(poly(CUBIC_A), PartitionSpec(-math.pi, math.pi, 500, True))
        assert m["support"] == list(pm.support)
        assert m["values_a"] == list(pm.values_a)
        assert m["values_b"] == list(pm.values_b)
        assert m["min_f"] is None and m["rx"] is None  # cubics carry no aux
        assert m["step"] == pm.partition.step

    def test_regional_crossing(self, client):
        sid = register(client, CUBIC_RESCUE)
        m = client.get("/api/map", params={"id": sid, "from": 3.0, "to": 3.1,
                                           "n": 1000}).json()
        assert not m["is_global"]
        assert m["support"][0] >= 3.0 and m["support"][-1] < 3.1
        assert len(m["crossings"]) == 1
        assert m["crossings"][0]["theta"] == pytest.approx(3.032869, abs=1e-4)

    def test_two_point_map(self, client, cubic_a_id):
        m = client.get("/api/map", params={"id": cubic_a_id, "n": 2}).json()
        assert len(m["support"]) == 2
        assert m["crossings"] == []

    def test_derivative_map_matches_library(self, client, deg7_id):
        m = client.get("/api/map", params={"id": deg7_id, "kind": "dd2",
                                           "n": 400, "tol": 2.0,
                                           "with_estimates": "true"}).json()
        p = poly(DEG7)
        part = PartitionSpec(-math.pi, math.pi, 400, True)
        em = build_e_map(p, part)
        pm, rows = build_derivative_map(p, em.aux_min_f, part, 2.0, "DD2")
        assert len(m["support"]) == 400  # global wrap keeps N quotients
        assert m["values_a"] == list(pm.values_a)
        assert m["values_b"] is None
        assert [complex(*r["rx"]) for r in m["estimates"]] == [r.rx for r in rows]

    def test_dt_kind_served(self, client, deg7_id):
        m = client.get("/api/map", params={"id": deg7_id, "kind": "dt",
                                           "n": 400, "tol": 2.0}).json()
        assert m["kind"] == "dt" and m["tol"] == 2.0
        assert m["estimates"] is None
        assert all(set(c) == {"theta", "delta"} for c in m["crossings"])

    def test_get_idempotent(self, client, cubic_a_id):
        q = {"id": cubic_a_id, "n": 300, "with_estimates": "true"}
        a = client.get("/api/map", params=q)
        b = client.get("/api/map", params=q)
        assert a.content == b.content

    def test_worker_count_invariance(self):
        one = TestClient(create_app(workers=1))
        many = TestClient(create_app(workers=3))
        ma = one.get("/api/map", params={"id": register(one, DEG7), "n": 300}).json()
        mb = many.get("/api/map", params={"id": register(many, DEG7), "n": 300}).json()
        assert ma == mb

    def test_bad_kind(self, client, cubic_a_id):
        r = client.get("/api/map", params={"id": cubic_a_id, "kind": "zz"})
        assert r.status_code == 400

    def test_derivative_on_cubic_rejected(self, client, cubic_a_id):
        r = client.get("/api/map", params={"id": cubic_a_id, "kind": "dt"})
        assert r.status_code == 400

    def test_degree_two_rejected(self, client):
        sid = register(client, QUAD)
        assert client.get("/api/map", params={"id": sid}).status_code == 400

    @pytest.mark.parametrize("params", [
        {"from": 2.0, "to": 1.0},
        {"from": 1.0, "to": 1.0},
        {"n": 1},
        {"from": "inf"},
    ])
    def test_bad_partition(self, client, cubic_a_id, params):
        q = {"id": cubic_a_id, "n": 100}
        q.update(params)
        assert client.get("/api/map", params=q).status_code == 400

    def test_oversize_sweep_rejected(self, client, cubic_a_id):
        r = client.get("/api/map", params={"id": cubic_a_id, "n": 200001})
        assert r.status_code == 413

    def test_unknown_id(self, client):
        assert client.get("/api/map", params={"id": "zz"}).status_code == 404


class TestSolve:
    def test_quadratic_closed_form(self, client):
        sid = register(client, QUAD)
        r = client.post("/api/solve", json={"id": sid})
        assert r.status_code == 200
        s = r.json()
        assert s["degree"] == 2 and not s["rescue_used"]
        roots = sorted((complex(*row["rx"]) for row in s["tables"]["e"]),
                       key=lambda z: z.real)
        assert roots == pytest.approx([-1 + 1j, -2j])
        assert all(row["d2"] is None and row["delta"] == 0.0
                   for row in s["tables"]["e"])
        assert s["gaps"]["e"] == []

    def test_cubic_matches_library(self, client, cubic_a_id):
        r = client.post("/api/solve",
                        json={"id": cubic_a_id, "options": {"n": 1000}})
        assert r.status_code == 200
        s = r.json()
        out = solve_pipeline(poly(CUBIC_A), PartitionSpec(-math.pi, math.pi, 1000, True))
        assert list(s["tables"]) == ["e"]
        got = s["tables"]["e"]
        assert [complex(*row["rx"]) for row in got] == [r.rx for r in out.tables["e"]]
        assert [row["theta_hat"] for row in got] \
            == [r.theta_hat for r in out.tables["e"]]
        assert [row["delta"] for row in got] \
            == [r.delta_quality for r in out.tables["e"]]

    def test_rescue_reported(self, client):
        sid = register(client, CUBIC_RESCUE)
        s = client.post("/api/solve",
                        json={"id": sid, "options": {"n": 1000}}).json()
        assert s["rescue_used"]
        assert len(s["tables"]["e"]) == 3
        assert len(s["gaps"]["e"]) >= 1

    def test_random_degree5_coverage(self, client):
        rng = np.random.default_rng(20260815)
        while True:
            roots = rng.uniform(-1, 1, 5) + 1j * rng.uniform(-1, 1, 5)
            if all(abs(roots[i] - roots[j]) >= 0.5
                   for i in range(5) for j in range(i + 1, 5)):
                break
        coeffs = [[z.real, z.imag] for z in np.poly(roots)[1:]]
        sid = register(client, coeffs)
        s = client.post("/api/solve",
                        json={"id": sid, "options": {"n": 2500}}).json()
        est = [complex(*row["rx"])
               for table in s["tables"].values() for row in table]
        for z in roots:
            rel = min(abs(e - z) for e in est) / max(1.0, abs(z))
            assert rel < 1e-3

    def test_kinds_as_comma_string(self, client, deg7_id):
        s = client.post("/api/solve",
                        json={"id": deg7_id,
                              "options": {"n": 300, "kinds": "dt"}}).json()
        assert list(s["tables"]) == ["dt"]

    def test_unknown_id(self, client):
        r = client.post("/api/solve", json={"id": "nope"})
        assert r.status_code == 404

    def test_missing_id(self, client):
        assert client.post("/api/solve", json={"options": {}}).status_code == 400

    @pytest.mark.parametrize("options", [
        {"kinds": ["x"]},
        {"n": "abc"},
        {"method": "annealing"},
        5,
    ])
    def test_bad_options(self, client, cubic_a_id, options):
        r = client.post("/api/solve",
                        json={"id": cubic_a_id, "options": options})
        assert r.status_code == 400

    def test_oversize_sweep_rejected(self, client, cubic_a_id):
        r = client.post("/api/solve",
                        json={"id": cubic_a_id, "options": {"n": 500000}})
        assert r.status_code == 413


class TestCors:
    def test_preflight_allows_browser_origin(self, client):
        r = client.options("/api/map", headers={
            "origin": "http://localhost:5173",
            "access-control-request-method": "GET",
        })
        assert r.status_code == 200
        assert r.headers["access-control-allow-origin"] == "*"
