import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from cicsec.errors import ArgumentError, WeakInterferenceError
from cicsec.gaussian import GaussianChannel
from cicsec.region import (
    RatePoint,
    boundary_curve,
    contains,
    pareto_frontier,
    region_from_dict,
    region_to_csv,
    region_to_dict,
    sweep_tradeoff,
    time_share_hull,
)

FIG = dict(p1=4.0, p2=4.0, k1=1.0, k2=1.0, a=0.9, b=0.3)

coord = st.integers(0, 4).map(lambda k: k / 4)
triples = st.tuples(coord, coord, coord).map(lambda t: (t[0], t[1], min(t[1], t[2])))


def pts(rows):
    return [RatePoint(*r) for r in rows]


def slow_frontier(rows):
    keep = []
    for i, p in enumerate(rows):
        dominated = False
        for j, q in enumerate(rows):
            if j == i:
                continue
            if all(qa >= pa for qa, pa in zip(q, p)) and (q != p or j < i):
                dominated = True
                break
        if not dominated:
            keep.append(i)
    return keep


@given(st.lists(triples, min_size=1, max_size=30))
def test_frontier_matches_pairwise_oracle(rows):
    assert list(pareto_frontier(pts(rows)).frontier) == slow_frontier(rows)


@given(st.lists(triples, min_size=1, max_size=15))
def test_every_input_point_is_contained(rows):
    reg = pareto_frontier(pts(rows))
    assert all(contains(reg, r) for r in rows)


def test_empty_frontier_rejected():
    with pytest.raises(ArgumentError):
        pareto_frontier([])


def test_rate_point_validation():
    with pytest.raises(ArgumentError):
        RatePoint(-0.1, 0, 0)
    with pytest.raises(ArgumentError):
        RatePoint(0, 0.5, 0.6)
    with pytest.raises(ArgumentError):
        RatePoint(float("nan"), 0, 0)


def test_hull_midpoint():
    reg = pareto_frontier(pts([(1, 0, 0), (0, 1, 1)]))
    assert not contains(reg, (0.5, 0.5, 0.5))
    hull = time_share_hull(reg, samples=11)
    assert contains(hull, (0.5, 0.5, 0.5))
    assert contains(hull, (0.37, 0.63, 0.63))
    assert not contains(hull, (0.6, 0.6, 0.0))
    mids = [p for p in hull.points if "time_share" in p.provenance]
    for p in mids:
        lam = p.provenance["lambda"]
        i, j = p.provenance["time_share"]
        a, b = np.array(hull.points[i].as_tuple()), np.array(hull.points[j].as_tuple())
        np.testing.assert_allclose(p.as_tuple(), lam * a + (1 - lam) * b, atol=1e-15)


@given(st.lists(triples, min_size=2, max_size=8), st.floats(0, 1))
def test_hull_contains_convex_combinations(rows, lam):
    reg = time_share_hull(pareto_frontier(pts(rows)), samples=3)
    a, b = np.array(rows[0]), np.array(rows[-1])
    c = lam * a + (1 - lam) * b
    assert contains(reg, c, tol=1e-7)


def test_sweep_gpc_endpoints():
    ch = GaussianChannel(**FIG)
    reg = sweep_tradeoff(ch, "gpc")
    ref = oracles.gpc(**{k: FIG[k] for k in ("p1", "p2", "k1", "k2", "a")})
    ends = reg.endpoints()
    assert ends["r1"] == pytest.approx(float(ref["r1"]), abs=1e-12)
    assert ends["r2"] == pytest.approx(float(ref["re2"]), abs=1e-12)
    # every frontier point is a secrecy point
    assert all(p.re2 == p.r2 for p in reg.points)


def test_sweep_spc_perfect_corners():
    ch = GaussianChannel(**FIG)
    reg = sweep_tradeoff(ch, "spc_perfect")
    ref = {k: float(v) for k, v in oracles.spc_perfect(**FIG).items()}
    r1 = min(ref["r1"], ref["sum"])
    r2 = min(ref["r2"], ref["sum"])
    arr = reg.array(frontier_only=True)
    assert arr[:, 0].max() == pytest.approx(r1, abs=1e-12)
    assert arr[:, 1].max() == pytest.approx(r2, abs=1e-12)
    assert contains(reg, (min(ref["r1"], ref["sum"] - r2), r2, r2))


def test_sweep_spc_grid_skips_bad_splits():
    ch = GaussianChannel(**FIG)
    reg = sweep_tradeoff(ch, "spc", {"rho": [1.0, 0.5], "rho1": [0.0, 0.9], "rho2": [0.0, 0.9]})
    for p in reg.points:
        pr = p.provenance
        assert pr["rho1"] ** 2 + pr["rho2"] ** 2 <= 1
        assert pr["rho"] <= 1 - pr["rho1"] ** 2 - pr["rho2"] ** 2 + 1e-12


def test_zero_power_gives_zero_secrecy():
    ch = GaussianChannel(**dict(FIG, p2=0.0))
    reg = sweep_tradeoff(ch, "gpc", {"rho": [0.0, 0.5]})
    assert reg.endpoints()["r2"] == 0.0 and reg.endpoints()["re2"] == 0.0


def test_strong_interference_rejected():
    with pytest.raises(WeakInterferenceError):
        sweep_tradeoff(GaussianChannel(**dict(FIG, a=1.5)), "gpc")


def test_boundary_curve_closes_to_axes():
    reg = pareto_frontier(pts([(1, 0.5, 0.5), (0.5, 1, 1)]))
    curve = boundary_curve(reg)
    assert curve[0] == (0.0, 1.0) and curve[-1] == (1.0, 0.0)


def test_csv_and_json_export():
    reg = pareto_frontier(pts([(1 / 3, 0.25, 0.25), (0.1, 0.9, 0.0)]))
    text = region_to_csv(reg, label="demo", header=["hello"])
    lines = text.splitlines()
    assert lines[0] == "# hello"
    assert lines[1] == "curve,r1,r2,re2,provenance"
    assert lines[2].startswith("demo,0.333333333333,0.25,0.25")
    back = region_from_dict(json.loads(json.dumps(region_to_dict(reg))))
    assert back == reg
