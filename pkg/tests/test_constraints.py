import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cicsec.constraints import RegionConstraints
from cicsec.errors import ArgumentError

caps = st.floats(0.0, 3.0, allow_nan=False)
weights = st.tuples(*[st.floats(0.0, 2.0, allow_nan=False)] * 3)


def standard(a, b, s, e):
    return RegionConstraints.build([("r1", {"r1": 1}, a), ("r2", {"r2": 1}, b),
                                    ("sum", {"r1": 1, "r2": 1}, s), ("re2", {"re2": 1}, e)])


def with_redundant_row(cons):
    # a slack non-standard row forces the LP path without changing the region
    items = [(b.label, dict(zip(cons.axes, b.coeffs)), b.value) for b in cons.bounds]
    items.append(("loose", {"r1": 1, "r2": 2, "re2": 0.5}, 100.0))
    return RegionConstraints.build(items)


def grid_max(cons, w, step=0.05):
    best = -np.inf
    ax = np.arange(0, 3.0001, step)
    for r1, r2 in itertools.product(ax, ax):
        re2 = min(r2, cons["re2"])
        if re2 < 0 or not cons.satisfied((r1, r2, re2), tol=1e-12):
            continue
        best = max(best, w[0] * r1 + w[1] * r2 + w[2] * re2)
    return best


@given(caps, caps, caps, caps, weights)
def test_closed_form_matches_lp(a, b, s, e, w):
    cons = standard(a, b, s, e)
    wd = dict(zip(("r1", "r2", "re2"), w))
    p = cons.maximize(wd)
    q = with_redundant_row(cons).maximize(wd)
    val = lambda x: sum(wd[k] * x[k] for k in wd)
    assert val(p) == pytest.approx(val(q), abs=1e-7)
    assert cons.satisfied(p, tol=1e-12)
    assert p["re2"] <= p["r2"] + 1e-12


@pytest.mark.parametrize("seed", range(5))
def test_closed_form_against_grid(seed):
    rng = np.random.default_rng(seed)
    a, b, s, e = np.round(rng.uniform(0, 2, 4), 1)
    cons = standard(a, b, s, e)
    w = tuple(rng.uniform(0, 1, 3))
    p = cons.maximize(dict(zip(("r1", "r2", "re2"), w)))
    assert w[0] * p["r1"] + w[1] * p["r2"] + w[2] * p["re2"] == pytest.approx(
        grid_max(cons, w), abs=1e-9)


def test_fixed_r1():
    cons = standard(1.0, 1.0, 1.5, 0.3)
    p = cons.maximize({"r2": 1}, fixed={"r1": 0.8}, tiebreak=("re2",))
    assert p == {"r1": 0.8, "r2": pytest.approx(0.7), "re2": pytest.approx(0.3)}
    assert cons.maximize({"r2": 1}, fixed={"r1": 1.2}) is None


def test_tiebreak_prefers_secrecy():
    cons = standard(1.0, 1.0, 1.0, 0.4)
    p = cons.maximize({"r1": 1, "r2": 1}, tiebreak=("re2",))
    assert p["r1"] + p["r2"] == pytest.approx(1.0)
    assert p["re2"] == pytest.approx(0.4)


def test_negative_bound_is_infeasible():
    cons = standard(1.0, 1.0, 1.0, -0.2)
    assert not cons.feasible
    assert cons.maximize({"re2": 1}) is None


def test_negative_weights_rejected():
    with pytest.raises(ArgumentError):
        standard(1, 1, 1, 1).maximize({"r1": -1})


def test_unknown_axis_and_duplicates():
    with pytest.raises(ArgumentError):
        RegionConstraints.build([("x", {"r3": 1}, 1.0)])
    with pytest.raises(ArgumentError):
        RegionConstraints.build([("x", {"r1": 1}, 1.0), ("x", {"r2": 1}, 1.0)])
    with pytest.raises(ArgumentError):
        RegionConstraints.build([("x", {"r1": 1}, float("inf"))])


def test_slack_and_round_trip():
    cons = standard(1.0, 0.5, 1.2, 0.25)
    sl = cons.slack({"r1": 0.5, "r2": 0.5, "re2": 0.25})
    assert sl == {"r1": 0.5, "r2": 0.0, "sum": pytest.approx(0.2), "re2": 0.0}
    back = RegionConstraints.from_dict(cons.to_dict())
    assert back.as_dict() == cons.as_dict() and back.axes == cons.axes
