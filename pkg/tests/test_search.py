import numpy as np
import pytest

from cicsec.dmc import DmcChannel
from cicsec.errors import ArgumentError, CapacityError
from cicsec.search import (
    SearchConfig,
    evaluate_inner,
    optimize_region,
    random_channel,
    simplex_lattice,
)

SIZES = {"X1": 2, "X2": 2, "S1": 1, "S2": 1, "Y1": 2, "Y2": 2}


def clean():
    return DmcChannel.from_functions(SIZES, lambda x1, x2, s1, s2: x1,
                                     lambda x1, x2, s1, s2: x2)


def blind():
    return DmcChannel.from_functions(SIZES, lambda x1, x2, s1, s2: 0,
                                     lambda x1, x2, s1, s2: 0)


def test_lattice_sizes():
    assert len(simplex_lattice(2, 3)) == 3
    assert len(simplex_lattice(3, 4)) == 10
    np.testing.assert_allclose(simplex_lattice(3, 5).sum(axis=1), 1.0)


def test_clean_channel_reaches_one_bit():
    cfg = SearchConfig(resolution=3, aux_sizes={"U": 1, "V": 2})
    res = optimize_region(clean(), "binning", cfg)
    assert res.found and res.objective == pytest.approx(1.0, abs=1e-12)
    # the returned law reproduces the reported value
    assert evaluate_inner(clean(), res.best)["re2"] == pytest.approx(1.0, abs=1e-12)


def test_blind_channel_gives_zero():
    res = optimize_region(blind(), "binning",
                          SearchConfig(resolution=3, aux_sizes={"U": 1, "V": 2}))
    assert res.found and res.objective == pytest.approx(0.0, abs=1e-12)


def test_finer_grid_never_worse():
    # resolution 3 contains the resolution 2 lattice
    ch = random_channel(np.random.default_rng(11), {"S1": 1, "S2": 1})
    base = dict(aux_sizes={"U": 1, "V": 2})
    lo = optimize_region(ch, "binning", SearchConfig(resolution=2, **base))
    hi = optimize_region(ch, "binning", SearchConfig(resolution=3, **base))
    assert hi.objective >= lo.objective - 1e-12


def test_worker_count_does_not_change_result():
    ch = random_channel(np.random.default_rng(2), {"S1": 1, "S2": 1})
    cfg1 = SearchConfig(resolution=3, aux_sizes={"U": 1, "V": 2})
    cfg3 = SearchConfig(resolution=3, aux_sizes={"U": 1, "V": 2}, workers=3)
    a, b = optimize_region(ch, "binning", cfg1), optimize_region(ch, "binning", cfg3)
    assert (a.index, a.objective, a.point) == (b.index, b.objective, b.point)


def test_random_mode_is_seeded():
    ch = random_channel(np.random.default_rng(0))
    cfg = SearchConfig(mode="random", samples=30, seed=7, aux_sizes={"U": 2, "V": 2})
    a, b = optimize_region(ch, "binning", cfg), optimize_region(ch, "binning", cfg)
    assert (a.index, a.objective) == (b.index, b.objective)


def test_superposition_search_runs():
    cfg = SearchConfig(mode="random", samples=20, aux_sizes={"T": 1, "U": 1, "V": 2})
    res = optimize_region(clean(), "superposition", cfg)
    assert res.evaluated == 20 and res.objective >= 0


def test_candidate_cap():
    with pytest.raises(CapacityError):
        optimize_region(clean(), "binning", SearchConfig(resolution=3))


def test_bad_config():
    with pytest.raises(ArgumentError):
        SearchConfig(resolution=1)
    with pytest.raises(ArgumentError):
        SearchConfig(objective="bogus")
    with pytest.raises(ArgumentError):
        SearchConfig(aux_sizes={"U": 0})


def test_r2_at_r1_objective():
    cfg = SearchConfig(resolution=3, aux_sizes={"U": 1, "V": 2}, objective="r2_at_r1", r1=1.0)
    res = optimize_region(clean(), "binning", cfg)
    assert res.point["r1"] == 1.0 and res.objective == pytest.approx(1.0, abs=1e-12)
