import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cicsec.dmc import DmcChannel, binning_input
from cicsec.errors import ArgumentError, CapacityError, SchemeError
from cicsec.sim import (
    SimConfig,
    SimRates,
    TrialResult,
    _Design,
    _draw_conditional,
    _partition_sizes,
    build_codebooks,
    clean_toy,
    compute_bin_rates,
    decode,
    encode,
    family_size,
    run_experiment,
    typical,
)
from cicsec.dmc import FactoredInput, Scheme, inputs_only


def state_channel():
    sizes = {"X1": 2, "X2": 2, "S1": 2, "S2": 1, "Y1": 2, "Y2": 2}
    return DmcChannel.from_functions(sizes, lambda x1, x2, s1, s2: x1,
                                     lambda x1, x2, s1, s2: x2 ^ s1,
                                     s1_prior=[0.5, 0.5])


def test_family_size():
    assert family_size(4, 0.0) == 1
    assert family_size(4, 0.5) == 4
    assert family_size(3, 1 / 3) == 2
    assert family_size(5, 0.3) == 3


class TestBinRates:
    def test_independent_u_needs_only_delta(self):
        ch = state_channel()
        r = compute_bin_rates(ch, binning_input(ch, p_x1=[0.5, 0.5], u_size=2), 0.05)
        assert r.r2b_bin == pytest.approx(0.05, abs=1e-12)

    def test_u_equal_to_state(self):
        ch = state_channel()
        p_u = np.zeros((2, 2, 2))
        p_u[:, 0, 0] = p_u[:, 1, 1] = 1
        r = compute_bin_rates(ch, binning_input(ch, p_x1=[0.5, 0.5], p_u_given_x1_s1=p_u), 0.05)
        assert r.r2b_bin == pytest.approx(1.05, abs=1e-12)

    def test_clean_toy_secrecy_rates(self):
        ch, des = clean_toy()
        r = compute_bin_rates(ch, des, 0.1)
        assert (r.l1, r.l2) == (pytest.approx(1.0), pytest.approx(0.0, abs=1e-12))
        ch, des = clean_toy("x2")
        r = compute_bin_rates(ch, des, 0.1)
        assert r.l1 == 0.0 and r.l2 == pytest.approx(1.0)

    def test_validation(self):
        ch, des = clean_toy()
        with pytest.raises(ArgumentError):
            compute_bin_rates(ch, des, 0.0)
        with pytest.raises(ArgumentError):
            SimRates(-0.1, 0, 0, 0, 0, 0, 0, 0)
        with pytest.raises(SchemeError):
            SimConfig(ch, inputs_only(np.full((2, 2), 0.25)))


class TestTypicality:
    def test_zero_probability_symbol_is_atypical(self):
        pmf = np.array([0.5, 0.5, 0.0])
        assert not typical(pmf, (np.array([0, 1, 2, 0]),), 0.9)
        assert typical(pmf, (np.array([0, 1, 1, 0]),), 0.01)

    def test_joint_tolerance(self):
        pmf = np.array([[0.25, 0.25], [0.25, 0.25]])
        a, b = np.array([0, 0, 1, 1]), np.array([0, 1, 0, 1])
        assert typical(pmf, (a, b), 0.01)
        assert not typical(pmf, (a, a), 0.5)

    def test_empirical_type_of_draws(self):
        rng = np.random.default_rng(0)
        cond = np.array([[0.7, 0.2, 0.1], [0.1, 0.3, 0.6]])
        parent = np.array([0, 1] * (2 ** 11))
        draws = _draw_conditional(rng, cond, parent, 1)[0]
        for u in range(2):
            kids = draws[parent == u]
            freq = np.bincount(kids, minlength=3) / kids.size
            sigma = np.sqrt(cond[u] * (1 - cond[u]) / kids.size)
            assert np.all(np.abs(freq - cond[u]) <= 3 * sigma)


@given(st.integers(1, 40), st.integers(1, 40))
def test_subbins_are_balanced(nb, nc):
    if nc > nb:
        return
    subbin = np.arange(nb) % nc
    counts = np.bincount(subbin, minlength=nc)
    assert counts.min() >= 1 and counts.max() <= 2 * counts.min()


def test_too_many_subbins():
    rates = SimRates(0, 0, 1.0, 0, 0, 0, l1=0.5, l2=0)
    with pytest.raises(ArgumentError):
        _partition_sizes(4, rates, subbin_rate=0.75)


def test_partition_below_l1_is_not_implemented():
    ch, des = clean_toy()
    cfg = SimConfig(ch, des, n=2, trials=1)
    with pytest.raises(NotImplementedError):
        run_experiment(cfg, SimRates(0, 0, 0.5, 0, 0, 0, l1=1.0, l2=0))


def test_codebook_cap():
    ch, des = clean_toy()
    cfg = SimConfig(ch, des, n=12, trials=1, max_codebook_cells=1000)
    with pytest.raises(CapacityError):
        build_codebooks(cfg, SimRates(0, 1.0, 1.0, 0, 0, 0, 1.0, 0))


def test_codebook_deterministic_per_seed():
    ch, des = clean_toy()
    rates = SimRates(0, 0.5, 0.5, 0, 0.25, 0, 0, 0)
    a = build_codebooks(SimConfig(ch, des, n=4, seed=3), rates)
    b = build_codebooks(SimConfig(ch, des, n=4, seed=3), rates)
    c = build_codebooks(SimConfig(ch, des, n=4, seed=4), rates)
    assert a.identical(b) and not a.identical(c)


def test_run_is_reproducible_and_worker_independent():
    ch, des = clean_toy()
    rates = SimRates(0, 0.5, 0.5, 0, 0, 0, 0, 0)
    one = run_experiment(SimConfig(ch, des, n=4, epsilon=0.5, trials=12, seed=1), rates,
                         keep_trace=True)
    two = run_experiment(SimConfig(ch, des, n=4, epsilon=0.5, trials=12, seed=1, workers=2),
                         rates, keep_trace=True)
    assert one.to_dict(True) == two.to_dict(True)
    assert TrialResult.from_dict(one.to_dict(True)).to_dict(True) == one.to_dict(True)
    assert one.trace_csv().splitlines()[0].startswith("trial,w1,w2")


def test_single_letter_trivial_alphabets():
    sizes = {"X1": 1, "X2": 1, "S1": 1, "S2": 1, "Y1": 1, "Y2": 1}
    ch = DmcChannel.from_functions(sizes, lambda *a: 0, lambda *a: 0)
    des = binning_input(ch, p_x1=[1.0])
    res = run_experiment(SimConfig(ch, des, n=1, trials=5), SimRates(0, 0, 0, 0, 0, 0, 0, 0))
    assert res.pe == 0.0 and res.equivocation == 0.0 and res.r1 == res.r2 == 0.0


def test_encode_decode_round_trip_noiseless():
    ch, des = clean_toy()
    cfg = SimConfig(ch, des, n=4, epsilon=0.9)
    cb = build_codebooks(cfg, SimRates(0, 0.25, 0.25, 0, 0, 0, 0, 0))
    d = _Design(ch, des)
    s = np.zeros(4, dtype=int)
    for w1 in range(cb.n_w1):
        for w2 in range(cb.n_w2):
            enc = encode(cb, d, cfg.epsilon, w1, w2, 0, s)
            w1h, w2h = decode(cb, d, cfg.epsilon, enc.x1, enc.x2, s)
            distinct1 = len({tuple(r) for r in cb.x1b[0]}) == cb.n_w1
            if distinct1 and not enc.stage2_failed:
                assert w1h == w1


def test_secret_bits_have_full_equivocation():
    ch, des = clean_toy()
    cfg = SimConfig(ch, des, n=4, trials=0)
    res = run_experiment(cfg, SimRates(0, 0.5, 1.0, 0, 0, 0, l1=1.0, l2=0))
    assert res.equivocation_note == "exact"
    assert res.equivocation == pytest.approx(res.r2, abs=1e-12)


@pytest.mark.parametrize("seed", range(10))
def test_leaky_equivocation_tracks_codebook_collisions(seed):
    ch, des = clean_toy("x2")
    cfg = SimConfig(ch, des, n=1, trials=0, seed=seed)
    rates = SimRates(0, 0, 1.0, 0, 0, 0, 0, 0)
    cb = build_codebooks(cfg, rates)
    res = run_experiment(cfg, rates, codebook=cb)
    # receiver 1 sees x2 = v exactly; distinct codewords reveal w2, equal ones hide it
    injective = len({int(x) for x in cb.v[0, 0, :, 0, 0]}) == cb.n_w2
    assert res.equivocation == pytest.approx(0.0 if injective else 1.0, abs=1e-12)


def test_enumeration_cap_reports_note():
    ch, des = clean_toy()
    cfg = SimConfig(ch, des, n=4, trials=1, max_enumeration=1)
    res = run_experiment(cfg, SimRates(0, 0.5, 0.5, 0, 0, 0, 0, 0))
    assert res.equivocation is None and "not computed" in res.equivocation_note
