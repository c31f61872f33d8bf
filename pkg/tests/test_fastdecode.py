"""Quadratic-form structure detection and the two decoders."""

import itertools
import types

import numpy as np
import pytest

from midostc import algebra, codebook, fastdecode
from midostc.fastdecode import (
    BudgetExceededError,
    GroupStructure,
    StructureInvalidError,
    adjacency,
    conditional_group_decode,
    detect_groups,
    hurwitz_radon,
    ml_exhaustive,
    pam_levels,
    real_channel,
    stack_real,
)

# Frozen structures for the first catalog entry (0-based symbol indices).
B2_CONDITIONED = (4, 5, 6, 7, 8, 9, 10, 11)
B2_GROUPS = ((0, 3), (1, 2), (12, 15), (13, 14))
B1_GROUPS = ((0, 1, 2, 3), (12, 13, 14, 15))


def build(n, basis):
    return codebook.build_code(algebra.catalog_entry(n), basis)


def alamouti_generators():
    # X = [[s1 + i s2, -(s3 - i s4)], [s3 + i s4, s1 - i s2]]
    return np.array([
        [[1, 0], [0, 1]],
        [[1j, 0], [0, -1j]],
        [[0, -1], [1, 0]],
        [[0, 1j], [1j, 0]],
    ], dtype=complex)


def test_pam_levels():
    assert pam_levels(2) == (-1.0, 1.0)
    assert pam_levels(4) == (-3.0, -1.0, 1.0, 3.0)
    with pytest.raises(ValueError):
        pam_levels(3)
    with pytest.raises(ValueError):
        pam_levels(0)


def test_alamouti_form_is_fully_orthogonal():
    code = types.SimpleNamespace(generators=alamouti_generators())
    b = hurwitz_radon(code)
    off = b - np.diag(np.diag(b))
    assert np.abs(off).max() < 1e-12
    gs = detect_groups(b)
    assert gs.conditioned == ()
    assert gs.groups == ((0,), (1,), (2,), (3,))
    assert gs.exponent == 1


def test_quadratic_form_matrix_properties():
    b = hurwitz_radon(build(1, "B2"))
    assert b.shape == (16, 16)
    assert np.allclose(b, b.T)
    assert (np.diag(b) > 0).all()
    adj = adjacency(b)
    assert not adj.diagonal().any()
    assert (adj == adj.T).all()
    assert int(adj.sum()) == 2 * 72      # 72 coupled pairs out of 120


def test_detected_structure_first_entry_b2():
    gs = detect_groups(hurwitz_radon(build(1, "B2")))
    assert gs.conditioned == B2_CONDITIONED
    assert gs.groups == B2_GROUPS
    assert gs.exponent == 10
    assert not gs.trivial


def test_detected_structure_first_entry_b1():
    gs = detect_groups(hurwitz_radon(build(1, "B1")))
    assert gs.conditioned == B2_CONDITIONED
    assert gs.groups == B1_GROUPS
    assert gs.exponent == 12


def test_detection_is_permutation_stable():
    code = build(1, "B2")
    b = hurwitz_radon(code)
    ref = detect_groups(b)
    rng = np.random.default_rng(21)
    for _ in range(3):
        perm = rng.permutation(16)
        bp = b[np.ix_(perm, perm)]
        gs = detect_groups(bp)
        assert gs.exponent == ref.exponent
        assert sorted(len(g) for g in gs.groups) == sorted(len(g) for g in ref.groups)
        assert len(gs.conditioned) == len(ref.conditioned)
        # the detected sets map back to the reference sets through the permutation
        assert sorted(perm[list(gs.conditioned)]) == list(ref.conditioned)


def test_detection_with_target_size():
    b = hurwitz_radon(build(1, "B2"))
    gs = detect_groups(b, 8)
    assert gs.conditioned == B2_CONDITIONED and gs.exponent == 10
    # without conditioning the coupling graph is connected: nothing splits
    assert detect_groups(b, 0).trivial


def test_fully_coupled_falls_back_to_trivial():
    rng = np.random.default_rng(0)
    gens = rng.standard_normal((16, 4, 4)) + 1j * rng.standard_normal((16, 4, 4))
    gs = detect_groups(hurwitz_radon(types.SimpleNamespace(generators=gens)))
    assert gs.trivial
    assert gs.exponent == 16
    assert gs.groups == (tuple(range(16)),)


def test_detect_groups_size_guard():
    with pytest.raises(ValueError):
        detect_groups(np.ones((21, 21)))


def test_real_channel_consistency():
    rng = np.random.default_rng(22)
    code = build(1, "B2")
    for _ in range(10):
        H = (rng.standard_normal((2, 4)) + 1j * rng.standard_normal((2, 4))) / np.sqrt(2)
        ch = real_channel(code, H)
        assert ch.G.shape == (16, 16)
        s = rng.integers(0, 2, 16) * 2.0 - 1.0
        X = np.einsum("i,ijk->jk", s, code.generators)
        assert np.allclose(ch.G @ s, stack_real(H @ X), atol=1e-12)


def test_ml_budget_guard():
    code = build(1, "B2")
    rng = np.random.default_rng(23)
    H = rng.standard_normal((2, 4)) + 1j * rng.standard_normal((2, 4))
    ch = real_channel(code, H)
    with pytest.raises(BudgetExceededError):
        ml_exhaustive(np.zeros(16), ch, pam_levels(4))   # 4^16 > 2^20


def test_ml_noiseless_recovery_and_visits():
    rng = np.random.default_rng(24)
    code = build(1, "B2")
    pam = pam_levels(2)
    for _ in range(5):
        H = (rng.standard_normal((2, 4)) + 1j * rng.standard_normal((2, 4))) / np.sqrt(2)
        ch = real_channel(code, H)
        s0 = rng.integers(0, 2, 16) * 2.0 - 1.0
        res = ml_exhaustive(ch.G @ s0, ch, pam)
        assert np.array_equal(res.symbols, s0)
        assert res.metric <= 1e-18
        assert res.visits == 65536


def test_ml_tie_break_is_lexicographic():
    rng = np.random.default_rng(25)
    code = build(1, "B2")
    H = (rng.standard_normal((2, 4)) + 1j * rng.standard_normal((2, 4))) / np.sqrt(2)
    ch = real_channel(code, H)
    # y = 0 makes s and -s metric-equal; the first of the pair in
    # lexicographic order starts at -1
    res = ml_exhaustive(np.zeros(16), ch, pam_levels(2))
    assert res.symbols[0] == -1.0
    res2 = ml_exhaustive(np.zeros(16), ch, pam_levels(2))
    assert np.array_equal(res.symbols, res2.symbols)


def test_conditional_matches_oracle():
    rng = np.random.default_rng(26)
    code = build(1, "B2")
    gs = detect_groups(hurwitz_radon(code))
    pam = pam_levels(2)
    sigma = 0.8
    for _ in range(30):
        H = (rng.standard_normal((2, 4)) + 1j * rng.standard_normal((2, 4))) / np.sqrt(2)
        ch = real_channel(code, H)
        s0 = rng.integers(0, 2, 16) * 2.0 - 1.0
        y = ch.G @ s0 + sigma * rng.standard_normal(16)
        r_ml = ml_exhaustive(y, ch, pam)
        r_cg = conditional_group_decode(y, ch, gs, pam)
        assert abs(r_ml.metric - r_cg.metric) <= 1e-9
        assert np.array_equal(r_ml.symbols, r_cg.symbols)
        assert r_cg.visits == 4096
        assert r_ml.visits == 65536


def test_visits_arithmetic():
    code = build(1, "B1")
    gs = detect_groups(hurwitz_radon(code))
    rng = np.random.default_rng(27)
    H = (rng.standard_normal((2, 4)) + 1j * rng.standard_normal((2, 4))) / np.sqrt(2)
    ch = real_channel(code, H)
    res = conditional_group_decode(np.zeros(16), ch, gs, pam_levels(2))
    # 2^8 conditioned assignments times two groups of four: 256 * 32
    assert res.visits == 2 ** len(gs.conditioned) * sum(2 ** len(g) for g in gs.groups)
    assert res.visits == 8192


def test_wrong_structure_fails_loudly():
    code = build(1, "B2")
    rng = np.random.default_rng(28)
    H = (rng.standard_normal((2, 4)) + 1j * rng.standard_normal((2, 4))) / np.sqrt(2)
    ch = real_channel(code, H)
    bogus = GroupStructure((), tuple((i,) for i in range(16)), 1)
    with pytest.raises(StructureInvalidError):
        conditional_group_decode(np.zeros(16), ch, bogus, pam_levels(2))


def test_trivial_structure_reduces_to_ml():
    rng = np.random.default_rng(29)
    code = build(1, "B2")
    H = (rng.standard_normal((2, 4)) + 1j * rng.standard_normal((2, 4))) / np.sqrt(2)
    ch = real_channel(code, H)
    y = ch.G @ (rng.integers(0, 2, 16) * 2.0 - 1.0) + 0.5 * rng.standard_normal(16)
    triv = GroupStructure((), (tuple(range(16)),), 16)
    r_triv = conditional_group_decode(y, ch, triv, pam_levels(2))
    r_ml = ml_exhaustive(y, ch, pam_levels(2))
    assert np.array_equal(r_triv.symbols, r_ml.symbols)
    assert r_triv.visits == r_ml.visits == 65536
