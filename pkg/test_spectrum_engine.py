# coding:utf-8
"""
谱计算引擎测试
"""
from fractions import Fraction

import numpy as np
import pytest

from arrangement import (ArrangementError, DimensionMismatchError, NotEssentialError, RankTooHighError,
                         essential_rank, pad_arrangement, validate_arrangement)
from config_manager import ConfigManager
from intersection_lattice import POLICIES, build_lattice, lattice_summary
from spectrum_engine import (BRANCHES, EdgeWeights, InconsistentWeightsError, Spectrum, assemble_weights,
                             eta0, euler_sum_check, gbinom, generic_spectrum, spectrum, spectrum_rank2,
                             spectrum_rank3, spectrum_rank4, split_2_2_spectrum, split_3_1_spectrum,
                             theorem_spectrum)
from verification_harness import fixture_arrangement, fixture_spectrum


def _sp(mapping, ambient, d=1):
    return Spectrum.from_mapping({Fraction(a): m for a, m in mapping.items()}, ambient, d)


# ── gbinom ──

@pytest.mark.parametrize("t, k, expected", [
    (5, 2, 10), (2, 3, 0), (-1, 2, 1), (-2, 3, -4), (0, 0, 1), (-1, 0, 1), (3, 3, 1),
])
def test_gbinom(t, k, expected):
    assert gbinom(t, k) == expected


def test_gbinom_negative_k():
    with pytest.raises(ValueError):
        gbinom(3, -1)


# ── 测试排列 ──

def test_fixture_spectra(fixture_case):
    name, arr, expected = fixture_case
    assert spectrum(arr) == expected, name


def test_a3_text():
    assert spectrum(fixture_arrangement("A3")).terms_text() == "3t - 6t^2 + 4t^3"


def test_a5_text():
    assert spectrum(fixture_arrangement("A5")).terms_text() == "t^3/4 + 3t + t^3/2 - 3t^2 + t^9/4"


def test_three_concurrent_lines_and_a_line(a2_rank3):
    assert spectrum_rank3(a2_rank3) == _sp({1: 2, 2: -3}, 3)


def test_three_coordinate_planes():
    arr = validate_arrangement([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert spectrum_rank3(arr) == _sp({1: 1, 2: -2}, 3)


def test_rank2_two_lines():
    arr = validate_arrangement([[1, 0], [0, 1]])
    assert spectrum_rank2(arr) == _sp({1: 1}, 2)


def test_rank2_three_lines():
    arr = validate_arrangement([[1, 0], [0, 1], [1, 1]])
    assert spectrum_rank2(arr) == _sp({Fraction(2, 3): 1, 1: 2, Fraction(4, 3): 1}, 2, 3)


def test_two_lines_padded_to_four():
    arr = validate_arrangement([[1, 0, 0, 0], [0, 1, 0, 0]])
    assert spectrum(arr) == _sp({3: 1}, 4)


def test_rank1_is_empty():
    sp = spectrum(validate_arrangement([[1, 0, 0, 0]]))
    assert len(sp) == 0
    assert sp.ambient == 4


def test_generic_matches_coordinate_arrangement():
    assert generic_spectrum(4) == fixture_spectrum("A1")


def test_generic_formula_on_generic_arrangement():
    arr = validate_arrangement([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, 1, 1, 1]])
    assert spectrum(arr) == generic_spectrum(5)


def test_split_3_1_matches_theorem():
    a3 = fixture_arrangement("A3")
    assert spectrum(a3) == split_3_1_spectrum(5, [])
    arr = validate_arrangement([[1, 0, 0, 0], [0, 1, 0, 0], [1, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    assert spectrum(arr) == split_3_1_spectrum(5, [3])
    assert split_3_1_spectrum(5, [3]) == _sp({1: 2, 2: -5, 3: 4}, 4)


def test_split_2_2_matches_theorem():
    assert spectrum(fixture_arrangement("A4")) == split_2_2_spectrum(3, 4)


def test_split_2_2_requires_coprime():
    with pytest.raises(ValueError):
        split_2_2_spectrum(2, 4)


# ── 边策略与线程 ──

@pytest.mark.parametrize("name", ["A1", "A2", "A3", "A4"])
def test_policy_invariance(name):
    arr = fixture_arrangement(name)
    results = {theorem_spectrum(arr, policy) for policy in POLICIES}
    assert len(results) == 1


def test_threaded_grid_matches_sequential():
    arr = fixture_arrangement("A4")
    sequential = spectrum(arr)
    ConfigManager.update_config("spectrum.enable_threading", True)
    assert spectrum(arr) == sequential


# ── 分派与错误 ──

def test_rank4_requires_essential():
    with pytest.raises(NotEssentialError):
        spectrum_rank4(fixture_arrangement("A2"))


def test_rank_five_is_rejected():
    arr = validate_arrangement([[1 if i == j else 0 for j in range(5)] for i in range(5)])
    with pytest.raises(RankTooHighError):
        spectrum(arr)


def test_rank3_requires_ambient_three():
    with pytest.raises(NotEssentialError):
        spectrum_rank3(fixture_arrangement("A2"))


def test_rank2_requires_ambient_two(a2_rank3):
    with pytest.raises(DimensionMismatchError):
        spectrum_rank2(a2_rank3)


def test_theorem_requires_ambient_four(a2_rank3):
    with pytest.raises(DimensionMismatchError):
        theorem_spectrum(a2_rank3)


# ── 边权 ──

def test_weights_sum_to_multiplicity_minus_one():
    summary = lattice_summary(fixture_arrangement("A4"), "nnc")
    d = summary.d
    for i in range(1, d):
        for branch in BRANCHES:
            weights = assemble_weights(summary, i, branch)
            for edge in summary.edges:
                assert weights.u[edge] + weights.v[edge] == edge.multiplicity - 1


def test_weights_reject_out_of_range_index():
    summary = lattice_summary(fixture_arrangement("A3"), "dense")
    with pytest.raises(InconsistentWeightsError):
        assemble_weights(summary, 0, "ceil")


def test_weights_reject_unknown_branch():
    summary = lattice_summary(fixture_arrangement("A3"), "dense")
    with pytest.raises(ValueError):
        assemble_weights(summary, 1, "middle")


def test_eta_requires_all_weights():
    summary = lattice_summary(fixture_arrangement("A3"), "dense")
    with pytest.raises(InconsistentWeightsError):
        eta0(2, summary.d, summary, EdgeWeights({}))


# ── Spectrum ──

def test_shift_multiplies_by_minus_t():
    a5 = fixture_spectrum("A5")
    shifted = a5.shift(1)
    assert shifted.ambient == 4
    assert shifted.multiplicity(Fraction(7, 4)) == -1
    assert shifted.multiplicity(2) == -3
    assert shifted.shift(-1) == a5


def test_spectrum_rejects_zero_multiplicity():
    with pytest.raises(ValueError):
        Spectrum(4, ((Fraction(1), 0),))


def test_spectrum_rejects_alpha_out_of_range():
    with pytest.raises(ValueError):
        Spectrum(3, ((Fraction(3), 1),))


def test_spectrum_items_ascending():
    alphas = [a for a, _ in fixture_spectrum("A5").items()]
    assert alphas == sorted(alphas)


# ── 欧拉和 ──

def test_euler_sum_on_fixtures(fixture_case):
    _, arr, expected = fixture_case
    assert euler_sum_check(arr, spectrum(arr))


@pytest.mark.parametrize("name, total", [("A1", 1), ("A5", 3)])
def test_euler_sum_anchors(name, total):
    assert spectrum(fixture_arrangement(name)).euler_sum() == total


def test_euler_sum_anchor_rank3(a2_rank3):
    sp = spectrum(a2_rank3)
    assert sp.euler_sum() == -1
    assert euler_sum_check(a2_rank3, sp)


def test_euler_sum_detects_wrong_spectrum():
    assert not euler_sum_check(fixture_arrangement("A1"), fixture_spectrum("A5"))


# ── 性质测试 ──

def test_gbinom_pascal():
    for t in range(-50, 51):
        for k in range(1, 7):
            assert gbinom(t, k) == gbinom(t - 1, k) + gbinom(t - 1, k - 1)


def test_branch_families():
    assert BRANCHES == ("ceil", "floor")
    summary = lattice_summary(fixture_arrangement("A4"), "nnc")
    d = summary.d
    for i in range(1, d):
        up = assemble_weights(summary, i, "ceil")
        down = assemble_weights(summary, d - i, "floor")
        for edge in summary.edges:
            assert (up.u[edge], up.v[edge]) == (down.v[edge], down.u[edge])


def _random_essential(rng, n, count, min_d, max_d):
    found = []
    while len(found) < count:
        d = int(rng.integers(min_d, max_d + 1))
        rows = rng.integers(-2, 3, size=(d, n))
        rows[rng.random((d, n)) < 0.4] = 0
        try:
            arr = validate_arrangement([[int(x) for x in row] for row in rows], n)
        except ArrangementError:
            continue
        if essential_rank(arr) == n:
            found.append(arr)
    return found


def _pencil(s):
    return [[1, 0]] + [[j, 1] for j in range(s - 1)]


def test_split_3_1_family():
    rng = np.random.default_rng(43)
    for f1 in _random_essential(rng, 3, 8, 3, 6):
        lines = [f.multiplicity for f in build_lattice(f1).get(2, [])]
        rows = [list(f.coeffs) + [0] for f in f1.forms] + [[0, 0, 0, 1]]
        arr = validate_arrangement(rows)
        sp = spectrum(arr)
        assert sp == split_3_1_spectrum(arr.d, lines)
        assert all(isinstance(m, int) for _, m in sp.items())


@pytest.mark.parametrize("s1, s2", [(3, 4), (3, 5), (4, 5), (5, 3)])
def test_split_2_2_family(s1, s2):
    rows = [row + [0, 0] for row in _pencil(s1)] + [[0, 0] + row for row in _pencil(s2)]
    sp = spectrum(validate_arrangement(rows))
    assert sp == split_2_2_spectrum(s1, s2)
    assert all(isinstance(m, int) for _, m in sp.items())


def test_rank3_formula_agrees_with_padded_theorem():
    rng = np.random.default_rng(47)
    for arr in _random_essential(rng, 3, 10, 3, 7):
        assert theorem_spectrum(pad_arrangement(arr, 4)) == spectrum_rank3(arr).shift(1)


def test_rank2_formula_agrees_with_padded_theorem():
    for d in range(2, 7):
        arr = validate_arrangement(_pencil(d))
        assert theorem_spectrum(pad_arrangement(arr, 4)) == spectrum_rank2(arr).shift(2)
