"""Color Lie algebras: structure constants, axioms, perfectness, decomposition."""

import numpy as np
import pytest

from helpers import random_space

from colorrep.errors import AxiomError, PerfectnessError
from colorrep.colorlie import (
    ColorLieAlgebra,
    bracket,
    check_axioms,
    check_perfectness,
    decompose_odd,
    glV,
    odd_pair_columns,
)
from colorrep.grading import Degree, beta
from colorrep.spaces import GradedSpace


def _d(bits):
    return Degree(tuple(int(c) for c in bits))


def _gl11():
    return glV(GradedSpace(1, {_d("0"): 1, _d("1"): 1}))


def _four_lines():
    # one line in every rank-2 sector
    return GradedSpace(2, {d: 1 for d in (_d("00"), _d("01"), _d("10"), _d("11"))})


def _abelian(rank, degrees):
    d = len(degrees)
    labels = [f"z{i}" for i in range(d)]
    return ColorLieAlgebra(rank, labels, degrees, np.zeros((d, d, d)))


# frozen by hand for gl of a (1|1) space, basis order
# [E0_0, E1_1, E0_1, E1_0] = indices [0, 1, 2, 3]:
#   [E0_0, E0_1] = E0_1      [E0_0, E1_0] = -E1_0
#   [E1_1, E0_1] = -E0_1     [E1_1, E1_0] = E1_0
#   [E0_1, E1_0] = E0_0 + E1_1   (odd-odd, anticommutator)
#   [E0_1, E0_1] = 0
GL11_TABLE = {
    (0, 2): {2: 1.0},
    (0, 3): {3: -1.0},
    (1, 2): {2: -1.0},
    (1, 3): {3: 1.0},
    (2, 3): {0: 1.0, 1: 1.0},
    (3, 2): {0: 1.0, 1: 1.0},
    (2, 2): {},
    (3, 3): {},
    (0, 0): {},
    (0, 1): {},
}


def test_gl11_basis_order():
    l = _gl11()
    assert l.labels == ["E0_0", "E1_1", "E0_1", "E1_0"]
    assert [str(d) for d in l.degrees] == ["0", "0", "1", "1"]


def test_gl11_frozen_table():
    l = _gl11()
    for (i, j), expect in GL11_TABLE.items():
        got = l.structure[i, j]
        want = np.zeros(4)
        for k, c in expect.items():
            want[k] = c
        assert np.array_equal(got, want), (i, j, got)


def test_glv_matches_matrix_commutator_oracle():
    rng = np.random.default_rng(21)
    for _ in range(6):
        v = random_space(rng, int(rng.integers(1, 3)), max_dim=2, min_sectors=2)
        l = glV(v)
        t = v.total_dim
        units = [(p, q) for p in range(t) for q in range(t)]
        # the sorted basis permutes the units; recover the unit per label
        label_to_unit = {}
        width = len(str(t - 1))
        for p, q in units:
            label_to_unit[f"E{p:0{width}d}_{q:0{width}d}"] = (p, q)
        mats = []
        for lab in l.labels:
            p, q = label_to_unit[lab]
            m = np.zeros((t, t))
            m[p, q] = 1.0
            mats.append(m)
        for i in range(l.dim):
            for j in range(l.dim):
                sign = beta(l.degrees[i], l.degrees[j])
                comm = mats[i] @ mats[j] - sign * mats[j] @ mats[i]
                built = sum(l.structure[i, j, k] * mats[k] for k in range(l.dim))
                assert np.allclose(comm, built)


def test_bracket_bilinear():
    l = _gl11()
    rng = np.random.default_rng(22)
    x, y = rng.standard_normal(4), rng.standard_normal(4)
    direct = bracket(l, x, y)
    expanded = sum(x[i] * y[j] * l.structure[i, j] for i in range(4) for j in range(4))
    assert np.allclose(direct, expanded)


def test_constructor_sorts_basis():
    l = _gl11()
    perm = [3, 0, 2, 1]
    shuffled = ColorLieAlgebra(
        1,
        [l.labels[i] for i in perm],
        [l.degrees[i] for i in perm],
        l.structure[np.ix_(perm, perm, perm)],
    )
    assert shuffled.labels == l.labels
    assert np.allclose(shuffled.structure, l.structure)


def test_check_axioms_glv():
    for space in (GradedSpace(1, {_d("0"): 2}), _four_lines(),
                  GradedSpace(2, {_d("00"): 1, _d("01"): 2})):
        rep = check_axioms(glV(space))
        assert rep.passed
        assert rep.max_residual() == 0.0  # integer structure constants


def test_check_axioms_flags_mutations():
    l = _gl11()
    bad = l.structure.copy()
    bad[2, 3, 0] = -1.0  # breaks antisymmetry against [3, 2]
    mutated = ColorLieAlgebra(1, l.labels, l.degrees, bad)
    rep = check_axioms(mutated)
    assert not rep.passed
    failed = {c.name for c in rep.checks if not c.passed}
    assert "antisymmetry" in failed or "jacobi" in failed

    bad2 = l.structure.copy()
    bad2[0, 1, 2] = 0.5  # even bracket landing in an odd sector
    mutated2 = ColorLieAlgebra(1, l.labels, l.degrees, bad2)
    rep2 = check_axioms(mutated2)
    assert not any(c.passed for c in rep2.checks if c.name == "grading")


def test_validate_on_construction():
    l = _gl11()
    bad = l.structure.copy()
    bad[2, 3, 0] = 7.0
    with pytest.raises(AxiomError):
        ColorLieAlgebra(1, l.labels, l.degrees, bad, validate=True)
    ColorLieAlgebra(1, l.labels, l.degrees, l.structure, validate=True)


def test_abelian_any_degrees_is_valid():
    l = _abelian(2, [_d("01"), _d("01"), _d("11")])
    assert check_axioms(l).passed


def test_counterexample_fails_perfectness():
    l = _abelian(2, [_d("11")])
    rep = check_perfectness(l)
    assert not rep.passed
    assert rep.context["sectors"]["11"] == {"dim": 1, "rank": 0}


def test_perfectness_vacuous_without_even_sectors():
    l = _abelian(1, [_d("1"), _d("1")])
    rep = check_perfectness(l)
    assert rep.passed


def test_glv_four_lines_perfect_with_matrix_oracle():
    v = _four_lines()
    l = glV(v)
    rep = check_perfectness(l)
    # independent oracle: span of brackets of odd endomorphism matrices
    t = v.total_dim
    mats = {}
    units = [(p, q) for p in range(t) for q in range(t)]
    for p, q in units:
        m = np.zeros((t, t))
        m[p, q] = 1.0
        mats[(p, q)] = m
    for a in l.even_nonzero_degrees():
        odd_mats = []
        for i, deg in enumerate(l.degrees):
            if deg in l.odd_degrees():
                pass
        # collect matrices by degree directly from the space
        by_deg = {}
        for p, q in units:
            d = v.basis_degrees[p] * v.basis_degrees[q]
            by_deg.setdefault(d, []).append(mats[(p, q)])
        spans = []
        for b in l.odd_degrees():
            c = a * b
            for mb in by_deg.get(b, []):
                for mc in by_deg.get(c, []):
                    sign = beta(b, c)
                    spans.append((mb @ mc - sign * mc @ mb).ravel())
        rank_oracle = np.linalg.matrix_rank(np.array(spans)) if spans else 0
        dim_a = len(by_deg.get(a, []))
        verdict = rep.context["sectors"][str(a)]
        assert verdict["dim"] == dim_a
        assert verdict["rank"] == rank_oracle
    assert rep.passed


def test_subset_of_columns_never_increases_rank():
    l = glV(_four_lines())
    for a in l.even_nonzero_degrees():
        _, columns = odd_pair_columns(l, a)
        full = np.linalg.matrix_rank(columns)
        half = np.linalg.matrix_rank(columns[:, : columns.shape[1] // 2])
        assert half <= full


def test_decompose_odd_roundtrip():
    l = glV(_four_lines())
    a = _d("11")
    for idx in l.sector(a):
        x = np.zeros(l.dim)
        x[idx] = 1.0
        dec = decompose_odd(l, x)
        assert dec.degree == a
        assert np.linalg.norm(dec.evaluate(l) - x) < 1e-9
        # a reweighted solve gives another valid decomposition
        dec2 = decompose_odd(l, x, weight_seed=5)
        assert np.linalg.norm(dec2.evaluate(l) - x) < 1e-9


def test_decompose_odd_rejects_bad_input():
    l = glV(_four_lines())
    with pytest.raises(ValueError):
        decompose_odd(l, np.ones(l.dim))  # not homogeneous
    odd_idx = l.sector(_d("01"))[0]
    x = np.zeros(l.dim)
    x[odd_idx] = 1.0
    with pytest.raises(ValueError):
        decompose_odd(l, x)  # odd sector
    dec = decompose_odd(l, np.zeros(l.dim))
    assert dec.terms == [] and dec.degree is None


def test_decompose_odd_unsaturated_sector_raises():
    l = _abelian(2, [_d("11")])
    x = np.array([1.0])
    with pytest.raises(PerfectnessError) as err:
        decompose_odd(l, x)
    assert err.value.sector == _d("11")


def test_ad_matrix_columns():
    l = _gl11()
    a = l.ad_matrix(2)  # ad of E0_1
    assert np.allclose(a[:, 3], [1.0, 1.0, 0, 0])
    assert np.allclose(a[:, 2], 0)
