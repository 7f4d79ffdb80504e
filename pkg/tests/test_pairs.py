"""Family arithmetic: Ore pairs, indices, transversals, solution cosets.

Derived values are frozen from independent brute-force oracles defined at
the top of this module; the oracles never call the code paths they check.
"""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hecke_lab.errors import ConfigError, LevelCapError
from hecke_lab.lattice import int_det, mat_inv, mat_vec
from hecke_lab.pairs import (
    BostConnesFamily,
    MatrixFamily,
    PadicFamily,
    SemidirectElement,
    family_from_config,
)


# --- oracles -----------------------------------------------------------------


def oracle_solve_coset_rationals(s, n, extra_den=1):
    """All r in [0,1) with s*r = n modulo 1, by scanning a fine grid."""
    den = s * n.denominator * extra_den
    out = []
    for k in range(den):
        r = Fraction(k, den)
        if (s * r - n) % 1 == 0:
            out.append(r)
    return out


def oracle_lattice_reps(mat, box=8):
    """Distinct classes of Z^2 modulo mat*Z^2 by scanning and pairwise
    deduplicating with the exact inverse (no normal forms involved)."""
    inv = mat_inv(mat)

    def same_class(u, v):
        w = mat_vec(inv, (u[0] - v[0], u[1] - v[1]))
        return all(x.denominator == 1 for x in w)

    reps = []
    for x in range(-box, box):
        for y in range(-box, box):
            v = (Fraction(x), Fraction(y))
            if not any(same_class(v, r) for r in reps):
                reps.append(v)
    return reps


# --- fixtures ----------------------------------------------------------------


@pytest.fixture(scope="module")
def bc():
    return BostConnesFamily()


@pytest.fixture(scope="module")
def p3():
    return PadicFamily(3)


@pytest.fixture(scope="module")
def mat():
    return MatrixFamily([[2, 0], [0, 3]], [[5, 0], [0, 1]])


# --- ore pairs ---------------------------------------------------------------


def test_ore_pair_examples(bc, p3, mat):
    assert bc.ore_pair(2, 3) == (3, 2)
    assert p3.ore_pair(1, 3) == (2, 0)
    assert mat.ore_pair((1, 0), (0, 1)) == ((0, 1), (1, 0))


@given(st.integers(1, 60), st.integers(1, 60))
@settings(max_examples=80, derandomize=True)
def test_ore_pair_equation_bost_connes(s, t):
    fam = BostConnesFamily()
    u, v = fam.ore_pair(s, t)
    assert u * s == v * t == math.lcm(s, t)


@given(st.tuples(st.integers(0, 5), st.integers(0, 5)), st.tuples(st.integers(0, 5), st.integers(0, 5)))
@settings(max_examples=60, derandomize=True)
def test_ore_pair_equation_matrix(s, t):
    fam = MatrixFamily([[2, 0], [0, 3]], [[5, 0], [0, 1]])
    u, v = fam.ore_pair(s, t)
    assert fam.s_mul(u, s) == fam.s_mul(v, t)


# --- index and representatives ------------------------------------------------


def test_index_examples(bc, p3, mat):
    assert bc.index(6) == 6
    assert PadicFamily(2).index(3) == 8
    assert mat.index((1, 1)) == 30  # (det F)^1 (det M)^1


def test_index_matches_enumeration(bc, p3, mat):
    for fam, levels in (
        (bc, [1, 2, 3, 4, 6, 12]),
        (p3, [0, 1, 2, 3]),
        (mat, [(0, 0), (1, 0), (0, 1), (1, 1), (2, 1)]),
    ):
        for s in levels:
            reps = fam.coset_reps(s)
            assert len(reps) == fam.index(s)
            assert len(set(reps)) == len(reps)


def test_index_multiplicative(bc, mat):
    for s in (2, 3, 4, 6):
        for t in (2, 3, 5):
            assert bc.index(s * t) == bc.index(s) * bc.index(t)
    for s in ((1, 0), (1, 1), (2, 0)):
        for t in ((0, 1), (1, 1)):
            assert mat.index(mat.s_mul(s, t)) == mat.index(s) * mat.index(t)


def test_coset_reps_examples(bc, p3):
    assert bc.coset_reps(4) == [Fraction(0), Fraction(1), Fraction(2), Fraction(3)]
    assert p3.coset_reps(1) == [Fraction(0), Fraction(1), Fraction(2)]


def test_matrix_reps_against_scan_oracle():
    fam = MatrixFamily([[2, 0], [0, 3]], [[5, 0], [0, 1]])
    for level, lattice in (((1, 0), fam.F), ((1, 1), [[10, 0], [0, 3]])):
        got = fam.coset_reps(level)
        expected = oracle_lattice_reps(lattice)
        assert len(got) == len(expected)
        inv = mat_inv(lattice)
        for g in got:
            matches = [
                e
                for e in expected
                if all(x.denominator == 1 for x in mat_vec(inv, (g[0] - e[0], g[1] - e[1])))
            ]
            assert len(matches) == 1


def test_diag21_block_reps():
    # A diag(2,1) block: the quotient has the two classes (0,0) and (1,0).
    fam = MatrixFamily([[2, 0], [0, 1]], [[5, 0], [0, 3]])
    got = set(fam.coset_reps((1, 0)))
    assert got == {(Fraction(0), Fraction(0)), (Fraction(1), Fraction(0))}


def test_nontrivial_hermite_reduction():
    # F = [[2,1],[1,3]] has det 5; the companion needs a coprime determinant.
    fam = MatrixFamily([[2, 1], [1, 3]], [[7, 0], [0, 7]])
    reps = fam.coset_reps((1, 0))
    assert len(reps) == abs(int_det(fam.F)) == 5
    oracle = oracle_lattice_reps(fam.F)
    assert len(oracle) == 5
    canon = {fam.canon(tuple(map(Fraction, e)), (1, 0)) for e in oracle}
    assert canon == set(reps)


# --- solve_coset ---------------------------------------------------------------


def test_solve_coset_against_oracle(bc):
    cases = [(2, Fraction(0)), (3, Fraction(1, 2)), (4, Fraction(2, 3)), (6, Fraction(5, 12))]
    for s, n in cases:
        got = sorted(bc.solve_coset(s, n))
        assert got == oracle_solve_coset_rationals(s, n)


def test_solve_coset_frozen_examples(bc):
    assert sorted(bc.solve_coset(2, Fraction(0))) == [Fraction(0), Fraction(1, 2)]
    assert sorted(bc.solve_coset(3, Fraction(1, 2))) == [
        Fraction(1, 6),
        Fraction(1, 2),
        Fraction(5, 6),
    ]
    assert bc.solve_coset(1, Fraction(2, 7)) == [Fraction(2, 7)]


def test_solve_coset_partitions(bc):
    s = 4
    union = []
    for n in (Fraction(0), Fraction(1, 3), Fraction(2, 3)):
        block = bc.solve_coset(s, n)
        assert len(block) == bc.index(s)
        union.extend(block)
    assert len(union) == len(set(union))


def test_solve_coset_identity_level(bc, p3, mat):
    assert bc.solve_coset(1, Fraction(3, 7)) == [Fraction(3, 7)]
    assert p3.solve_coset(0, Fraction(1, 3)) == [Fraction(1, 3)]
    v = (Fraction(1, 2), Fraction(2, 3))
    assert mat.solve_coset((0, 0), v) == [mat.canon(v)]


# --- canonical forms -----------------------------------------------------------


@given(st.fractions(min_value=-50, max_value=50), st.integers(1, 24))
@settings(max_examples=80, derandomize=True)
def test_canonical_idempotent_rationals(x, s):
    fam = BostConnesFamily()
    once = fam.canon(x, s)
    assert fam.canon(once, s) == once
    assert 0 <= once < s


def test_canonical_idempotent_matrix(mat):
    vecs = [
        (Fraction(7, 2), Fraction(-5, 3)),
        (Fraction(11, 10), Fraction(4, 9)),
        (Fraction(-3), Fraction(8)),
    ]
    for v in vecs:
        for s in ((1, 0), (1, 1), (2, 2)):
            once = mat.canon(v, s)
            assert mat.canon(once, s) == once


# --- semidirect product ---------------------------------------------------------


def test_semidirect_product_law(bc):
    a = SemidirectElement(Fraction(1, 2), Fraction(2))
    b = SemidirectElement(Fraction(1, 3), Fraction(3, 2))
    ab = a.mul(bc, b)
    # (m, g)(n, h) = (m + g^-1 n, g h) for this action.
    assert ab.n == Fraction(1, 2) + Fraction(1, 3) / 2
    assert ab.g == Fraction(3)


@given(
    st.fractions(min_value=-5, max_value=5),
    st.fractions(min_value=-5, max_value=5),
    st.fractions(min_value=-5, max_value=5),
)
@settings(max_examples=40, derandomize=True)
def test_semidirect_associative(x, y, z):
    fam = BostConnesFamily()
    gs = [Fraction(2), Fraction(3, 2), Fraction(1, 3)]
    a, b, c = (SemidirectElement(n, g) for n, g in zip((x, y, z), gs))
    assert a.mul(fam, b).mul(fam, c) == a.mul(fam, b.mul(fam, c))
    e = a.mul(fam, a.inv(fam))
    assert e.n == 0 and e.g == 1


# --- invariants of the family data ---------------------------------------------


def test_level_subgroup_nesting(bc, p3, mat):
    # The level subgroup sits inside the distinguished subgroup.
    for fam, levels, samples in (
        (bc, [2, 6], [Fraction(4), Fraction(-6)]),
        (p3, [1, 2], [Fraction(9), Fraction(27)]),
        (mat, [(1, 0), (1, 1)], [(Fraction(10), Fraction(3)), (Fraction(30), Fraction(9))]),
    ):
        for s in levels:
            for m in fam.coset_reps(s):
                assert fam.in_M(m)
            for n in samples:
                if fam.in_level_subgroup(n, s):
                    assert fam.in_M(n)


def test_separating_levels(bc, p3, mat):
    for fam, samples in (
        (bc, [Fraction(1, 2), Fraction(3), Fraction(-7)]),
        (p3, [Fraction(1, 3), Fraction(9), Fraction(2)]),
        (mat, [(Fraction(1, 2), Fraction(0)), (Fraction(4), Fraction(6))]),
    ):
        for n in samples:
            s = fam.separating_level(n)
            assert not fam.in_level_subgroup(n, s)


def test_matrix_family_validation():
    with pytest.raises(ConfigError):
        MatrixFamily([[1, 0], [0, 1]], [[5, 0], [0, 1]])  # |det F| = 1
    with pytest.raises(ConfigError):
        MatrixFamily([[2, 0], [0, 2]], [[6, 0], [0, 1]])  # shared factor 2
    with pytest.raises(ConfigError):
        MatrixFamily([[0, 2], [3, 0]], [[5, 1], [0, 5]])  # does not commute


def test_enumeration_cap(mat):
    with pytest.raises(LevelCapError):
        mat.coset_reps((12, 12))


def test_family_config_round_trip(bc, p3, mat):
    for fam in (bc, p3, mat):
        clone = family_from_config(fam.to_config())
        assert clone.tag == fam.tag
    parsed = family_from_config({"family": "matrix", "F": [[2, 0], [0, 3]], "M": [[5, 0], [0, 1]]})
    assert parsed.index((1, 1)) == 30
    with pytest.raises(ConfigError):
        family_from_config({"family": "unknown"})
    with pytest.raises(ConfigError):
        family_from_config({"family": "padic"})


def test_element_serialization(bc, mat):
    n = Fraction(5, 12)
    assert bc.n_from_json(bc.n_to_json(n)) == n
    assert bc.n_to_json(n) == "5/12"
    v = (Fraction(1, 2), Fraction(-3))
    assert mat.n_from_json(mat.n_to_json(v)) == v
    assert mat.s_from_json(mat.s_to_json((2, 1))) == (2, 1)
