"""Crossed-product corner, induction, restriction-compression, and the
equivalence between subgroup-generated and completion representations.

The algebraic identities (projection, isometry relations, corner
decomposition) are exact in the rational backend; everything on the
dilation space is float with tolerance 1e-9.
"""

import random
from fractions import Fraction

import pytest

from hecke_lab.coeffs import QC
from hecke_lab.errors import NotInCornerError
from hecke_lab.pairs import BostConnesFamily, PadicFamily
from hecke_lab import autodil, dilate, grpalg, repspace, tower, xprod
from hecke_lab.autodil import chi_K, cylinder, theta_star_g
from hecke_lab.dilate import DilationVector
from hecke_lab.grpalg import delta
from hecke_lab.repspace import SparseVector, random_vector, regular_covariant
from hecke_lab.xprod import (
    CrossedElement,
    compose_corner,
    corner_decompose,
    embed_algebra,
    eval_corner,
    extend_rep,
    in_corner,
    isom_v,
    projection_p,
    rc,
    restrict_completion_rep,
    theta_map,
    x_ind,
)

TOL = 1e-9


@pytest.fixture(scope="module")
def bc():
    return BostConnesFamily()


@pytest.fixture(scope="module")
def rep(bc):
    return regular_covariant(bc)


@pytest.fixture(scope="module")
def ind(rep):
    return x_ind(rep)


def rand_crossed(fam, rng, terms=2):
    pairs = []
    for _ in range(terms):
        level = rng.choice([1, 2, 3])
        f = autodil.LocFun.build(
            fam,
            level,
            [
                (Fraction(rng.randint(-6, 6), rng.randint(1, 4)), Fraction(rng.randint(-2, 2)))
                for _ in range(2)
            ],
        )
        g = Fraction(rng.choice([1, 2, 3]), rng.choice([1, 2, 3]))
        pairs.append((f, g))
    return CrossedElement.build(fam, pairs)


# --- exact corner algebra -------------------------------------------------------


def test_projection_identities(bc):
    p = projection_p(bc)
    assert p * p == p
    assert p.star() == p


def test_isometry_relations_exact(bc):
    p = projection_p(bc)
    for s in (1, 2, 3, 4, 6):
        v = isom_v(bc, s)
        assert v.star() * v == p
        assert p * v == v  # u_s p lies in the corner on the left as well
    assert isom_v(bc, 2) * isom_v(bc, 3) == isom_v(bc, 6)


def test_product_law_associative(bc):
    rng = random.Random(3)
    for _ in range(10):
        a, b, c = (rand_crossed(bc, rng) for _ in range(3))
        assert (a * b) * c == a * (b * c)


def test_involution_antimultiplicative(bc):
    rng = random.Random(5)
    for _ in range(10):
        a, b = rand_crossed(bc, rng), rand_crossed(bc, rng)
        assert a.star().star() == a
        assert (a * b).star() == b.star() * a.star()


def test_covariance_inside_product(bc):
    # u_g f u_g^-1 = (rescaled action of g on f), read off the product law.
    rng = random.Random(7)
    for _ in range(10):
        f = autodil.LocFun.build(bc, 2, [(Fraction(rng.randint(0, 8), 2), 1)])
        g = Fraction(rng.choice([1, 2, 3]), rng.choice([1, 2]))
        ug = CrossedElement.build(bc, [(theta_star_g(g, chi_K(bc)), g)])
        # For the unit-scaled implementing element: u_g p u_g^* has the
        # rescaled action applied to the projection.
        lhs = ug * ug.star()
        expected = CrossedElement.build(
            bc, [(autodil.convolve(theta_star_g(g, chi_K(bc)), theta_star_g(g, chi_K(bc))), bc.g_identity)]
        )
        assert lhs == expected


def test_corner_membership(bc):
    p = projection_p(bc)
    assert in_corner(p)
    assert in_corner(compose_corner(bc, 2, delta(bc, Fraction(1, 2)), 3))
    # A bare implementing unitary term is not in the corner.
    loose = CrossedElement.build(bc, [(cylinder(bc, 2, Fraction(1)), Fraction(2))])
    assert not in_corner(loose)
    with pytest.raises(NotInCornerError):
        corner_decompose(loose)


def test_corner_decompose_unit(bc):
    triples = corner_decompose(projection_p(bc))
    assert len(triples) == 1
    s, a, t = triples[0]
    assert s == 1 and t == 1
    assert a == grpalg.one(bc)


def test_corner_decompose_roundtrip(bc):
    rng = random.Random(11)
    for _ in range(12):
        s = rng.choice([1, 2, 3])
        t = rng.choice([1, 2, 3])
        a = grpalg.GroupAlgebraElement.build(
            bc,
            [
                (Fraction(rng.randint(0, 5), rng.randint(1, 6)), QC(Fraction(rng.randint(-2, 2)), Fraction(rng.randint(-1, 1))))
                for _ in range(2)
            ],
        )
        d = compose_corner(bc, s, a, t)
        rebuilt = CrossedElement(bc, {})
        for s2, a2, t2 in corner_decompose(d):
            rebuilt = rebuilt + compose_corner(bc, s2, a2, t2)
        assert rebuilt == d


def test_corner_decompose_sum_of_components(bc):
    d = compose_corner(bc, 2, delta(bc, Fraction(1, 2)), 3) + compose_corner(
        bc, 1, delta(bc, Fraction(1, 3)), 1
    )
    rebuilt = CrossedElement(bc, {})
    for s, a, t in corner_decompose(d):
        rebuilt = rebuilt + compose_corner(bc, s, a, t)
    assert rebuilt == d


def test_u2p_is_in_corner(bc):
    # u_2 p itself: p (u_2 p) p = u_2 p, decomposing as the (e, 1, 2) triple.
    v2 = isom_v(bc, 2)
    assert in_corner(v2)
    triples = corner_decompose(v2)
    rebuilt = CrossedElement(bc, {})
    for s, a, t in triples:
        rebuilt = rebuilt + compose_corner(bc, s, a, t)
    assert rebuilt == v2
    assert [(s, t) for s, _, t in triples] == [(1, 2)]
    assert triples[0][1] == grpalg.one(bc)


def test_corner_fullness_surrogate(bc):
    # index(l) * (cylinder over c at level l) u_g = (u_l^* gen u_l) p (chiK u_lg)
    p = projection_p(bc)
    for level in (2, 3, 6):
        c = Fraction(1, level) if level > 1 else Fraction(0)
        n = bc.canon(bc.psi_s(level, c))
        d1 = CrossedElement.build(
            bc,
            [(
                theta_star_g(Fraction(1, level), autodil.embed_i(delta(bc, n))),
                Fraction(1, level),
            )],
        )
        g = Fraction(2)
        d2 = CrossedElement.build(bc, [(chi_K(bc), Fraction(level) * g)])
        product = d1 * p * d2
        target = CrossedElement.build(
            bc, [(cylinder(bc, level, c).scale(Fraction(bc.index(level))), g)]
        )
        assert product == target


# --- evaluation and induction -----------------------------------------------------


def test_eval_corner_identities(rep, bc):
    rng = random.Random(13)
    p_tri = corner_decompose(projection_p(bc))
    for _ in range(5):
        v = random_vector(bc, rng)
        assert (eval_corner(rep, p_tri, v) - v).norm() < TOL
    v2_tri = corner_decompose(isom_v(bc, 2))
    for _ in range(5):
        v = random_vector(bc, rng)
        assert (eval_corner(rep, v2_tri, v) - rep.apply_V(2, v)).norm() < TOL


def test_eval_corner_multiplicative(rep, bc):
    rng = random.Random(17)
    for _ in range(8):
        s, t, u = (rng.choice([1, 2, 3]) for _ in range(3))
        a = delta(bc, Fraction(rng.randint(0, 3), 4))
        b = delta(bc, Fraction(rng.randint(0, 2), 3))
        d1 = compose_corner(bc, s, a, t)
        d2 = compose_corner(bc, t, b, u)
        t1, t2, t12 = corner_decompose(d1), corner_decompose(d2), corner_decompose(d1 * d2)
        for _ in range(3):
            v = random_vector(bc, rng)
            lhs = eval_corner(rep, t1, eval_corner(rep, t2, v))
            rhs = eval_corner(rep, t12, v)
            assert (lhs - rhs).norm() < TOL


def test_engine_reproduces_operators(ind, rep, bc):
    dil = ind.dilation
    rng = random.Random(19)
    p = projection_p(bc)
    for _ in range(10):
        h = random_vector(bc, rng)
        s = rng.choice([1, 2, 3, 4])
        vec = DilationVector.symbol(s, h)
        assert dil.distance(ind.act(p, vec), ind.rho_p(vec)) < TOL
        n = Fraction(rng.randint(0, 5), rng.randint(1, 6))
        lhs = ind.act(embed_algebra(delta(bc, n)), dil.embed(h))
        assert dil.distance(lhs, dil.embed(rep.apply_Y(n, h))) < TOL
        lhs = ind.act(isom_v(bc, s), dil.embed(h))
        assert dil.distance(lhs, dil.embed(rep.apply_V(s, h))) < TOL


def test_engine_is_multiplicative(ind, bc):
    dil = ind.dilation
    rng = random.Random(23)
    for _ in range(8):
        d1 = rand_crossed(bc, rng)
        d2 = rand_crossed(bc, rng)
        vec = DilationVector.symbol(rng.choice([1, 2, 3]), random_vector(bc, rng))
        lhs = ind.act(d1, ind.act(d2, vec))
        rhs = ind.act(d1 * d2, vec)
        assert dil.distance(lhs, rhs) < TOL


def test_phi_isometric_and_fixed(ind, bc):
    dil = ind.dilation
    rng = random.Random(29)
    for _ in range(10):
        h = random_vector(bc, rng)
        assert abs(dil.norm(ind.phi(h)) - h.norm()) < TOL
        assert dil.distance(ind.rho_p(ind.phi(h)), ind.phi(h)) < TOL


def test_x_ind_gram_against_module_side(ind, rep, bc):
    dil = ind.dilation
    rng = random.Random(31)
    data = []
    for _ in range(8):
        s, t = rng.choice([1, 2, 3]), rng.choice([1, 2, 3])
        a = delta(bc, Fraction(rng.randint(0, 3), rng.randint(1, 4)))
        h = random_vector(bc, rng)
        data.append((s, a, t, h))

    def tensor_vector(s, a, t, h):
        acc = SparseVector({})
        for n, c in a.values.items():
            acc = acc + rep.apply_Y(n, rep.apply_V(t, h)).scale(complex(c))
        return DilationVector.symbol(s, acc)

    for i, (s1, a1, t1, h1) in enumerate(data):
        v1 = tensor_vector(s1, a1, t1, h1)
        x1 = xprod.module_element(bc, s1, a1, t1)
        for s2, a2, t2, h2 in data[i:]:
            v2 = tensor_vector(s2, a2, t2, h2)
            x2 = xprod.module_element(bc, s2, a2, t2)
            module_side = eval_corner(rep, corner_decompose(x2.star() * x1), h1).inner(h2)
            dilation_side = dil.inner(v1, v2)
            assert abs(module_side - dilation_side) < TOL


def test_rc_after_induction_is_identity(ind, rep, bc):
    dil = ind.dilation
    back = rc(ind)
    rng = random.Random(37)
    for _ in range(8):
        h = random_vector(bc, rng)
        phi_h = ind.phi(h)
        for n in (Fraction(1, 2), Fraction(2, 3)):
            assert dil.distance(back.apply_Y(n, phi_h), ind.phi(rep.apply_Y(n, h))) < TOL
        for s in (2, 3, 4):
            assert dil.distance(back.apply_V(s, phi_h), ind.phi(rep.apply_V(s, h))) < TOL
            assert (
                dil.distance(back.apply_Vstar(s, phi_h), ind.phi(rep.apply_Vstar(s, h))) < TOL
            )


def test_rho_p_idempotent(ind, bc):
    dil = ind.dilation
    rng = random.Random(41)
    for _ in range(6):
        vec = DilationVector.symbol(rng.choice([2, 3, 4]), random_vector(bc, rng))
        once = ind.rho_p(vec)
        assert dil.distance(ind.rho_p(once), once) < TOL


def test_theta_map_preserves_gram(ind, rep, bc):
    dil = ind.dilation
    rng = random.Random(43)
    p = projection_p(bc)
    pairs = []
    for _ in range(8):
        s, t = rng.choice([1, 2, 3]), rng.choice([1, 2, 3])
        a = delta(bc, Fraction(rng.randint(0, 3), rng.randint(1, 4)))
        pairs.append((compose_corner(bc, s, a, t), random_vector(bc, rng)))
    images = [theta_map(ind, d, h) for d, h in pairs]
    for i, (d1, h1) in enumerate(pairs):
        for j in range(i, len(pairs)):
            d2, h2 = pairs[j]
            module_side = eval_corner(
                rep, corner_decompose((p * d2).star() * (p * d1)), h1
            ).inner(h2)
            image_side = dil.inner(images[i], images[j])
            assert abs(module_side - image_side) < TOL


def test_theta_map_naturality(rep, bc):
    rep2 = repspace.direct_sum(rep, rep)
    T = repspace.inclusion_intertwiner("a")
    ind1 = x_ind(rep)
    ind2 = x_ind(rep2)
    rng = random.Random(47)
    for _ in range(6):
        s, t = rng.choice([1, 2, 3]), rng.choice([1, 2, 3])
        a = delta(bc := rep.family, Fraction(rng.randint(0, 3), rng.randint(1, 4)))
        d = compose_corner(bc, s, a, t)
        h = random_vector(bc, rng)
        lhs = theta_map(ind2, d, T(h))
        rhs = theta_map(ind1, d, h).map_blocks(lambda _s, blk: T(blk))
        assert ind2.dilation.distance(lhs, rhs) < TOL


# --- extension and restriction ------------------------------------------------------


def test_extension_unit_acts_as_projection(rep, bc):
    ext = extend_rep(rep)
    dil = ext.dilation
    rng = random.Random(53)
    for level in (2, 4, 6):
        k_at_level = chi_K(bc).refine(level)
        for _ in range(3):
            vec = DilationVector.symbol(rng.choice([1, 2, 3]), random_vector(bc, rng))
            assert dil.distance(ext.rho(k_at_level, vec), ext.rho_p(vec)) < TOL


def test_extension_generator_action(rep, bc):
    # rho of a generator cylinder acts as the translation unitary after the
    # fixed-space cut.
    ext = extend_rep(rep)
    dil = ext.dilation
    rng = random.Random(59)
    for n in (Fraction(1, 2), Fraction(1, 3)):
        f = autodil.embed_i(delta(bc, n))
        for _ in range(3):
            vec = DilationVector.symbol(rng.choice([1, 2]), random_vector(bc, rng))
            lhs = ext.rho(f, vec)
            rhs = ext.W(tower.embed_j(bc, n), ext.rho_p(vec))
            assert dil.distance(lhs, rhs) < TOL


def test_extension_covariance(rep, bc):
    ext = extend_rep(rep)
    dil = ext.dilation
    rng = random.Random(61)
    for _ in range(8):
        level = rng.choice([1, 2])
        f = autodil.LocFun.build(
            bc, level, [(Fraction(rng.randint(0, 6), 3), Fraction(rng.randint(-2, 2)))]
        )
        g = Fraction(rng.choice([1, 2, 3]), rng.choice([1, 2]))
        vec = DilationVector.symbol(rng.choice([1, 2]), random_vector(bc, rng))
        lhs = ext.rho(theta_star_g(g, f), vec)
        rhs = ext.U(g, ext.rho(f, ext.U(1 / g, vec)))
        assert dil.distance(lhs, rhs) < TOL


def test_restriction_recovers_dilated_unitaries(rep, bc):
    ext = extend_rep(rep)
    res = restrict_completion_rep(ext)
    dil = ext.dilation
    rng = random.Random(67)
    for _ in range(100):
        n = Fraction(rng.randint(-8, 8), rng.randint(1, 8))
        vec = DilationVector.symbol(rng.choice([1, 2, 3, 4]), random_vector(bc, rng))
        assert dil.distance(res.X(n, vec), dil.apply_W(n, vec)) < TOL


def test_restriction_is_subgroup_generated(rep, bc):
    ext = extend_rep(rep)
    res = restrict_completion_rep(ext)
    rng = random.Random(71)
    for m in (Fraction(1), Fraction(-3), Fraction(12)):
        vec = DilationVector.symbol(rng.choice([1, 2, 3]), random_vector(bc, rng))
        assert res.m_fixed_deviation(m, vec) < TOL


def test_trivial_on_k_everything_fixed(bc):
    # Degenerate case: a pair trivial on the subgroup translations has all
    # vectors fixed after the projection cut.
    fam = bc

    def apply_Y(n, v):
        return v if fam.in_M(n) else repspace.SparseVector(
            {fam.canon(fam.n_add(n, k)): c for k, c in v.values.items()}
        )

    rep0 = regular_covariant(fam)
    ext = extend_rep(rep0)
    rng = random.Random(73)
    vec = ext.rho_p(DilationVector.symbol(2, random_vector(fam, rng)))
    for m in (Fraction(2), Fraction(5)):
        assert ext.dilation.distance(ext.W(tower.embed_j(fam, m), vec), vec) < TOL


def test_w_truncated_precision_error(rep, bc):
    from hecke_lab.errors import PrecisionError

    ext = extend_rep(rep)
    x = tower.TruncatedElement.make(bc, 2, Fraction(1, 2))
    vec = DilationVector.symbol(3, SparseVector.basis(Fraction(0)))
    with pytest.raises(PrecisionError):
        ext.W(x, vec)


def test_padic_corner_identities():
    fam = PadicFamily(3)
    p = projection_p(fam)
    assert p * p == p
    for s in (0, 1, 2):
        v = isom_v(fam, s)
        assert v.star() * v == p
    d = compose_corner(fam, 1, delta(fam, Fraction(1, 3)), 2)
    rebuilt = CrossedElement(fam, {})
    for s2, a2, t2 in corner_decompose(d):
        rebuilt = rebuilt + compose_corner(fam, s2, a2, t2)
    assert rebuilt == d


def test_serialization_roundtrip(bc):
    d = compose_corner(bc, 2, delta(bc, Fraction(1, 2)), 3)
    data = d.to_json()
    assert CrossedElement.from_json(bc, data) == d
