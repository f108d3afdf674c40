"""Tests for alternating matrices, Pfaffians, and the check-adjoint."""

import random

import pytest

from diagres.errors import IndexOutOfRange, OddSize, SizeMismatch
from diagres.pfaffian import (
    AlternatingMatrix,
    assemble_block,
    check_adjoint,
    identity_grid,
    mat_eq,
    mat_mul,
    mat_neg,
    mat_transpose,
    pf2_identity,
    pf_minor,
    pfaffian,
    phi_rs,
)
from diagres.polyring import Polynomial, ring_ABC, ring_xyz

RX = ring_xyz(0)
RA = ring_ABC(0)


def var(name, power=1, ring=RX):
    return Polynomial.variable(ring, name, power)


def rnd_poly(rng, ring, deg=1, terms=3, coeff=4):
    total = Polynomial.zero(ring)
    for _ in range(terms):
        exp = [0] * len(ring.variables)
        for _ in range(rng.randint(0, deg)):
            exp[rng.randrange(len(exp))] += 1
        total = total + Polynomial(ring, {tuple(exp): rng.randint(-coeff, coeff)})
    return total


def rnd_alt(rng, ring, size, deg=1):
    return AlternatingMatrix.from_upper(
        ring,
        size,
        {
            (i, j): rnd_poly(rng, ring, deg)
            for i in range(1, size + 1)
            for j in range(i + 1, size + 1)
        },
    )


class TestAlternatingMatrix:
    def test_rejects_nonsquare(self):
        z = Polynomial.zero(RX)
        with pytest.raises(SizeMismatch):
            AlternatingMatrix(RX, [[z, z]])

    def test_rejects_nonzero_diagonal(self):
        one = Polynomial.constant(RX, 1)
        with pytest.raises(SizeMismatch):
            AlternatingMatrix(RX, [[one]])

    def test_rejects_non_alternating(self):
        z = Polynomial.zero(RX)
        f = var("x")
        with pytest.raises(SizeMismatch):
            AlternatingMatrix(RX, [[z, f], [f, z]])

    def test_entry_one_based(self):
        f = var("x")
        m = AlternatingMatrix.from_upper(RX, 2, {(1, 2): f})
        assert m.entry(1, 2) == f
        assert m.entry(2, 1) == -f
        assert m.entry(1, 1).is_zero
        with pytest.raises(IndexOutOfRange):
            m.entry(0, 1)
        with pytest.raises(IndexOutOfRange):
            m.entry(1, 3)

    def test_from_upper_rejects_bad_keys(self):
        f = var("x")
        with pytest.raises(IndexOutOfRange):
            AlternatingMatrix.from_upper(RX, 2, {(2, 1): f})
        with pytest.raises(IndexOutOfRange):
            AlternatingMatrix.from_upper(RX, 2, {(1, 3): f})

    def test_delete(self):
        m = phi_rs(1, 2)
        sub = m.delete(1)
        assert sub.size == 3
        assert sub.entry(1, 2) == var("x")
        assert sub.entry(2, 3) == var("z", 2)
        with pytest.raises(IndexOutOfRange):
            m.delete(5)

    def test_immutable(self):
        m = phi_rs(1, 1)
        with pytest.raises(AttributeError):
            m.size = 5

    def test_to_obj_row_major(self):
        m = AlternatingMatrix.from_upper(RX, 2, {(1, 2): var("x")})
        obj = m.to_obj()
        assert obj[0][1] == [{"coeff": "1", "exp": [1, 0, 0]}]
        assert obj[1][0] == [{"coeff": "-1", "exp": [1, 0, 0]}]
        assert obj[0][0] == []


class TestPfaffian:
    def test_size_zero_is_one(self):
        m = AlternatingMatrix(RX, [])
        assert pfaffian(m) == Polynomial.constant(RX, 1)

    def test_odd_size_is_zero(self):
        m = AlternatingMatrix(RX, [[Polynomial.zero(RX)]])
        assert pfaffian(m).is_zero

    def test_two_by_two(self):
        f = var("x") + var("y", 2)
        m = AlternatingMatrix.from_upper(RX, 2, {(1, 2): f})
        assert pfaffian(m) == f

    def test_phi_rs_2_3(self):
        assert str(pfaffian(phi_rs(2, 3))) == "x^5 + y^5 + z^5"

    def test_phi_rs_1_1(self):
        assert str(pfaffian(phi_rs(1, 1))) == "x^2 + y^2 + z^2"

    def test_four_by_four_closed_form(self):
        rng = random.Random(11)
        for _ in range(20):
            vals = [rnd_poly(rng, RA) for _ in range(6)]
            a, b, c, d, e, f = vals
            m = AlternatingMatrix.from_upper(
                RA, 4, {(1, 2): a, (1, 3): b, (1, 4): c, (2, 3): d, (2, 4): e, (3, 4): f}
            )
            assert pfaffian(m) == a * f - b * e + c * d

    def test_pfaffian_squared_is_determinant_like(self):
        # Pf(phi)^2 should equal det(phi); check against the 4x4 closed form
        # indirectly via phi * check = Pf * I.
        rng = random.Random(5)
        for size in (2, 4, 6):
            m = rnd_alt(rng, RA, size)
            pf = pfaffian(m)
            chk = check_adjoint(m)
            prod = mat_mul(m.entries, chk.entries)
            want = [
                [pf if i == j else Polynomial.zero(RA) for j in range(size)]
                for i in range(size)
            ]
            assert mat_eq(prod, want)


class TestPfMinor:
    def test_one_by_one(self):
        m = AlternatingMatrix(RX, [[Polynomial.zero(RX)]])
        assert pf_minor(m, 1) == Polynomial.constant(RX, 1)

    def test_three_by_three(self):
        a, b, c = var("x"), var("y"), var("z")
        m = AlternatingMatrix.from_upper(RX, 3, {(1, 2): a, (1, 3): b, (2, 3): c})
        assert pf_minor(m, 1) == c
        assert pf_minor(m, 2) == -b
        assert pf_minor(m, 3) == a

    def test_index_range(self):
        m = AlternatingMatrix(RX, [[Polynomial.zero(RX)]])
        with pytest.raises(IndexOutOfRange):
            pf_minor(m, 0)
        with pytest.raises(IndexOutOfRange):
            pf_minor(m, 2)


class TestCheckAdjoint:
    def test_odd_size_rejected(self):
        m = AlternatingMatrix(RX, [[Polynomial.zero(RX)]])
        with pytest.raises(OddSize):
            check_adjoint(m)

    def test_two_by_two(self):
        f = var("x", 3)
        m = AlternatingMatrix.from_upper(RX, 2, {(1, 2): f})
        chk = check_adjoint(m)
        assert chk.entry(1, 2) == Polynomial.constant(RX, -1)
        assert chk.entry(2, 1) == Polynomial.constant(RX, 1)

    def test_phi_rs_swap(self):
        for r, s in [(1, 1), (2, 3), (3, 2), (0, 4), (1, 5)]:
            assert check_adjoint(phi_rs(r, s)) == -phi_rs(s, r)

    def test_two_sided_identity(self):
        rng = random.Random(23)
        for size in (2, 4, 6):
            m = rnd_alt(rng, RA, size)
            pf = pfaffian(m)
            chk = check_adjoint(m)
            want = [
                [pf if i == j else Polynomial.zero(RA) for j in range(size)]
                for i in range(size)
            ]
            assert mat_eq(mat_mul(m.entries, chk.entries), want)
            assert mat_eq(mat_mul(chk.entries, m.entries), want)


class TestPhiRs:
    def test_layout(self):
        m = phi_rs(2, 3)
        assert m.entry(1, 2) == var("z", 2)
        assert m.entry(1, 3) == -var("y", 2)
        assert m.entry(1, 4) == var("x", 3)
        assert m.entry(2, 3) == var("x", 2)
        assert m.entry(2, 4) == var("y", 3)
        assert m.entry(3, 4) == var("z", 3)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            phi_rs(-1, 2)

    def test_product_identity(self):
        for r, s in [(1, 1), (1, 2), (2, 3), (0, 4), (4, 0), (3, 3)]:
            prod = mat_mul(phi_rs(r, s).entries, phi_rs(s, r).entries)
            diag = -(var("x", r + s) + var("y", r + s) + var("z", r + s))
            want = [
                [diag if i == j else Polynomial.zero(RX) for j in range(4)]
                for i in range(4)
            ]
            assert mat_eq(prod, want), (r, s)

    def test_degenerate_r_zero(self):
        m = phi_rs(0, 3)
        one = Polynomial.constant(RX, 1)
        assert m.entry(1, 2) == one
        assert m.entry(2, 3) == one
        assert pfaffian(m) == var("x", 3) + var("y", 3) + var("z", 3)

    def test_pfaffian_sum_of_powers(self):
        for r in range(0, 7):
            for s in range(0, 13 - r):
                pf = pfaffian(phi_rs(r, s))
                want = var("x", r + s) + var("y", r + s) + var("z", r + s)
                assert pf == want, (r, s)

    def test_char_p_ring(self):
        rp = ring_xyz(5)
        m = phi_rs(1, 4, ring=rp)
        assert m.ring.characteristic == 5
        assert pfaffian(m) == Polynomial.variable(rp, "x", 5) + Polynomial.variable(
            rp, "y", 5
        ) + Polynomial.variable(rp, "z", 5)


class TestBlockIdentity:
    def test_assemble_shape(self):
        rng = random.Random(3)
        phi = rnd_alt(rng, RA, 4)
        psi = [[rnd_poly(rng, RA) for _ in range(4)] for _ in range(3)]
        Phi = rnd_alt(rng, RA, 3)
        d2 = assemble_block(phi, psi, Phi)
        assert d2.size == 7
        assert d2.entry(1, 5) == psi[0][0]
        assert d2.entry(5, 1) == -psi[0][0]
        assert d2.entry(5, 6) == Phi.entry(1, 2)

    def test_size_mismatch(self):
        rng = random.Random(3)
        phi = rnd_alt(rng, RA, 4)
        psi = [[rnd_poly(rng, RA) for _ in range(3)] for _ in range(3)]
        Phi = rnd_alt(rng, RA, 3)
        with pytest.raises(SizeMismatch):
            assemble_block(phi, psi, Phi)

    def test_identity_random_2(self):
        rng = random.Random(41)
        for _ in range(40):
            phi = rnd_alt(rng, RA, 2)
            psi = [[rnd_poly(rng, RA) for _ in range(2)] for _ in range(3)]
            Phi = rnd_alt(rng, RA, 3)
            for l in (1, 2, 3):
                assert pf2_identity(phi, psi, Phi, l)

    def test_identity_zero_psi(self):
        rng = random.Random(43)
        phi = rnd_alt(rng, RA, 4)
        Phi = rnd_alt(rng, RA, 3)
        psi = [[Polynomial.zero(RA) for _ in range(4)] for _ in range(3)]
        for l in (1, 2, 3):
            assert pf2_identity(phi, psi, Phi, l)

    def test_identity_random_4_degree_2(self):
        rng = random.Random(47)
        for _ in range(15):
            phi = rnd_alt(rng, RA, 4, deg=2)
            psi = [[rnd_poly(rng, RA, deg=2) for _ in range(4)] for _ in range(3)]
            Phi = rnd_alt(rng, RA, 3, deg=2)
            for l in (1, 2, 3):
                assert pf2_identity(phi, psi, Phi, l)

    def test_identity_char_p(self):
        rp = ring_ABC(7)
        rng = random.Random(53)
        for _ in range(10):
            phi = rnd_alt(rng, rp, 2)
            psi = [[rnd_poly(rng, rp) for _ in range(2)] for _ in range(3)]
            Phi = rnd_alt(rng, rp, 3)
            for l in (1, 2, 3):
                assert pf2_identity(phi, psi, Phi, l)

    def test_bad_l(self):
        rng = random.Random(3)
        phi = rnd_alt(rng, RA, 2)
        psi = [[rnd_poly(rng, RA) for _ in range(2)] for _ in range(3)]
        Phi = rnd_alt(rng, RA, 3)
        with pytest.raises(IndexOutOfRange):
            pf2_identity(phi, psi, Phi, 0)

    def test_odd_phi_rejected(self):
        z = Polynomial.zero(RA)
        phi = AlternatingMatrix(RA, [[z]])
        psi = [[z] for _ in range(3)]
        Phi = AlternatingMatrix(RA, [[z, z, z], [z, z, z], [z, z, z]])
        with pytest.raises(OddSize):
            pf2_identity(phi, psi, Phi, 1)


class TestGridHelpers:
    def test_transpose_and_neg(self):
        a, b = var("x"), var("y")
        A = [[a, b]]
        assert mat_transpose(A) == [[a], [b]]
        assert mat_neg(A) == [[-a, -b]]

    def test_mul_mismatch(self):
        a = var("x")
        with pytest.raises(SizeMismatch):
            mat_mul([[a, a]], [[a, a]])

    def test_identity_grid(self):
        I = identity_grid(RX, 3)
        A = [[rnd_poly(random.Random(9), RX) for _ in range(3)] for _ in range(2)]
        assert mat_eq(mat_mul(A, I), A)
