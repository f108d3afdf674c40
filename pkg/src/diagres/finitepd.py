"""Constructive finite resolutions of the diagonal-power quotients.

Let R = k[x,y,z]/(x^n + y^n + z^n) and Q = R/(x^N, y^N, z^N).  Whenever
Q has finite projective dimension over R, it is resolved by a length-two
complex  0 -> R^2 -> R^3 -> R  whose middle map is a 3-by-2 matrix with
signed maximal minors generating (x^N, y^N, z^N).  This module builds
those matrices explicitly and certifies every output:

* :func:`hb_matrix` computes a homogeneous Hilbert-Burch matrix for the
  two-variable power triple [X^a, Y^a, (X+Y)^a] by a deterministic
  degree-by-degree kernel solve, normalized so the signed 2x2 minors
  equal the powers exactly;
* :func:`unbalanced_predicted` evaluates the numeric base-p criterion
  for the column degrees of that matrix to differ by at least two;
* :func:`finite_res_multiple`, :func:`finite_res_char2`, and
  :func:`finite_res_from_relation` emit the explicit 3-by-2 matrices
  over R in the three constructive regimes (N a multiple of n,
  characteristic two, and a supplied matrix exhibiting one of the
  recognized divisibility shapes);
* :func:`finite_resolution` dispatches among them, covering every
  finite-projective-dimension triple (c, n, N), with a flagged
  syzygy-solver fallback that certified constructions never need.

Every emitted matrix is wrapped in :class:`RRes32`, which records the
construction route, the exact signed minors, and the common scalar by
which they reduce to (x^N, y^N, z^N) modulo the hypersurface equation;
``certify``/``oracle_certified`` re-verify independently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from ._exact import membership_field
from .classifier import pd_verdict
from .errors import (
    ConstructionFailed,
    NonPrime,
    NotFinite,
    OutOfRange,
    ShapeNotFound,
)
from .oracle import GradedRing, hypersurface_ring, ideal_membership, syzygy_step
from .polyring import Polynomial, Ring, ring_xyz
from .resolver import GradedMap, GradedResolution

__all__ = [
    "HilbertBurchMatrix",
    "RRes32",
    "hb_matrix",
    "unbalanced_predicted",
    "finite_res_multiple",
    "finite_res_char2",
    "finite_res_from_relation",
    "finite_resolution",
]


# ---------------------------------------------------------------------------
# two-variable scaffolding
# ---------------------------------------------------------------------------

_GRADED_XY: dict[int, GradedRing] = {}


def _graded_xy(characteristic: int, cutoff: int) -> GradedRing:
    """Cached graded k[X, Y] used for kernel and lifting solves."""
    ring = _GRADED_XY.get(characteristic)
    if ring is None:
        ring = GradedRing(characteristic, ("X", "Y"), None, cutoff)
        _GRADED_XY[characteristic] = ring
    ring.extend_cutoff(cutoff)
    return ring


def _lin_forms(ring: Ring) -> tuple[Polynomial, Polynomial, Polynomial]:
    """The three pairwise-coprime linear forms X, Y, X+Y."""
    X = Polynomial.variable(ring, "X")
    Y = Polynomial.variable(ring, "Y")
    return X, Y, X + Y


def _check_characteristic(c: int) -> None:
    if c == 0:
        return
    if c < 2 or any(c % d == 0 for d in range(2, int(math.isqrt(c)) + 1)):
        raise NonPrime(f"characteristic {c} is neither 0 nor prime")


def _finv(characteristic: int, value: int) -> int | Fraction:
    """Inverse of a nonzero scalar in the coefficient field."""
    if characteristic:
        return pow(value % characteristic, -1, characteristic)
    if value in (1, -1):
        return value
    return Fraction(1, value)


def _col_degree(col: tuple[Polynomial, ...]) -> int:
    for entry in col:
        if not entry.is_zero:
            return entry.homogeneous_degree()
    raise ConstructionFailed("unexpected zero column")


def _signed_minors(col1, col2) -> tuple[Polynomial, Polynomial, Polynomial]:
    """The 2x2 minors (rows {2,3}, {1,3}, {1,2}); the signed row that
    annihilates both columns is (m1, -m2, m3)."""
    m1 = col1[1] * col2[2] - col2[1] * col1[2]
    m2 = col1[0] * col2[2] - col2[0] * col1[2]
    m3 = col1[0] * col2[1] - col2[0] * col1[1]
    return m1, m2, m3


def _divide_linear2(poly: Polynomial, u: int, v: int) -> Polynomial | None:
    """Exact quotient of a homogeneous two-variable polynomial by the
    linear form u*X + v*Y, or None when the division is not exact."""
    if poly.is_zero:
        return poly
    d = poly.homogeneous_degree()
    if d is None or d < 1:
        return None
    ring = poly.ring
    char = ring.characteristic
    coeffs = [poly.coefficient((i, d - i)) for i in range(d + 1)]
    quot = [0] * d
    if u != 0:
        uinv = _finv(char, u)
        carry = 0
        for j in range(d, 0, -1):
            quot[j - 1] = (coeffs[j] - v * carry) * uinv
            if char:
                quot[j - 1] %= char
            carry = quot[j - 1]
        rem = coeffs[0] - v * quot[0]
    else:
        vinv = _finv(char, v)
        carry = 0
        for j in range(0, d):
            quot[j] = (coeffs[j] - u * carry) * vinv
            if char:
                quot[j] %= char
            carry = quot[j]
        rem = coeffs[d] - u * quot[d - 1]
    if char:
        rem %= char
    if rem != 0:
        return None
    return Polynomial(ring, {(i, d - 1 - i): q for i, q in enumerate(quot)})


def _frob(poly: Polynomial, q: int) -> Polynomial:
    """Entrywise q-th power twist over a prime field: exponents scale by
    q while coefficients are fixed (lambda^q = lambda in F_p)."""
    return Polynomial(poly.ring,
                      {tuple(e * q for e in exp): co
                       for exp, co in poly.terms.items()})


def _is_unit(poly: Polynomial) -> bool:
    return (not poly.is_zero) and poly.homogeneous_degree() == 0


def _sub_linear(poly: Polynomial, img_x: Polynomial,
                img_y: Polynomial) -> Polynomial:
    """Substitute the two variables by arbitrary linear forms."""
    ring = img_x.ring
    acc = Polynomial.zero(ring)
    pow_x: list[Polynomial] = [Polynomial.constant(ring, 1)]
    pow_y: list[Polynomial] = [Polynomial.constant(ring, 1)]
    for (i, j), coeff in poly.terms.items():
        while len(pow_x) <= i:
            pow_x.append(pow_x[-1] * img_x)
        while len(pow_y) <= j:
            pow_y.append(pow_y[-1] * img_y)
        acc = acc + pow_x[i] * pow_y[j] * coeff
    return acc


# The six substitutions permuting the set {X, Y, X+Y} up to sign,
# stored as ((image of X), (image of Y)) coefficient pairs together
# with the induced permutation pi and signs eps:
#   sigma(form_i) = eps[i] * form_{pi[i]}.
def _frame_meta(img_x, img_y):
    triple = [img_x, img_y, (img_x[0] + img_y[0], img_x[1] + img_y[1])]
    basis = [(1, 0), (0, 1), (1, 1)]
    pi, eps = [], []
    for t in triple:
        for k, b in enumerate(basis):
            if t == b:
                pi.append(k)
                eps.append(1)
                break
            if t == (-b[0], -b[1]):
                pi.append(k)
                eps.append(-1)
                break
        else:  # pragma: no cover - static data
            raise AssertionError(f"frame image {t} is not +-(X|Y|X+Y)")
    assert sorted(pi) == [0, 1, 2]
    return tuple(pi), tuple(eps)


_FRAME_IMAGES = [
    ((1, 0), (0, 1)),
    ((0, 1), (1, 0)),
    ((1, 1), (0, -1)),
    ((1, 0), (-1, -1)),
    ((0, 1), (-1, -1)),
    ((1, 1), (-1, 0)),
]
_FRAMES = [(imgs, *_frame_meta(*imgs)) for imgs in _FRAME_IMAGES]


# ---------------------------------------------------------------------------
# Hilbert-Burch matrices for [X^a, Y^a, (X+Y)^a]
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HilbertBurchMatrix:
    """Homogeneous Hilbert-Burch matrix of the two-variable power triple.

    ``columns`` hold the two minimal relations on [X^a, Y^a, (X+Y)^a],
    scaled so that the signed 2x2 minors are exactly (X^a, Y^a, (X+Y)^a)
    (in characteristic 0 the second column may carry rational
    coefficients).  ``integer_columns`` keep integral coefficients for
    downstream substitution work: they differ from ``columns`` only in
    characteristic 0, where the minors there equal ``unit`` times the
    powers for the recorded nonzero integer ``unit``.
    """

    characteristic: int
    a: int
    columns: tuple[tuple[Polynomial, ...], tuple[Polynomial, ...]]
    integer_columns: tuple[tuple[Polynomial, ...], tuple[Polynomial, ...]]
    degrees: tuple[int, int]
    unit: int

    @property
    def balanced(self) -> bool:
        return self.degrees[1] - self.degrees[0] <= 1

    @property
    def matrix(self) -> list[list[Polynomial]]:
        c1, c2 = self.columns
        return [[c1[i], c2[i]] for i in range(3)]

    def minors(self) -> tuple[Polynomial, Polynomial, Polynomial]:
        """Signed minors of the normalized matrix: should equal
        (X^a, Y^a, (X+Y)^a)."""
        m1, m2, m3 = _signed_minors(*self.columns)
        return m1, -m2, m3

    def certify(self) -> bool:
        """Re-verify the exact determinantal identity and degree sum."""
        ring = self.columns[0][0].ring if not self.columns[0][0].is_zero \
            else self.columns[1][0].ring
        X, Y, XY = _lin_forms(ring)
        s1, s2, s3 = self.minors()
        return (s1 == X ** self.a and s2 == Y ** self.a
                and s3 == XY ** self.a
                and self.degrees[0] + self.degrees[1] == self.a)

    def to_obj(self) -> dict:
        return {
            "characteristic": self.characteristic,
            "a": self.a,
            "degrees": list(self.degrees),
            "balanced": self.balanced,
            "matrix": [[e.to_obj() for e in row] for row in self.matrix],
            "unit": str(self.unit),
        }


@lru_cache(maxsize=None)
def hb_matrix(a: int, c: int) -> HilbertBurchMatrix:
    """Hilbert-Burch matrix for [X^a, Y^a, (X+Y)^a] over characteristic c.

    The two minimal relation columns are found degree-by-degree with a
    deterministic echelon solve; the second column is rescaled so the
    signed minors reproduce the powers exactly.
    """
    if a < 1:
        raise OutOfRange(f"exponent a={a} must be positive")
    _check_characteristic(c)
    graded = _graded_xy(c, 2 * a + 4)
    ring = graded.base_ring
    special = a == 1
    if not special and c:
        t = a
        while t % c == 0:
            t //= c
        special = t == 1
    if special:
        # closed form [[1, -Y^a], [1, X^a], [-1, 0]]: valid for a = 1 in
        # any characteristic and for a a power of the characteristic,
        # where (X+Y)^a = X^a + Y^a.
        X, Y, _ = _lin_forms(ring)
        one = Polynomial.constant(ring, 1)
        cols = ((one, one, -one),
                (-(Y ** a), X ** a, Polynomial.zero(ring)))
        hbm = HilbertBurchMatrix(
            characteristic=c, a=a, columns=cols, integer_columns=cols,
            degrees=(0, a), unit=1)
        if not hbm.certify():  # pragma: no cover - algebraic identity
            raise ConstructionFailed("closed form failed certification")
        return hbm
    X, Y, XY = _lin_forms(ring)
    row = GradedMap(matrix=[[X ** a, Y ** a, XY ** a]],
                    source=[-a] * 3, target=[0])
    syz = syzygy_step(row, graded, cutoff=2 * a + 1)
    if syz.ncols != 2:
        raise ConstructionFailed(
            f"relation module of the degree-{a} power triple produced "
            f"{syz.ncols} minimal generators instead of 2")
    order = sorted(range(2), key=lambda j: -syz.source[j])
    cols = [tuple(syz.matrix[i][j] for i in range(3)) for j in order]
    degs = tuple(-syz.source[j] - a for j in order)
    m1, _m2, _m3 = _signed_minors(*cols)
    u = m1.coefficient((a, 0))
    if u == 0:
        raise ConstructionFailed("degenerate relation columns")
    inv = _finv(c, u)
    norm2 = tuple(entry * inv for entry in cols[1])
    normalized = (cols[0], norm2)
    n1, n2, n3 = _signed_minors(*normalized)
    if not (n1 == X ** a and -n2 == Y ** a and n3 == XY ** a):
        raise ConstructionFailed(
            "minor normalization failed the exact determinantal identity")
    if degs[0] + degs[1] != a:
        raise ConstructionFailed(
            f"column degrees {degs} do not sum to {a}")
    integer_cols = normalized if c else tuple(cols)
    return HilbertBurchMatrix(
        characteristic=c, a=a,
        columns=normalized,
        integer_columns=tuple(integer_cols),
        degrees=degs, unit=1 if c else int(u))


def unbalanced_predicted(p: int, a: int) -> bool:
    """Numeric criterion for the column degrees of ``hb_matrix(a, p)``
    to differ by at least two in characteristic p.

    True iff some odd J and power q = p^e (e >= 1) satisfy
    3*|a - J*q| < q - 1 when a is odd, or 3*|a - J*q| < q when a is
    even.  Powers up to 3a+3 exhaust all solutions.
    """
    _check_characteristic(p)
    if p == 0:
        raise NonPrime("criterion is defined for positive characteristic")
    if a < 1:
        raise OutOfRange(f"exponent a={a} must be positive")
    q = p
    while q <= 3 * a + 3:
        for J in range(max(1, a // q - 1), a // q + 3):
            if J % 2 == 0:
                continue
            gap = 3 * abs(a - J * q)
            if (a % 2 == 1 and gap < q - 1) or (a % 2 == 0 and gap < q):
                return True
        q *= p
    return False


# ---------------------------------------------------------------------------
# certified 3x2 resolutions over the hypersurface ring
# ---------------------------------------------------------------------------


def _mono3(ring: Ring, ex: int, ey: int, ez: int) -> Polynomial:
    return Polynomial(ring, {(ex, ey, ez): 1})


def _alpha(poly: Polynomial, c: int, n: int) -> Polynomial:
    """Substitute X -> x^n, Y -> y^n into a two-variable polynomial."""
    return poly.substitute_powers(ring_xyz(c), {"X": ("x", n), "Y": ("y", n)})


def _clear_denominators(col):
    dens = [co.denominator for poly in col for co in poly.terms.values()
            if isinstance(co, Fraction)]
    if not dens:
        return tuple(col)
    m = math.lcm(*dens)
    return tuple(poly * m for poly in col)


def _common_unit(c: int, n: int, N: int, signed) -> int | Fraction:
    """The scalar lam with signed minors == lam * (x^N, y^N, z^N) in R;
    raises ConstructionFailed when no common scalar exists."""
    R3 = hypersurface_ring(c, n, cutoff=N + 4)
    P3 = ring_xyz(c)
    powers = [_mono3(P3, N, 0, 0), _mono3(P3, 0, N, 0), _mono3(P3, 0, 0, N)]
    lam = None
    for minor, power in zip(signed, powers):
        v = [int(t) for t in R3.poly_vec(minor, N)]
        w = [int(t) for t in R3.poly_vec(power, N)]
        k = next((i for i, t in enumerate(w) if t), None)
        if k is None:  # pragma: no cover - x^N never reduces to zero
            raise ConstructionFailed("power vanishes in the hypersurface ring")
        if c:
            cur = v[k] * pow(w[k], -1, c) % c
            ok = all((vi - cur * wi) % c == 0 for vi, wi in zip(v, w))
        else:
            if v[k] == 0:
                ok, cur = False, None
            else:
                cur = Fraction(v[k], w[k])
                ok = all(vi * cur.denominator == cur.numerator * wi
                         for vi, wi in zip(v, w))
        if not ok or cur == 0:
            raise ConstructionFailed(
                "signed minors are not a common scalar multiple of the "
                "diagonal powers in the hypersurface ring")
        if lam is None:
            lam = cur
        elif lam != cur:
            raise ConstructionFailed(
                f"minor scalars disagree: {lam} vs {cur}")
    if isinstance(lam, Fraction) and lam.denominator == 1:
        lam = int(lam)
    return lam


@dataclass(frozen=True)
class RRes32:
    """A certified 3-by-2 presentation matrix over the hypersurface ring.

    ``hb`` presents the relations on (x^N, y^N, z^N) in R; its signed
    maximal minors equal ``unit`` times those powers modulo the
    hypersurface equation, so together with the power row it forms the
    finite free resolution 0 -> R^2 -> R^3 -> R of the quotient.
    ``provenance`` names the construction route that produced it.
    """

    characteristic: int
    n: int
    N: int
    hb: GradedMap
    provenance: str
    unit: int | Fraction
    signed_minors: tuple[Polynomial, Polynomial, Polynomial]

    def _power_row(self) -> GradedMap:
        P3 = ring_xyz(self.characteristic)
        powers = [_mono3(P3, self.N, 0, 0), _mono3(P3, 0, self.N, 0),
                  _mono3(P3, 0, 0, self.N)]
        return GradedMap(matrix=[powers], source=[-self.N] * 3, target=[0])

    def modulus(self) -> Polynomial:
        P3 = ring_xyz(self.characteristic)
        n = self.n
        return (_mono3(P3, n, 0, 0) + _mono3(P3, 0, n, 0)
                + _mono3(P3, 0, 0, n))

    def resolution(self) -> GradedResolution:
        return GradedResolution(
            target="diagonal-power quotient over the hypersurface ring",
            maps=[self._power_row(), self.hb],
            modulus=self.modulus(),
            minimal=self.hb.is_minimal(),
            tail=None)

    def certify(self) -> bool:
        """Re-verify the exact annihilation identity and the common
        scalar reducing the signed minors to the diagonal powers."""
        try:
            cols = [tuple(self.hb.matrix[i][j] for i in range(3))
                    for j in range(2)]
            m1, m2, m3 = _signed_minors(*cols)
            signed = (m1, -m2, m3)
            if any(s != t for s, t in zip(signed, self.signed_minors)):
                return False
            for col in cols:
                if not (m1 * col[0] - m2 * col[1] + m3 * col[2]).is_zero:
                    return False
            lam = _common_unit(self.characteristic, self.n, self.N, signed)
            return lam == self.unit
        except ConstructionFailed:
            return False

    def oracle_certified(self, cutoff: int | None = None) -> bool:
        """Independent ideal-equality check: each signed minor lies in
        (x^N, y^N, z^N) in R and each diagonal power lies in the minor
        ideal."""
        R3 = hypersurface_ring(self.characteristic, self.n,
                               cutoff=cutoff or self.N + 4)
        P3 = ring_xyz(self.characteristic)
        powers = [_mono3(P3, self.N, 0, 0), _mono3(P3, 0, self.N, 0),
                  _mono3(P3, 0, 0, self.N)]
        minors = list(self.signed_minors)
        return (all(ideal_membership(m, powers, R3, degree=self.N)
                    for m in minors)
                and all(ideal_membership(p, minors, R3, degree=self.N)
                        for p in powers))

    def to_obj(self) -> dict:
        return {
            "characteristic": self.characteristic,
            "n": self.n,
            "N": self.N,
            "provenance": self.provenance,
            "unit": str(self.unit),
            "matrix": self.hb.to_obj(),
            "signed_minors": [m.to_obj() for m in self.signed_minors],
        }


def _graded_from_columns(cols, N: int) -> GradedMap:
    source = [-N - _col_degree(col) for col in cols]
    rows = [[cols[j][i] for j in range(len(cols))] for i in range(3)]
    return GradedMap(matrix=rows, source=source, target=[-N] * 3)


def _finish(c: int, n: int, N: int, cols, provenance: str) -> RRes32:
    """Certify a candidate matrix (exact annihilation plus common-scalar
    minors) and wrap it."""
    cols = [_clear_denominators(col) for col in cols]
    m1, m2, m3 = _signed_minors(*cols)
    for col in cols:
        if not (m1 * col[0] - m2 * col[1] + m3 * col[2]).is_zero:
            raise ConstructionFailed(
                "signed minor row does not annihilate the columns")
    signed = (m1, -m2, m3)
    lam = _common_unit(c, n, N, signed)
    return RRes32(characteristic=c, n=n, N=N,
                  hb=_graded_from_columns(cols, N),
                  provenance=provenance, unit=lam, signed_minors=signed)


# ---------------------------------------------------------------------------
# route 1: N a multiple of n
# ---------------------------------------------------------------------------


def finite_res_multiple(c: int, n: int, a: int) -> RRes32:
    """The resolution for N = a*n: substitute X -> x^n, Y -> y^n into the
    Hilbert-Burch matrix of the two-variable triple.  The third row is
    scaled by (-1)^a so that all three signed minors reduce to the
    powers with one common scalar (x^n + y^n is -z^n in R)."""
    if n < 1 or a < 1:
        raise OutOfRange("n and a must be positive")
    N = a * n
    hbm = hb_matrix(a, c)
    sign = 1 if (a % 2 == 0 or c == 2) else -1
    cols = []
    for col in hbm.integer_columns:
        cols.append((
            _alpha(col[0], c, n),
            _alpha(col[1], c, n),
            _alpha(col[2], c, n) * sign,
        ))
    return _finish(c, n, N, cols, "power-substitution")


# ---------------------------------------------------------------------------
# route 2: characteristic two
# ---------------------------------------------------------------------------


def finite_res_char2(n: int, N: int) -> RRes32:
    """Characteristic-two resolution for any N >= n: with q = 2^e maximal
    such that q*n <= N and r = N - q*n, the matrix pairs the monomial
    column (y^r z^r, x^r z^r, x^r y^r) with the diagonal column of
    (N-2r)-th powers."""
    if n < 1:
        raise OutOfRange("n must be positive")
    if N < n:
        raise OutOfRange(
            f"characteristic-two construction needs n <= N, got n={n}, N={N}")
    e = 0
    while (2 ** (e + 1)) * n <= N:
        e += 1
    q = 2 ** e
    r = N - q * n
    if r < 0 or N - 2 * r < 0:  # pragma: no cover - maximal e prevents this
        raise OutOfRange(f"no admissible power split for n={n}, N={N}")
    P3 = ring_xyz(2)
    col1 = (_mono3(P3, 0, r, r), _mono3(P3, r, 0, r), _mono3(P3, r, r, 0))
    col2 = (_mono3(P3, N - 2 * r, 0, 0), _mono3(P3, 0, N - 2 * r, 0),
            _mono3(P3, 0, 0, N - 2 * r))
    return _finish(2, n, N, [col1, col2], "char2-frobenius-split")


# ---------------------------------------------------------------------------
# divisibility-shape emissions
# ---------------------------------------------------------------------------


def _emit_peeled(c: int, n: int, N: int, xi_col, eta_col) -> RRes32:
    """Emit from a relation column whose entries are divisible by X, Y,
    X+Y respectively (one factor is peeled off and traded for the
    residue r = N - a*n)."""
    peeled = (
        _divide_linear2(xi_col[0], 1, 0),
        _divide_linear2(xi_col[1], 0, 1),
        _divide_linear2(xi_col[2], 1, 1),
    )
    if any(p is None for p in peeled):
        raise ShapeNotFound(
            "column entries are not divisible by X, Y, X+Y respectively")
    a = _col_degree(xi_col) + _col_degree(eta_col)
    r = N - n * a
    if not 0 <= r <= n:
        raise ShapeNotFound(
            f"N={N} is not within n of the degree multiple {n * a}")
    # third-row signs (-1)^(a+1), (-1)^a make the three signed minors
    # reduce to one common scalar multiple of the diagonal powers
    s1, s2 = ((-1, 1) if a % 2 == 0 else (1, -1))
    P3 = ring_xyz(c)
    col1 = (
        _mono3(P3, n - r, 0, 0) * _alpha(peeled[0], c, n),
        _mono3(P3, 0, n - r, 0) * _alpha(peeled[1], c, n),
        _mono3(P3, 0, 0, n - r) * _alpha(peeled[2], c, n) * s1,
    )
    col2 = (
        _mono3(P3, 0, r, r) * _alpha(eta_col[0], c, n),
        _mono3(P3, r, 0, r) * _alpha(eta_col[1], c, n),
        _mono3(P3, r, r, 0) * _alpha(eta_col[2], c, n) * s2,
    )
    return _finish(c, n, N, [col1, col2], "peeled-relation")


def _emit_shape_plus(c: int, n: int, N: int, col_a, col_b) -> RRes32:
    """Emit from the shape [[F, X*I], [Y*G, J], [(X+Y)*H, K]] for
    N = n*a + r."""
    G = _divide_linear2(col_a[1], 0, 1)
    H = _divide_linear2(col_a[2], 1, 1)
    I = _divide_linear2(col_b[0], 1, 0)
    if G is None or H is None or I is None:
        raise ShapeNotFound("columns do not match the raising shape")
    a = _col_degree(col_a) + _col_degree(col_b)
    r = N - n * a
    if not 0 <= r <= n:
        raise ShapeNotFound(
            f"N={N} is not within n above the degree multiple {n * a}")
    s1, s2 = ((-1, 1) if a % 2 == 0 else (1, -1))
    P3 = ring_xyz(c)
    col1 = (
        _alpha(col_a[0], c, n),
        _mono3(P3, r, n - r, 0) * _alpha(G, c, n),
        _mono3(P3, r, 0, n - r) * _alpha(H, c, n) * s1,
    )
    col2 = (
        _mono3(P3, n - r, r, r) * _alpha(I, c, n),
        _mono3(P3, 0, 0, r) * _alpha(col_b[1], c, n),
        _mono3(P3, 0, r, 0) * _alpha(col_b[2], c, n) * s2,
    )
    return _finish(c, n, N, [col1, col2], "divisible-shape-raise")


def _emit_shape_minus(c: int, n: int, N: int, col_a, col_b) -> RRes32:
    """Emit from the shape [[Y(X+Y)*F, I], [(X+Y)*G, X*J], [Y*H, X*K]]
    for N = n*m - r (m the degree sum of the supplied matrix)."""
    F = None
    half = _divide_linear2(col_a[0], 0, 1)
    if half is not None:
        F = _divide_linear2(half, 1, 1)
    G = _divide_linear2(col_a[1], 1, 1)
    H = _divide_linear2(col_a[2], 0, 1)
    J = _divide_linear2(col_b[1], 1, 0)
    K = _divide_linear2(col_b[2], 1, 0)
    if F is None or G is None or H is None or J is None or K is None:
        raise ShapeNotFound("columns do not match the lowering shape")
    m = _col_degree(col_a) + _col_degree(col_b)
    r = n * m - N
    if not 0 <= r <= n:
        raise ShapeNotFound(
            f"N={N} is not within n below the degree multiple {n * m}")
    s1, s2 = ((-1, 1) if m % 2 == 0 else (1, -1))
    P3 = ring_xyz(c)
    col1 = (
        _mono3(P3, r, n - r, n - r) * _alpha(F, c, n),
        _mono3(P3, 0, 0, n - r) * _alpha(G, c, n),
        _mono3(P3, 0, n - r, 0) * _alpha(H, c, n) * s1,
    )
    col2 = (
        _alpha(col_b[0], c, n),
        _mono3(P3, n - r, r, 0) * _alpha(J, c, n),
        _mono3(P3, n - r, 0, r) * _alpha(K, c, n) * s2,
    )
    return _finish(c, n, N, [col1, col2], "divisible-shape-lower")


def finite_res_from_relation(c: int, n: int, N: int,
                             hbm: HilbertBurchMatrix) -> RRes32:
    """Emit a certified resolution from a supplied Hilbert-Burch matrix
    exhibiting one of the three recognized divisibility shapes (a fully
    divisible column, the raising shape, or the lowering shape)."""
    if not hbm.certify():
        raise ConstructionFailed(
            "supplied matrix fails its exact determinantal identity")
    cols = hbm.columns
    for i, j in ((0, 1), (1, 0)):
        try:
            return _emit_peeled(c, n, N, cols[i], cols[j])
        except ShapeNotFound:
            pass
    for i, j in ((0, 1), (1, 0)):
        try:
            return _emit_shape_plus(c, n, N, cols[i], cols[j])
        except ShapeNotFound:
            pass
    for i, j in ((0, 1), (1, 0)):
        try:
            return _emit_shape_minus(c, n, N, cols[i], cols[j])
        except ShapeNotFound:
            pass
    raise ShapeNotFound(
        "matrix exhibits none of the recognized divisibility shapes "
        f"for N={N}")


# ---------------------------------------------------------------------------
# graded lifting over the two relation columns
# ---------------------------------------------------------------------------


def _column_lift(rel, cols, graded: GradedRing):
    """Solve rel = f*cols[0] + g*cols[1] for homogeneous f, g.

    The relation columns form a free basis of the relation module, so
    the solution exists and is unique; the result is certified by exact
    polynomial arithmetic."""
    char = graded.characteristic
    if not char:
        raise ConstructionFailed("lifting is implemented over prime fields")
    target_deg = _col_degree(rel)
    degs = [target_deg - _col_degree(col) for col in cols]
    zero = Polynomial.zero(graded.base_ring)
    blocks = []
    for col, e in zip(cols, degs):
        if e < 0:
            continue
        graded.extend_cutoff(target_deg + 1)
        width = graded.dim(e)
        pieces = []
        for comp in range(3):
            if col[comp].is_zero:
                pieces.append(np.zeros((graded.dim(target_deg), width),
                                       dtype=np.int64))
            else:
                pieces.append(np.asarray(
                    graded.mult_matrix(col[comp], e), dtype=np.int64))
        blocks.append(np.vstack(pieces))
    if not blocks:
        raise ConstructionFailed("no admissible lifting degrees")
    A = np.hstack(blocks)
    b = np.concatenate([np.asarray(graded.poly_vec(rel[comp], target_deg),
                                   dtype=np.int64)
                        for comp in range(3)])
    ok, x = membership_field(A, b, char)
    if not ok:
        raise ConstructionFailed(
            "relation failed to lift over the Hilbert-Burch columns")
    out = []
    pos = 0
    for e in degs:
        if e < 0:
            out.append(zero)
            continue
        width = graded.dim(e)
        out.append(graded.to_poly([int(t) % char for t in x[pos:pos + width]],
                                  e))
        pos += width
    f, g = out
    for comp in range(3):
        if rel[comp] != f * cols[0][comp] + g * cols[1][comp]:
            raise ConstructionFailed("lift verification failed")
    return f, g


# ---------------------------------------------------------------------------
# route 3: unbalanced matrices (frame search and column surgery)
# ---------------------------------------------------------------------------


def _transform_columns(cols, a: int, frame, ring: Ring):
    """Push the columns through a linear substitution permuting the
    three forms; rows are repositioned and sign-corrected so the result
    is again a relation pair for the standard power triple."""
    (imgs, pi, eps) = frame
    X = Polynomial.variable(ring, "X")
    Y = Polynomial.variable(ring, "Y")
    img_x = X * imgs[0][0] + Y * imgs[0][1]
    img_y = X * imgs[1][0] + Y * imgs[1][1]
    out = []
    for col in cols:
        moved = [None, None, None]
        for i in range(3):
            moved[pi[i]] = _sub_linear(col[i], img_x, img_y) * (eps[i] ** a)
        out.append(tuple(moved))
    return out


def _renormalize(cols, a: int, c: int):
    """Rescale the second column so the signed minors are exactly the
    powers (prime characteristic)."""
    ring = None
    for col in cols:
        for entry in col:
            if not entry.is_zero:
                ring = entry.ring
                break
        if ring:
            break
    X, Y, XY = _lin_forms(ring)
    m1, _, _ = _signed_minors(*cols)
    u = m1.coefficient((a, 0))
    if u == 0:
        raise ConstructionFailed("transformed columns lost the minor form")
    inv = _finv(c, u)
    out = (cols[0], tuple(entry * inv for entry in cols[1]))
    n1, n2, n3 = _signed_minors(*out)
    if not (n1 == X ** a and -n2 == Y ** a and n3 == XY ** a):
        raise ConstructionFailed("renormalization failed")
    return out


def _avt_config(c, n, N, cols_a, cols_b, graded):
    """One configuration of the unbalanced-case search: lift both scaled
    columns of the next matrix, then apply the unit/zero case analysis."""
    ring = graded.base_ring
    X, Y, XY = _lin_forms(ring)
    lam3 = X * Y * XY
    rels = []
    for col in cols_b:
        rels.append((X * col[0], Y * col[1], XY * col[2]))
    f1, g1 = _column_lift(rels[0], cols_a, graded)
    f2, g2 = _column_lift(rels[1], cols_a, graded)
    if f1 * g2 - g1 * f2 != lam3:
        raise ConstructionFailed(
            "lift coefficients violate the determinant identity")
    for coeff, rel, other in ((g1, rels[0], cols_a[0]),
                              (f1, rels[0], cols_a[1]),
                              (g2, rels[1], cols_a[0]),
                              (f2, rels[1], cols_a[1])):
        if _is_unit(coeff):
            try:
                return _emit_peeled(c, n, N, rel, other)
            except ShapeNotFound:
                continue
    if not g1.is_zero or f1.is_zero:
        return None
    d1 = f1.homogeneous_degree()
    s = f2.homogeneous_degree() if not f2.is_zero else None
    cc = f2.coefficient((0, s)) if s is not None else 0
    if cc and (s is None or s < 3):
        raise ConstructionFailed(
            "secondary lift coefficient has an inadmissible pure power")
    if d1 == 1 and f1.coefficient((0, 1)) == 0:
        # primary coefficient is a multiple of X: raising shape on the
        # current matrix after one column correction
        lam = f1.coefficient((1, 0))
        t = Polynomial(ring, {(0, s - 2): lam * cc}) if cc else None
        new2 = tuple(cols_a[1][i] + t * cols_a[0][i] for i in range(3)) \
            if t is not None else cols_a[1]
        try:
            return _emit_shape_plus(c, n, N, cols_a[0], new2)
        except ShapeNotFound:
            return None
    if d1 == 2 and f1.coefficient((2, 0)) == 0:
        lam = f1.coefficient((1, 1))
        if lam == 0 or f1 != Y * XY * lam:
            return None
        # primary coefficient is a multiple of Y(X+Y): lowering shape on
        # the next matrix after one column correction
        t = Polynomial(ring, {(0, s - 2): cc * _finv(c, lam) % c}) \
            if cc else None
        new2 = tuple(cols_b[1][i] - t * cols_b[0][i] for i in range(3)) \
            if t is not None else cols_b[1]
        try:
            return _emit_shape_minus(c, n, N, cols_b[0], new2)
        except ShapeNotFound:
            return None
    return None


def _avt_route(c, n, N, hbm: HilbertBurchMatrix) -> RRes32:
    """Resolution when the Hilbert-Burch matrix is unbalanced: search
    the six form-permuting substitutions and column swaps for a
    configuration matching the unit or divisibility case analysis."""
    a = hbm.a
    hbn = hb_matrix(a + 1, c)
    graded = _graded_xy(c, 2 * a + 8)
    ring = graded.base_ring
    base_a = hbm.columns
    base_b = hbn.columns
    for frame in _FRAMES:
        fa = _renormalize(_transform_columns(base_a, a, frame, ring), a, c)
        fb = _renormalize(_transform_columns(base_b, a + 1, frame, ring),
                          a + 1, c)
        for swap_a in (False, True):
            ca = _renormalize((fa[1], fa[0]), a, c) if swap_a else fa
            for swap_b in (False, True):
                cb = _renormalize((fb[1], fb[0]), a + 1, c) if swap_b else fb
                try:
                    res = _avt_config(c, n, N, ca, cb, graded)
                except ConstructionFailed:
                    res = None
                if res is not None:
                    return res
    raise ConstructionFailed(
        f"no configuration of the unbalanced search succeeded for "
        f"({c}, {n}, {N})")


# ---------------------------------------------------------------------------
# route 4: balanced boundary cases (twisted relations)
# ---------------------------------------------------------------------------


def _boundary_witnesses(p: int, a: int):
    """Yield (J, q, j) with J odd, q = p^e, and a = J*q - j for the
    characteristic-dependent boundary offset j."""
    q = p
    while q <= (3 * a + 6) // 2 + 1:
        if p == 3:
            j = q // 3
        elif q % 3 == 2:
            j = (q + 1) // 3
        else:
            j = (q - 1) // 3
        if j >= 1 and (a + j) % q == 0:
            J = (a + j) // q
            if J >= 1 and J % 2 == 1:
                yield (J, q, j)
        q *= p
    return


def _boundary_route(c, n, N, hbm: HilbertBurchMatrix) -> RRes32:
    """Resolution at the balanced boundary: scale a low-degree relation
    of a smaller power triple by the q-power twist, multiply in the
    forms, and lift the result over the Hilbert-Burch columns."""
    a = hbm.a
    graded = _graded_xy(c, 2 * a + 8)
    ring = graded.base_ring
    X, Y, XY = _lin_forms(ring)
    forms = (X, Y, XY)
    powers = (X ** a, Y ** a, XY ** a)
    for J, q, j in _boundary_witnesses(c, a):
        chi = hb_matrix(J, c).columns[0]
        xi = tuple(forms[i] ** j * _frob(chi[i], q) for i in range(3))
        pair = powers[0] * xi[0] + powers[1] * xi[1] + powers[2] * xi[2]
        if not pair.is_zero:
            continue
        h1, h2 = _column_lift(xi, hbm.columns, graded)
        try:
            if _is_unit(h2):
                return _emit_peeled(c, n, N, xi, hbm.columns[0])
            if h2.is_zero:
                return _emit_peeled(c, n, N, hbm.columns[0], hbm.columns[1])
        except ShapeNotFound:
            continue
    raise ConstructionFailed(
        f"no boundary witness produced a divisible relation for "
        f"({c}, {n}, {N})")


# ---------------------------------------------------------------------------
# fallback and dispatcher
# ---------------------------------------------------------------------------


def _oracle_fallback(c, n, N) -> RRes32:
    """Last-resort direct syzygy solve over the hypersurface ring.  Any
    use of this route is flagged by its provenance: the constructive
    routes are expected to cover every finite case."""
    R3 = hypersurface_ring(c, n, cutoff=2 * N + n + 6)
    P3 = ring_xyz(c)
    powers = [_mono3(P3, N, 0, 0), _mono3(P3, 0, N, 0), _mono3(P3, 0, 0, N)]
    d1 = GradedMap(matrix=[powers], source=[-N] * 3, target=[0])
    syz = syzygy_step(d1, R3, cutoff=2 * N + 4)
    if syz.ncols != 2:
        raise ConstructionFailed(
            f"direct solve produced {syz.ncols} relation generators")
    cols = [tuple(syz.matrix[i][j] for i in range(3)) for j in range(2)]
    return _finish(c, n, N, cols, "oracle-fallback")


def finite_resolution(c: int, n: int, N: int) -> RRes32:
    """Certified 3-by-2 resolution matrix for any finite-projective-
    dimension triple (c, n, N); raises NotFinite otherwise."""
    _check_characteristic(c)
    verdict = pd_verdict(c, n, N)
    if not verdict.finite:
        raise NotFinite(
            f"({c}, {n}, {N}) has infinite projective dimension")
    a, r = divmod(N, n)
    if r == 0:
        return finite_res_multiple(c, n, a)
    if c == 2:
        return finite_res_char2(n, N)
    hbm = hb_matrix(a, c)
    try:
        if not hbm.balanced:
            return _avt_route(c, n, N, hbm)
        return _boundary_route(c, n, N, hbm)
    except ConstructionFailed:
        return _oracle_fallback(c, n, N)
