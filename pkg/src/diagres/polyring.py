"""Sparse exact multivariate polynomials and the closed-form families
used to build the infinite resolutions.

Polynomials are dictionaries from exponent tuples to nonzero
coefficients, over the integers (characteristic 0) or canonical
residues mod p.  The families:

* two-parameter alternating-sum polynomials in A, B;
* the three-variable odd/even combinations built from them;
* their translates lying in the ideal (A + B + C);
* the explicit quotient by A + B + C with rational closed-form
  coefficients, certified integral;
* the characteristic-dependent scale factor and unit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from sympy import isprime

from .classifier import in_S
from .errors import NonIntegralCoefficient, NonPrime, NonUnit, NotInS, RingMismatch
from .numeric import binom, padic_val

__all__ = [
    "Ring",
    "Polynomial",
    "ScaleData",
    "ring_ABC",
    "ring_xyz",
    "poly_arith",
    "poly_dab",
    "frakP",
    "bigP",
    "divide_by_linear",
    "H_poly",
    "q_closed",
    "l2b_check",
    "scale_data",
    "cal_R",
]


@dataclass(frozen=True)
class Ring:
    """Coefficient characteristic (0 or prime) plus ordered variable names."""

    characteristic: int
    variables: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.characteristic != 0 and not isprime(self.characteristic):
            raise NonPrime(f"characteristic must be 0 or prime, got {self.characteristic}")
        object.__setattr__(self, "variables", tuple(self.variables))

    def reduce(self, coeff: int) -> int:
        return coeff % self.characteristic if self.characteristic else coeff

    def index(self, name: str) -> int:
        return self.variables.index(name)


def ring_ABC(characteristic: int = 0) -> Ring:
    return Ring(characteristic, ("A", "B", "C"))


def ring_xyz(characteristic: int = 0) -> Ring:
    return Ring(characteristic, ("x", "y", "z"))


def _term_key(exp: tuple[int, ...]) -> tuple:
    return (sum(exp), exp)


class Polynomial:
    """Immutable sparse polynomial over a Ring."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: Ring, terms: dict[tuple[int, ...], int] | None = None):
        cleaned: dict[tuple[int, ...], int] = {}
        for exp, coeff in (terms or {}).items():
            coeff = ring.reduce(coeff)
            if isinstance(coeff, Fraction) and coeff.denominator == 1:
                coeff = int(coeff)
            if coeff:
                cleaned[tuple(exp)] = coeff
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", cleaned)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("Polynomial is immutable")

    # --- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, ring: Ring) -> "Polynomial":
        return cls(ring, {})

    @classmethod
    def constant(cls, ring: Ring, value: int) -> "Polynomial":
        return cls(ring, {(0,) * len(ring.variables): value})

    @classmethod
    def variable(cls, ring: Ring, name: str, power: int = 1, coeff: int = 1) -> "Polynomial":
        exp = [0] * len(ring.variables)
        exp[ring.index(name)] = power
        return cls(ring, {tuple(exp): coeff})

    # --- basic queries ----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int | None:
        if not self.terms:
            return None
        return max(sum(exp) for exp in self.terms)

    def homogeneous_degree(self) -> int | None:
        """Common total degree of all terms, or None (zero is homogeneous
        of every degree and reports None)."""
        degrees = {sum(exp) for exp in self.terms}
        if len(degrees) == 1:
            return degrees.pop()
        return None

    def coefficient(self, exp: tuple[int, ...]) -> int:
        return self.terms.get(tuple(exp), 0)

    def sorted_terms(self) -> list[tuple[tuple[int, ...], int]]:
        return sorted(self.terms.items(), key=lambda kv: _term_key(kv[0]), reverse=True)

    # --- arithmetic -------------------------------------------------------

    def _check_ring(self, other: "Polynomial") -> None:
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.ring, frozenset(self.terms.items())))

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check_ring(other)
        result = dict(self.terms)
        for exp, coeff in other.terms.items():
            result[exp] = result.get(exp, 0) + coeff
        return Polynomial(self.ring, result)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.ring, {exp: -coeff for exp, coeff in self.terms.items()})

    def __mul__(self, other: "Polynomial | int | Fraction") -> "Polynomial":
        if isinstance(other, Fraction):
            if self.ring.characteristic != 0:
                raise ValueError("rational scalars only over characteristic 0")
            return Polynomial(self.ring, {exp: coeff * other for exp, coeff in self.terms.items()})
        if isinstance(other, int):
            return Polynomial(self.ring, {exp: coeff * other for exp, coeff in self.terms.items()})
        self._check_ring(other)
        result: dict[tuple[int, ...], int] = {}
        for exp1, c1 in self.terms.items():
            for exp2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(exp1, exp2))
                result[exp] = result.get(exp, 0) + c1 * c2
        return Polynomial(self.ring, result)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Polynomial":
        if exponent < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.ring, 1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base if exponent > 1 else base
            exponent >>= 1
        return result

    def scalar_divide(self, k: int) -> "Polynomial":
        """Exact division of every coefficient by the integer k."""
        if k == 0:
            raise ZeroDivisionError("scalar_divide by zero")
        result = {}
        for exp, coeff in self.terms.items():
            if self.ring.characteristic:
                inv = pow(k % self.ring.characteristic, -1, self.ring.characteristic)
                result[exp] = coeff * inv
            else:
                q, rem = divmod(coeff, k)
                if rem:
                    raise NonIntegralCoefficient(f"coefficient {coeff} not divisible by {k}")
                result[exp] = q
        return Polynomial(self.ring, result)

    def substitute_powers(
        self,
        target_ring: Ring,
        mapping: dict[str, tuple[str, int]],
    ) -> "Polynomial":
        """Map each source variable to a power of a target variable.

        mapping: source variable name -> (target variable name, power).
        Every variable occurring in a term must be mapped.
        """
        width = len(target_ring.variables)
        positions = {
            name: (target_ring.index(tgt), power) for name, (tgt, power) in mapping.items()
        }
        result: dict[tuple[int, ...], int] = {}
        for exp, coeff in self.terms.items():
            new_exp = [0] * width
            for var_idx, e in enumerate(exp):
                if e == 0:
                    continue
                name = self.ring.variables[var_idx]
                if name not in positions:
                    raise RingMismatch(f"variable {name} has no substitution")
                tgt_idx, power = positions[name]
                new_exp[tgt_idx] += e * power
            key = tuple(new_exp)
            result[key] = result.get(key, 0) + coeff
        return Polynomial(target_ring, result)

    def map_coefficients(self, target_ring: Ring) -> "Polynomial":
        """Reinterpret over a ring with the same variables (e.g. reduce mod p)."""
        if target_ring.variables != self.ring.variables:
            raise RingMismatch("variable lists differ")
        return Polynomial(target_ring, dict(self.terms))

    # --- presentation -----------------------------------------------------

    def to_obj(self) -> list[dict]:
        return [
            {"coeff": str(coeff), "exp": list(exp)}
            for exp, coeff in self.sorted_terms()
        ]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        chunks = []
        for exp, coeff in self.sorted_terms():
            factors = []
            for name, e in zip(self.ring.variables, exp):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            body = "*".join(factors)
            if not body:
                piece = str(abs(coeff))
            elif abs(coeff) == 1:
                piece = body
            else:
                piece = f"{abs(coeff)}*{body}"
            sign = "-" if coeff < 0 else "+"
            chunks.append((sign, piece))
        first_sign, first_piece = chunks[0]
        out = ("-" if first_sign == "-" else "") + first_piece
        for sign, piece in chunks[1:]:
            out += f" {sign} {piece}"
        return out

    __repr__ = __str__


def poly_arith(op: str, *args) -> Polynomial:
    """Dispatcher over the basic operations (add, mul, negate, scale,
    substitute_powers); the Polynomial methods are the primary API."""
    if op == "add":
        return args[0] + args[1]
    if op == "mul":
        return args[0] * args[1]
    if op == "negate":
        return -args[0]
    if op == "scale":
        return args[0] * args[1]
    if op == "substitute_powers":
        return args[0].substitute_powers(args[1], args[2])
    raise ValueError(f"unknown operation {op!r}")


_ZZ_AB = Ring(0, ("A", "B"))
_ZZ_ABC = ring_ABC(0)


def _dab_terms(d: int, a: int, b: int, i1: int, i2: int, width: int) -> dict:
    """Terms of the two-parameter alternating sum with its variables
    placed at positions i1, i2 of a width-wide exponent tuple."""
    terms: dict[tuple[int, ...], int] = {}
    for i in range(d + 1):
        coeff = (-1) ** (i % 2) * binom(a + d - i, a) * binom(b + i, b)
        exp = [0] * width
        exp[i1] += d - i
        exp[i2] += i
        key = tuple(exp)
        terms[key] = terms.get(key, 0) + coeff
    return terms


def poly_dab(d: int, a: int, b: int) -> Polynomial:
    """Sum_{i=0}^{d} (-1)^i binom(a+d-i, a) binom(b+i, b) A^{d-i} B^i
    over the integers; zero when d < 0 (empty-sum convention)."""
    if a < 0 or b < 0:
        raise ValueError("a and b must be non-negative")
    if d < 0:
        return Polynomial.zero(_ZZ_AB)
    return Polynomial(_ZZ_AB, _dab_terms(d, a, b, 0, 1, 2))


def _dab3(d: int, a: int, b: int, v1: str, v2: str) -> Polynomial:
    """The same family embedded in ZZ[A,B,C] with chosen arguments."""
    if d < 0:
        return Polynomial.zero(_ZZ_ABC)
    return Polynomial(_ZZ_ABC, _dab_terms(d, a, b, _ZZ_ABC.index(v1), _ZZ_ABC.index(v2), 3))


def frakP(theta: int) -> Polynomial:
    """The three-variable combination: odd index 2*delta-1 or even 2*delta."""
    if theta < 0:
        raise ValueError("theta must be non-negative")
    A = Polynomial.variable(_ZZ_ABC, "A")
    B = Polynomial.variable(_ZZ_ABC, "B")
    C = Polynomial.variable(_ZZ_ABC, "C")
    if theta % 2 == 1:
        delta = (theta + 1) // 2
        sign = (-1) ** (delta % 2)
        # the same family throughout; only the arguments vary
        p_ab = _dab3(delta - 1, delta, delta - 1, "A", "B")
        p_ac = _dab3(delta - 1, delta, delta - 1, "A", "C")
        p_ba = _dab3(delta - 1, delta, delta - 1, "B", "A")
        p_ca = _dab3(delta - 1, delta, delta - 1, "C", "A")
        return sign * (A * p_ab * p_ac) + B * p_ba * p_ac + C * p_ab * p_ca
    delta = theta // 2
    sign = (-1) ** ((delta + 1) % 2)
    p2_ab = _dab3(delta, delta, delta, "A", "B")
    p2_ac = _dab3(delta, delta, delta, "A", "C")
    p3_ba = _dab3(delta - 1, delta, delta, "B", "A")
    p3_ca = _dab3(delta - 1, delta, delta, "C", "A")
    return sign * (p2_ab * p2_ac) + B * p3_ba * p2_ac + C * p2_ab * p3_ca


def _unit_theta(theta: int) -> int:
    """The signed binomial product attached to A^theta (unscaled)."""
    delta = (theta + 1) // 2
    if theta % 2 == 1:
        return (-1) ** ((delta + 1) % 2) * binom(2 * delta, delta) * binom(3 * delta - 1, delta - 1)
    return (-1) ** (delta % 2) * binom(2 * delta, delta) * binom(3 * delta, delta)


def bigP(theta: int) -> Polynomial:
    """frakP(theta) plus the signed binomial multiple of A^theta; lies in
    the ideal (A+B+C)."""
    if theta < 1:
        raise ValueError("theta must be positive")
    A_pow = Polynomial.variable(_ZZ_ABC, "A", theta)
    return frakP(theta) + _unit_theta(theta) * A_pow


def divide_by_linear(f: Polynomial) -> tuple[Polynomial, Polynomial]:
    """Write f = (V0+V1+V2) * quotient + remainder, remainder free of V0.

    Synthetic division in the first variable with V0 := -(V1+V2);
    the remainder is f evaluated at that substitution.
    """
    ring = f.ring
    if len(ring.variables) != 3:
        raise RingMismatch("divide_by_linear needs a three-variable ring")
    # collect coefficients of powers of the first variable
    by_power: dict[int, dict[tuple[int, ...], int]] = {}
    for exp, coeff in f.terms.items():
        k = exp[0]
        rest = (0,) + exp[1:]
        by_power.setdefault(k, {})[rest] = coeff
    if not by_power:
        return Polynomial.zero(ring), Polynomial.zero(ring)
    top = max(by_power)
    minus_s = Polynomial(
        ring,
        {(0, 1, 0): -1, (0, 0, 1): -1},
    )
    # Horner: b_top = c_top; b_k = c_k + (-(V1+V2)) * b_{k+1}
    acc = Polynomial.zero(ring)
    quotient = Polynomial.zero(ring)
    for k in range(top, -1, -1):
        c_k = Polynomial(ring, by_power.get(k, {}))
        acc = c_k + minus_s * acc
        if k >= 1:
            quotient = quotient + Polynomial.variable(ring, ring.variables[0], k - 1) * acc
    # after the loop acc holds the remainder f(-(V1+V2), V1, V2)
    return quotient, acc


def H_poly(d: int, delta: int) -> Polynomial:
    """Sum_{i=0}^{d} (-1)^i binom(2*delta-1-i, d-i) binom(d+i, d) A^{d-i} B^i."""
    if d < 0:
        raise ValueError("d must be non-negative")
    if delta < 1:
        raise ValueError("delta must be positive")
    terms: dict[tuple[int, ...], int] = {}
    for i in range(d + 1):
        coeff = (-1) ** (i % 2) * binom(2 * delta - 1 - i, d - i) * binom(d + i, d)
        key = (d - i, i)
        if coeff:
            terms[key] = terms.get(key, 0) + coeff
    return Polynomial(_ZZ_AB, terms)


def _H3(d: int, delta: int, v2: str) -> Polynomial:
    """H_poly with arguments (A, v2) inside ZZ[A,B,C]."""
    h = H_poly(d, delta)
    return h.substitute_powers(_ZZ_ABC, {"A": ("A", 1), "B": (v2, 1)})


def q_closed(delta: int) -> Polynomial:
    """Closed-form quotient of bigP(2*delta-1) by (A+B+C).

    Built with exact rational coefficients, then certified integral and
    certified to satisfy (A+B+C) * result = bigP(2*delta-1).
    """
    if delta < 1:
        raise ValueError("delta must be positive")
    acc: dict[tuple[int, ...], Fraction] = {}
    sign = (-1) ** ((delta + 1) % 2)
    for d in range(delta):
        scale = Fraction(
            binom(3 * delta - 1, 2 * delta + d) * binom(2 * delta - d - 1, delta) * (2 * d + 1),
            delta * binom(delta - 1, d) ** 2,
        )
        prod = _H3(d, delta, "B") * _H3(d, delta, "C")
        shift = 2 * (delta - d - 1)
        for exp, coeff in prod.terms.items():
            key = (exp[0] + shift, exp[1], exp[2])
            acc[key] = acc.get(key, Fraction(0)) + sign * scale * coeff
    int_terms: dict[tuple[int, ...], int] = {}
    for exp, coeff in acc.items():
        if coeff == 0:
            continue
        if coeff.denominator != 1:
            raise NonIntegralCoefficient(f"coefficient {coeff} at {exp}")
        int_terms[exp] = int(coeff)
    result = Polynomial(_ZZ_ABC, int_terms)
    linear = Polynomial(_ZZ_ABC, {(1, 0, 0): 1, (0, 1, 0): 1, (0, 0, 1): 1})
    if linear * result != bigP(2 * delta - 1):
        raise NonIntegralCoefficient(f"product certification failed at delta={delta}")
    return result


def l2b_check(delta: int) -> bool:
    """Whether the even/odd linking identity vanishes identically."""
    if delta < 1:
        raise ValueError("delta must be positive")
    A = Polynomial.variable(_ZZ_ABC, "A")
    linear = Polynomial(_ZZ_ABC, {(1, 0, 0): 1, (0, 1, 0): 1, (0, 0, 1): 1})
    sign = (-1) ** (delta % 2)
    expr = (
        bigP(2 * delta)
        + 3 * (A * bigP(2 * delta - 1))
        + sign * (A * linear * _dab3(delta - 1, delta, delta, "A", "B") * _dab3(delta - 1, delta, delta, "A", "C"))
    )
    return expr.is_zero


@dataclass(frozen=True)
class ScaleData:
    """Characteristic-dependent scale factor and unit for index theta.

    delta_or_d is the half-index: delta = (theta+1)//2 in general, but
    the characteristic-3 odd case is presented via d = delta - 1 with
    its own power-of-3 scale Gamma (numerically equal to gamma).
    """

    theta: int
    delta_or_d: int
    gamma: int
    Gamma: int
    unit: int


def scale_data(c: int, theta: int) -> ScaleData:
    """Scale factor gamma and unit u_theta for the admissible index theta."""
    if theta < 0 or not in_S(c, theta):
        raise NotInS(f"theta={theta} is not admissible in characteristic {c}")
    delta = (theta + 1) // 2
    if c in (0, 2):
        gamma = 1
    else:
        v = padic_val(binom(2 * delta, delta), c)
        gamma = c ** v.value if not v.is_infinite else 1
    unit_raw = _unit_theta(theta)
    quotient, rem = divmod(unit_raw, gamma * gamma)
    if rem:
        raise NonUnit(f"unit {unit_raw} not divisible by gamma^2={gamma * gamma}")
    if c == 0:
        if quotient == 0:
            raise NonUnit("zero unit in characteristic 0")
    elif quotient % c == 0:
        raise NonUnit(f"unit {quotient} vanishes mod {c}")
    if c == 3 and theta % 2 == 1:
        return ScaleData(theta=theta, delta_or_d=delta - 1, gamma=gamma, Gamma=gamma, unit=quotient)
    return ScaleData(theta=theta, delta_or_d=delta, gamma=gamma, Gamma=1, unit=quotient)


def cal_R(c: int, theta: int) -> Polynomial:
    """Exact quotient ((frakP(theta)/gamma^2) + unit * A^theta) / (A+B+C).

    Integral over ZZ; the resolver substitutes powers of x, y, z into it.
    """
    data = scale_data(c, theta)
    g2 = data.gamma * data.gamma
    scaled = frakP(theta).scalar_divide(g2)
    numerator = scaled + data.unit * Polynomial.variable(_ZZ_ABC, "A", theta) if theta > 0 else (
        scaled + Polynomial.constant(_ZZ_ABC, data.unit)
    )
    quotient, rem = divide_by_linear(numerator)
    if not rem.is_zero:
        raise NonIntegralCoefficient(f"scaled numerator not divisible by A+B+C at (c={c}, theta={theta})")
    return quotient
