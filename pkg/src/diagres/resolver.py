"""Explicit graded resolutions for diagonal-power quotients of infinite
projective dimension.

Everything in this module flows from one certified identity.  For each
admissible parameter triple the code assembles a 4x4 alternating matrix
``phi`` whose Pfaffian is the hypersurface equation f = x^n + y^n + z^n,
a 3x4 polynomial matrix ``psi``, a 3x3 alternating correction ``Phi``,
and a scalar unit u satisfying

    psi * adjoint(phi) * psi^T  +  f * Phi  =  u * K,

where K is the 3x3 alternating matrix whose maximal-order Pfaffians are
x^N, y^N, z^N.  The identity is re-certified by full expansion for every
witness handed out.  All downstream objects -- the 7x7 alternating block
matrix, the colon-ideal generators, the self-dual length-3 resolution of
the colon quotient, the length-3 resolution of Q over the polynomial
ring, the eventually two-periodic resolution of Q over the hypersurface
ring, the socle degrees, and the presentation of the second syzygy --
are assembled from the certified witness and re-checked structurally
(graded homogeneity on construction, last three Pfaffians equal to
u * (x^N, y^N, z^N)).
"""

from __future__ import annotations

from dataclasses import dataclass

from .classifier import pd_verdict
from .errors import (
    ConstructionFailed,
    CritFailed,
    NotInfinite,
    SizeMismatch,
)
from .pfaffian import (
    AlternatingMatrix,
    assemble_block,
    check_adjoint,
    mat_mul,
    mat_transpose,
    pf_minor,
    phi_rs,
)
from .polyring import Polynomial, Ring, cal_R, poly_dab, ring_xyz, scale_data

__all__ = [
    "GradedMap",
    "PeriodicTail",
    "GradedResolution",
    "CritWitness",
    "build_witness",
    "assemble_d2",
    "colon_generators",
    "gorenstein_resolution",
    "p_resolution",
    "r_resolution",
    "socle_degrees",
    "second_syzygy",
]


# --------------------------------------------------------------------------
# graded carriers


@dataclass(frozen=True)
class GradedMap:
    """Matrix of a degree-zero map between graded free modules.

    ``source`` and ``target`` hold the twists of the free summands (a
    generator of degree d has twist -d), so every nonzero entry at
    (i, j) must be homogeneous of degree target[i] - source[j]; this is
    validated on construction.  Rows are indexed by the target, columns
    by the source.
    """

    matrix: list[list[Polynomial]]
    source: list[int]
    target: list[int]

    def __post_init__(self) -> None:
        if len(self.matrix) != len(self.target) and not (
                not self.source and not self.matrix):
            raise SizeMismatch(
                f"{len(self.matrix)} rows for {len(self.target)} target twists")
        for i, row in enumerate(self.matrix):
            if len(row) != len(self.source):
                raise SizeMismatch(
                    f"row {i} has {len(row)} entries for "
                    f"{len(self.source)} source twists")
            for j, entry in enumerate(row):
                if entry.is_zero:
                    continue
                want = self.target[i] - self.source[j]
                if entry.homogeneous_degree() != want:
                    raise SizeMismatch(
                        f"entry ({i},{j}) = {entry} is not homogeneous of "
                        f"degree {want}")

    @property
    def nrows(self) -> int:
        return len(self.target)

    @property
    def ncols(self) -> int:
        return len(self.source)

    @property
    def ring(self) -> Ring | None:
        for row in self.matrix:
            for entry in row:
                return entry.ring
        return None

    def twist(self, shift: int) -> "GradedMap":
        """The same matrix with ``shift`` added to every twist."""
        return GradedMap(matrix=[list(row) for row in self.matrix],
                         source=[s + shift for s in self.source],
                         target=[t + shift for t in self.target])

    def compose(self, other: "GradedMap") -> "GradedMap":
        """Matrix product self @ other (apply ``other`` first)."""
        if self.source != other.target:
            raise SizeMismatch(
                f"cannot compose: inner twists {self.source} != {other.target}")
        ring = self.ring or other.ring
        if ring is None and self.nrows and other.ncols:
            raise SizeMismatch("cannot compose maps with no entries at all")
        zero = Polynomial.zero(ring) if ring is not None else None
        out = []
        for i in range(self.nrows):
            row = []
            for j in range(other.ncols):
                acc = zero
                for k in range(self.ncols):
                    acc = acc + self.matrix[i][k] * other.matrix[k][j]
                row.append(acc)
            out.append(row)
        return GradedMap(matrix=out, source=list(other.source),
                         target=list(self.target))

    def is_minimal(self) -> bool:
        """No nonzero entry of degree zero (no unit entries)."""
        return all(entry.is_zero or entry.homogeneous_degree() > 0
                   for row in self.matrix for entry in row)

    def is_zero(self) -> bool:
        return all(entry.is_zero for row in self.matrix for entry in row)

    def to_obj(self) -> dict:
        return {
            "matrix": [[entry.to_obj() for entry in row]
                       for row in self.matrix],
            "source": list(self.source),
            "target": list(self.target),
        }


@dataclass(frozen=True)
class PeriodicTail:
    """Two maps that repeat forever, each period shifted by a twist."""

    maps: tuple[GradedMap, GradedMap]
    period_shift: int

    def to_obj(self) -> dict:
        return {"maps": [[[e.to_obj() for e in row] for row in m.matrix]
                         for m in self.maps],
                "period_shift": self.period_shift}


@dataclass(frozen=True)
class GradedResolution:
    """A finite (or eventually periodic) complex of graded free modules.

    ``maps[0]`` maps into the augmented module; ``modulus`` nonzero means
    all compositions are to vanish modulo that hypersurface equation.
    ``tail``, when present, extends the listed maps two-periodically: the
    last two listed maps repeat with ``tail.period_shift`` added to all
    twists per period.
    """

    target: str
    maps: list[GradedMap]
    modulus: Polynomial | None = None
    minimal: bool = True
    tail: PeriodicTail | None = None

    def modules(self) -> list[list[int]]:
        """Twist lists, starting with the augmented free module."""
        out = [list(self.maps[0].target)]
        out.extend(list(m.source) for m in self.maps)
        return out

    def map_at(self, step: int) -> GradedMap:
        """The map at position ``step`` (1-based), following the tail."""
        if step < 1:
            raise ValueError("step must be positive")
        if step <= len(self.maps):
            return self.maps[step - 1]
        if self.tail is None:
            raise ValueError(f"resolution has length {len(self.maps)}")
        base = len(self.maps) - 2 + ((step - len(self.maps) - 1) % 2)
        periods = (step - base - 1) // 2
        return self.maps[base].twist(self.tail.period_shift * periods)

    def _reducer(self):
        if self.modulus is None:
            return lambda p: p.is_zero
        from .oracle import GradedRing
        ring = self.modulus.ring
        modring = GradedRing(ring.characteristic, ring.variables,
                             relation=self.modulus, cutoff=4)
        return lambda p: not modring.nf_terms(p)

    def verify(self, extra_steps: int = 2) -> bool:
        """All consecutive compositions vanish (modulo the modulus) and,
        if flagged minimal, no map carries a unit entry.  ``extra_steps``
        periodic steps beyond the listed maps are checked as well."""
        is_zero = self._reducer()
        total = len(self.maps) + (extra_steps if self.tail else 0)
        for step in range(1, total):
            prod = self.map_at(step).compose(self.map_at(step + 1))
            if not all(is_zero(entry) for row in prod.matrix for entry in row):
                return False
        if self.minimal and not all(m.is_minimal() for m in self.maps):
            return False
        return True

    def to_obj(self) -> dict:
        return {
            "target": self.target,
            "modules": self.modules(),
            "maps": [[[e.to_obj() for e in row] for row in m.matrix]
                     for m in self.maps],
            "minimal": self.minimal,
            "tail": None if self.tail is None else self.tail.to_obj(),
        }


# --------------------------------------------------------------------------
# the certified witness


@dataclass(frozen=True)
class CritWitness:
    """Certified data (phi, psi, Phi, unit) for one parameter triple.

    ``case`` records the parity of theta and whether the
    characteristic-3 presentation applies; the defining identity
    psi * adjoint(phi) * psi^T + f * Phi = unit * K has been verified by
    expansion before the witness is handed out.
    """

    phi: AlternatingMatrix
    psi: list[list[Polynomial]]
    Phi: AlternatingMatrix
    unit: int
    case: str
    characteristic: int
    n: int
    N: int
    theta: int
    delta: int
    r: int

    def hypersurface(self) -> Polynomial:
        """f = x^n + y^n + z^n over the witness coefficient ring."""
        ring = self.phi.ring
        return (Polynomial.variable(ring, "x", self.n)
                + Polynomial.variable(ring, "y", self.n)
                + Polynomial.variable(ring, "z", self.n))

    def power_matrix(self) -> AlternatingMatrix:
        """The 3x3 alternating K with maximal Pfaffians x^N, y^N, z^N."""
        return _koszul_matrix(self.phi.ring, self.N)

    def power_row(self) -> list[Polynomial]:
        ring = self.phi.ring
        return [Polynomial.variable(ring, v, self.N) for v in ("x", "y", "z")]


def _koszul_matrix(ring: Ring, N: int) -> AlternatingMatrix:
    return AlternatingMatrix.from_upper(ring, 3, {
        (1, 2): Polynomial.variable(ring, "z", N),
        (1, 3): -Polynomial.variable(ring, "y", N),
        (2, 3): Polynomial.variable(ring, "x", N),
    })


def _crit_defect(w: CritWitness) -> list[list[Polynomial]]:
    """psi * adjoint(phi) * psi^T + f*Phi - unit*K, entry by entry."""
    middle = mat_mul(mat_mul(w.psi, check_adjoint(w.phi).entries),
                     mat_transpose(w.psi))
    f = w.hypersurface()
    K = w.power_matrix()
    return [[middle[i][j] + f * w.Phi.entries[i][j]
             - w.unit * K.entries[i][j] for j in range(3)] for i in range(3)]


def build_witness(c: int, n: int, N: int) -> CritWitness:
    """Construct and certify the witness for an Infinite triple.

    The two theta parities use different closed-form matrices; the
    characteristic-3 odd case is numerically identical to the general
    odd case after rescaling, and is tagged for reporting.  The even
    parity stores the negated correction and unit so that a single
    identity shape serves both parities.
    """
    verdict = pd_verdict(c, n, N)
    if verdict.kind != "Infinite":
        raise NotInfinite(
            f"(c={c}, n={n}, N={N}) has finite projective dimension")
    theta, r = verdict.theta, verdict.r
    delta = (theta + 1) // 2
    ring = ring_xyz(c)
    data = scale_data(c, theta)
    gamma = data.gamma
    zero = Polynomial.zero(ring)

    def scaled_pair(d: int, a: int, b: int, v1: str, v2: str) -> Polynomial:
        """Poly(d,a,b)/gamma evaluated at (v1^n, v2^n); zero for d < 0."""
        p = poly_dab(d, a, b)
        if gamma > 1:
            p = p.scalar_divide(gamma)
        return p.substitute_powers(ring, {"A": (v1, n), "B": (v2, n)})

    quot = cal_R(c, theta)

    def correction(v1: str, v2: str, v3: str) -> Polynomial:
        sub = quot.substitute_powers(
            ring, {"A": (v1, n), "B": (v2, n), "C": (v3, n)})
        return Polynomial.variable(ring, v1, r) * sub

    phi_upper = {(1, 2): correction("z", "x", "y"),
                 (1, 3): -correction("y", "x", "z"),
                 (2, 3): correction("x", "y", "z")}

    if theta % 2 == 1:
        phi = phi_rs(r, n - r, ring)
        sgn = 1 if (delta - 1) % 2 == 0 else -1

        def col_entry(v1: str, v2: str) -> Polynomial:
            return (Polynomial.variable(ring, v1, r)
                    * scaled_pair(delta - 1, delta, delta - 1, v1, v2))

        psi = [
            [zero, sgn * col_entry("z", "y"), col_entry("y", "z"), zero],
            [col_entry("z", "x"), zero, sgn * col_entry("x", "z"), zero],
            [sgn * col_entry("y", "x"), col_entry("x", "y"), zero, zero],
        ]
        Phi = AlternatingMatrix.from_upper(ring, 3, phi_upper)
        unit = data.unit
    else:
        phi = phi_rs(n - r, r, ring)
        sgn = 1 if delta % 2 == 0 else -1

        def diag_entry(v1: str, v2: str) -> Polynomial:
            return scaled_pair(delta, delta, delta, v1, v2)

        def last_entry(v1: str, v2: str) -> Polynomial:
            return (Polynomial.variable(ring, v1, r)
                    * Polynomial.variable(ring, v2, r)
                    * scaled_pair(delta - 1, delta, delta, v1, v2))

        psi = [
            [diag_entry("y", "z"), zero, zero, last_entry("y", "z")],
            [zero, sgn * diag_entry("x", "z"), zero,
             -sgn * last_entry("x", "z")],
            [zero, zero, diag_entry("x", "y"), last_entry("x", "y")],
        ]
        # store the negated correction and unit so the one identity
        # psi adj(phi) psi^T + f Phi = unit K covers this parity too
        Phi = AlternatingMatrix.from_upper(
            ring, 3, {k: -v for k, v in phi_upper.items()})
        unit = -data.unit

    case = ("odd" if theta % 2 else "even") + ("-char3" if c == 3 else "")
    witness = CritWitness(phi=phi, psi=psi, Phi=Phi, unit=unit, case=case,
                          characteristic=c, n=n, N=N, theta=theta,
                          delta=delta, r=r)
    defect = _crit_defect(witness)
    if any(not entry.is_zero for row in defect for entry in row):
        raise CritFailed(
            f"witness identity fails at (c={c}, n={n}, N={N}): "
            f"defect {defect}")
    return witness


# --------------------------------------------------------------------------
# the 7x7 block matrix and the colon ideal


def assemble_d2(w: CritWitness) -> AlternatingMatrix:
    """The 7x7 alternating block [[phi, psi^T], [-psi, Phi]], with its
    last three maximal Pfaffians certified equal to unit * (x,y,z)^N."""
    block = assemble_block(w.phi, w.psi, w.Phi)
    for ell, power in enumerate(w.power_row(), start=1):
        if pf_minor(block, 4 + ell) != w.unit * power:
            raise ConstructionFailed(
                f"maximal Pfaffian {4 + ell} differs from the scaled "
                f"power at (c={w.characteristic}, n={w.n}, N={w.N})")
    return block


def colon_generators(c: int, n: int, N: int) -> list[Polynomial]:
    """The seven maximal-order Pfaffians of the block matrix; they
    generate the colon ideal (x^N, y^N, z^N) : (x^n + y^n + z^n)."""
    w = build_witness(c, n, N)
    block = assemble_d2(w)
    return [pf_minor(block, i) for i in range(1, 8)]


def _colon_degrees(theta: int, delta: int, n: int, r: int) -> list[int]:
    """Degrees of the first four colon generators (the last three have
    degree N)."""
    if theta % 2 == 1:
        return [3 * delta * n - 2 * n + r] * 3 + [3 * delta * n - 3 * n + 3 * r]
    return [3 * delta * n - n + 2 * r] * 3 + [3 * delta * n]


def _dual_shift(theta: int, delta: int, n: int, r: int) -> int:
    """Twist of the last module in the self-dual length-3 resolution."""
    if theta % 2 == 1:
        return 6 * delta * n - 4 * n + 3 * r
    return 6 * delta * n - n + 3 * r


# --------------------------------------------------------------------------
# resolutions


def gorenstein_resolution(c: int, n: int, N: int) -> GradedResolution:
    """The self-dual resolution 0 -> P -> P^7 -> P^7 -> P of the
    quotient by the colon ideal, over the polynomial ring."""
    w = build_witness(c, n, N)
    block = assemble_d2(w)
    bgens = [pf_minor(block, i) for i in range(1, 5)]
    scaled_powers = [w.unit * p for p in w.power_row()]
    adegs = _colon_degrees(w.theta, w.delta, n, w.r) + [N] * 3
    sigma = _dual_shift(w.theta, w.delta, n, w.r)

    d1 = GradedMap(matrix=[bgens + scaled_powers],
                   source=[-a for a in adegs], target=[0])
    d2 = GradedMap(matrix=block.grid(),
                   source=[a - sigma for a in adegs],
                   target=[-a for a in adegs])
    d3 = GradedMap(matrix=[[g] for g in bgens + scaled_powers],
                   source=[-sigma], target=[a - sigma for a in adegs])
    minimal = w.theta >= 1
    return GradedResolution(
        target="polynomial-ring quotient by the colon ideal",
        maps=[d1, d2, d3], modulus=None, minimal=minimal)


def _psi_adjoint(w: CritWitness) -> list[list[Polynomial]]:
    return mat_mul(w.psi, check_adjoint(w.phi).entries)


def _p_twists(w: CritWitness, n: int, N: int) -> tuple[list[int], list[int]]:
    """Source twists of the middle and last modules of the length-3
    resolution over the polynomial ring."""
    dn, r, delta = w.delta * n, w.r, w.delta
    if w.theta % 2 == 1:
        mid = [-(3 * dn - n + r)] * 3 + [-(3 * dn - 2 * n + 3 * r)]
        last = [-(3 * dn - n + 2 * r)] * 3 + [-3 * dn]
    else:
        mid = [-(3 * dn + 2 * r)] * 3 + [-(3 * dn + n)]
        last = [-(3 * dn + n + r)] * 3 + [-(3 * dn + 3 * r)]
    return mid + [-(N + n)] * 3, last


def p_resolution(c: int, n: int, N: int) -> GradedResolution:
    """Minimal length-3 resolution of Q over the polynomial ring.

    For theta = 0 the hypersurface equation is a redundant generator of
    the defining ideal and the minimal resolution is the Koszul complex
    on the three pure powers; otherwise the witness machinery applies.
    """
    w = build_witness(c, n, N)
    ring = w.phi.ring
    zero = Polynomial.zero(ring)
    powers = w.power_row()
    if w.theta == 0:
        K = _koszul_matrix(ring, N)
        k1 = GradedMap(matrix=[powers], source=[-N] * 3, target=[0])
        k2 = GradedMap(matrix=K.grid(), source=[-2 * N] * 3,
                       target=[-N] * 3)
        k3 = GradedMap(matrix=[[p] for p in powers], source=[-3 * N],
                       target=[-2 * N] * 3)
        return GradedResolution(
            target="diagonal-power quotient over the polynomial ring",
            maps=[k1, k2, k3], modulus=None, minimal=True)

    f = w.hypersurface()
    block = assemble_d2(w)
    bgens = [pf_minor(block, i) for i in range(1, 5)]
    pa = _psi_adjoint(w)
    u = w.unit

    f1 = GradedMap(matrix=[powers + [f]],
                   source=[-N] * 3 + [-n], target=[0])
    mid, last = _p_twists(w, n, N)
    f2_rows = [[u * pa[i][j] for j in range(4)]
               + [f if i == k else zero for k in range(3)]
               for i in range(3)]
    f2_rows.append([-b for b in bgens] + [-p for p in powers])
    f2 = GradedMap(matrix=f2_rows, source=mid, target=[-N] * 3 + [-n])
    f3_rows = [list(row) for row in w.phi.entries]
    f3_rows.extend([[-u * w.psi[i][j] for j in range(4)] for i in range(3)])
    f3 = GradedMap(matrix=f3_rows, source=last, target=mid)
    return GradedResolution(
        target="diagonal-power quotient over the polynomial ring",
        maps=[f1, f2, f3], modulus=None, minimal=True)


def r_resolution(c: int, n: int, N: int) -> GradedResolution:
    """Minimal resolution of Q over the hypersurface ring: three
    explicit maps, then a two-periodic alternating tail.

    The tail repeats (phi, adjoint-phi) with every period shifted by
    -n; compositions vanish modulo f = x^n + y^n + z^n.
    """
    w = build_witness(c, n, N)
    dn, r, delta = w.delta * n, w.r, w.delta
    if w.theta % 2 == 1:
        g2 = [-(3 * dn - n + r)] * 3 + [-(3 * dn - 2 * n + 3 * r)]
        g3 = [-(3 * dn - n + 2 * r)] * 3 + [-3 * dn]
        g4 = [-(3 * dn + r)] * 3 + [-(3 * dn - n + 3 * r)]
    else:
        g2 = [-(3 * dn + 2 * r)] * 3 + [-(3 * dn + n)]
        g3 = [-(3 * dn + n + r)] * 3 + [-(3 * dn + 3 * r)]
        g4 = [-(3 * dn + n + 2 * r)] * 3 + [-(3 * dn + 2 * n)]

    d1 = GradedMap(matrix=[w.power_row()], source=[-N] * 3, target=[0])
    d2 = GradedMap(matrix=_psi_adjoint(w), source=g2, target=[-N] * 3)
    d3 = GradedMap(matrix=w.phi.grid(), source=g3, target=g2)
    d4 = GradedMap(matrix=check_adjoint(w.phi).grid(), source=g4, target=g3)
    return GradedResolution(
        target="diagonal-power quotient over the hypersurface ring",
        maps=[d1, d2, d3, d4], modulus=w.hypersurface(), minimal=True,
        tail=PeriodicTail(maps=(d3, d4), period_shift=-n))


def socle_degrees(c: int, n: int, N: int) -> list[int]:
    """Socle degrees of Q (with multiplicity, sorted) in the Infinite
    case, from the closed forms read off the length-3 resolution."""
    w = build_witness(c, n, N)
    dn, r = w.delta * n, w.r
    if w.theta == 0:
        return [3 * N - 3]
    if w.theta % 2 == 1:
        degs = [3 * dn - n + 2 * r - 3] * 3 + [3 * dn - 3]
    else:
        degs = [3 * dn + n + r - 3] * 3 + [3 * dn + 3 * r - 3]
    return sorted(degs)


def second_syzygy(c: int, n: int, N: int) -> GradedMap:
    """Presentation matrix of the second syzygy module of Q over the
    hypersurface ring: the 4x4 alternating generator matrix, placed at
    the twists of the periodic resolution."""
    verdict = pd_verdict(c, n, N)
    if verdict.kind != "Infinite":
        raise NotInfinite(
            f"(c={c}, n={n}, N={N}) has finite projective dimension")
    theta, r = verdict.theta, verdict.r
    delta = (theta + 1) // 2
    ring = ring_xyz(c)
    if theta % 2 == 1:
        shift = -3 * delta * n + 2 * n - 2 * r
        mat = phi_rs(r, n - r, ring)
        target = [r - n + shift] * 3 + [-r + shift]
        source = [-n + shift] * 3 + [2 * r - 2 * n + shift]
    else:
        shift = -3 * delta * n - r
        mat = phi_rs(n - r, r, ring)
        target = [-r + shift] * 3 + [r - n + shift]
        source = [-n + shift] * 3 + [-2 * r + shift]
    return GradedMap(matrix=mat.grid(), source=source, target=target)
