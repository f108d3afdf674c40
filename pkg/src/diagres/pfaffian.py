"""Alternating matrices over polynomials: Pfaffians, maximal-order
Pfaffians, the check-adjoint, the four-by-four generator family, and
the block partition identity.

Sign conventions (1-based indices):

* Pf(empty) = 1, Pf = 0 in odd size, row-1 expansion otherwise;
* the ell-th maximal-order Pfaffian of an odd-size matrix is
  (-1)^(ell+1) Pf(matrix with row and column ell removed);
* the check-adjoint has (i, j) entry (-1)^(i+j) Pf(delete i, j) for
  i < j, extended alternately; it satisfies phi * check = Pf(phi) * I.
"""

from __future__ import annotations

from .errors import IndexOutOfRange, OddSize, SizeMismatch
from .polyring import Polynomial, Ring, ring_xyz

__all__ = [
    "AlternatingMatrix",
    "pfaffian",
    "pf_minor",
    "check_adjoint",
    "phi_rs",
    "pf2_identity",
    "mat_mul",
    "mat_transpose",
    "mat_neg",
    "mat_eq",
    "identity_grid",
]

Grid = list[list[Polynomial]]


# --- plain grid helpers ---------------------------------------------------

def mat_mul(A: Grid, B: Grid) -> Grid:
    if A and B and len(A[0]) != len(B):
        raise SizeMismatch(f"cannot multiply {len(A)}x{len(A[0])} by {len(B)}x{len(B[0])}")
    return [
        [
            _sum_polys([A[i][k] * B[k][j] for k in range(len(B))])
            for j in range(len(B[0]) if B else 0)
        ]
        for i in range(len(A))
    ]


def _sum_polys(polys: list[Polynomial]) -> Polynomial:
    total = polys[0]
    for p in polys[1:]:
        total = total + p
    return total


def mat_transpose(A: Grid) -> Grid:
    return [list(row) for row in zip(*A)] if A else []


def mat_neg(A: Grid) -> Grid:
    return [[-entry for entry in row] for row in A]


def mat_eq(A: Grid, B: Grid) -> bool:
    return len(A) == len(B) and all(
        len(ra) == len(rb) and all(a == b for a, b in zip(ra, rb))
        for ra, rb in zip(A, B)
    )


def identity_grid(ring: Ring, size: int) -> Grid:
    one = Polynomial.constant(ring, 1)
    zero = Polynomial.zero(ring)
    return [[one if i == j else zero for j in range(size)] for i in range(size)]


class AlternatingMatrix:
    """Square matrix with entry(j,i) = -entry(i,j) and zero diagonal."""

    __slots__ = ("ring", "size", "entries")

    def __init__(self, ring: Ring, entries: Grid):
        size = len(entries)
        for row in entries:
            if len(row) != size:
                raise SizeMismatch("matrix is not square")
        zero = Polynomial.zero(ring)
        for i in range(size):
            if entries[i][i] != zero:
                raise SizeMismatch(f"nonzero diagonal entry at {i}")
            for j in range(i + 1, size):
                if entries[j][i] != -entries[i][j]:
                    raise SizeMismatch(f"entries ({i},{j}) and ({j},{i}) are not opposite")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "size", size)
        object.__setattr__(self, "entries", [list(row) for row in entries])

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("AlternatingMatrix is immutable")

    @classmethod
    def from_upper(cls, ring: Ring, size: int, upper: dict[tuple[int, int], Polynomial]) -> "AlternatingMatrix":
        """Build from the strict upper triangle, 1-based (i, j) keys."""
        zero = Polynomial.zero(ring)
        grid = [[zero for _ in range(size)] for _ in range(size)]
        for (i, j), poly in upper.items():
            if not 1 <= i < j <= size:
                raise IndexOutOfRange(f"bad upper-triangle key {(i, j)}")
            grid[i - 1][j - 1] = poly
            grid[j - 1][i - 1] = -poly
        return cls(ring, grid)

    def entry(self, i: int, j: int) -> Polynomial:
        """1-based access."""
        if not (1 <= i <= self.size and 1 <= j <= self.size):
            raise IndexOutOfRange(f"entry ({i},{j}) outside size {self.size}")
        return self.entries[i - 1][j - 1]

    def grid(self) -> Grid:
        return [list(row) for row in self.entries]

    def delete(self, *indices: int) -> "AlternatingMatrix":
        """Remove the given 1-based rows and columns."""
        drop = set()
        for ell in indices:
            if not 1 <= ell <= self.size:
                raise IndexOutOfRange(f"index {ell} outside size {self.size}")
            drop.add(ell - 1)
        keep = [k for k in range(self.size) if k not in drop]
        return AlternatingMatrix(
            self.ring, [[self.entries[i][j] for j in keep] for i in keep]
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AlternatingMatrix):
            return NotImplemented
        return self.ring == other.ring and mat_eq(self.entries, other.entries)

    def __neg__(self) -> "AlternatingMatrix":
        return AlternatingMatrix(self.ring, mat_neg(self.entries))

    def to_obj(self) -> list[list[list[dict]]]:
        return [[entry.to_obj() for entry in row] for row in self.entries]

    def __repr__(self) -> str:
        rows = "; ".join("[" + ", ".join(str(e) for e in row) + "]" for row in self.entries)
        return f"AlternatingMatrix({rows})"


def pfaffian(phi: AlternatingMatrix) -> Polynomial:
    """Pfaffian by row-1 recursive expansion, memoized on index subsets."""
    if phi.size % 2 == 1:
        return Polynomial.zero(phi.ring)
    one = Polynomial.constant(phi.ring, 1)
    entries = phi.entries
    memo: dict[tuple[int, ...], Polynomial] = {}

    def rec(active: tuple[int, ...]) -> Polynomial:
        if not active:
            return one
        cached = memo.get(active)
        if cached is not None:
            return cached
        i0, rest = active[0], active[1:]
        total = Polynomial.zero(phi.ring)
        for pos, j in enumerate(rest):
            coeff = entries[i0][j]
            if coeff.is_zero:
                continue
            sub = rec(rest[:pos] + rest[pos + 1:])
            term = coeff * sub
            total = total + term if pos % 2 == 0 else total - term
        memo[active] = total
        return total

    return rec(tuple(range(phi.size)))


def pf_minor(phi: AlternatingMatrix, l: int) -> Polynomial:
    """(-1)^(l+1) times the Pfaffian with row and column l removed."""
    if not 1 <= l <= phi.size:
        raise IndexOutOfRange(f"index {l} outside size {phi.size}")
    value = pfaffian(phi.delete(l))
    return value if l % 2 == 1 else -value


def check_adjoint(phi: AlternatingMatrix) -> AlternatingMatrix:
    """The alternating adjoint with phi * result = Pf(phi) * I = result * phi."""
    if phi.size % 2 == 1:
        raise OddSize(f"check-adjoint needs even size, got {phi.size}")
    upper = {}
    for i in range(1, phi.size + 1):
        for j in range(i + 1, phi.size + 1):
            value = pfaffian(phi.delete(i, j))
            upper[(i, j)] = value if (i + j) % 2 == 0 else -value
    result = AlternatingMatrix.from_upper(phi.ring, phi.size, upper)
    pf = pfaffian(phi)
    expected = [[pf if i == j else Polynomial.zero(phi.ring) for j in range(phi.size)] for i in range(phi.size)]
    if not mat_eq(mat_mul(phi.entries, result.entries), expected):
        raise SizeMismatch("check-adjoint certification failed")  # pragma: no cover
    return result


def phi_rs(r: int, s: int, ring: Ring | None = None) -> AlternatingMatrix:
    """The four-by-four alternating family in powers of x, y, z."""
    if r < 0 or s < 0:
        raise ValueError("r and s must be non-negative")
    ring = ring or ring_xyz(0)
    x = lambda k: Polynomial.variable(ring, "x", k)  # noqa: E731
    y = lambda k: Polynomial.variable(ring, "y", k)  # noqa: E731
    z = lambda k: Polynomial.variable(ring, "z", k)  # noqa: E731
    return AlternatingMatrix.from_upper(
        ring,
        4,
        {
            (1, 2): z(r),
            (1, 3): -y(r),
            (1, 4): x(s),
            (2, 3): x(r),
            (2, 4): y(s),
            (3, 4): z(s),
        },
    )


def assemble_block(phi: AlternatingMatrix, psi: Grid, Phi: AlternatingMatrix) -> AlternatingMatrix:
    """The (m+3)x(m+3) alternating block matrix [[phi, psi^T], [-psi, Phi]]."""
    m = phi.size
    if Phi.size != 3 or len(psi) != 3 or any(len(row) != m for row in psi):
        raise SizeMismatch("expected psi 3 x m and Phi 3 x 3")
    psi_t = mat_transpose(psi)
    grid: Grid = []
    for i in range(m):
        grid.append(list(phi.entries[i]) + list(psi_t[i]))
    for i in range(3):
        grid.append([-psi[i][j] for j in range(m)] + list(Phi.entries[i]))
    return AlternatingMatrix(phi.ring, grid)


def pf2_identity(phi: AlternatingMatrix, psi: Grid, Phi: AlternatingMatrix, l: int) -> bool:
    """Whether the block matrix's (m+l)-th maximal Pfaffian splits as
    Pf_l(psi phicheck psi^T) + Pf(phi) Pf_l(Phi)."""
    if phi.size % 2 == 1:
        raise OddSize("phi must have even size")
    if not 1 <= l <= 3:
        raise IndexOutOfRange(f"l must be 1..3, got {l}")
    d2 = assemble_block(phi, psi, Phi)
    lhs = pf_minor(d2, phi.size + l)
    middle = mat_mul(mat_mul(psi, check_adjoint(phi).entries), mat_transpose(psi))
    rhs = pf_minor(AlternatingMatrix(phi.ring, middle), l) + pfaffian(phi) * pf_minor(Phi, l)
    return lhs == rhs
