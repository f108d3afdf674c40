"""Exact linear algebra over prime fields and over the rationals.

This module is the numerical core used by the verification layer.  All
results returned here are exact:

* Over a prime field ``GF(p)`` the arithmetic is exact by construction.
  For ``p < 2**23`` elimination runs in float64 (every intermediate value
  is an integer below 2**53, so no rounding can occur) with panel-blocked
  updates that route the bulk of the work through BLAS matrix products.
  For larger ``p`` a plain Python-integer elimination is used.

* Over the rationals, results are obtained from modular images and then
  *certified*: a kernel basis is lifted / rationally reconstructed from
  images modulo one or more 23-bit primes, scaled to a primitive integer
  basis, and finally verified to satisfy ``A @ W == 0`` over the integers
  by checking the product modulo fresh 30-bit primes whose product
  exceeds twice an explicit bound on any entry of ``A @ W``.  Ranks are
  certified by a two-sided argument: a nonzero pivot minor modulo a prime
  gives a lower bound, and a verified independent kernel of matching
  dimension gives the upper bound.  If certification fails the
  computation escalates to more primes and, as a last resort, to exact
  fraction-free elimination.

Nothing in this module is heuristic: a returned answer is always exact,
and irrecoverable situations raise instead of degrading.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt
from typing import List, Optional, Sequence, Tuple

import numpy as np
from sympy import prevprime

__all__ = [
    "kernel_modp",
    "rref_modp",
    "rank_modp",
    "membership_modp",
    "kernel_rational",
    "rank_rational",
    "membership_rational",
    "kernel_field",
    "rank_field",
    "membership_field",
]

# Panel width for blocked elimination.  With moduli below 2**23 every
# accumulated dot product of length <= PANEL stays below 32 * 2**46 = 2**51,
# inside float64's exact-integer range.
PANEL = 32

_F64_MODULUS_LIMIT = 1 << 23        # moduli below this use the float64 path
_LIFT_CAP = 1 << 21                 # accept symmetric lifts up to this size
_MAX_COMP_PRIMES = 12               # CRT escalation limit before Fraction fallback

_comp_primes: List[int] = []        # reconstruction primes, descending from 2**23
_verif_primes: List[int] = []       # verification primes, descending from 2**30


def _comp_prime(i: int) -> int:
    while len(_comp_primes) <= i:
        prev = _comp_primes[-1] if _comp_primes else (1 << 23)
        _comp_primes.append(int(prevprime(prev)))
    return _comp_primes[i]


def _verif_prime(i: int) -> int:
    while len(_verif_primes) <= i:
        prev = _verif_primes[-1] if _verif_primes else (1 << 30)
        _verif_primes.append(int(prevprime(prev)))
    return _verif_primes[i]


# ---------------------------------------------------------------------------
# matrix normalisation helpers
# ---------------------------------------------------------------------------

def _as_array(A) -> Tuple[np.ndarray, bool]:
    """Normalise input to a 2-D ndarray.  Returns (array, is_object).

    Accepts int64/object ndarrays or nested sequences of Python ints.
    Entries that do not fit int64 force an object array.
    """
    if isinstance(A, np.ndarray):
        if A.ndim != 2:
            raise ValueError("matrix must be 2-dimensional")
        if A.dtype == object:
            return A, True
        return A.astype(np.int64, copy=False), False
    rows = [list(r) for r in A]
    ncols = len(rows[0]) if rows else 0
    for r in rows:
        if len(r) != ncols:
            raise ValueError("ragged matrix")
    big = any(abs(x) > 0x7FFFFFFFFFFFFFF for r in rows for x in r)
    if big:
        M = np.empty((len(rows), ncols), dtype=object)
        for i, r in enumerate(rows):
            for j, x in enumerate(r):
                M[i, j] = int(x)
        return M, True
    return np.array(rows, dtype=np.int64) if rows else np.zeros((0, ncols), dtype=np.int64), False


def _mod_array(A: np.ndarray, is_obj: bool, q: int) -> np.ndarray:
    """Reduce a matrix modulo q into an int64 array."""
    if not is_obj:
        return np.mod(A, q).astype(np.int64)
    out = np.empty(A.shape, dtype=np.int64)
    for i in range(A.shape[0]):
        for j in range(A.shape[1]):
            out[i, j] = int(A[i, j]) % q
    return out


def _modmatmul(A: np.ndarray, W: np.ndarray, q: int) -> np.ndarray:
    """(A @ W) mod q for int64 matrices already reduced mod q < 2**30.

    Splits W into 15-bit halves so all int64 accumulations stay in range
    for inner dimensions up to ~2**17.
    """
    Wlo = W & 0x7FFF
    Whi = W >> 15
    part = (A @ Whi % q) << 15
    return (part + A @ Wlo) % q


# ---------------------------------------------------------------------------
# blocked float64 elimination mod q (q < 2**23)
# ---------------------------------------------------------------------------

def _forward_f64(A: np.ndarray, q: int):
    """Blocked forward elimination mod q.

    Returns (R, pivots, windows) where R is float64 in row-echelon form
    with unit pivots, and windows records (first pivot row, pivot column
    list) per elimination panel for the back-substitution pass.
    """
    R = np.mod(A, q).astype(np.float64)
    rows, cols = R.shape
    windows: List[Tuple[int, List[int]]] = []
    r = 0
    c0 = 0
    while r < rows and c0 < cols:
        cw = min(cols, c0 + PANEL)
        rstart = r
        local: List[int] = []
        invs: List[float] = []
        M = np.zeros((rows - rstart, PANEL))
        for c in range(c0, cw):
            col = R[r:, c]
            nz = np.nonzero(col)[0]
            if nz.size == 0:
                continue
            i = r + int(nz[0])
            if i != r:
                R[[r, i]] = R[[i, r]]
                M[[r - rstart, i - rstart]] = M[[i - rstart, r - rstart]]
            inv = float(pow(int(R[r, c]), -1, q))
            R[r, c:cw] = np.mod(R[r, c:cw] * inv, q)
            f = R[r + 1:, c]
            nzr = np.nonzero(f)[0]
            if nzr.size:
                fv = f[nzr].copy()
                R[r + 1 + nzr, c:cw] = np.mod(
                    R[r + 1 + nzr, c:cw] - np.outer(fv, R[r, c:cw]), q)
                R[r + 1 + nzr, c] = 0.0
                M[r + 1 + nzr - rstart, len(local)] = fv
            invs.append(inv)
            local.append(c)
            r += 1
        npv = len(local)
        if npv and cw < cols:
            # Deferred trailing update.  Panel pivot rows first (sequential,
            # each was final before being used as a pivot), then one matrix
            # product for every other candidate row.
            Tp = R[rstart:rstart + npv, cw:]
            for k in range(npv):
                if k:
                    acc = M[k, :k] @ Tp[:k]
                    Tp[k] = np.mod((Tp[k] - np.mod(acc, q)) * invs[k], q)
                else:
                    Tp[0] = np.mod(Tp[0] * invs[0], q)
            if rstart + npv < rows:
                upd = M[npv:rows - rstart, :npv] @ Tp
                R[rstart + npv:, cw:] = np.mod(R[rstart + npv:, cw:] - upd, q)
        if npv:
            windows.append((rstart, local))
        c0 = cw
    piv = [c for _, loc in windows for c in loc]
    return R, piv, windows


def _backsub_f64(R: np.ndarray, q: int, windows, colsel: np.ndarray) -> None:
    """Clear above-pivot entries in place so pivot rows are reduced on colsel."""
    for rstart, local in reversed(windows):
        npv = len(local)
        # pivots inside the same panel form an upper triangle: clear bottom-up
        for k in range(npv - 1, 0, -1):
            c = local[k]
            f = R[rstart:rstart + k, c]
            nz = np.nonzero(f)[0]
            if nz.size:
                fv = f[nz].copy()
                sel = R[rstart + k][colsel]
                R[np.ix_(rstart + nz, colsel)] = np.mod(
                    R[np.ix_(rstart + nz, colsel)] - np.outer(fv, sel), q)
                R[rstart + nz, c] = 0.0
        if rstart:
            F = R[:rstart, local]
            if np.any(F):
                upd = F @ R[rstart:rstart + npv][:, colsel]
                R[np.ix_(range(rstart), colsel)] = np.mod(
                    R[:rstart][:, colsel] - upd, q)
                R[:rstart, local] = 0.0


def _rref_f64(A: np.ndarray, q: int):
    R, piv, windows = _forward_f64(A, q)
    cols = R.shape[1]
    pset = set(piv)
    free = np.array([c for c in range(cols) if c not in pset], dtype=np.intp)
    if free.size:
        _backsub_f64(R, q, windows, free)
    out = R[:len(piv)].astype(np.int64)
    for k, c in enumerate(piv):
        out[:, c] = 0
        out[k, c] = 1
    return out, piv


def _kernel_f64(A: np.ndarray, q: int):
    R, piv, windows = _forward_f64(A, q)
    cols = R.shape[1]
    pset = set(piv)
    free = np.array([c for c in range(cols) if c not in pset], dtype=np.intp)
    if free.size == 0:
        return np.zeros((cols, 0), dtype=np.int64), piv, free
    _backsub_f64(R, q, windows, free)
    K = np.zeros((cols, free.size), dtype=np.int64)
    if piv:
        K[piv, :] = np.mod(-R[:len(piv)][:, free], q).astype(np.int64)
    K[free, np.arange(free.size)] = 1
    return K, piv, free


# ---------------------------------------------------------------------------
# Python-integer elimination (large moduli fallback)
# ---------------------------------------------------------------------------

def _rref_obj(A: np.ndarray, is_obj: bool, q: int):
    rows = [[int(x) % q for x in row] for row in A]
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else (A.shape[1] if hasattr(A, "shape") else 0)
    piv: List[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        sel = None
        for i in range(r, nrows):
            if rows[i][c] % q:
                sel = i
                break
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        inv = pow(rows[r][c], -1, q)
        rows[r] = [(x * inv) % q for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % q for x, y in zip(rows[i], rows[r])]
        piv.append(c)
        r += 1
    return rows[:r], piv, ncols


def _kernel_obj(A: np.ndarray, is_obj: bool, q: int):
    red, piv, ncols = _rref_obj(A, is_obj, q)
    pset = set(piv)
    free = [c for c in range(ncols) if c not in pset]
    K = np.zeros((ncols, len(free)), dtype=np.int64)
    for j, fc in enumerate(free):
        K[fc, j] = 1
        for k, pc in enumerate(piv):
            K[pc, j] = (-red[k][fc]) % q
    return K, piv, np.array(free, dtype=np.intp)


# ---------------------------------------------------------------------------
# prime-field API
# ---------------------------------------------------------------------------

def kernel_modp(A, p: int):
    """Right-kernel basis of A over GF(p).

    Returns (K, pivots) where K is an int64 matrix whose columns form a
    basis of the kernel (reduced-echelon style: K restricted to the free
    coordinate rows is the identity).
    """
    M, is_obj = _as_array(A)
    if M.shape[0] == 0:
        n = M.shape[1]
        return np.eye(n, dtype=np.int64), []
    if p < _F64_MODULUS_LIMIT and not is_obj:
        K, piv, _ = _kernel_f64(M, p)
        return K, piv
    K, piv, _ = _kernel_obj(M, is_obj, p)
    return K, piv


def rref_modp(A, p: int):
    """Reduced row echelon form of A over GF(p): returns (R, pivots)."""
    M, is_obj = _as_array(A)
    if M.shape[0] == 0:
        return np.zeros((0, M.shape[1]), dtype=np.int64), []
    if p < _F64_MODULUS_LIMIT and not is_obj:
        return _rref_f64(M, p)
    red, piv, ncols = _rref_obj(M, is_obj, p)
    return np.array(red, dtype=np.int64).reshape(len(red), ncols), piv


def rank_modp(A, p: int) -> int:
    M, is_obj = _as_array(A)
    if M.shape[0] == 0 or M.shape[1] == 0:
        return 0
    if p < _F64_MODULUS_LIMIT and not is_obj:
        _, piv, _ = _forward_f64(np.mod(M, p).astype(np.int64), p)
        return len(piv)
    _, piv, _ = _rref_obj(M, is_obj, p)
    return len(piv)


def membership_modp(A, b, p: int):
    """Does the column vector b lie in the column space of A over GF(p)?

    Returns (True, x) with A x = b, or (False, None).
    """
    M, is_obj = _as_array(A)
    bv = [int(x) for x in b]
    aug_cols = M.shape[1] + 1
    if is_obj:
        aug = np.empty((M.shape[0], aug_cols), dtype=object)
        aug[:, :-1] = M
        for i, x in enumerate(bv):
            aug[i, -1] = -x
    else:
        aug = np.concatenate(
            [M, -np.array(bv, dtype=np.int64).reshape(-1, 1)], axis=1)
    K, piv = kernel_modp(aug, p)
    last = aug_cols - 1
    if last in piv:
        return False, None
    # a kernel column with nonzero last coordinate gives a solution
    for j in range(K.shape[1]):
        t = int(K[last, j]) % p
        if t:
            tinv = pow(t, -1, p)
            x = [(int(K[i, j]) * tinv) % p for i in range(M.shape[1])]
            return True, x
    return False, None  # pragma: no cover - unreachable when last not pivot


# ---------------------------------------------------------------------------
# rational reconstruction
# ---------------------------------------------------------------------------

def _rat_reconstruct(a: int, m: int) -> Optional[Tuple[int, int]]:
    """Find (num, den) with num ≡ a*den (mod m), |num|, den <= sqrt(m/2).

    Standard lattice/extended-Euclid reconstruction; returns None when no
    representative exists within the bound.
    """
    a %= m
    if a == 0:
        return (0, 1)
    bound = isqrt(m // 2)
    r0, r1 = m, a
    t0, t1 = 0, 1
    while r1 > bound:
        qq = r0 // r1
        r0, r1 = r1, r0 - qq * r1
        t0, t1 = t1, t0 - qq * t1
    if r1 == 0 or abs(t1) > bound:
        return None
    if gcd(r1, abs(t1)) != 1 and gcd(abs(t1), m) != 1:
        return None
    num, den = r1, t1
    if den < 0:
        num, den = -num, -den
    return num, den


def _reconstruct_column(col: Sequence[int], m: int) -> Optional[List[int]]:
    """Lift a column of residues mod m to a primitive integer vector.

    Tries the symmetric integer lift first, then entrywise rational
    reconstruction with a running common denominator.  Returns None when
    reconstruction fails (caller escalates to more primes).
    """
    half = m >> 1
    sym = []
    small = True
    for a in col:
        a %= m
        s = a - m if a > half else a
        sym.append(s)
        if abs(s) > _LIFT_CAP:
            small = False
    if small:
        g = 0
        for s in sym:
            g = gcd(g, abs(s))
        if g > 1:
            sym = [s // g for s in sym]
        return sym
    den = 1
    nums: List[Fraction] = []
    for a in col:
        v = (a * den) % m
        s = v - m if v > half else v
        if abs(s) <= _LIFT_CAP:
            nums.append(Fraction(s, den))
            continue
        rec = _rat_reconstruct(v, m)
        if rec is None:
            return None
        num, d = rec
        nums.append(Fraction(num, den * d))
        den *= d
    lcm = 1
    for fr in nums:
        lcm = lcm // gcd(lcm, fr.denominator) * fr.denominator
    ints = [int(fr * lcm) for fr in nums]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g > 1:
        ints = [x // g for x in ints]
    return ints


def _crt_pair(a1: int, m1: int, a2: int, m2: int) -> Tuple[int, int]:
    m = m1 * m2
    x = (a1 + (a2 - a1) * pow(m1, -1, m2) % m2 * m1) % m
    return x, m


# ---------------------------------------------------------------------------
# rational (characteristic zero) API
# ---------------------------------------------------------------------------

def _row_sum_bound(M: np.ndarray, is_obj: bool) -> int:
    if M.size == 0:
        return 0
    if not is_obj:
        return int(np.abs(M).sum(axis=1).max())
    best = 0
    for i in range(M.shape[0]):
        s = sum(abs(int(x)) for x in M[i])
        if s > best:
            best = s
    return best


def _verify_integer_kernel(M: np.ndarray, is_obj: bool, W_cols: List[List[int]]) -> bool:
    """Certify A @ W == 0 over the integers via fresh-prime checks."""
    if not W_cols or M.shape[0] == 0:
        return True
    wmax = max((abs(x) for col in W_cols for x in col), default=0)
    if not is_obj:
        amax = int(np.abs(M).max()) if M.size else 0
        # Fast path: if every partial sum of the exact product is below
        # 2**53 (|sum of any subset of a_i*w_i| <= inner*amax*wmax), one
        # float64 matmul evaluates A @ W exactly.
        if amax * wmax * M.shape[1] < 2 ** 53:
            Wf = np.array(W_cols, dtype=np.float64).T
            return not np.any(M.astype(np.float64) @ Wf)
    bound = 2 * _row_sum_bound(M, is_obj) * wmax + 1
    W = np.empty((M.shape[1], len(W_cols)), dtype=object)
    for j, col in enumerate(W_cols):
        for i, x in enumerate(col):
            W[i, j] = int(x)
    prod = 1
    i = 0
    while prod < bound:
        q = _verif_prime(i)
        i += 1
        prod *= q
        Aq = _mod_array(M, is_obj, q)
        Wq = np.empty(W.shape, dtype=np.int64)
        for a in range(W.shape[0]):
            for b in range(W.shape[1]):
                Wq[a, b] = int(W[a, b]) % q
        if np.any(_modmatmul(Aq, Wq, q)):
            return False
    return True


def _fraction_kernel(M: np.ndarray, is_obj: bool):
    """Exact kernel over Q by fraction elimination (last-resort path)."""
    nrows, ncols = M.shape
    rows = [[Fraction(int(M[i, j])) for j in range(ncols)] for i in range(nrows)]
    piv: List[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        sel = None
        for i in range(r, nrows):
            if rows[i][c] != 0:
                sel = i
                break
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv.append(c)
        r += 1
    pset = set(piv)
    free = [c for c in range(ncols) if c not in pset]
    cols: List[List[int]] = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for k, pc in enumerate(piv):
            vec[pc] = -rows[k][fc]
        lcm = 1
        for x in vec:
            lcm = lcm // gcd(lcm, x.denominator) * x.denominator
        ints = [int(x * lcm) for x in vec]
        g = 0
        for x in ints:
            g = gcd(g, abs(x))
        if g > 1:
            ints = [x // g for x in ints]
        cols.append(ints)
    return cols, piv, free


class ExactnessError(RuntimeError):
    """Raised when a certified exact result cannot be produced."""


def kernel_rational(A):
    """Certified kernel basis of A over Q.

    Returns (cols, pivots, free) where cols is a list of primitive integer
    column vectors spanning the kernel, with cols[j] nonzero exactly at
    its own free coordinate among the free positions (echelon structure),
    so the columns are independent by construction.  The result is exact:
    A @ W == 0 is verified over the integers and the rank is certified on
    both sides.
    """
    M, is_obj = _as_array(A)
    nrows, ncols = M.shape
    if ncols == 0:
        return [], [], []
    if nrows == 0:
        cols = []
        for j in range(ncols):
            v = [0] * ncols
            v[j] = 1
            cols.append(v)
        return cols, [], list(range(ncols))

    residues: List[np.ndarray] = []
    moduli: List[int] = []
    piv_ref: Optional[List[int]] = None
    free_ref: Optional[np.ndarray] = None

    for pi in range(_MAX_COMP_PRIMES):
        q = _comp_prime(pi)
        Aq = _mod_array(M, is_obj, q)
        Kq, piv, free = _kernel_f64(Aq, q)
        if piv_ref is None or len(piv) > len(piv_ref):
            # rank mod q never exceeds the rational rank, so a larger
            # pivot count means every previously used prime was unlucky:
            # restart accumulation from this image
            piv_ref = piv
            free_ref = free
            residues = [Kq]
            moduli = [q]
        elif len(piv) == len(piv_ref) and piv == piv_ref:
            residues.append(Kq)
            moduli.append(q)
        else:
            # lower rank (unlucky prime) or same rank with a different
            # pivot pattern: drop this prime; the accumulated set is
            # unchanged so reconstruction would repeat a failed attempt
            continue

        # attempt reconstruction from the accumulated residues
        vals: Optional[List[List[int]]] = None
        m = 1
        for Kq_i, q_i in zip(residues, moduli):
            if vals is None:
                vals = [[int(Kq_i[i, j]) for i in range(Kq_i.shape[0])]
                        for j in range(Kq_i.shape[1])]
                m = q_i
            else:
                for j in range(len(vals)):
                    for i in range(len(vals[j])):
                        vals[j][i], _ = _crt_pair(vals[j][i], m, int(Kq_i[i, j]), q_i)
                m *= q_i
        cols: Optional[List[List[int]]] = []
        for j in range(len(vals)):
            col = _reconstruct_column(vals[j], m)
            if col is None:
                cols = None
                break
            cols.append(col)
        if cols is None:
            continue
        if not _verify_integer_kernel(M, is_obj, cols):
            continue
        # certification passed; rank is exact:
        #   rank >= len(piv_ref): the pivot minor is invertible mod q
        #   rank <= len(piv_ref): ncols - len(piv_ref) independent kernel cols
        return cols, piv_ref, list(free_ref)

    cols, piv, free = _fraction_kernel(M, is_obj)
    if not _verify_integer_kernel(M, is_obj, cols):  # pragma: no cover
        raise ExactnessError("fraction elimination produced an invalid kernel")
    return cols, piv, free


def rank_rational(A) -> int:
    """Certified rank of A over Q."""
    M, is_obj = _as_array(A)
    if M.shape[0] == 0 or M.shape[1] == 0:
        return 0
    cols, piv, _ = kernel_rational(M)
    return M.shape[1] - len(cols)


def membership_rational(A, b):
    """Certified column-space membership over Q.

    Returns (True, (x, t)) with A x = t b for integers x and t > 0, or
    (False, None) when b is certified not to lie in the column space.
    """
    M, is_obj = _as_array(A)
    bv = [int(x) for x in b]
    n = M.shape[1]
    if is_obj or any(abs(x) > 0x7FFFFFFFFFFFFFF for x in bv):
        aug = np.empty((M.shape[0], n + 1), dtype=object)
        for i in range(M.shape[0]):
            for j in range(n):
                aug[i, j] = int(M[i, j])
            aug[i, n] = -bv[i]
    else:
        aug = np.concatenate(
            [M, -np.array(bv, dtype=np.int64).reshape(-1, 1)], axis=1)
    cols, piv, free = kernel_rational(aug)
    if n in piv:
        # last column is a pivot: rank([A|b]) = rank(A) + 1 certified,
        # since the kernel certificate fixes both ranks exactly.
        return False, None
    for col in cols:
        t = col[n]
        if t:
            x = col[:n]
            if t < 0:
                t = -t
                x = [-v for v in x]
            return True, (x, t)
    return False, None  # pragma: no cover - unreachable when last col free


# ---------------------------------------------------------------------------
# characteristic dispatch
# ---------------------------------------------------------------------------

def kernel_field(A, char: int):
    """Kernel basis over GF(char) (char > 0) or Q (char == 0).

    Returns (K, pivots) with K a list of integer columns for char 0 and an
    int64 matrix for positive characteristic.
    """
    if char:
        return kernel_modp(A, char)
    cols, piv, _ = kernel_rational(A)
    return cols, piv


def rank_field(A, char: int) -> int:
    if char:
        return rank_modp(A, char)
    return rank_rational(A)


def membership_field(A, b, char: int):
    """Column-space membership dispatching on the characteristic."""
    if char:
        return membership_modp(A, b, char)
    ok, wit = membership_rational(A, b)
    return ok, wit
