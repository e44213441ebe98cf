"""Exact linear algebra over Z, Q and F_p.

Matrices are stored sparsely as one ``dict`` per row (column index -> nonzero
entry).  Entries are Python ints for Z and F_p (reduced into ``range(p)``) and
``fractions.Fraction`` for Q, so nothing ever overflows or rounds.

The two workhorses are :func:`invariant_factors` (Smith normal form diagonal,
no transforms, sparse) used by the (co)homology engines, and the field
routines :func:`rank`, :func:`nullspace` and :class:`Reducer` used for
cohomology bases and induced maps.  :func:`smith_normal_form` is the dense
variant that also returns the unimodular transforms.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import GradingMismatch, NotChainMap, RingMismatch, RingNotField


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class Ring:
    """Coefficient ring tag: ``Z``, ``Q`` or ``F_p``."""

    kind: str
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("Z", "Q", "Fp"):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.kind == "Fp" and not _is_prime(self.p):
            raise ValueError(f"F_p needs a prime, got {self.p}")
        if self.kind != "Fp" and self.p:
            raise ValueError("only F_p carries a characteristic")

    @classmethod
    def parse(cls, text: str) -> "Ring":
        t = text.strip()
        if t in ("Z", "INT"):
            return INT
        if t in ("Q", "RAT"):
            return RAT
        for prefix in ("Fp:", "F_", "F", "GF"):
            if t.startswith(prefix) and t[len(prefix):].isdigit():
                return cls("Fp", int(t[len(prefix):]))
        raise ValueError(f"cannot parse ring {text!r}")

    def __str__(self):
        return f"Fp:{self.p}" if self.kind == "Fp" else self.kind

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    def __call__(self, x):
        """Coerce an int, Fraction or decimal / ``num/den`` string into the ring."""
        if isinstance(x, str):
            x = Fraction(x.strip())
        if isinstance(x, bool):
            x = int(x)
        if self.kind == "Q":
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator != 1:
                if self.kind == "Z":
                    raise ValueError(f"{x} is not an integer")
                return x.numerator * pow(x.denominator, -1, self.p) % self.p
            x = x.numerator
        if self.kind == "Fp":
            return int(x) % self.p
        return int(x)

    def inv(self, x):
        if self.kind == "Q":
            return 1 / Fraction(x)
        if self.kind == "Fp":
            return pow(x, -1, self.p)
        if x in (1, -1):
            return x
        raise ZeroDivisionError(f"{x} is not a unit in Z")

    def is_unit(self, x) -> bool:
        if self.kind == "Z":
            return x in (1, -1)
        return x != 0

    def to_str(self, x) -> str:
        return str(x)


INT = Ring("Z")
RAT = Ring("Q")


def modp(p: int) -> Ring:
    return Ring("Fp", p)


F2 = modp(2)


class _Mod:
    """Reduction mod p; a class rather than a closure so results pickle across workers."""

    __slots__ = ("p",)

    def __init__(self, p):
        self.p = p

    def __call__(self, x):
        return x % self.p


def _same(x):
    return x


def _norm(ring: Ring):
    return _Mod(ring.p) if ring.kind == "Fp" else _same


class Matrix:
    """Sparse exact matrix; ``rows[i]`` maps column index to a nonzero entry."""

    __slots__ = ("ring", "nrows", "ncols", "rows")

    def __init__(self, ring: Ring, nrows: int, ncols: int, rows=None):
        self.ring = ring
        self.nrows = nrows
        self.ncols = ncols
        self.rows = rows if rows is not None else [{} for _ in range(nrows)]

    @classmethod
    def zeros(cls, ring, nrows, ncols):
        return cls(ring, nrows, ncols)

    @classmethod
    def identity(cls, ring, n):
        return cls(ring, n, n, [{i: 1} for i in range(n)])

    @classmethod
    def from_lists(cls, ring, data, ncols=None):
        data = [list(r) for r in data]
        if ncols is None:
            ncols = len(data[0]) if data else 0
        rows = []
        for r in data:
            if len(r) != ncols:
                raise GradingMismatch("ragged matrix rows")
            row = {}
            for j, x in enumerate(r):
                v = ring(x)
                if v:
                    row[j] = v
            rows.append(row)
        return cls(ring, len(rows), ncols, rows)

    def to_lists(self):
        out = []
        for r in self.rows:
            row = [0] * self.ncols
            for j, v in r.items():
                row[j] = v
            out.append(row)
        return out

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i].get(j, 0)

    def nnz(self):
        return sum(len(r) for r in self.rows)

    def is_zero(self):
        return not any(self.rows)

    def _check(self, other):
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.ring == other.ring and self.shape == other.shape
                and self.rows == other.rows)

    __hash__ = None

    def __repr__(self):
        return f"Matrix({self.ring}, {self.to_lists()})"

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.ncols != other.nrows:
            raise GradingMismatch(f"cannot multiply {self.shape} by {other.shape}")
        norm = _norm(self.ring)
        orows = other.rows
        out = []
        for r in self.rows:
            acc = {}
            for k, a in r.items():
                for j, b in orows[k].items():
                    acc[j] = acc.get(j, 0) + a * b
            out.append({j: w for j, v in acc.items() if (w := norm(v))})
        return Matrix(self.ring, self.nrows, other.ncols, out)

    def _combine(self, other, sign):
        self._check(other)
        if self.shape != other.shape:
            raise GradingMismatch(f"shape mismatch {self.shape} vs {other.shape}")
        norm = _norm(self.ring)
        out = []
        for r, s in zip(self.rows, other.rows):
            acc = dict(r)
            for j, v in s.items():
                acc[j] = acc.get(j, 0) + sign * v
            out.append({j: w for j, v in acc.items() if (w := norm(v))})
        return Matrix(self.ring, self.nrows, self.ncols, out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def scale(self, c):
        norm = _norm(self.ring)
        c = self.ring(c)
        out = [{j: w for j, v in r.items() if (w := norm(c * v))} for r in self.rows]
        return Matrix(self.ring, self.nrows, self.ncols, out)

    def __neg__(self):
        return self.scale(-1)

    def transpose(self):
        cols = [{} for _ in range(self.ncols)]
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                cols[j][i] = v
        return Matrix(self.ring, self.ncols, self.nrows, cols)

    @property
    def T(self):
        return self.transpose()

    def column(self, j):
        return {i: r[j] for i, r in enumerate(self.rows) if j in r}

    def apply(self, vec: dict) -> dict:
        """Multiply a sparse column vector."""
        norm = _norm(self.ring)
        out = {}
        for i, r in enumerate(self.rows):
            s = 0
            if len(vec) < len(r):
                for k, x in vec.items():
                    if k in r:
                        s += r[k] * x
            else:
                for k, a in r.items():
                    if k in vec:
                        s += a * vec[k]
            s = norm(s)
            if s:
                out[i] = s
        return out

    def kron(self, other):
        self._check(other)
        norm = _norm(self.ring)
        out = []
        for r in self.rows:
            for s in other.rows:
                row = {}
                for j, a in r.items():
                    for k, b in s.items():
                        w = norm(a * b)
                        if w:
                            row[j * other.ncols + k] = w
                out.append(row)
        return Matrix(self.ring, self.nrows * other.nrows, self.ncols * other.ncols, out)

    def to_strings(self):
        return [[str(x) for x in row] for row in self.to_lists()]


class MatrixBuilder:
    """Accumulates blocks into a sparse matrix (entries summed)."""

    def __init__(self, ring, nrows, ncols):
        self.ring = ring
        self.nrows = nrows
        self.ncols = ncols
        self.rows = [{} for _ in range(nrows)]

    def add(self, i, j, v):
        r = self.rows[i]
        r[j] = r.get(j, 0) + v

    def add_identity(self, r0, c0, n, sign=1):
        for k in range(n):
            r = self.rows[r0 + k]
            r[c0 + k] = r.get(c0 + k, 0) + sign

    def add_block(self, r0, c0, block: Matrix, sign=1):
        for i, row in enumerate(block.rows):
            r = self.rows[r0 + i]
            for j, v in row.items():
                r[c0 + j] = r.get(c0 + j, 0) + sign * v

    def build(self) -> Matrix:
        norm = _norm(self.ring)
        rows = [{j: w for j, v in r.items() if (w := norm(v))} for r in self.rows]
        return Matrix(self.ring, self.nrows, self.ncols, rows)


# ---------------------------------------------------------------------------
# elimination


def _eliminate_units(ring: Ring, rows: list):
    """Pivot on unit entries until none remain; returns (#pivots, leftover rows).

    Each pivot row is used to clear its column and then dropped, which does not
    change the invariant factors beyond contributing a single 1.  Pivot rows are
    chosen with the fewest nonzeros (ties by index) to limit fill-in.
    """
    norm = _norm(ring)
    rows = [dict(r) for r in rows]
    colrows = defaultdict(set)
    for i, r in enumerate(rows):
        for j in r:
            colrows[j].add(i)
    is_unit = ring.is_unit
    count = 0
    progress = True
    while progress:
        progress = False
        for j in sorted(colrows):
            rs = colrows.get(j)
            if not rs:
                continue
            best = None
            for i in rs:
                if is_unit(rows[i][j]):
                    key = (len(rows[i]), i)
                    if best is None or key < best:
                        best = key
            if best is None:
                continue
            i = best[1]
            prow = rows[i]
            pinv = ring.inv(prow[j])
            for k in list(rs):
                if k == i:
                    continue
                row = rows[k]
                f = norm(row[j] * pinv)
                for c, v in prow.items():
                    nv = norm(row.get(c, 0) - f * v)
                    if nv:
                        if c not in row:
                            colrows[c].add(k)
                        row[c] = nv
                    elif c in row:
                        del row[c]
                        colrows[c].discard(k)
            for c in prow:
                colrows[c].discard(i)
            rows[i] = {}
            count += 1
            progress = True
    return count, [r for r in rows if r]


def _dense_snf(A, U=None, V=None):
    """In-place Smith normal form of a dense integer matrix (list of lists).

    Pivot: smallest nonzero absolute value, ties broken by (row, col).  When
    ``U``/``V`` are given they receive the same row/column operations so that
    U_final * A_orig * V_final = A_final.
    """
    m = len(A)
    n = len(A[0]) if m else 0

    def swap_rows(i, k):
        A[i], A[k] = A[k], A[i]
        if U is not None:
            U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for row in A:
            row[j], row[k] = row[k], row[j]
        if V is not None:
            for row in V:
                row[j], row[k] = row[k], row[j]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        ra, rs = A[dst], A[src]
        for c in range(n):
            if rs[c]:
                ra[c] -= q * rs[c]
        if U is not None:
            ua, us = U[dst], U[src]
            for c in range(len(ua)):
                if us[c]:
                    ua[c] -= q * us[c]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        for row in A:
            if row[src]:
                row[dst] -= q * row[src]
        if V is not None:
            for row in V:
                if row[src]:
                    row[dst] -= q * row[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or (abs(v), i, j) < best):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            clean = True
            piv = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, A[i][t] // piv)
                    if A[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, A[t][j] // piv)
                    if A[t][j]:
                        clean = False
            if not clean:
                best = None
                for i in range(t, m):
                    v = A[i][t]
                    if v and (best is None or (abs(v), i, t) < best):
                        best = (abs(v), i, t)
                for j in range(t + 1, n):
                    v = A[t][j]
                    if v and (abs(v), t, j) < best:
                        best = (abs(v), t, j)
                _, i, j = best
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % piv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, -1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]
        t += 1
    return A


def smith_normal_form(M: Matrix):
    """Return ``(U, S, V)`` with ``U @ M @ V == S`` over Z.

    U and V are unimodular; S is diagonal with d_1 | d_2 | ... and nonnegative
    entries.
    """
    if M.ring != INT:
        raise RingMismatch("smith_normal_form works over Z")
    A = M.to_lists()
    U = [[int(i == j) for j in range(M.nrows)] for i in range(M.nrows)]
    V = [[int(i == j) for j in range(M.ncols)] for i in range(M.ncols)]
    _dense_snf(A, U, V)
    return (Matrix.from_lists(INT, U, M.nrows), Matrix.from_lists(INT, A, M.ncols),
            Matrix.from_lists(INT, V, M.ncols))


def invariant_factors(M: Matrix) -> list:
    """Nonzero Smith diagonal of an integer matrix, in divisibility order."""
    if M.ring != INT:
        raise RingMismatch("invariant factors are computed over Z")
    ones, rest = _eliminate_units(INT, M.rows)
    if not rest:
        return [1] * ones
    cols = sorted({j for r in rest for j in r})
    pos = {j: k for k, j in enumerate(cols)}
    A = []
    for r in rest:
        row = [0] * len(cols)
        for j, v in r.items():
            row[pos[j]] = v
        A.append(row)
    _dense_snf(A)
    diag = [A[i][i] for i in range(min(len(A), len(cols))) if A[i][i]]
    return [1] * ones + diag


def rank(M: Matrix) -> int:
    if M.ring == INT:
        return len(invariant_factors(M))
    if M.ring == F2:
        return len(_f2_basis(_to_bits(M.rows)))
    count, rest = _eliminate_units(M.ring, M.rows)
    assert not rest
    return count


def determinant(M: Matrix):
    if M.nrows != M.ncols:
        raise GradingMismatch("determinant of a non-square matrix")
    ring = M.ring
    A = M.to_lists()
    n = len(A)
    if ring.is_field:
        norm = _norm(ring)
        det = 1
        for c in range(n):
            piv = next((r for r in range(c, n) if A[r][c]), None)
            if piv is None:
                return 0
            if piv != c:
                A[c], A[piv] = A[piv], A[c]
                det = -det
            det = norm(det * A[c][c])
            inv = ring.inv(A[c][c])
            for r in range(c + 1, n):
                if A[r][c]:
                    f = norm(A[r][c] * inv)
                    A[r] = [norm(x - f * y) for x, y in zip(A[r], A[c])]
        return norm(det)
    # Bareiss fraction-free elimination
    sign, prev = 1, 1
    for c in range(n - 1):
        piv = next((r for r in range(c, n) if A[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            sign = -sign
        for r in range(c + 1, n):
            for k in range(c + 1, n):
                A[r][k] = (A[r][k] * A[c][c] - A[r][c] * A[c][k]) // prev
        prev = A[c][c]
    return sign * A[n - 1][n - 1] if n else 1


def is_invertible(M: Matrix) -> bool:
    if M.nrows != M.ncols:
        return False
    if M.ring == INT:
        return abs(determinant(M)) == 1
    return rank(M) == M.nrows


def inverse(M: Matrix) -> Matrix:
    """Inverse over a field, or of a unimodular integer matrix."""
    if M.nrows != M.ncols:
        raise GradingMismatch("inverse of a non-square matrix")
    ring = M.ring
    work = RAT if ring == INT else ring
    norm = _norm(work)
    n = M.nrows
    A = [[work(x) for x in row] + [work(int(i == j)) for j in range(n)]
         for i, row in enumerate(M.to_lists())]
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c]), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        A[c], A[piv] = A[piv], A[c]
        inv = work.inv(A[c][c])
        A[c] = [norm(x * inv) for x in A[c]]
        for r in range(n):
            if r != c and A[r][c]:
                f = A[r][c]
                A[r] = [norm(x - f * y) for x, y in zip(A[r], A[c])]
    return Matrix.from_lists(ring, [row[n:] for row in A], n)


# ---------------------------------------------------------------------------
# F_2 bitset helpers


def _to_bits(rows):
    out = []
    for r in rows:
        x = 0
        for j in r:
            x |= 1 << j
        out.append(x)
    return out


def _f2_basis(bits):
    basis = {}
    for x in bits:
        while x:
            lb = x & -x
            y = basis.get(lb)
            if y is None:
                basis[lb] = x
                break
            x ^= y
    return basis


def _f2_rref(bits):
    basis = _f2_basis(bits)
    keys = sorted(basis, reverse=True)
    for k in keys:
        row = basis[k]
        for k2 in keys:
            if k2 != k and basis[k2] & k:
                basis[k2] ^= row
    return {k.bit_length() - 1: v for k, v in basis.items()}


def _bits_to_vec(x):
    out = {}
    while x:
        lb = x & -x
        out[lb.bit_length() - 1] = 1
        x ^= lb
    return out


# ---------------------------------------------------------------------------
# field routines


def _require_field(ring):
    if not ring.is_field:
        raise RingNotField(f"{ring} is not a field")


def rref_pivots(M: Matrix) -> dict:
    """Reduced row echelon form as {pivot column: row dict} (leading entry 1)."""
    ring = M.ring
    _require_field(ring)
    if ring == F2:
        return {c: _bits_to_vec(x) for c, x in _f2_rref(_to_bits(M.rows)).items()}
    norm = _norm(ring)
    piv = {}
    for r in M.rows:
        row = dict(r)
        while row:
            hits = [c for c in row if c in piv]
            if not hits:
                break
            c = min(hits)
            f = row[c]
            for k, v in piv[c].items():
                nv = norm(row.get(k, 0) - f * v)
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
        if row:
            lead = min(row)
            inv = ring.inv(row[lead])
            piv[lead] = {k: norm(v * inv) for k, v in row.items()}
    for c in sorted(piv, reverse=True):
        prow = piv[c]
        for c2 in piv:
            if c2 != c and c in piv[c2]:
                row = piv[c2]
                f = row[c]
                for k, v in prow.items():
                    nv = norm(row.get(k, 0) - f * v)
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
    return piv


def nullspace(M: Matrix) -> list:
    """Kernel basis as sparse vectors, one per free column in column order."""
    piv = rref_pivots(M)
    norm = _norm(M.ring)
    basis = []
    for j in range(M.ncols):
        if j in piv:
            continue
        v = {j: 1}
        for c, row in piv.items():
            if j in row:
                w = norm(-row[j])
                if w:
                    v[c] = w
        basis.append(v)
    return basis


class Reducer:
    """Incremental echelon basis that remembers how each vector was obtained.

    Vectors added with a ``tag`` become named generators; vectors added with
    ``tag=None`` span a subspace that is quotiented out when expressing.
    """

    def __init__(self, ring: Ring):
        _require_field(ring)
        self.ring = ring
        self._norm = _norm(ring)
        self.piv = {}

    def _reduce(self, vec, expr):
        norm = self._norm
        vec = dict(vec)
        piv = self.piv
        while vec:
            hits = [c for c in vec if c in piv]
            if not hits:
                break
            c = min(hits)
            f = vec[c]
            pvec, pexpr = piv[c]
            for k, v in pvec.items():
                nv = norm(vec.get(k, 0) - f * v)
                if nv:
                    vec[k] = nv
                else:
                    vec.pop(k, None)
            for t, v in pexpr.items():
                nv = norm(expr.get(t, 0) - f * v)
                if nv:
                    expr[t] = nv
                else:
                    expr.pop(t, None)
        return vec, expr

    def add(self, vec, tag=None) -> bool:
        vec, expr = self._reduce(vec, {} if tag is None else {tag: 1})
        if not vec:
            return False
        lead = min(vec)
        inv = self.ring.inv(vec[lead])
        norm = self._norm
        self.piv[lead] = ({k: norm(v * inv) for k, v in vec.items()},
                          {t: norm(v * inv) for t, v in expr.items()})
        return True

    def express(self, vec) -> dict:
        """Coefficients c_t with vec = sum c_t * generator_t + (quotiented part)."""
        rest, expr = self._reduce(vec, {})
        if rest:
            raise ValueError("vector is not in the span")
        return {t: self._norm(-v) for t, v in expr.items() if self._norm(-v)}


# ---------------------------------------------------------------------------
# presentations and complexes


@dataclass(frozen=True)
class GroupPresentation:
    """Z^free_rank + Z/d_1 + ... + Z/d_k, or a vector space of dimension free_rank."""

    ring: Ring
    free_rank: int
    torsion: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(self.torsion))
        if self.free_rank < 0:
            raise ValueError("negative rank")
        if self.torsion and self.ring != INT:
            raise ValueError("torsion only occurs over Z")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"torsion {self.torsion} is not a divisibility chain")
        if any(d < 2 for d in self.torsion):
            raise ValueError("torsion coefficients must be >= 2")

    @property
    def dim(self) -> int:
        return self.free_rank

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def to_json(self):
        return {"rank": self.free_rank, "torsion": list(self.torsion)}

    def __str__(self):
        base = {"Z": "Z", "Q": "Q"}.get(self.ring.kind, f"F{self.ring.p}")
        parts = []
        if self.free_rank:
            parts.append(base if self.free_rank == 1 else f"{base}^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) or "0"


def presentation_from_factors(ring, free_rank, factors):
    return GroupPresentation(ring, free_rank, tuple(d for d in factors if d > 1))


@dataclass(eq=False)
class Complex:
    """A bounded piece of a (co)chain complex of finite free modules.

    ``kind == "cochain"``: ``diffs[n]`` maps degree n to degree n+1.
    ``kind == "chain"``:   ``diffs[n]`` maps degree n+1 to degree n.
    Differentials missing at the top are treated as zero; the top degree is
    then only an upper bound (see :meth:`upper_bound_only`).
    """

    ring: Ring
    dims: list
    diffs: list
    kind: str = "cochain"
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.kind not in ("cochain", "chain"):
            raise ValueError(self.kind)
        if len(self.diffs) > max(len(self.dims) - 1, 0):
            raise GradingMismatch("more differentials than degrees")
        for n, d in enumerate(self.diffs):
            if d.ring != self.ring:
                raise RingMismatch("differential over the wrong ring")
            if self.kind == "cochain":
                want = (self.dims[n + 1], self.dims[n])
            else:
                want = (self.dims[n], self.dims[n + 1])
            if d.shape != want:
                raise GradingMismatch(f"differential {n} has shape {d.shape}, expected {want}")

    @property
    def top(self):
        return len(self.dims) - 1

    def outgoing(self, n) -> Optional[Matrix]:
        if self.kind == "cochain":
            return self.diffs[n] if n < len(self.diffs) else None
        return self.diffs[n - 1] if 1 <= n <= len(self.diffs) else None

    def incoming(self, n) -> Optional[Matrix]:
        if self.kind == "cochain":
            return self.diffs[n - 1] if 1 <= n <= len(self.diffs) else None
        return self.diffs[n] if n < len(self.diffs) else None

    def upper_bound_only(self, n) -> bool:
        if self.kind == "cochain":
            return n >= len(self.diffs)
        return n >= len(self.diffs)

    def check_dd(self):
        for n in range(len(self.diffs) - 1):
            if self.kind == "cochain":
                prod = self.diffs[n + 1] @ self.diffs[n]
            else:
                prod = self.diffs[n] @ self.diffs[n + 1]
            if not prod.is_zero():
                raise GradingMismatch(f"d∘d != 0 at degree {n}")
        return True

    def _factors(self, M, key):
        if key not in self._cache:
            if M is None:
                self._cache[key] = []
            elif self.ring == INT:
                self._cache[key] = invariant_factors(M)
            else:
                self._cache[key] = [1] * rank(M)
        return self._cache[key]


def cohomology_at(complex_: Complex, n: int) -> GroupPresentation:
    """ker(out_n) / im(in_n) as a presentation (works for both gradings)."""
    if not 0 <= n <= complex_.top:
        raise GradingMismatch(f"degree {n} outside 0..{complex_.top}")
    out = complex_._factors(complex_.outgoing(n), ("out", n))
    inc = complex_._factors(complex_.incoming(n), ("in", n))
    free = complex_.dims[n] - len(out) - len(inc)
    return presentation_from_factors(complex_.ring, free, inc)


homology_at = cohomology_at


class CohomologyBasis:
    """Chosen representatives of H^n of a complex over a field.

    Representatives are the first kernel vectors (kernel basis from the reduced
    row echelon form, in free-column order) that are independent modulo the
    image, which makes the basis reproducible.
    """

    def __init__(self, complex_: Complex, n: int):
        ring = complex_.ring
        _require_field(ring)
        dim = complex_.dims[n]
        out = complex_.outgoing(n)
        inc = complex_.incoming(n)
        if out is None:
            kernel = [{j: 1} for j in range(dim)]
        else:
            kernel = nullspace(out)
        self.reducer = Reducer(ring)
        if inc is not None:
            for col in inc.transpose().rows:
                if col:
                    self.reducer.add(col)
        self.reps = []
        for z in kernel:
            if self.reducer.add(z, tag=len(self.reps)):
                self.reps.append(z)
        self.ring = ring
        self.degree = n

    @property
    def dim(self):
        return len(self.reps)

    def coordinates(self, vec) -> list:
        coeffs = self.reducer.express(vec)
        return [coeffs.get(i, 0) for i in range(self.dim)]


def cohomology_basis(complex_: Complex, n: int) -> CohomologyBasis:
    key = ("basis", n)
    if key not in complex_._cache:
        complex_._cache[key] = CohomologyBasis(complex_, n)
    return complex_._cache[key]


def _first_difference(A: Matrix, B: Matrix):
    for i, (r, s) in enumerate(zip(A.rows, B.rows)):
        if r != s:
            j = min(set(r) ^ set(s) | {k for k in r if k in s and r[k] != s[k]})
            return (i, j)
    return None


def check_chain_map(source: Complex, target: Complex, chain_map: dict):
    """Verify that the given per-degree matrices commute with the differentials."""
    if source.kind != target.kind:
        raise GradingMismatch("source and target gradings differ")
    for n, phi in chain_map.items():
        if phi.shape != (target.dims[n], source.dims[n]):
            raise GradingMismatch(f"chain map at degree {n} has shape {phi.shape}")
        if source.kind == "cochain":
            m = n + 1
        else:
            m = n - 1
        if m not in chain_map:
            continue
        ds, dt = source.outgoing(n), target.outgoing(n)
        if ds is None or dt is None:
            continue
        lhs = chain_map[m] @ ds
        rhs = dt @ phi
        if lhs != rhs:
            raise NotChainMap(n, _first_difference(lhs, rhs))


def induced_map(source: Complex, target: Complex, chain_map: dict, n: int) -> Matrix:
    """Matrix of H^n(source) -> H^n(target) in the chosen cohomology bases."""
    if source.ring != target.ring:
        raise RingMismatch("complexes over different rings")
    _require_field(source.ring)
    if n not in chain_map:
        raise GradingMismatch(f"no chain map component in degree {n}")
    check_chain_map(source, target, chain_map)
    bs = cohomology_basis(source, n)
    bt = cohomology_basis(target, n)
    phi = chain_map[n]
    cols = [bt.coordinates(phi.apply(z)) for z in bs.reps]
    rows = [[cols[j][i] for j in range(len(cols))] for i in range(bt.dim)]
    return Matrix.from_lists(source.ring, rows, bs.dim)


def zero_complex(ring, top, kind="cochain"):
    dims = [0] * (top + 1)
    return Complex(ring, dims, [Matrix.zeros(ring, 0, 0) for _ in range(top)], kind)
