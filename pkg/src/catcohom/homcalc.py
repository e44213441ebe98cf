"""(Co)homology engines.

* :func:`bw_cochain_complex` assembles the cochain complex whose degree-n term
  is the product of ``D(f_1∘...∘f_n)`` over nerve chains, with the three-part
  differential (left action on the first face, inner composites, right action
  on the last face).
* :func:`module_cochain_complex` / :func:`module_chain_complex` are the bar
  complexes computing lim^n and colim_n of a covariant module.  They are coded
  independently of the natural-system complex so that the two can be compared.
* :func:`limit` / :func:`colimit` compute H^0 / H_0 directly as an equalizer /
  coequalizer, again on a separate code path.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import GradingMismatch
from .exactalg import (
    INT,
    Complex,
    GroupPresentation,
    Matrix,
    MatrixBuilder,
    cohomology_at,
    induced_map,
    invariant_factors,
    presentation_from_factors,
    rank,
)
from .fincat import FinCat, FinFunctor, Nerve, factorization
from .natsys import Module, NaturalSystem, as_fc_module, from_bimodule, pullback


@dataclass(eq=False)
class BarData:
    """A complex together with the chain bookkeeping used to build it."""

    complex: Complex
    nerve: Nerve
    offsets: list  # offsets[n][k]: first coordinate of the k-th chain in degree n
    blocks: list   # blocks[n][k]: dimension of that chain's coefficient module

    def block_of(self, n, chain):
        k = self.nerve.index(n).get(chain)
        if k is None:
            return None
        return self.offsets[n][k], self.blocks[n][k]


def _layout(level, dim_of):
    offsets, blocks, pos = [], [], 0
    for entry in level:
        d = dim_of(entry)
        offsets.append(pos)
        blocks.append(d)
        pos += d
    return offsets, blocks, pos


def bw_cochain_complex(C: FinCat, D: NaturalSystem, N: int, normalized: bool = True) -> BarData:
    """Natural-system cochain complex of C through degree N."""
    if D.base is not C and D.base != C:
        raise GradingMismatch("natural system lives on a different category")
    nerve = Nerve(C, normalized)
    ring = D.ring
    offsets, blocks, dims = [], [], []
    for n in range(N + 1):
        o, b, total = _layout(nerve.level(n), lambda e: D.dims[e[1]])
        offsets.append(o)
        blocks.append(b)
        dims.append(total)
    diffs = []
    for n in range(N):
        B = MatrixBuilder(ring, dims[n + 1], dims[n])
        idx = nerve.index(n)
        for k, (chain, comp) in enumerate(nerve.level(n + 1)):
            r0 = offsets[n + 1][k]
            if n == 0:
                (f1,) = chain
                s, t = C.src(f1), C.tgt(f1)
                B.add_block(r0, offsets[0][idx[s]], D.left[(f1, C.id(s))])
                B.add_block(r0, offsets[0][idx[t]], D.right[(C.id(t), f1)], -1)
                continue
            tail = chain[1:]
            j = idx[tail]
            tail_comp = nerve.level(n)[j][1]
            B.add_block(r0, offsets[n][j], D.left[(chain[0], tail_comp)])
            for i in range(1, n + 1):
                merged = C.comp(chain[i - 1], chain[i])
                if normalized and C.is_identity(merged):
                    continue
                face = chain[:i - 1] + (merged,) + chain[i + 1:]
                B.add_identity(r0, offsets[n][idx[face]], blocks[n + 1][k], (-1) ** i)
            head = chain[:-1]
            j = idx[head]
            head_comp = nerve.level(n)[j][1]
            B.add_block(r0, offsets[n][j], D.right[(head_comp, chain[-1])], (-1) ** (n + 1))
        diffs.append(B.build())
    return BarData(Complex(ring, dims, diffs, "cochain"), nerve, offsets, blocks)


def module_cochain_complex(X: FinCat, F: Module, N: int, normalized: bool = True) -> BarData:
    """Bar cochain complex: degree n is the product of F(C_0) over n-chains."""
    nerve = Nerve(X, normalized)
    ring = F.ring

    def head_object(n, entry):
        chain, _ = entry
        return chain if n == 0 else X.tgt(chain[0])

    offsets, blocks, dims = [], [], []
    for n in range(N + 1):
        o, b, total = _layout(nerve.level(n), lambda e, n=n: F.values[head_object(n, e)])
        offsets.append(o)
        blocks.append(b)
        dims.append(total)
    diffs = []
    for n in range(N):
        B = MatrixBuilder(ring, dims[n + 1], dims[n])
        idx = nerve.index(n)
        for k, (chain, _) in enumerate(nerve.level(n + 1)):
            r0 = offsets[n + 1][k]
            size = blocks[n + 1][k]
            first = chain[1:] if n else X.src(chain[0])
            B.add_block(r0, offsets[n][idx[first]], F.maps[chain[0]])
            for i in range(1, n + 1):
                merged = X.comp(chain[i - 1], chain[i])
                if normalized and X.is_identity(merged):
                    continue
                face = chain[:i - 1] + (merged,) + chain[i + 1:]
                B.add_identity(r0, offsets[n][idx[face]], size, (-1) ** i)
            last = chain[:-1] if n else X.tgt(chain[0])
            B.add_identity(r0, offsets[n][idx[last]], size, (-1) ** (n + 1))
        diffs.append(B.build())
    return BarData(Complex(ring, dims, diffs, "cochain"), nerve, offsets, blocks)


def module_chain_complex(X: FinCat, F: Module, N: int, normalized: bool = True) -> BarData:
    """Bar chain complex: degree n is the sum of F(C_n) over n-chains."""
    nerve = Nerve(X, normalized)
    ring = F.ring

    def tail_object(n, entry):
        chain, _ = entry
        return chain if n == 0 else X.src(chain[-1])

    offsets, blocks, dims = [], [], []
    for n in range(N + 1):
        o, b, total = _layout(nerve.level(n), lambda e, n=n: F.values[tail_object(n, e)])
        offsets.append(o)
        blocks.append(b)
        dims.append(total)
    diffs = []
    for n in range(N):
        # d: C_{n+1} -> C_n, built column block by column block
        B = MatrixBuilder(ring, dims[n], dims[n + 1])
        idx = nerve.index(n)
        for k, (chain, _) in enumerate(nerve.level(n + 1)):
            c0 = offsets[n + 1][k]
            size = blocks[n + 1][k]
            first = chain[1:] if n else X.src(chain[0])
            B.add_identity(offsets[n][idx[first]], c0, size)
            for i in range(1, n + 1):
                merged = X.comp(chain[i - 1], chain[i])
                if normalized and X.is_identity(merged):
                    continue
                face = chain[:i - 1] + (merged,) + chain[i + 1:]
                B.add_identity(offsets[n][idx[face]], c0, size, (-1) ** i)
            last = chain[:-1] if n else X.tgt(chain[0])
            B.add_block(offsets[n][idx[last]], c0, F.maps[chain[-1]], (-1) ** (n + 1))
        diffs.append(B.build())
    return BarData(Complex(ring, dims, diffs, "chain"), nerve, offsets, blocks)


# ---------------------------------------------------------------------------
# presentations


def _range(bar: BarData, N: int):
    return [cohomology_at(bar.complex, n) for n in range(N + 1)]


def bw_cohomology(C, D, n, normalized=True) -> GroupPresentation:
    return cohomology_at(bw_cochain_complex(C, D, n + 1, normalized).complex, n)


def bw_cohomology_range(C, D, N, normalized=True) -> list:
    """H^0..H^N computed from a complex built through degree N + 1."""
    return _range(bw_cochain_complex(C, D, N + 1, normalized), N)


def cohomology_via_fc(C, D, n, normalized=True) -> GroupPresentation:
    FC, _ = factorization(C)
    return cohomology_at(module_cochain_complex(FC, as_fc_module(D, FC), n + 1, normalized).complex, n)


def cohomology_via_fc_range(C, D, N, normalized=True) -> list:
    FC, _ = factorization(C)
    return _range(module_cochain_complex(FC, as_fc_module(D, FC), N + 1, normalized), N)


def bw_homology(C, D, n, normalized=True) -> GroupPresentation:
    FC, _ = factorization(C)
    return cohomology_at(module_chain_complex(FC, as_fc_module(D, FC), n + 1, normalized).complex, n)


def bw_homology_range(C, D, N, normalized=True) -> list:
    FC, _ = factorization(C)
    return _range(module_chain_complex(FC, as_fc_module(D, FC), N + 1, normalized), N)


def module_cohomology(C, F, n, normalized=True) -> GroupPresentation:
    return cohomology_at(module_cochain_complex(C, F, n + 1, normalized).complex, n)


def module_cohomology_range(C, F, N, normalized=True) -> list:
    return _range(module_cochain_complex(C, F, N + 1, normalized), N)


def module_homology(C, F, n, normalized=True) -> GroupPresentation:
    return cohomology_at(module_chain_complex(C, F, n + 1, normalized).complex, n)


def module_homology_range(C, F, N, normalized=True) -> list:
    return _range(module_chain_complex(C, F, N + 1, normalized), N)


def hochschild_cohomology(C, M, n, normalized=True) -> GroupPresentation:
    return bw_cohomology(C, from_bimodule(M), n, normalized)


def hochschild_homology(C, M, n, normalized=True) -> GroupPresentation:
    return bw_homology(C, from_bimodule(M), n, normalized)


def _stack_offsets(C: FinCat, values):
    offsets, pos = {}, 0
    for x in C.objects:
        offsets[x] = pos
        pos += values[x]
    return offsets, pos


def limit(C: FinCat, F: Module) -> GroupPresentation:
    """Equalizer of prod F(x) => prod over morphisms f of F(tgt f)."""
    off, total = _stack_offsets(C, F.values)
    rows = []
    for f in C.morphisms:
        s, t = C.src(f), C.tgt(f)
        M = F.maps[f]
        for i in range(F.values[t]):
            row = {}
            for j, v in M.rows[i].items():
                row[off[s] + j] = v
            key = off[t] + i
            row[key] = row.get(key, 0) - 1
            if F.ring.kind == "Fp":
                row = {k: v % F.ring.p for k, v in row.items()}
            rows.append({k: v for k, v in row.items() if v})
    A = Matrix(F.ring, len(rows), total, rows)
    return GroupPresentation(F.ring, total - rank(A))


def colimit(C: FinCat, F: Module) -> GroupPresentation:
    """Coequalizer of sum over morphisms f of F(src f) => sum F(x)."""
    off, total = _stack_offsets(C, F.values)
    cols = []
    for f in C.morphisms:
        s, t = C.src(f), C.tgt(f)
        M = F.maps[f]
        for j in range(F.values[s]):
            col = {}
            for i in range(F.values[t]):
                v = M.rows[i].get(j, 0)
                if v:
                    col[off[t] + i] = v
            key = off[s] + j
            col[key] = col.get(key, 0) - 1
            if F.ring.kind == "Fp":
                col = {k: v % F.ring.p for k, v in col.items()}
            cols.append({k: v for k, v in col.items() if v})
    # relations as rows of the transpose; the cokernel only depends on the row space
    A = Matrix(F.ring, len(cols), total, cols)
    if F.ring == INT:
        factors = invariant_factors(A)
        return presentation_from_factors(INT, total - len(factors), factors)
    return GroupPresentation(F.ring, total - rank(A))


# ---------------------------------------------------------------------------
# maps


def restriction_chain_map(source: BarData, target: BarData, phi: FinFunctor, degrees) -> dict:
    """Cochain map sigma -> sigma∘phi from cochains on phi.target to cochains on phi.source.

    Requires the coefficient block of each target chain to coincide with the
    block of its image chain; degenerate images (absent from a normalized
    source) contribute zero.
    """
    ring = source.complex.ring
    out = {}
    for n in degrees:
        B = MatrixBuilder(ring, target.complex.dims[n], source.complex.dims[n])
        for k, (chain, _) in enumerate(target.nerve.level(n)):
            image = phi.ob(chain) if n == 0 else tuple(phi(f) for f in chain)
            hit = source.block_of(n, image)
            if hit is None:
                continue
            c0, size = hit
            if size != target.blocks[n][k]:
                raise GradingMismatch(f"coefficient blocks differ over chain {chain!r}")
            B.add_identity(target.offsets[n][k], c0, size)
        out[n] = B.build()
    return out


def induced_on_bw(phi: FinFunctor, D: NaturalSystem, n: int, normalized=True) -> Matrix:
    """H^n(C, D) -> H^n(C', phi^*D) for phi: C' -> C, over a field."""
    src = bw_cochain_complex(phi.target, D, n + 1, normalized)
    tgt = bw_cochain_complex(phi.source, pullback(phi, D), n + 1, normalized)
    maps = restriction_chain_map(src, tgt, phi, range(n + 2))
    return induced_map(src.complex, tgt.complex, maps, n)


# ---------------------------------------------------------------------------
# reports


def results_json(presentations, upper_top: bool = False) -> list:
    out = []
    top = len(presentations) - 1
    for n, p in enumerate(presentations):
        entry = {"n": n}
        entry.update(p.to_json())
        entry["upper_bound_only"] = bool(upper_top and n == top)
        out.append(entry)
    return out


def report(theory: str, ring, presentations, upper_top: bool = False) -> dict:
    return {"theory": theory, "ring": str(ring), "results": results_json(presentations, upper_top)}


def pushforward_chain_map(source: BarData, target: BarData, phi: FinFunctor, degrees) -> dict:
    """Chain map on bar chain complexes induced by phi: source category -> target category.

    Each chain is sent to its image chain with an identity coefficient block;
    degenerate images (absent from a normalized target) contribute zero.
    """
    ring = source.complex.ring
    out = {}
    for n in degrees:
        B = MatrixBuilder(ring, target.complex.dims[n], source.complex.dims[n])
        for k, (chain, _) in enumerate(source.nerve.level(n)):
            image = phi.ob(chain) if n == 0 else tuple(phi(f) for f in chain)
            hit = target.block_of(n, image)
            if hit is None:
                continue
            r0, size = hit
            if size != source.blocks[n][k]:
                raise GradingMismatch(f"coefficient blocks differ over chain {chain!r}")
            B.add_identity(r0, source.offsets[n][k], size)
        out[n] = B.build()
    return out
