"""E2 pages of the spectral sequence of a functor u: E -> B.

For every morphism beta of B (an object of F B) we form the comma category
beta/Fu of the induced functor Fu: F E -> F B, restrict D (viewed as a module
on F E) along the forgetful functor and take lim^q.  These values, with
structure maps induced by the functors

    tau_m : beta2/Fu -> beta1/Fu,   (f, psi) |-> (f, psi∘m)     for m: beta1 -> beta2,

form a natural system H^q on B; the page is E2^{p,q} = H^p(B, H^q).
Homology mode uses Fu/beta, colim_q and push-forward along (f, psi) |-> (f, m∘psi).
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .errors import GradingMismatch, RingMismatch, RingNotField, SizeGuard
from .exactalg import cohomology_basis, induced_map
from .fincat import (
    FinCat,
    FinFunctor,
    comma_over,
    comma_under,
    factorization,
    factorization_functor,
    nondegenerate_chain_counts,
)
from .homcalc import (
    bw_cohomology_range,
    bw_homology_range,
    module_chain_complex,
    module_cochain_complex,
    pushforward_chain_map,
    restriction_chain_map,
)
from .natsys import NaturalSystem, as_fc_module, module_pullback

DEFAULT_COMMA_GUARD = 3000


@dataclass(eq=False)
class CommaData:
    beta: object
    comma: FinCat
    Q: FinFunctor
    bar: object  # BarData


def _comma_job(Fu, DM, beta, depth, guard, homology):
    build = comma_over if homology else comma_under
    comma, Q = build(Fu, beta)
    if guard is not None and len(comma.morphisms) > guard:
        raise SizeGuard(f"comma category at {beta!r} has {len(comma.morphisms)} morphisms "
                        f"(guard {guard})")
    module = module_pullback(Q, DM)
    maker = module_chain_complex if homology else module_cochain_complex
    bar = maker(comma, module, depth)
    for q in range(depth):
        cohomology_basis(bar.complex, q)
    return CommaData(beta, comma, Q, bar)


@dataclass(eq=False)
class CoefficientSystems:
    """The natural systems H^q (or H_q) on B for q = 0..qmax, with their comma data."""

    u: FinFunctor
    homology: bool
    systems: list
    commas: dict
    FB: FinCat
    Fu: FinFunctor


def _tau(FB, source: CommaData, target: CommaData, m, homology) -> FinFunctor:
    """Comma functor induced by the F B-morphism m.

    Homology: (f, psi) |-> (f, m∘psi) on over-commas.  Cohomology: (f, psi) |->
    (f, psi∘m) on under-commas (the functor runs against m).  The result must
    commute with the forgetful functors on the nose.
    """
    if homology:
        move = lambda psi: FB.comp(m, psi)
    else:
        move = lambda psi: FB.comp(psi, m)
    F = FinFunctor(source.comma, target.comma,
                   {x: (x[0], move(x[1])) for x in source.comma.objects},
                   {g: (g[0], move(g[1])) for g in source.comma.morphisms})
    for x in F.source.objects:
        if target.Q.ob(F.ob(x)) != source.Q.ob(x):
            raise GradingMismatch(f"comma functor does not commute with the projections at {x!r}")
    for g in F.source.morphisms:
        if target.Q(F(g)) != source.Q(g):
            raise GradingMismatch(f"comma functor does not commute with the projections at {g!r}")
    return F


def coefficient_systems(u: FinFunctor, D: NaturalSystem, qmax: int, homology=False,
                        jobs: int = 1, comma_guard=DEFAULT_COMMA_GUARD) -> CoefficientSystems:
    if not D.ring.is_field:
        raise RingNotField(f"E2 pages need field coefficients, got {D.ring}")
    E, B = u.source, u.target
    FE, _ = factorization(E)
    FB, _ = factorization(B)
    Fu = factorization_functor(u, FE, FB)
    DM = as_fc_module(D, FE)
    depth = qmax + 1
    args = [(Fu, DM, beta, depth, comma_guard, homology) for beta in B.morphisms]
    if jobs > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_comma_job, *zip(*args)))
    else:
        results = [_comma_job(*a) for a in args]
    commas = {c.beta: c for c in results}

    # generating F B-morphisms: (beta, a, id) and (beta, id, b)
    maps_by_q = [({}, {}) for _ in range(qmax + 1)]
    degrees = range(depth + 1)
    for beta in B.morphisms:
        s, t = B.src(beta), B.tgt(beta)
        gens = [("right", a, (beta, a, B.id(t)), B.comp(beta, a)) for a in B.into(s)]
        gens += [("left", b, (beta, B.id(s), b), B.comp(b, beta)) for b in B.out_of(t)]
        for side, g, m, beta2 in gens:
            c1, c2 = commas[beta], commas[beta2]
            if homology:
                cmap = pushforward_chain_map(c1.bar, c2.bar, _tau(FB, c1, c2, m, True), degrees)
            else:
                cmap = restriction_chain_map(c1.bar, c2.bar, _tau(FB, c2, c1, m, False), degrees)
            src, tgt = c1.bar.complex, c2.bar.complex
            for q in range(qmax + 1):
                sub = {k: cmap[k] for k in (q, q + 1)}
                M = induced_map(src, tgt, sub, q)
                if side == "right":
                    maps_by_q[q][0][(beta, g)] = M
                else:
                    maps_by_q[q][1][(g, beta)] = M
    systems = []
    for q in range(qmax + 1):
        dims = {beta: cohomology_basis(commas[beta].bar.complex, q).dim for beta in B.morphisms}
        right, left = maps_by_q[q]
        name = f"H_{q}" if homology else f"H^{q}"
        systems.append(NaturalSystem(B, D.ring, dims, right, left, name=name).validate())
    return CoefficientSystems(u, homology, systems, commas, FB, Fu)


@dataclass(eq=False)
class E2Page:
    ring: object
    N: int
    grid: dict            # (p, q) -> GroupPresentation
    abutment: list        # GroupPresentation for n = 0..N
    homology: bool = False
    loop_free: bool = False
    euler_data: dict = field(default_factory=dict)
    coefficient_modules: list = field(default_factory=list)

    def dim(self, p, q) -> int:
        return self.grid[(p, q)].dim

    def diagonal(self, n) -> int:
        return sum(self.dim(p, n - p) for p in range(n + 1))

    def copy_with(self, p, q, delta):
        """Tampered copy with E2^{p,q} shifted by delta (for testing the checker)."""
        from .exactalg import GroupPresentation

        grid = dict(self.grid)
        old = grid[(p, q)]
        grid[(p, q)] = GroupPresentation(old.ring, old.free_rank + delta)
        return E2Page(self.ring, self.N, grid, list(self.abutment), self.homology,
                      self.loop_free, dict(self.euler_data), list(self.coefficient_modules))


def e2_page(u: FinFunctor, D: NaturalSystem, N: int, ring=None, homology=False, jobs=1,
            comma_guard=DEFAULT_COMMA_GUARD) -> E2Page:
    """Assemble E2^{p,q} for p + q <= N and the abutment H^n(E, D), n <= N.

    All entries are exact: comma complexes are built through degree N + 1.
    """
    if ring is not None and ring != D.ring:
        raise RingMismatch(f"requested {ring} but coefficients are over {D.ring}")
    if not D.ring.is_field:
        raise RingNotField(f"E2 pages need field coefficients, got {D.ring}")
    E, B = u.source, u.target
    cs = coefficient_systems(u, D, N, homology, jobs, comma_guard)
    grid = {}
    engine = bw_homology_range if homology else bw_cohomology_range
    for q in range(N + 1):
        for p, pres in enumerate(engine(B, cs.systems[q], N - q)):
            grid[(p, q)] = pres
    abutment = engine(E, D, N)
    page = E2Page(D.ring, N, grid, abutment, homology)
    _euler_data(page, u, D, cs)
    return page


def _euler_data(page: E2Page, u, D, cs: CoefficientSystems):
    """Chain-level Euler characteristics when everything in sight is loop-free."""
    E, B = u.source, u.target
    commas = cs.commas.values()
    page.loop_free = (E.is_loop_free() and B.is_loop_free()
                      and all(c.comma.is_loop_free() for c in commas))
    if not page.loop_free:
        return
    chi_total = _chi_bw(E, D)
    chi_comma = {c.beta: _chi_module(c) for c in commas}
    chi_page = 0
    for chain_sign, comp in _signed_nondegenerate_composites(B):
        chi_page += chain_sign * chi_comma[comp]
    lengths = {
        "E": len(nondegenerate_chain_counts(E)) - 1,
        "B": len(nondegenerate_chain_counts(B)) - 1,
        "comma": max((len(nondegenerate_chain_counts(c.comma)) - 1 for c in commas), default=0),
    }
    page.euler_data = {"chi_abutment_chains": chi_total, "chi_page_chains": chi_page,
                       "chi_commas": chi_comma, "lengths": lengths}


def _signed_nondegenerate_composites(C: FinCat):
    """Yield ((-1)^n * multiplicity, composite) over nondegenerate chains of a loop-free category."""
    level = {C.id(x): 1 for x in C.objects}
    sign = 1
    while level:
        for comp, k in level.items():
            yield sign * k, comp
        nxt = {}
        for comp, k in level.items():
            for f in C.into(C.src(comp)):
                if not C.is_identity(f):
                    c2 = C.comp(comp, f)
                    nxt[c2] = nxt.get(c2, 0) + k
        level = nxt
        sign = -sign


def _chi_bw(C: FinCat, D: NaturalSystem) -> int:
    return sum(s * D.dims[comp] for s, comp in _signed_nondegenerate_composites(C))


def _chi_module(c: CommaData) -> int:
    """Euler characteristic of the bar complex of the comma category."""
    X = c.comma
    module_dim = {x: c.bar.blocks[0][i] for i, x in enumerate(X.objects)}
    total = 0
    for s, comp in _signed_nondegenerate_composites(X):
        # coefficient sits at C_0 = target of the composite (cochains) or C_n = source (chains)
        end = X.src(comp) if c.bar.complex.kind == "chain" else X.tgt(comp)
        total += s * module_dim[end]
    return total


def page_bounds(page: E2Page):
    """(max p, max q, max n) beyond which page and abutment vanish, or None."""
    if not page.loop_free:
        return None
    L = page.euler_data["lengths"]
    return L["B"], L["comma"], L["E"]


def check_consistency(page: E2Page) -> dict:
    violations = []
    N = page.N
    for n in range(N + 1):
        total = page.diagonal(n)
        if page.abutment[n].dim > total:
            violations.append(f"inequality: dim H^{n} = {page.abutment[n].dim} exceeds "
                              f"E2 diagonal sum {total}")
    row = all(g.dim == 0 for (p, q), g in page.grid.items() if q >= 1)
    col = all(g.dim == 0 for (p, q), g in page.grid.items() if p >= 1)
    degenerate = "row" if row else ("column" if col else "none")
    if degenerate != "none":
        for n in range(N + 1):
            if page.abutment[n].dim != page.diagonal(n):
                violations.append(f"degenerate {degenerate}: dim H^{n} = {page.abutment[n].dim} "
                                  f"but E2 diagonal sum is {page.diagonal(n)}")
    euler = "N/A"
    if page.loop_free:
        d = page.euler_data
        ok = True
        if d["chi_abutment_chains"] != d["chi_page_chains"]:
            ok = False
            violations.append(f"euler: chain-level characteristics differ "
                              f"({d['chi_abutment_chains']} vs {d['chi_page_chains']})")
        maxp, maxq, maxn = page_bounds(page)
        if N >= maxn:
            chi = sum((-1) ** n * page.abutment[n].dim for n in range(N + 1))
            if chi != d["chi_abutment_chains"]:
                ok = False
                violations.append(f"euler: abutment alternating sum {chi} differs from "
                                  f"{d['chi_abutment_chains']}")
        if N >= maxp + maxq:
            chi = sum((-1) ** (p + q) * g.dim for (p, q), g in page.grid.items())
            if chi != d["chi_page_chains"]:
                ok = False
                violations.append(f"euler: page alternating sum {chi} differs from "
                                  f"{d['chi_page_chains']}")
        euler = "PASS" if ok else "FAIL"
    ineq_ok = not any(v.startswith("inequality") for v in violations)
    return {"inequalities": "PASS" if ineq_ok else "FAIL", "degenerate": degenerate,
            "euler": euler, "violations": violations}


def page_json(page: E2Page, verdict=None) -> dict:
    verdict = verdict or check_consistency(page)
    out = {
        "ring": str(page.ring),
        "N": page.N,
        "grid": [{"p": p, "q": q, "dim": page.grid[(p, q)].dim}
                 for (p, q) in sorted(page.grid, key=lambda k: (k[0] + k[1], k[0]))],
        "abutment": [g.dim for g in page.abutment],
        "verdict": verdict,
    }
    if page.coefficient_modules:
        out["coefficient_modules"] = page.coefficient_modules
    return out


def page_passes(verdict) -> bool:
    return not verdict["violations"]
