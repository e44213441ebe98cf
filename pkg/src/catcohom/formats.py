"""JSON readers and writers for categories, functors, coefficients and actions.

Every reader rejects unknown fields and reports the location of the problem.
References to other files (``"category": "cat.json"``) are resolved relative
to the referring file and cached, so two files naming the same category share
one :class:`FinCat`.
"""
from __future__ import annotations

import json
import os

from .errors import CatCohomError, ParseError
from .exactalg import Matrix, Ring
from .fincat import FinCat, FinFunctor, default_size_guard, label, make_category
from .fibcl import StrictAction
from .natsys import Bimodule, Module, NaturalSystem


class Source:
    """A parsed JSON document plus what is needed to report positions."""

    def __init__(self, text: str, path: str = None):
        self.text = text
        self.path = path
        try:
            self.data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None

    @property
    def base_dir(self):
        return os.path.dirname(os.path.abspath(self.path)) if self.path else os.getcwd()

    def locate(self, token: str):
        pos = self.text.find(json.dumps(token))
        if pos < 0:
            return None, None
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def error(self, message, token=None):
        line, col = self.locate(token) if token is not None else (None, None)
        return ParseError(message, line, col)


def _read_source(path: str) -> Source:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return Source(text, path)


class Loader:
    """Reads files, following and caching references between them."""

    def __init__(self, size_guard=None, validate_coefficients=True):
        self.validate_coefficients = validate_coefficients
        self.size_guard = size_guard if size_guard is not None else default_size_guard()
        self._cats = {}

    # -- helpers -----------------------------------------------------------

    @staticmethod
    def _fields(src: Source, data, allowed, required, what):
        if not isinstance(data, dict):
            raise src.error(f"{what} must be a JSON object")
        for key in data:
            if key not in allowed:
                raise src.error(f"unknown field {key!r} in {what}", key)
        for key in required:
            if key not in data:
                raise src.error(f"missing field {key!r} in {what}")

    def _ref(self, src: Source, value, reader):
        if isinstance(value, str):
            path = os.path.join(src.base_dir, value)
            return reader(_read_source(path), path=os.path.abspath(path))
        sub = Source(json.dumps(value), None)
        sub.text, sub.path = src.text, src.path
        sub.data = value
        return reader(sub)

    def _matrix(self, src, raw, ring, rows, cols, where):
        if not isinstance(raw, list) or any(not isinstance(r, list) for r in raw):
            raise src.error(f"matrix for {where} must be a list of rows")
        if rows == 0 and raw in ([],):
            return Matrix.zeros(ring, 0, cols)
        if len(raw) != rows or any(len(r) != cols for r in raw):
            raise src.error(f"matrix for {where} must be {rows}x{cols}")
        try:
            return Matrix.from_lists(ring, [[ring(x) for x in r] for r in raw], cols)
        except (ValueError, ZeroDivisionError, TypeError) as exc:
            raise src.error(f"bad matrix entry for {where}: {exc}") from None

    @staticmethod
    def _ring(src, raw):
        try:
            return Ring.parse(raw)
        except (ValueError, AttributeError):
            raise src.error(f"bad ring {raw!r}", raw if isinstance(raw, str) else None) from None

    # -- categories --------------------------------------------------------

    def category(self, src: Source, path=None) -> FinCat:
        if path and path in self._cats:
            return self._cats[path]
        data = src.data
        self._fields(src, data, ("objects", "morphisms", "identities", "composition"),
                     ("objects", "morphisms", "identities", "composition"), "category")
        objects = data["objects"]
        if not isinstance(objects, list) or not all(isinstance(x, str) for x in objects):
            raise src.error("objects must be a list of strings", "objects")
        mors = []
        for m in data["morphisms"]:
            self._fields(src, m, ("name", "src", "tgt"), ("name", "src", "tgt"), "morphism")
            mors.append((m["name"], m["src"], m["tgt"]))
        ids = data["identities"]
        if not isinstance(ids, dict):
            raise src.error("identities must map objects to morphism names", "identities")
        table = {}
        for entry in data["composition"]:
            if not (isinstance(entry, list) and len(entry) == 3):
                raise src.error("composition entries are [g, f, g_after_f] triples", "composition")
            g, f, h = entry
            if (g, f) in table and table[(g, f)] != h:
                raise src.error(f"conflicting composites for {g}∘{f}", "composition")
            table[(g, f)] = h
        # composites with an identity may be left implicit; they are filled by the identity law
        for x, i in ids.items():
            for m, s, t in mors:
                if t == x:
                    table.setdefault((i, m), m)
                if s == x:
                    table.setdefault((m, i), m)
        C = make_category(objects, mors, ids, table, check=True, size_guard=self.size_guard)
        if path:
            self._cats[path] = C
        return C

    def functor(self, src: Source, path=None) -> FinFunctor:
        data = src.data
        self._fields(src, data, ("source", "target", "object_map", "morphism_map"),
                     ("source", "target", "object_map", "morphism_map"), "functor")
        S = self._ref(src, data["source"], self.category)
        T = self._ref(src, data["target"], self.category)
        return self._functor_maps(src, data, S, T)

    def _functor_maps(self, src, data, S, T):
        try:
            F = FinFunctor(S, T, data["object_map"], data["morphism_map"])
            return F.validate()
        except CatCohomError:
            raise
        except (TypeError, ValueError, AttributeError) as exc:
            raise src.error(f"bad functor maps: {exc}") from None

    # -- coefficients ------------------------------------------------------

    def natsys(self, src: Source, path=None) -> NaturalSystem:
        data = src.data
        self._fields(src, data, ("category", "ring", "dims", "right", "left"),
                     ("category", "ring", "dims", "right", "left"), "natural system")
        C = self._ref(src, data["category"], self.category)
        ring = self._ring(src, data["ring"])
        dims = data["dims"]
        if not isinstance(dims, dict):
            raise src.error("dims must map morphisms to integers", "dims")
        for f, d in dims.items():
            if not C.has_morphism(f):
                raise src.error(f"dims names unknown morphism {f!r}", f)
            if not isinstance(d, int) or d < 0:
                raise src.error(f"dimension of {f!r} must be a nonnegative integer", f)
        right, left = {}, {}
        for e in data["right"]:
            self._fields(src, e, ("f", "alpha", "matrix"), ("f", "alpha", "matrix"), "right entry")
            f, a = e["f"], e["alpha"]
            self._check_pair(src, C, a, f, "right")
            right[(f, a)] = self._matrix(src, e["matrix"], ring, dims.get(C.comp(f, a), 0),
                                         dims.get(f, 0), f"right ({f}, {a})")
        for e in data["left"]:
            self._fields(src, e, ("f", "beta", "matrix"), ("f", "beta", "matrix"), "left entry")
            f, b = e["f"], e["beta"]
            self._check_pair(src, C, f, b, "left")
            left[(b, f)] = self._matrix(src, e["matrix"], ring, dims.get(C.comp(b, f), 0),
                                        dims.get(f, 0), f"left ({b}, {f})")
        D = NaturalSystem(C, ring, dims, right, left).check_structure()
        return D.check_functoriality() if self.validate_coefficients else D

    @staticmethod
    def _check_pair(src, C, first, second, what):
        for m in (first, second):
            if not C.has_morphism(m):
                raise src.error(f"{what} entry names unknown morphism {m!r}", m)
        if C.tgt(first) != C.src(second):
            raise src.error(f"{what} entry pairs non-composable morphisms {first!r}, {second!r}")

    def module(self, src: Source, path=None) -> Module:
        data = src.data
        self._fields(src, data, ("category", "ring", "values", "matrices"),
                     ("category", "ring", "values", "matrices"), "module")
        C = self._ref(src, data["category"], self.category)
        ring = self._ring(src, data["ring"])
        values = data["values"]
        if not isinstance(values, dict) or any(not C.has_object(x) for x in values):
            raise src.error("values must map objects to integers", "values")
        maps = {}
        for e in data["matrices"]:
            self._fields(src, e, ("morphism", "matrix"), ("morphism", "matrix"), "module matrix")
            f = e["morphism"]
            if not C.has_morphism(f):
                raise src.error(f"unknown morphism {f!r}", f)
            maps[f] = self._matrix(src, e["matrix"], ring, values.get(C.tgt(f), 0),
                                   values.get(C.src(f), 0), f)
        return Module(C, ring, values, maps).validate()

    def bimodule(self, src: Source, path=None) -> Bimodule:
        data = src.data
        self._fields(src, data, ("category", "ring", "values", "matrices"),
                     ("category", "ring", "values", "matrices"), "bimodule")
        C = self._ref(src, data["category"], self.category)
        ring = self._ring(src, data["ring"])
        values = {}
        for e in data["values"]:
            self._fields(src, e, ("a", "b", "dim"), ("a", "b", "dim"), "bimodule value")
            values[(e["a"], e["b"])] = e["dim"]
        maps = {}
        for e in data["matrices"]:
            self._fields(src, e, ("alpha", "beta", "matrix"), ("alpha", "beta", "matrix"),
                         "bimodule matrix")
            a, b = e["alpha"], e["beta"]
            for m in (a, b):
                if not C.has_morphism(m):
                    raise src.error(f"unknown morphism {m!r}", m)
            maps[(a, b)] = self._matrix(src, e["matrix"], ring,
                                        values.get((C.src(a), C.tgt(b)), 0),
                                        values.get((C.tgt(a), C.src(b)), 0), f"({a}, {b})")
        return Bimodule(C, ring, values, maps).validate()

    def action(self, src: Source, path=None) -> StrictAction:
        data = src.data
        self._fields(src, data, ("base", "fibers", "maps"), ("base", "fibers", "maps"),
                     "strict action")
        B = self._ref(src, data["base"], self.category)
        fibers = {}
        for b, raw in data["fibers"].items():
            if not B.has_object(b):
                raise src.error(f"fiber over unknown object {b!r}", b)
            fibers[b] = self._ref(src, raw, self.category)
        maps = {}
        for e in data["maps"]:
            self._fields(src, e, ("beta", "functor"), ("beta", "functor"), "action map")
            beta = e["beta"]
            if not B.has_morphism(beta):
                raise src.error(f"unknown base morphism {beta!r}", beta)
            fdata = e["functor"]
            self._fields(src, fdata, ("object_map", "morphism_map"),
                         ("object_map", "morphism_map"), "action functor")
            S = fibers.get(B.tgt(beta))
            T = fibers.get(B.src(beta))
            if S is None or T is None:
                raise src.error(f"missing fiber for {beta!r}", beta)
            maps[beta] = self._functor_maps(src, fdata, S, T)
        return StrictAction(B, fibers, maps).validate()

    # -- entry points ------------------------------------------------------

    def load(self, path, kind):
        reader = getattr(self, kind)
        return reader(_read_source(path), path=os.path.abspath(path))


def detect_kind(data) -> str:
    if not isinstance(data, dict):
        return "unknown"
    keys = set(data)
    if "composition" in keys:
        return "category"
    if "object_map" in keys:
        return "functor"
    if "dims" in keys:
        return "natsys"
    if "fibers" in keys:
        return "action"
    if "values" in keys:
        return "bimodule" if isinstance(data["values"], list) else "module"
    return "unknown"


def load(path, kind=None, size_guard=None, validate_coefficients=True):
    """Read one file; ``validate_coefficients=False`` defers natural-system functoriality."""
    src = _read_source(path)
    kind = kind or detect_kind(src.data)
    if kind == "unknown":
        raise ParseError(f"cannot tell what kind of file {path} is")
    loader = Loader(size_guard, validate_coefficients)
    return getattr(loader, kind)(src, path=os.path.abspath(path))


# ---------------------------------------------------------------------------
# writers


def _mat(M: Matrix):
    return [[str(x) for x in row] for row in M.to_lists()]


def category_json(C: FinCat) -> dict:
    return {
        "objects": [label(x) for x in C.objects],
        "morphisms": [{"name": label(f), "src": label(C.src(f)), "tgt": label(C.tgt(f))}
                      for f in C.morphisms],
        "identities": {label(x): label(C.id(x)) for x in C.objects},
        "composition": [[label(g), label(f), label(C.comp(g, f))]
                        for f in C.morphisms for g in C.out_of(C.tgt(f))],
    }


def functor_json(F: FinFunctor, source=None, target=None) -> dict:
    return {
        "source": source if source is not None else category_json(F.source),
        "target": target if target is not None else category_json(F.target),
        "object_map": {label(x): label(y) for x, y in F.object_map.items()},
        "morphism_map": {label(f): label(g) for f, g in F.morphism_map.items()},
    }


def natsys_json(D: NaturalSystem, category=None) -> dict:
    C = D.base
    return {
        "category": category if category is not None else category_json(C),
        "ring": str(D.ring),
        "dims": {label(f): D.dims[f] for f in C.morphisms},
        "right": [{"f": label(f), "alpha": label(a), "matrix": _mat(D.right[(f, a)])}
                  for f in C.morphisms for a in C.into(C.src(f))],
        "left": [{"f": label(f), "beta": label(b), "matrix": _mat(D.left[(b, f)])}
                 for f in C.morphisms for b in C.out_of(C.tgt(f))],
    }


def module_json(F: Module, category=None) -> dict:
    C = F.base
    return {
        "category": category if category is not None else category_json(C),
        "ring": str(F.ring),
        "values": {label(x): F.values[x] for x in C.objects},
        "matrices": [{"morphism": label(f), "matrix": _mat(F.maps[f])} for f in C.morphisms],
    }


def bimodule_json(M: Bimodule, category=None) -> dict:
    C = M.base
    return {
        "category": category if category is not None else category_json(C),
        "ring": str(M.ring),
        "values": [{"a": label(x), "b": label(y), "dim": M.values[(x, y)]}
                   for x in C.objects for y in C.objects],
        "matrices": [{"alpha": label(a), "beta": label(b), "matrix": _mat(M.maps[(a, b)])}
                     for a in C.morphisms for b in C.morphisms],
    }


def action_json(A: StrictAction, base=None, fibers=None) -> dict:
    B = A.base
    return {
        "base": base if base is not None else category_json(B),
        "fibers": {label(b): (fibers[b] if fibers else category_json(A.fibers[b]))
                   for b in B.objects},
        "maps": [{"beta": label(beta),
                  "functor": {"object_map": {label(x): label(y)
                                             for x, y in A.maps[beta].object_map.items()},
                              "morphism_map": {label(f): label(g)
                                               for f, g in A.maps[beta].morphism_map.items()}}}
                 for beta in B.morphisms],
    }


WRITERS = {
    "category": category_json,
    "functor": functor_json,
    "natsys": natsys_json,
    "module": module_json,
    "bimodule": bimodule_json,
    "action": action_json,
}


def dumps(data, pretty=False) -> str:
    if pretty:
        return json.dumps(data, indent=2, ensure_ascii=False) + "\n"
    return json.dumps(data, separators=(",", ":"), ensure_ascii=False) + "\n"


def roundtrip(path) -> bool:
    """parse -> serialize (inline) -> parse gives structurally identical data."""
    src = _read_source(path)
    kind = detect_kind(src.data)
    if kind == "unknown":
        raise ParseError(f"cannot tell what kind of file {path} is")
    first = getattr(Loader(), kind)(src, path=os.path.abspath(path))
    text = dumps(WRITERS[kind](first))
    second = getattr(Loader(), kind)(Source(text, path))
    return dumps(WRITERS[kind](second)) == text
