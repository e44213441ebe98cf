"""Exception hierarchy.

Every error raised for bad input derives from :class:`CatCohomError`; the CLI
maps these to exit code 2 and reports ``type(exc).__name__`` as the error name.
"""


class CatCohomError(ValueError):
    """Base class for all input and validation errors."""


class ParseError(CatCohomError):
    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class InvalidCategory(CatCohomError):
    pass


class MissingComposite(InvalidCategory):
    pass


class BrokenAssociativity(InvalidCategory):
    def __init__(self, triple):
        h, g, f = triple
        super().__init__(f"(h∘g)∘f != h∘(g∘f) for h={h!r}, g={g!r}, f={f!r}")
        self.triple = triple


class BadIdentity(InvalidCategory):
    pass


class SizeGuard(CatCohomError):
    pass


class ObjectNotFound(CatCohomError):
    pass


class CyclicQuiver(CatCohomError):
    pass


class UnknownFixture(CatCohomError):
    pass


class NotAFunctor(CatCohomError):
    pass


class GradingMismatch(CatCohomError):
    pass


class NotChainMap(CatCohomError):
    def __init__(self, degree, entry):
        super().__init__(f"chain map does not commute at degree {degree}, entry {entry}")
        self.degree = degree
        self.entry = entry


class RingMismatch(CatCohomError):
    pass


class RingNotField(CatCohomError):
    pass


class MissingStructureMap(CatCohomError):
    pass


class FunctorialityViolation(CatCohomError):
    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class NotStrict(CatCohomError):
    pass


class NotCartesianInverting(CatCohomError):
    def __init__(self, lift, morphism):
        super().__init__(
            f"precomposition with cartesian lift {lift!r} is not invertible on D({morphism!r})"
        )
        self.lift = lift
        self.morphism = morphism


class NotAFibration(CatCohomError):
    pass
