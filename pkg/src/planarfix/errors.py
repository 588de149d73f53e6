"""Exception hierarchy.

Every error raised on purpose by the library derives from ``PlanarFixError``
so callers (and the CLI) can map failures to exit codes by family.
"""


class PlanarFixError(Exception):
    """Base class for all library errors."""


# -- geometry -----------------------------------------------------------------

class GeometryError(PlanarFixError):
    pass


class ConsecutiveDuplicate(GeometryError):
    def __init__(self, index):
        super().__init__(f"vertices {index} and {index + 1} coincide")
        self.index = index


class NonFiniteCoordinate(GeometryError):
    pass


class OverlapPresent(GeometryError):
    pass


class SeparationTooLarge(GeometryError):
    pass


class EmptyInput(GeometryError):
    pass


# -- winding ------------------------------------------------------------------

class WindingError(PlanarFixError):
    pass


class PointOnCurve(WindingError):
    def __init__(self, distance, tolerance):
        super().__init__(f"query lies on the curve (distance {distance:.3g} <= {tolerance:.3g})")
        self.distance = distance


class NumericallyAmbiguous(WindingError):
    def __init__(self, turns):
        super().__init__(f"angle sum {turns!r} turns is not close to an integer")
        self.turns = turns


class DegenerateProbe(WindingError):
    pass


# -- untangle -----------------------------------------------------------------

class UntangleError(PlanarFixError):
    pass


class ConeSeparationFailure(UntangleError):
    pass


class RankMismatch(UntangleError):
    pass


class AngleHypothesisViolated(UntangleError):
    def __init__(self, violations):
        lines = ", ".join(f"({v.first},{v.second}):{v.angle:.4f}" for v in violations[:5])
        super().__init__(f"{len(violations)} angle violation(s): {lines}")
        self.violations = list(violations)


class NonTermination(UntangleError):
    def __init__(self, budget):
        super().__init__(f"vertex resolution exceeded budget {budget}")
        self.budget = budget


class NestingViolated(UntangleError):
    pass


class NoPositiveLoop(UntangleError):
    pass


# -- dynamics -----------------------------------------------------------------

class DynamicsError(PlanarFixError):
    pass


class NonFiniteIterate(DynamicsError):
    pass


class FixedSeed(DynamicsError):
    pass


class NonFiniteValue(DynamicsError):
    pass


class ZeroDegree(DynamicsError):
    pass


class BoundaryFixedPoint(DynamicsError):
    pass


class NoReturns(DynamicsError):
    pass


class DegenerateOrbitCurve(DynamicsError):
    pass


class CommonFixCheckFailed(DynamicsError):
    def __init__(self, label, residual):
        super().__init__(f"candidate is not fixed by {label} (residual {residual:.3g})")
        self.label = label
        self.residual = residual


class CommutationViolation(DynamicsError):
    def __init__(self, pair, residual):
        super().__init__(f"maps {pair[0]} and {pair[1]} do not commute (residual {residual:.3g})")
        self.pair = pair
        self.residual = residual


class UnboundedOrbit(DynamicsError):
    pass


class LocalizationFailure(DynamicsError):
    def __init__(self, step, trace=()):
        super().__init__(f"localization failed at step {step}")
        self.step = step
        self.trace = list(trace)


class GeometryConstraintViolated(DynamicsError):
    pass


class SearchExhausted(DynamicsError):
    pass


class DecompositionFailed(UntangleError):
    def __init__(self, failed, report=None):
        super().__init__(f"decomposition checks failed: {', '.join(failed)}")
        self.failed = list(failed)
        self.report = report
