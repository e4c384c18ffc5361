"""Exception types raised by the solvers."""


class LWRARZError(Exception):
    pass


class ModelError(LWRARZError, ValueError):
    pass


class InvalidThresholds(ModelError):
    pass


class HypothesisViolation(ModelError):
    """Raised by :func:`build_model` when H1, H2 or H3 fails on the grid.

    ``violations`` holds one ``(hypothesis, condition, rho)`` triple per
    violated inequality, ``rho`` being the first offending grid density.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        lines = [f"{h}: {cond} fails at rho={rho:.6g}" for h, cond, rho in self.violations]
        super().__init__("; ".join(lines))


class Lambda1SignViolation(ModelError):
    pass


class OutsideDomain(LWRARZError, ValueError):
    pass


class OutOfRange(LWRARZError, ValueError):
    pass


class EqualDensities(LWRARZError, ValueError):
    pass


class IntermediateOutsideOmegaC(OutsideDomain):
    pass


class OutOfFan(LWRARZError, ValueError):
    pass


class NotInN(LWRARZError, ValueError):
    pass


class NoRoot(LWRARZError, ArithmeticError):
    pass


class UnknownDomain(LWRARZError, KeyError):
    pass
