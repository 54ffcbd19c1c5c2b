"""Exception hierarchy.

Three families, matching the CLI exit codes:

* :class:`InputError` -- bad input or a violated precondition (exit 2).
* :class:`NumericFailure` -- resolution, sampling or conditioning failure;
  the answer may exist but this run cannot certify it (exit 3).
* :class:`Falsification` -- a run contradicts a theorem's assertion. Always
  treated as a bug in this package (exit 1).
"""


class HolextError(Exception):
    exit_code = 2


class InputError(HolextError):
    exit_code = 2


class NumericFailure(HolextError):
    exit_code = 3


class Falsification(HolextError):
    exit_code = 1


# -- grid -------------------------------------------------------------------

class ParseError(InputError):
    def __init__(self, message, line=None, column=None, path=None):
        self.line = line
        self.column = column
        self.path = path
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        if path:
            where.append(f"at {path}")
        suffix = f" ({', '.join(where)})" if where else ""
        super().__init__(f"{message}{suffix}")


class EmptySpec(InputError):
    pass


class ResolutionTooCoarse(NumericFailure):
    pass


class DegenerateRegion(InputError):
    pass


class NoSuchHole(InputError):
    pass


class EmptySet(InputError):
    pass


# -- winding ----------------------------------------------------------------

class PreconditionError(InputError):
    pass


class ZeroOnPath(InputError):
    pass


class PointOnPath(InputError):
    pass


class StepTooLarge(NumericFailure):
    pass


class NonIntegerWinding(NumericFailure):
    pass


class ObstructedLog(InputError):
    pass


# -- eilenberg / rouche -----------------------------------------------------

class ZeroOnK(InputError):
    pass


class ZeroOnBoundary(InputError):
    pass


class PoleOnBoundary(InputError):
    pass


class OnBoundary(InputError):
    pass


# -- extension / generators -------------------------------------------------

class IllConditioned(NumericFailure):
    pass


class FitFailed(NumericFailure):
    pass


class BadTolerances(InputError):
    pass


class HypothesisFailed(InputError):
    pass


class NotInjectiveCase(InputError):
    pass


class AmbiguousMapping(NumericFailure):
    pass


class NotRegular(InputError):
    pass


class BadRadii(InputError):
    pass


# -- cli --------------------------------------------------------------------

class UnknownCase(InputError):
    pass
