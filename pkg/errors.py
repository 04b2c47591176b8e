#!/usr/bin/env python3
"""
Error taxonomy for hssp-lab.

Every failure the library can raise is a subclass of HsspLabError. Where a
builtin category fits (bad value, arithmetic) the class also derives from it,
so callers that catch ValueError keep working.
"""


class HsspLabError(Exception):
    """Base class for all hssp-lab errors."""

    exit_code = 1


# --- finite fields and linear algebra -------------------------------------

class NotPrime(HsspLabError, ValueError):
    pass


class TooLarge(HsspLabError, ValueError):
    pass


class ReducibleModulus(HsspLabError, ValueError):
    """The modulus is not a monic irreducible polynomial of degree k."""


class DivisionByZero(HsspLabError, ZeroDivisionError):
    pass


class FieldMismatch(HsspLabError, ValueError):
    pass


class ArityMismatch(HsspLabError, ValueError):
    pass


class Inconsistent(HsspLabError, ArithmeticError):
    """Linear system has no solution."""


class Singular(HsspLabError, ArithmeticError):
    """Linear system does not determine a unique solution."""


class DuplicateAbscissa(HsspLabError, ValueError):
    pass


class TooFewPoints(HsspLabError, ValueError):
    pass


# --- groups and actions ----------------------------------------------------

class InvalidGroup(HsspLabError, ValueError):
    pass


class NotAnAutomorphism(InvalidGroup):
    pass


class DomainMismatch(HsspLabError, ValueError):
    pass


class NotASubgroup(HsspLabError, ValueError):
    pass


# --- oracles and promises --------------------------------------------------

class PromiseViolation(HsspLabError):
    """An oracle does not honor the promise of its problem family."""

    exit_code = 2


class NotClosed(PromiseViolation):
    """Subgroup is not closed under the action (H != H**)."""


class EvenCharacteristic(HsspLabError, ValueError):
    pass


# --- strong bases ----------------------------------------------------------

class NotFrobenius(HsspLabError, ValueError):
    pass


class SharplyTwoTransitive(HsspLabError, ValueError):
    pass


class FieldTooSmall(HsspLabError, ValueError):
    pass


class NoPolynomialSizeBase(HsspLabError, ValueError):
    pass


# --- reductions and solvers ------------------------------------------------

class BadBase(PromiseViolation):
    """Lifted oracle violates the coset promise."""


class NotGenerating(HsspLabError, ValueError):
    pass


class NoConsistentSubgroup(PromiseViolation):
    pass


class Ambiguous(PromiseViolation):
    pass


# --- command line ----------------------------------------------------------

class DeskScaleExceeded(HsspLabError, ValueError):
    """A parameter is above the desk-scale cap named in the message."""


class AcceptanceFailure(HsspLabError):
    exit_code = 3
