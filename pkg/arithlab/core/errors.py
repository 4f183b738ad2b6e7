# exception hierarchy for every service
# each error carries the exit code the CLI returns for it:
# 2 = bad input, 3 = unsupported case, 1 = verification failure


class ArithLabError(Exception):
    """Base class for all arithlab errors"""
    exit_code = 2


class InputError(ArithLabError):
    exit_code = 2


class UnsupportedError(ArithLabError):
    exit_code = 3


# --- numfield ---

class NotSquarefree(InputError):
    pass


class DependentRadicands(InputError):
    pass


class ZeroRadicand(InputError):
    pass


class DivisionByZero(InputError, ZeroDivisionError):
    pass


class FieldMismatch(InputError):
    pass


class ComplexPlace(InputError):
    pass


class NotPrime(InputError):
    pass


class BadReduction(InputError):
    pass


class UnsupportedCharacter(InputError):
    pass


class PrecisionExhausted(UnsupportedError):
    pass


# --- qalg ---

class AlgebraMismatch(InputError):
    pass


class ZeroArgument(InputError):
    pass


class DyadicAmbiguity(UnsupportedError):
    pass


# --- matrices / cocycles ---

class NotInvertible(InputError):
    pass


class IncompleteTable(InputError):
    pass


class ExhaustedRetries(UnsupportedError):
    pass


# --- forms ---

class Degenerate(InputError):
    pass


class IsotropicPivotFailure(InputError):
    pass


class SignatureProfileMismatch(InputError):
    pass


# --- g2 ---

class EvenCharacteristic(InputError):
    pass


# --- bend ---

class RelatorViolation(InputError):
    pass


class DetNotOne(InputError):
    pass


class NonSplitSpectrum(UnsupportedError):
    pass


class ProductNotOne(InputError):
    pass


class NonpositiveMultiplier(InputError):
    pass


class CommutationViolation(InputError):
    pass


class UnsupportedBasis(UnsupportedError):
    pass


# --- redux ---

class IrreducibleRadicand(InputError):
    pass


# --- cli ---

class UnknownSuite(InputError):
    pass


class FixtureError(InputError):
    pass


class VerificationFailed(ArithLabError):
    exit_code = 1
