"""Exception types shared across the package.

Every error raised on bad input derives from :class:`InputError`, which the
command line maps to exit code 2.  :class:`VerificationFailed` marks a check
that ran to completion and came out false.
"""

from __future__ import annotations


class StackDualError(Exception):
    pass


class InputError(StackDualError, ValueError):
    pass


class VerificationFailed(StackDualError):
    def __init__(self, message: str, certificate: object = None):
        super().__init__(message)
        self.certificate = certificate


# zmod
class NotExact(InputError):
    pass


class NotSublattice(InputError):
    pass


class RankMismatch(InputError):
    pass


class UnsupportedShape(InputError):
    pass


# rootdata
class InvalidType(InputError):
    pass


class NotCentralSubgroup(InputError):
    pass


class NotSemisimple(InputError):
    pass


class NotSimplyConnected(InputError):
    pass


# gtau
class NotInvertible(InputError):
    pass


class CenterMismatch(InputError):
    pass


class NotGeneral(InputError):
    pass


# weylfix
class InvalidRoot(InputError):
    pass


class NotFixed(InputError):
    pass


class NotWeylStable(InputError):
    pass


# symp
class CapExceeded(InputError):
    pass


class NotContained(InputError):
    pass


class NotASubgroup(InputError):
    pass


# heis
class Degenerate(InputError):
    pass


class NotComplementaryLagrangians(InputError):
    pass


class CompositeNotScalar(StackDualError):
    pass


class IncompatibleSplittings(InputError):
    pass


class NotLagrangian(InputError):
    pass


class InvalidSplitting(InputError):
    pass


class InvariantsNotOneDimensional(StackDualError):
    pass


# duality
class LabelOutOfGroup(InputError):
    pass


class InvalidSubgroup(InputError):
    pass
