"""Exception hierarchy shared by every module.

All errors derive from :class:`AdvboundError`, itself a ``ValueError``, so
callers that only care about "bad input" can catch one type.
"""


class AdvboundError(ValueError):
    """Base class for all input and modeling errors."""


# function files / partial functions
class FunctionSyntaxError(AdvboundError):
    """A line of a function file is malformed."""


class ArityMismatch(AdvboundError):
    pass


class SymbolOutOfRange(AdvboundError):
    pass


class DuplicateKey(AdvboundError):
    pass


class ConstantFunction(AdvboundError):
    pass


class EmptyDomain(AdvboundError):
    pass


class WordNotInDomain(AdvboundError):
    pass


# solver
class DimensionMismatch(AdvboundError):
    pass


class UnboundedAllBranches(AdvboundError):
    """A fully resolved branch of a disjunctive program is unbounded."""


# measures
class ParameterOutOfRange(AdvboundError):
    pass


class NonBooleanAlphabet(AdvboundError):
    pass


class NonBooleanOutput(AdvboundError):
    pass


# witnesses
class EmptyWitness(AdvboundError):
    pass


class InvalidWitness(AdvboundError):
    pass


class IncompleteFamily(AdvboundError):
    pass


class NotADistribution(AdvboundError):
    pass


class InvalidPartition(AdvboundError):
    pass


# constructions
class OddArity(AdvboundError):
    pass


class NotPrime(AdvboundError):
    pass


class OrderTooLarge(AdvboundError):
    pass


class BudgetExceeded(AdvboundError):
    pass


class DomainBudgetExceeded(BudgetExceeded):
    pass
