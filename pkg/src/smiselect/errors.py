"""Exception taxonomy shared across the package.

The CLI maps each class to a distinct exit code, so raise the most
specific one that applies.
"""


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration (bad budget, ratio, flag...)."""


class FormatError(ValueError):
    """Malformed input file (ragged embedding lines, missing CSV columns...)."""


class ContractViolation(ValueError):
    """A documented precondition was broken by the caller."""


class NumericalDegeneracyError(RuntimeError):
    """A regularized matrix operation lost positive-definiteness anyway."""
