"""Exception hierarchy. Every error carries a short ``kind`` tag used by the CLI error record."""


class CicError(Exception):
    kind = "error"


class NameResolutionError(CicError, KeyError):
    kind = "name_resolution"

    def __str__(self):  # KeyError quotes its message otherwise
        return str(self.args[0]) if self.args else ""


class ArgumentError(CicError, ValueError):
    kind = "argument"


class DomainError(CicError, ValueError):
    kind = "domain"


class DistributionError(CicError, ValueError):
    kind = "distribution"


class CapacityError(CicError, MemoryError):
    kind = "capacity"


class PreconditionError(CicError, ValueError):
    kind = "precondition"


class WeakInterferenceError(PreconditionError):
    kind = "weak_interference_precondition"


class StrongInterferenceError(PreconditionError):
    kind = "strong_interference_precondition"


class SingularityError(PreconditionError):
    kind = "singularity"


class PowerSplitError(PreconditionError):
    kind = "power_split"


class SchemeError(CicError, ValueError):
    kind = "scheme"


class CouplingError(CicError, ValueError):
    kind = "coupling"
