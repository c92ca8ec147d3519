"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class VTLError(Exception):
    exit_code = 1


class ConfigError(VTLError):
    exit_code = 2


class BadMatrix(ConfigError):
    pass


class UnknownKey(ConfigError):
    pass


class MissingRequired(ConfigError):
    pass


class ConfigMismatch(ConfigError):
    pass


class IllegalLetter(ConfigError):
    pass


class UnsupportedGroup(ConfigError):
    pass


class IdentityGenerator(ConfigError):
    pass


class RadiusExceeded(ConfigError):
    pass


class EmptyBox(ConfigError):
    pass


class NotCharacteristic(ConfigError):
    pass


class DegenerateFit(ConfigError):
    pass


class DegenerateInput(ConfigError):
    pass


class ResourceLimit(VTLError):
    exit_code = 3


class ArithmeticOverflow(ResourceLimit):
    """A coordinate or matrix entry left the checked 64-bit range."""


class InvariantViolation(VTLError):
    exit_code = 4


class WitnessNotFound(InvariantViolation):
    pass


class IOFailure(VTLError):
    exit_code = 5


class CorruptCache(IOFailure):
    pass
