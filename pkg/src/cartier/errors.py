"""Exception types.  The CLI maps each family to an exit code."""


class CartierError(Exception):
    exit_code = 1


class ConfigError(CartierError):
    exit_code = 2


class PolySyntaxError(ConfigError):
    def __init__(self, msg, pos=None):
        self.pos = pos
        if pos is not None:
            msg = f"{msg} at position {pos}"
        super().__init__(msg)


class ResourceCapError(CartierError):
    exit_code = 3


class IterationCap(ResourceCapError):
    pass


class WordLimitExceeded(ResourceCapError):
    pass


class ExponentOverflow(ResourceCapError):
    pass


class VerificationError(CartierError):
    exit_code = 4


class NoTestElement(VerificationError):
    pass


class NoDescent(VerificationError):
    pass


class NotFpure(VerificationError):
    pass


class NotMonomial(ConfigError):
    pass


class MissingMinimalPrimes(ConfigError):
    pass
