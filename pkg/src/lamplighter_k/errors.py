"""Exception hierarchy; each class maps onto one CLI exit code."""


class LampError(Exception):
    exit_code = 1


class ParseError(LampError, ValueError):
    exit_code = 2


class UnsupportedModel(LampError):
    exit_code = 3


class CapExceeded(LampError):
    exit_code = 4

    def __init__(self, name, size, cap):
        self.name = name
        self.size = size
        self.cap = cap
        super().__init__(f"cap '{name}' exceeded: {size} > {cap}")


class InvariantViolation(LampError, AssertionError):
    exit_code = 5


def check_cap(name, size, cap):
    if size > cap:
        raise CapExceeded(name, size, cap)
