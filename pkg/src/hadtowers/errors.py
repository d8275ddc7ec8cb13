"""Exception hierarchy shared by all modules."""


class HadError(Exception):
    pass


class InvalidTower(HadError, ValueError):
    """A structure violates a tower invariant; ``invariant`` names which."""

    def __init__(self, invariant: str, detail: str = ""):
        self.invariant = invariant
        self.detail = detail
        super().__init__(f"{invariant}: {detail}" if detail else invariant)


class Incompatible(HadError):
    """Two conditions have no common extension."""

    def __init__(self, reason: str, detail: str = ""):
        self.reason = reason
        self.detail = detail
        super().__init__(f"Incompatible: {reason}" + (f" ({detail})" if detail else ""))


class PreconditionError(HadError, ValueError):
    pass


class DecodeError(HadError, ValueError):
    pass


class VerificationFailure(HadError):
    """An amalgamation check failed.  ``failures`` lists every failed check."""

    def __init__(self, failures):
        self.failures = list(failures)
        super().__init__("; ".join(self.failures))


class NoPath(HadError):
    pass


class MissingAssignment(HadError, KeyError):
    def __init__(self, coord):
        self.coord = coord
        super().__init__(coord)

    def __str__(self):
        return f"MissingAssignment: no bitstring for {tuple(self.coord)}"
