"""Exception hierarchy shared by all stages."""


class SUAError(Exception):
    pass


class Issue:
    __slots__ = ("kind", "obj_id", "reason")

    def __init__(self, kind, obj_id, reason):
        self.kind = kind
        self.obj_id = obj_id
        self.reason = reason

    def __repr__(self):
        return f"Issue({self.kind!r}, {self.obj_id!r}, {self.reason!r})"

    def __str__(self):
        return f"{self.kind}: {self.obj_id}: {self.reason}"


class ValidationError(SUAError, ValueError):
    """Raised when an instance breaks a type invariant.

    ``issues`` lists every violation found, not only the first one.
    """

    kind = "ValidationError"

    def __init__(self, issues):
        if isinstance(issues, str):
            issues = [Issue(self.kind, "", issues)]
        self.issues = list(issues)
        super().__init__("; ".join(str(i) for i in self.issues))


class EmptyMembers(ValidationError):
    kind = "EmptyMembers"


class TimeOutOfRange(ValidationError):
    kind = "TimeOutOfRange"


class UnknownActor(ValidationError):
    kind = "UnknownActor"


class DuplicateId(ValidationError):
    kind = "DuplicateId"


class SchemaError(ValidationError):
    kind = "SchemaError"


class InstanceSyntaxError(ValidationError):
    """JSON that does not parse. Carries ``line`` and ``column``."""

    kind = "SyntaxError"

    def __init__(self, message, line, column):
        self.line = line
        self.column = column
        super().__init__([Issue(self.kind, f"line {line}, column {column}", message)])


class EmptyInput(ValidationError):
    kind = "EmptyInput"


class ElementMismatch(SUAError, ValueError):
    pass


class InfeasibleContiguity(SUAError, RuntimeError):
    pass


class DependentCrossing(SUAError, RuntimeError):
    pass


class InconsistentInput(SUAError, ValueError):
    pass


class BadParams(SUAError, ValueError):
    pass


class BadOptions(SUAError, ValueError):
    pass


KINDS = {
    cls.kind: cls
    for cls in (EmptyMembers, TimeOutOfRange, UnknownActor, DuplicateId, SchemaError, EmptyInput)
}


def raise_issues(issues):
    """Raise the exception class of the first issue, carrying all of them."""
    if issues:
        raise KINDS.get(issues[0].kind, ValidationError)(issues)
