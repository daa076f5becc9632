"""Exception types shared across the MiniSpec runtime."""


class MiniSpecError(Exception):
    """Base class for everything raised by this package."""


class LexError(MiniSpecError):
    def __init__(self, position, text, message=None):
        self.position = position
        self.text = text
        super().__init__(message or f"illegal input {text!r} at byte {position}")


class ParseError(MiniSpecError):
    def __init__(self, position, expected, got=None):
        self.position = position
        self.expected = expected
        self.got = got
        detail = f", got {got}" if got else ""
        super().__init__(f"at byte {position}: expected {expected}{detail}")


class PositionalRefOutsidePlan(ParseError):
    def __init__(self, position, ref):
        ParseError.__init__(self, position, "a value (positional refs are only "
                            "allowed in skill definitions)", got=ref)


class OpenBodyError(MiniSpecError):
    pass


class UnknownSkill(MiniSpecError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"unknown skill {name!r}")


class ArityMismatch(MiniSpecError):
    def __init__(self, name, expected, got):
        self.name = name
        self.expected = expected
        self.got = got
        super().__init__(f"{name} expects {expected} args, got {got}")


class ArgTypeError(MiniSpecError):
    pass


class DuplicateName(MiniSpecError):
    pass


class AbbrExhausted(MiniSpecError):
    pass


class MissingPositionalArg(MiniSpecError):
    def __init__(self, index, provided):
        super().__init__(f"definition uses $%d but only %d args given" % (index, provided))


class UnboundVariable(MiniSpecError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"variable _{index} read before assignment")


class TypeMismatch(MiniSpecError):
    pass


class SkillFault(MiniSpecError):
    """Raised by a backend skill; the interpreter turns it into a replan."""


class StepBudgetExceeded(MiniSpecError):
    pass


class ConfigError(MiniSpecError):
    pass


class UnfilledPlaceholder(MiniSpecError):
    pass


class NoFixture(MiniSpecError):
    def __init__(self, task, round_index):
        self.task = task
        self.round_index = round_index
        super().__init__(f"no plan fixture matches task {task!r} (round {round_index})")


class DegenerateDesign(MiniSpecError):
    pass


class MissingFixture(MiniSpecError):
    pass
