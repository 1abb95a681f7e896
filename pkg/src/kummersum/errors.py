"""Exception hierarchy shared by every module of the package."""


class KummerSumError(Exception):
    """Base class for all errors raised by kummersum."""


class UnknownSeries(KummerSumError, KeyError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"unknown series {name!r}")

    def __str__(self):
        return self.args[0]


class IndexBeforeStart(KummerSumError, ValueError):
    def __init__(self, n, n0):
        self.n = n
        self.n0 = n0
        super().__init__(f"index {n} precedes the start index {n0}")


class NonPositiveTerm(KummerSumError, ArithmeticError):
    """A term evaluated to a value that is not a positive finite real."""

    def __init__(self, n, value):
        self.n = n
        self.value = value
        super().__init__(f"term a_{n} = {value!r} is not positive and finite")


class IterationBudgetExceeded(KummerSumError):
    def __init__(self, requested, budget):
        self.requested = requested
        self.budget = budget
        super().__init__(f"{requested} terms requested, budget is {budget}")


class BudgetExhausted(KummerSumError):
    """Raised by threshold extension; ``state`` holds the progress made."""

    def __init__(self, state, threshold):
        self.state = state
        self.threshold = threshold
        super().__init__(
            f"budget exhausted at n={state.last_index} before reaching {threshold!r}"
        )


class ZetaOverflow(KummerSumError, OverflowError):
    def __init__(self, n):
        self.n = n
        super().__init__(f"zeta became non-finite at n={n}")


class MissingTailIntegral(KummerSumError):
    def __init__(self, name):
        super().__init__(f"series {name!r} has no closed-form tail integral")


class MissingDerivative(KummerSumError):
    def __init__(self, name):
        super().__init__(f"series {name!r} has no term derivative")


class ShapeConditionFailed(KummerSumError, ValueError):
    """A sampled monotonicity or convexity check on f did not hold."""


class LexError(KummerSumError, ValueError):
    def __init__(self, pos, message="unrecognized input"):
        self.pos = pos
        super().__init__(f"{message} at byte {pos}")


class ParseError(KummerSumError, ValueError):
    def __init__(self, pos, expected):
        self.pos = pos
        self.expected = expected
        super().__init__(f"expected {expected} at byte {pos}")


class UnknownFunction(ParseError):
    def __init__(self, pos, name):
        self.name = name
        KummerSumError.__init__(self, f"unknown function {name!r} at byte {pos}")
        self.pos = pos
        self.expected = "a known function name"


class ArityError(ParseError):
    def __init__(self, pos, name, expected_arity, got):
        self.name = name
        self.arity = expected_arity
        self.got = got
        KummerSumError.__init__(
            self, f"{name}() takes {expected_arity} argument(s), got {got} (byte {pos})"
        )
        self.pos = pos
        self.expected = f"{expected_arity} argument(s)"
