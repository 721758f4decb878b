class SelfNormError(Exception):
    def __init__(self, reason: str, throwable: Exception = None):
        super().__init__(reason)
        self.reason = reason
        self.throwable = throwable


class BudgetExceeded(SelfNormError):
    """Raised when an exact enumeration would exceed the 2^30 sign-vector budget"""
    pass


class ConvergenceError(SelfNormError):
    """Raised when the Bernstein optimizer hits its iteration cap"""
    pass
