"""Exception hierarchy shared by every module."""


class FormError(ValueError):
    """Base class for invalid quadratic-form inputs or failed computations."""


class NonSymmetric(FormError):
    pass


class NotPositiveDefinite(FormError):
    pass


class RankMismatch(FormError):
    pass


class BoundTooLarge(FormError):
    """The enumeration touched more nodes than the configured budget."""

    def __init__(self, budget, message=None):
        self.budget = budget
        super().__init__(message or f"enumeration exceeded budget of {budget} nodes")


# escalation speaks of budgets rather than bounds
BudgetExceeded = BoundTooLarge


class CutoffTooSmall(FormError):
    def __init__(self, prefix, cutoff, message=None):
        self.prefix = tuple(prefix)
        self.cutoff = cutoff
        super().__init__(message or f"cutoff {cutoff} too small for prefix {self.prefix}")


class RankCapReached(FormError):
    """Survivors at the rank cap could not be shown to have no new extension."""

    def __init__(self, rank_cap, survivors):
        self.rank_cap = rank_cap
        self.survivors = [tuple(s) for s in survivors]
        super().__init__(
            f"{len(self.survivors)} prefixes of rank {rank_cap} survive pruning: "
            + ", ".join(str(s) for s in self.survivors[:10])
        )


class NoTruant(FormError):
    pass


class ConditionFailed(FormError):
    def __init__(self, condition, witness=None):
        self.condition = condition
        self.witness = witness
        super().__init__(f"{condition} (witness: {witness})")


class SOutOfRange(FormError):
    pass


class OutOfRange(FormError):
    pass


class RankCapExceeded(FormError):
    pass
