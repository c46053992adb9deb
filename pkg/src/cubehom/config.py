from dataclasses import dataclass

from .errors import PreconditionError


@dataclass(frozen=True)
class Config:
    """Tunable parameters.

    alpha: base of the smallness threshold, a set A is small iff |A| < alpha**d.
    gamma: tight/slack parameter of the reconstruction procedure.
    set_budget: largest d for which set-level exhaustive sweeps are allowed.
    memory_budget: megabytes available to the frontier DP.
    """

    alpha: float = 1.9
    gamma: float = 0.1
    set_budget: int = 6
    memory_budget: int = 1024

    def __post_init__(self):
        if not 1 < self.alpha < 2:
            raise PreconditionError(f"alpha must lie in (1, 2), got {self.alpha}")
        if not 0 < self.gamma < 1:
            raise PreconditionError(f"gamma must lie in (0, 1), got {self.gamma}")
        if self.set_budget < 1 or self.memory_budget < 1:
            raise PreconditionError("budgets must be positive")

    def is_small(self, size: int, d: int) -> bool:
        return size < self.alpha ** d


DEFAULT = Config()
