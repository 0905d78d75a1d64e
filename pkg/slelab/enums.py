"""Storage for enums"""

from enum import Enum, IntEnum


class TaskTags(str, Enum):
    """Ensemble tasks runnable from a config or the command line."""

    SIMULATE = "simulate"
    BUBBLES = "bubbles"
    CROSSINGS = "crossings"
    HITPROB = "hitprob"

    @classmethod
    def all(cls) -> list["TaskTags"]:
        """Return all enum members."""
        return list(cls)

    @classmethod
    def valid_task_check(cls, key: str) -> bool:
        """Return True if key is a valid enum value."""
        try:
            cls(key)
        except ValueError:
            return False
        return True


class Side(str, Enum):
    """Side of the origin on the real line, or of the driving point for a force point."""

    LEFT = "left"
    RIGHT = "right"

    @property
    def sign(self) -> int:
        """-1 for LEFT, +1 for RIGHT."""
        return -1 if self is Side.LEFT else 1

    @classmethod
    def from_sign(cls, value: float) -> "Side":
        """Side holding a nonzero real value."""
        return cls.LEFT if value < 0 else cls.RIGHT


class BubbleType(IntEnum):
    """Bubble type codes, keyed by which half-axes the bubble adjoins."""

    NONE = 0
    POSITIVE = 1
    NEGATIVE = 2
    BOTH = 3

    @classmethod
    def classify(cls, touches_negative: bool, touches_positive: bool) -> "BubbleType":
        """Type code of a bubble from its two axis-adjacency flags."""
        return cls(2 * int(bool(touches_negative)) + int(bool(touches_positive)))
