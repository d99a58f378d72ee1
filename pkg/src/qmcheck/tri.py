"""Three-valued (strong Kleene) truth values and connectives."""

from __future__ import annotations

import enum


class Tri(enum.Enum):
    """A truth value: true, false, or unknown (printed as ``?``)."""

    T = "T"
    F = "F"
    U = "?"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def from_text(cls, text: str) -> "Tri":
        """Parse ``T``, ``F``, ``?`` or the alias ``U``."""
        try:
            return _FROM_TEXT[text]
        except KeyError:
            raise ValueError(
                f"not a truth value: {text!r} (expected T, F, ? or U)"
            ) from None


_FROM_TEXT = {"T": Tri.T, "F": Tri.F, "?": Tri.U, "U": Tri.U}

# Truth order used by the connectives: F below U below T.
_RANK = {Tri.F: 0, Tri.U: 1, Tri.T: 2}

# Row/column order used when printing tables; carries no semantics.
DISPLAY_ORDER = (Tri.T, Tri.U, Tri.F)


def and3(a: Tri, b: Tri) -> Tri:
    """Three-valued conjunction: the minimum in the truth order."""
    return a if _RANK[a] <= _RANK[b] else b


def or3(a: Tri, b: Tri) -> Tri:
    """Three-valued disjunction: the maximum in the truth order."""
    return a if _RANK[a] >= _RANK[b] else b


def not3(a: Tri) -> Tri:
    """Three-valued negation; unknown is its own negation."""
    if a is Tri.T:
        return Tri.F
    if a is Tri.F:
        return Tri.T
    return Tri.U
