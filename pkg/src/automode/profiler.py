"""Unary inclusion-dependency discovery over database content.

An IND `R[A] <= S[B]` holds exactly when every distinct value of column
R[A] also appears in S[B]; the error of an approximate IND is the fraction
of distinct R[A] values that would have to be removed for it to hold.
Containment is tested directly on per-column distinct sets, which is exact
and fast at the scale this package targets.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ValidationError
from .relstore import AttributeRef, DatabaseInstance, all_attributes, attribute_stats


@dataclass(frozen=True, order=True)
class UnaryInd:
    lhs: AttributeRef
    rhs: AttributeRef
    error: float

    def __post_init__(self) -> None:
        if self.lhs == self.rhs:
            raise ValidationError("an IND cannot relate an attribute to itself")
        if not 0.0 <= self.error <= 1.0:
            raise ValidationError(f"IND error out of range: {self.error}")

    @property
    def exact(self) -> bool:
        return self.error == 0.0

    def __str__(self) -> str:
        return f"{self.lhs} <= {self.rhs} err={self.error:.6f}"


@dataclass(frozen=True)
class IndSet:
    inds: tuple[UnaryInd, ...]
    alpha: float

    def __post_init__(self) -> None:
        keys = [(i.lhs, i.rhs) for i in self.inds]
        if len(set(keys)) != len(keys):
            raise ValidationError("duplicate (lhs, rhs) pair in IndSet")
        for ind in self.inds:
            if ind.error > self.alpha:
                raise ValidationError(f"{ind} exceeds alpha={self.alpha}")


def ind_error(db: DatabaseInstance, lhs: AttributeRef, rhs: AttributeRef) -> float | None:
    """Error of lhs <= rhs, or None when lhs has no values."""
    left = attribute_stats(db, lhs).distinct_values
    if not left:
        return None
    right = attribute_stats(db, rhs).distinct_values
    return len(left - right) / len(left)


def discover_inds(db: DatabaseInstance, alpha: float) -> IndSet:
    """All ordered attribute pairs whose containment error is within alpha.

    Pairs with an empty left column are excluded; output order is canonical
    regardless of evaluation order.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValidationError(f"alpha must be in [0,1], got {alpha}")
    attrs = all_attributes(db)
    values = {a: attribute_stats(db, a).distinct_values for a in attrs}
    found: list[UnaryInd] = []
    for lhs in attrs:
        left = values[lhs]
        if not left:
            continue
        for rhs in attrs:
            if lhs == rhs:
                continue
            error = len(left - values[rhs]) / len(left)
            if error <= alpha:
                found.append(UnaryInd(lhs, rhs, error))
    return IndSet(tuple(sorted(found)), alpha)


def dedupe_bidirectional(ind_set: IndSet) -> IndSet:
    """Resolve mutual approximate INDs, keeping the lower-error direction.

    Mutual exact INDs are both kept (they define cycles that later share a
    type). Equal nonzero errors keep the IND whose lhs sorts first by
    (relation, position).
    """
    by_key = {(i.lhs, i.rhs): i for i in ind_set.inds}
    kept: list[UnaryInd] = []
    for ind in ind_set.inds:
        reverse = by_key.get((ind.rhs, ind.lhs))
        if reverse is None or ind.error == 0.0 or reverse.error == 0.0:
            kept.append(ind)
            continue
        if ind.error < reverse.error:
            kept.append(ind)
        elif ind.error == reverse.error:
            if (ind.lhs.relation, ind.lhs.position) < (
                reverse.lhs.relation,
                reverse.lhs.position,
            ):
                kept.append(ind)
        # else: the reverse survives on its own iteration
    return IndSet(tuple(sorted(kept)), ind_set.alpha)


def format_ind_set(ind_set: IndSet) -> str:
    """One IND per line, lexicographically sorted."""
    lines = sorted(str(i) for i in ind_set.inds)
    return "\n".join(lines) + ("\n" if lines else "")
