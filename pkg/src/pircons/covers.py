"""Cover relations in involution families and their edge labels.

A cover pair (lower, upper) is labelled by (di, j): di is the first
position where the two full lines differ, and j is the first later
position whose lower-line value lands in the half-open value range
(lower(di), upper(di)].  For involutions of the full symmetric group this
scan recovers the classical covering index exactly.  For signed
involutions the same scan is only a transplanted candidate; callers are
expected to validate it empirically, which is why the signed variant has
its own name.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .poset import NotComparable
from .signed_perms import (
    FullPermutation,
    SignedPermutation,
    bruhat_leq,
    bruhat_leq_matrix,
    positions,
)

__all__ = [
    "EqualInputs",
    "NoCandidate",
    "EdgeLabel",
    "CoverRecord",
    "difference_index",
    "covering_index",
    "covering_index_signed_candidate",
    "family_covers",
    "minimal_cover",
    "cover_type",
    "edge_labelling",
    "covers_csv",
]


class EqualInputs(Exception):
    pass


class NoCandidate(Exception):
    pass


@dataclass(frozen=True, order=True)
class EdgeLabel:
    i: int
    j: int

    def __post_init__(self):
        if self.i >= self.j:
            raise ValueError(f"label ({self.i}, {self.j}) must have i < j")

    def as_tuple(self) -> tuple[int, int]:
        return (self.i, self.j)


@dataclass(frozen=True)
class CoverRecord:
    lower: FullPermutation
    upper: FullPermutation
    label: EdgeLabel | None
    covering_value: int


def difference_index(lower: FullPermutation, upper: FullPermutation) -> int:
    """First letter position where the two full lines differ."""
    if lower.values == upper.values:
        raise EqualInputs("difference index needs two distinct permutations")
    for i in positions(lower.n):
        if lower(i) != upper(i):
            return i
    raise AssertionError("unreachable")


def _scan_covering_index(lower: FullPermutation, upper: FullPermutation) -> int:
    di = difference_index(lower, upper)
    lo_val, hi_val = lower(di), upper(di)
    for j in positions(lower.n):
        if j <= di:
            continue
        if lo_val < lower(j) <= hi_val:
            return j
    raise NoCandidate(
        f"no covering index for {lower.display()} -> {upper.display()}"
    )


def covering_index(lower: FullPermutation, upper: FullPermutation) -> int:
    """Covering index for involutions of the full symmetric group."""
    return _scan_covering_index(lower, upper)


def covering_index_signed_candidate(
    lower: SignedPermutation, upper: SignedPermutation
) -> int:
    """The unsigned scan transplanted to signed involutions.

    No closed form is available in the signed case, so this value is a
    candidate to be validated against enumerated covers, not a theorem.
    """
    return _scan_covering_index(lower, upper)


def _record(lower, upper, second: str) -> CoverRecord:
    di = difference_index(lower, upper)
    cv = upper(di)
    if second == "covering-value":
        label = EdgeLabel(di, cv)
    else:
        try:
            label = EdgeLabel(di, _scan_covering_index(lower, upper))
        except NoCandidate:
            label = None
    return CoverRecord(lower=lower, upper=upper, label=label, covering_value=cv)


def family_covers(elements, *, second: str = "scan-index") -> list[CoverRecord]:
    """All cover pairs of the induced Bruhat order on a family.

    Covers are computed by brute force: lower < upper with no family
    member strictly between.  The second label coordinate is either the
    scanned covering index ("scan-index") or the value the upper element
    takes at the difference index ("covering-value").
    """
    if second not in ("scan-index", "covering-value"):
        raise ValueError(f"unknown label variant {second!r}")
    elements = list(elements)
    leq = bruhat_leq_matrix(elements)
    lt = leq & ~np.eye(len(elements), dtype=bool)
    strict2 = (lt.astype(np.uint8) @ lt.astype(np.uint8)) > 0
    out = []
    for a, b in np.argwhere(lt & ~strict2):
        out.append(_record(elements[int(a)], elements[int(b)], second))
    return out


def minimal_cover(lower, upper, elements, *, second: str = "scan-index"):
    """The cover of lower below upper with lexicographically least label."""
    if lower.values == upper.values or not bruhat_leq(lower, upper):
        raise NotComparable(
            f"{lower.display()} is not strictly below {upper.display()}"
        )
    between = [
        p
        for p in elements
        if p != lower
        and p != upper
        and bruhat_leq(lower, p)
        and bruhat_leq(p, upper)
    ]
    covers = []
    for p in between + [upper]:
        if any(
            bruhat_leq(q, p) and q != p and q != lower for q in between
        ):
            continue
        covers.append(_record(lower, p, second))
    labelled = [c for c in covers if c.label is not None]
    if not labelled:
        raise NoCandidate("no labelled cover available")
    return min(labelled, key=lambda c: c.label.as_tuple()).upper


# -- cover shapes for unsigned involutions -------------------------------


def _others_agree(lower, upper, touched) -> bool:
    return all(
        lower(k) == upper(k) for k in positions(lower.n) if k not in touched
    )


def cover_type(lower: FullPermutation, upper: FullPermutation) -> int | None:
    """Shape 1-6 of an unsigned involution cover, or None if none matches.

    The shape is read off the dot pattern at the positions i, j, lower(i),
    lower(j), where (i, j) is the cover's label.  Reporting aid only.
    """
    try:
        i = difference_index(lower, upper)
        j = _scan_covering_index(lower, upper)
    except (EqualInputs, NoCandidate):
        return None
    a, b = lower(i), lower(j)
    if a == i and b == j:
        shape, touched = 1, {i, j}
        expected = {i: j, j: i}
    elif a == i and b > j:
        shape, touched = 2, {i, j, b}
        expected = {i: b, j: j, b: i}
    elif a > i and a < j and b == j:
        shape, touched = 3, {i, a, j}
        expected = {i: j, a: a, j: i}
    elif a > i and b > j and i < j < a < b:
        shape, touched = 4, {i, j, a, b}
        expected = {i: b, j: a, a: j, b: i}
    elif a > i and b > j and i < a < j < b:
        shape, touched = 5, {i, j, a, b}
        expected = {i: b, a: a, j: j, b: i}
    elif a > i and b < j and i < a < b < j:
        shape, touched = 6, {i, j, a, b}
        expected = {i: b, a: j, b: i, j: a}
    else:
        return None
    if all(upper(k) == v for k, v in expected.items()) and _others_agree(
        lower, upper, touched
    ):
        return shape
    return None


# -- labelled posets ------------------------------------------------------


def edge_labelling(poset, elements, *, second: str = "scan-index") -> dict:
    """Labels for the covers of a Bruhat-ordered family poset.

    The poset must have been built from the same element list in the same
    order and with ascending (non-dual) Bruhat covers.
    """
    labels: dict[tuple[int, int], tuple[int, int]] = {}
    for lo, hi in poset.covers:
        lower, upper = elements[lo], elements[hi]
        if not bruhat_leq(lower, upper):
            raise ValueError("poset covers are not ascending in Bruhat order")
        rec = _record(lower, upper, second)
        if rec.label is None:
            raise NoCandidate(
                f"cover {lower.display()} -> {upper.display()} has no label"
            )
        labels[(lo, hi)] = rec.label.as_tuple()
    return labels


def covers_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["lower_window", "upper_window", "di", "j_candidate", "covering_value"])
    for r in records:
        di = r.label.i if r.label else difference_index(r.lower, r.upper)
        j = r.label.j if r.label else ""
        writer.writerow([r.lower.display(), r.upper.display(), di, j, r.covering_value])
    return buf.getvalue()
