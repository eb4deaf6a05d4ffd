"""Special partial matchings on finite posets.

A special partial matching (spm) on a poset with top element t is a map
M with: M self-inverse, M(t) covered by t, every element adjacent to or
fixed by its image, and M(x) < M(y) whenever x is covered by y and
M(x) != y.  A special matching is the fixed-point-free case, with no top
required.  A poset is a pircon when every principal ideal of a
non-minimal element admits an spm, and a zircon when those ideals admit
special matchings.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass

from .poset import Poset

__all__ = [
    "SizeMismatchError",
    "MissingTop",
    "NotAnSpm",
    "Violation",
    "MatchingVerdict",
    "LiftingVerdict",
    "check_special_matching",
    "check_spm",
    "check_lifting",
    "search_spm",
    "enumerate_spms",
    "classify",
    "IdealCertificate",
    "ClassifyReport",
    "matching_to_pairs",
    "matching_to_json",
    "matching_from_json",
    "verdict_to_json",
]

Matching = tuple[int, ...]


class SizeMismatchError(Exception):
    pass


class MissingTop(Exception):
    pass


class NotAnSpm(Exception):
    pass


class Violation(enum.Enum):
    NOT_INVOLUTION = "NotInvolution"
    TOP_NOT_MATCHED_DOWN = "TopNotMatchedDown"
    NOT_ADJACENT = "NotAdjacent"
    SPECIAL_CONDITION_FAIL = "SpecialConditionFail"
    FIXED_POINT_PRESENT = "FixedPointPresent"


@dataclass(frozen=True)
class MatchingVerdict:
    valid: bool
    violation: Violation | None = None
    witness: tuple[int, ...] | None = None


@dataclass(frozen=True)
class LiftingVerdict:
    valid: bool
    witness: tuple[int, int] | None = None
    clause: str | None = None


def _as_matching(P: Poset, matching) -> Matching:
    m = tuple(int(v) for v in matching)
    if len(m) != P.n:
        raise SizeMismatchError(f"matching has length {len(m)}, poset has {P.n}")
    for x, y in enumerate(m):
        if not (0 <= y < P.n):
            raise SizeMismatchError(f"image {y} of {x} out of range")
    return m


def _involution_witness(P: Poset, m: Matching) -> int | None:
    for x in range(P.n):
        if m[m[x]] != x:
            return x
    return None


def _adjacency_witness(P: Poset, m: Matching) -> int | None:
    for x in range(P.n):
        y = m[x]
        if y != x and not P.covered_by(x, y) and not P.covered_by(y, x):
            return x
    return None


def _special_witness(P: Poset, m: Matching) -> tuple[int, int] | None:
    for x, y in P.covers:
        if m[x] != y and not P.less(m[x], m[y]):
            return (x, y)
    return None


def check_special_matching(P: Poset, matching) -> MatchingVerdict:
    """Verdict on the fixed-point-free variant; no top element required."""
    m = _as_matching(P, matching)
    x = _involution_witness(P, m)
    if x is not None:
        return MatchingVerdict(False, Violation.NOT_INVOLUTION, (x,))
    for x in range(P.n):
        if m[x] == x:
            return MatchingVerdict(False, Violation.FIXED_POINT_PRESENT, (x,))
    x = _adjacency_witness(P, m)
    if x is not None:
        return MatchingVerdict(False, Violation.NOT_ADJACENT, (x, m[x]))
    w = _special_witness(P, m)
    if w is not None:
        return MatchingVerdict(False, Violation.SPECIAL_CONDITION_FAIL, w)
    return MatchingVerdict(True)


def check_spm(P: Poset, matching) -> MatchingVerdict:
    """Verdict on the special partial matching conditions."""
    if P.top is None:
        raise MissingTop("special partial matchings need a top element")
    m = _as_matching(P, matching)
    x = _involution_witness(P, m)
    if x is not None:
        return MatchingVerdict(False, Violation.NOT_INVOLUTION, (x,))
    if not P.covered_by(m[P.top], P.top):
        return MatchingVerdict(
            False, Violation.TOP_NOT_MATCHED_DOWN, (P.top, m[P.top])
        )
    x = _adjacency_witness(P, m)
    if x is not None:
        return MatchingVerdict(False, Violation.NOT_ADJACENT, (x, m[x]))
    w = _special_witness(P, m)
    if w is not None:
        return MatchingVerdict(False, Violation.SPECIAL_CONDITION_FAIL, w)
    return MatchingVerdict(True)


def check_lifting(P: Poset, matching) -> LiftingVerdict:
    """Lifting property of an spm.

    For x < y with M(y) <= y: M(x) <= y; if M(x) <= x then M(x) < M(y);
    if M(x) >= x then x <= M(y).  The input must already be a valid spm.
    """
    m = _as_matching(P, matching)
    if not check_spm(P, m).valid:
        raise NotAnSpm("lifting property is only defined for valid spms")
    for y in range(P.n):
        if not P.leq(m[y], y):
            continue
        for x in P.down_set(y):
            if not P.leq(m[x], y):
                return LiftingVerdict(False, (x, y), "i")
            if P.leq(m[x], x) and not P.less(m[x], m[y]):
                return LiftingVerdict(False, (x, y), "ii")
            if P.leq(x, m[x]) and not P.leq(x, m[y]):
                return LiftingVerdict(False, (x, y), "iii")
    return LiftingVerdict(True)


# -- search ------------------------------------------------------------


def _spm_candidates(P: Poset, allow_fixed: bool):
    """Backtracking generator over all spms (or special matchings).

    Elements are processed top-down along a reverse linear extension, so
    an unprocessed element can only pair with itself or a lower cover.
    Partners are tried in ascending index order, which makes the output
    order deterministic.  Pruning uses the special condition on fully
    decided covers plus a one-step feasibility check on the neighbours of
    freshly decided elements.
    """
    n = P.n
    top = P.top
    down_sizes = [len(P.down_set(x)) for x in range(n)]
    order = sorted(range(n), key=lambda x: (-down_sizes[x], x))
    mate: list[int | None] = [None] * n
    less = P.less

    def cover_ok(u: int, v: int) -> bool:
        # u covered by v, both images decided
        return mate[u] == v or less(mate[u], mate[v])

    def feasible(u: int) -> bool:
        need_below = [
            mate[v]
            for v in P.upper_covers(u)
            if mate[v] is not None and mate[v] != u
        ]
        need_above = [
            mate[w]
            for w in P.lower_covers(u)
            if mate[w] is not None and mate[w] != u
        ]
        cands = [w for w in P.lower_covers(u) if mate[w] is None]
        cands += [v for v in P.upper_covers(u) if mate[v] is None]
        if allow_fixed and u != top:
            cands.append(u)
        for c in cands:
            if all(less(c, b) for b in need_below) and all(
                less(a, c) for a in need_above
            ):
                return True
        return False

    def consistent(x: int, p: int) -> bool:
        fresh = (x,) if x == p else (x, p)
        for u in fresh:
            for v in P.upper_covers(u):
                if mate[v] is not None and not cover_ok(u, v):
                    return False
            for w in P.lower_covers(u):
                if mate[w] is not None and not cover_ok(w, u):
                    return False
        seen = set(fresh)
        for u in fresh:
            for z in P.upper_covers(u) + P.lower_covers(u):
                if mate[z] is None and z not in seen:
                    seen.add(z)
                    if not feasible(z):
                        return False
        return True

    def extend(k: int):
        while k < n and mate[order[k]] is not None:
            k += 1
        if k == n:
            yield tuple(mate)  # complete assignment
            return
        x = order[k]
        cands = [w for w in P.lower_covers(x) if mate[w] is None]
        if allow_fixed and x != top:
            cands.append(x)
        for p in sorted(cands):
            mate[x] = p
            mate[p] = x
            if consistent(x, p):
                yield from extend(k + 1)
            mate[x] = None
            if p != x:
                mate[p] = None

    yield from extend(0)


def _verified(P: Poset, m: Matching, allow_fixed: bool) -> Matching:
    verdict = check_spm(P, m) if allow_fixed else check_special_matching(P, m)
    if not verdict.valid:
        raise NotAnSpm(f"search produced an invalid matching: {verdict}")
    lifting = check_lifting(P, m)
    if not lifting.valid:
        raise NotAnSpm(f"search result fails the lifting property: {lifting}")
    return m


def search_spm(P: Poset, *, allow_fixed: bool = True) -> Matching | None:
    """First spm found, or None.  Results are re-verified before return.

    With allow_fixed=False the search looks for a special matching
    instead.  Raises MissingTop when the poset has no top element.
    """
    if P.top is None:
        raise MissingTop("cannot search a poset without a top element")
    for m in _spm_candidates(P, allow_fixed):
        return _verified(P, m, allow_fixed)
    return None


def enumerate_spms(P: Poset, *, allow_fixed: bool = True):
    """Yield every spm (or special matching when allow_fixed=False)."""
    if P.top is None:
        raise MissingTop("cannot search a poset without a top element")
    for m in _spm_candidates(P, allow_fixed):
        yield _verified(P, m, allow_fixed)


# -- classification ----------------------------------------------------


@dataclass(frozen=True)
class IdealCertificate:
    top: int
    top_name: str
    size: int
    spm: tuple[tuple[str, str], ...] | None
    special_matching: tuple[tuple[str, str], ...] | None


@dataclass(frozen=True)
class ClassifyReport:
    pircon: bool
    zircon: bool
    ideals: tuple[IdealCertificate, ...]

    def to_json(self) -> dict:
        return {
            "pircon": self.pircon,
            "zircon": self.zircon,
            "ideals": [
                {
                    "ideal_top": c.top_name,
                    "size": c.size,
                    "spm": None if c.spm is None else [list(p) for p in c.spm],
                    "special_matching": None
                    if c.special_matching is None
                    else [list(p) for p in c.special_matching],
                }
                for c in self.ideals
            ],
        }


def _named_pairs(P: Poset, emb, m: Matching | None):
    if m is None:
        return None
    pairs = []
    for x, y in enumerate(m):
        if x <= y:
            pairs.append((P.elements[emb[x]], P.elements[emb[y]]))
    return tuple(pairs)


def _classify_ideal(P: Poset, p: int) -> IdealCertificate:
    sub, emb = P.induced(P.ideal_indices(p))
    spm = search_spm(sub)
    special = search_spm(sub, allow_fixed=False)
    return IdealCertificate(
        top=p,
        top_name=P.elements[p],
        size=sub.n,
        spm=_named_pairs(P, emb, spm),
        special_matching=_named_pairs(P, emb, special),
    )


def classify(P: Poset, *, jobs: int = 1) -> ClassifyReport:
    """Pircon/zircon classification with per-ideal certificates.

    Every non-minimal element contributes one principal ideal.  Results
    are merged in ascending ideal order, so the report does not depend on
    the degree of parallelism.
    """
    minimal = set(P.minimal_elements())
    tops = [p for p in range(P.n) if p not in minimal]
    if jobs > 1 and len(tops) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            certs = list(pool.map(lambda p: _classify_ideal(P, p), tops))
    else:
        certs = [_classify_ideal(P, p) for p in tops]
    return ClassifyReport(
        pircon=all(c.spm is not None for c in certs),
        zircon=all(c.special_matching is not None for c in certs),
        ideals=tuple(certs),
    )


# -- serialization -----------------------------------------------------


def matching_to_pairs(matching) -> list[list[int]]:
    m = tuple(matching)
    return [[x, y] for x, y in enumerate(m) if x <= y]


def matching_to_json(P: Poset, matching, ideal_top: int | None = None) -> dict:
    m = _as_matching(P, matching)
    return {
        "ideal_top": None if ideal_top is None else P.elements[ideal_top],
        "matching": [
            [P.elements[x], P.elements[y]] for x, y in matching_to_pairs(m)
        ],
    }


def matching_from_json(P: Poset, payload) -> Matching:
    if isinstance(payload, str):
        payload = json.loads(payload)
    lookup: dict[str, int] = {}
    for i, name in enumerate(P.elements):
        if name in lookup:
            raise ValueError(f"element name {name!r} is not unique")
        lookup[name] = i
    out: list[int | None] = [None] * P.n
    for a, b in payload["matching"]:
        x, y = lookup[str(a)], lookup[str(b)]
        for u, v in ((x, y), (y, x)):
            if out[u] is not None and out[u] != v:
                raise ValueError(f"conflicting images for {P.elements[u]!r}")
            out[u] = v
    if any(v is None for v in out):
        missing = [P.elements[i] for i, v in enumerate(out) if v is None]
        raise ValueError(f"matching misses elements: {missing}")
    return tuple(out)  # type: ignore[arg-type]


def verdict_to_json(P: Poset, verdict: MatchingVerdict) -> dict:
    return {
        "valid": verdict.valid,
        "violation": None if verdict.violation is None else verdict.violation.value,
        "witness": None
        if verdict.witness is None
        else [P.elements[i] for i in verdict.witness],
    }
