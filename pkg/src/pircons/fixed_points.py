"""Inducing special partial matchings on fixed subposets.

Given an spm M on P and an automorphism tau, the conjugates of M by the
powers of tau generate orbits on P.  Each orbit has a unique minimal and
a unique maximal member, a fixed element sits at an extreme of its orbit,
and swapping the two extremes defines an spm on the subposet of fixed
points.  Everything this module relies on is re-checked at run time;
violations raise alarms instead of producing unsound output.
"""

from __future__ import annotations

from dataclasses import dataclass

from .matchings import Matching, MissingTop, NotAnSpm, check_spm, search_spm
from .poset import Poset
from .signed_perms import permutation_order

__all__ = [
    "ExtremeNotUnique",
    "ClaimViolation",
    "ConjugatedFamily",
    "OrbitRecord",
    "InducedSpm",
    "conjugated_spms",
    "orbit",
    "all_orbits",
    "induced_spm",
    "IdealEntry",
    "FixedPirconReport",
    "verify_fixed_pircon",
]


class ExtremeNotUnique(Exception):
    pass


class ClaimViolation(Exception):
    pass


@dataclass(frozen=True)
class ConjugatedFamily:
    """Matchings tau^i M tau^-i for i = 1..order; the last one is M itself."""

    order: int
    matchings: tuple[Matching, ...]


@dataclass(frozen=True)
class OrbitRecord:
    members: tuple[int, ...]
    minimum: int
    maximum: int


@dataclass(frozen=True)
class InducedSpm:
    subposet: Poset
    embedding: tuple[int, ...]
    matching: Matching


def conjugated_spms(P: Poset, matching, tau) -> ConjugatedFamily:
    """Conjugates of an spm by all powers of an automorphism."""
    verdict = check_spm(P, matching)
    if not verdict.valid:
        raise NotAnSpm(f"input matching is not an spm: {verdict}")
    m = tuple(int(v) for v in matching)
    t = P.verify_automorphism(tau)
    k = permutation_order(t)
    powers = [tuple(range(P.n))]
    for _ in range(k):
        powers.append(tuple(t[x] for x in powers[-1]))
    out = []
    for i in range(1, k + 1):
        fwd, back = powers[i], powers[k - i]
        mi = tuple(fwd[m[back[x]]] for x in range(P.n))
        if not check_spm(P, mi).valid:
            raise NotAnSpm(f"conjugate {i} is not an spm; inputs are inconsistent")
        out.append(mi)
    return ConjugatedFamily(order=k, matchings=tuple(out))


def _extremes(P: Poset, members: tuple[int, ...]) -> tuple[int, int]:
    mins = [a for a in members if not any(P.less(b, a) for b in members)]
    maxs = [a for a in members if not any(P.less(a, b) for b in members)]
    if len(mins) != 1 or len(maxs) != 1:
        raise ExtremeNotUnique(
            f"orbit {members} has minimal elements {mins} and maximal {maxs}"
        )
    return mins[0], maxs[0]


def orbit(P: Poset, family: ConjugatedFamily, p: int) -> OrbitRecord:
    """Closure of p under the conjugated matchings, with its extremes."""
    P._check_index(p)
    seen = {p}
    frontier = [p]
    while frontier:
        nxt = []
        for x in frontier:
            for m in family.matchings:
                y = m[x]
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    members = tuple(sorted(seen))
    lo, hi = _extremes(P, members)
    return OrbitRecord(members=members, minimum=lo, maximum=hi)


def all_orbits(P: Poset, family: ConjugatedFamily) -> list[OrbitRecord]:
    """Orbit partition of the whole poset, ordered by smallest member."""
    out = []
    seen: set[int] = set()
    for p in range(P.n):
        if p in seen:
            continue
        rec = orbit(P, family, p)
        seen.update(rec.members)
        out.append(rec)
    return out


def induced_spm(P: Poset, matching, tau, *, check_claims: bool = True) -> InducedSpm:
    """Spm induced on the fixed subposet by swapping orbit extremes.

    With check_claims on, the supporting facts are verified eagerly: orbit
    extremes are fixed points, orbit extremes vary monotonically between
    comparable orbits, and the two extremes of a fixed element's orbit are
    equal or form a cover in the fixed subposet.  The returned matching is
    always re-verified as an spm.
    """
    family = conjugated_spms(P, matching, tau)
    t = P.verify_automorphism(tau)
    sub, emb = P.fixed_subposet(t)
    if sub.top is None:
        raise MissingTop("fixed subposet has no top element")
    rev = {orig: i for i, orig in enumerate(emb)}

    records = all_orbits(P, family)
    orbit_of = [None] * P.n
    for idx, rec in enumerate(records):
        for x in rec.members:
            orbit_of[x] = idx

    for p in emb:
        rec = records[orbit_of[p]]
        if p not in (rec.minimum, rec.maximum):
            raise ClaimViolation(
                f"fixed element {P.elements[p]!r} is not an extreme of its orbit"
            )
        for q in (rec.minimum, rec.maximum):
            if t[q] != q:
                raise ClaimViolation(
                    f"orbit extreme {P.elements[q]!r} is not a fixed point"
                )

    if check_claims:
        for ra in records:
            for rb in records:
                if P.leq(ra.minimum, rb.maximum):
                    if not P.leq(ra.minimum, rb.minimum):
                        raise ClaimViolation(
                            "orbit minima are not monotone: "
                            f"{ra.minimum} vs {rb.minimum}"
                        )
                    if not P.leq(ra.maximum, rb.maximum):
                        raise ClaimViolation(
                            "orbit maxima are not monotone: "
                            f"{ra.maximum} vs {rb.maximum}"
                        )
        for rec in records:
            lo, hi = rec.minimum, rec.maximum
            if t[lo] == lo and t[hi] == hi and lo != hi:
                if not sub.covered_by(rev[lo], rev[hi]):
                    raise ClaimViolation(
                        f"orbit extremes {P.elements[lo]!r}, {P.elements[hi]!r} "
                        "are not a cover in the fixed subposet"
                    )

    induced = []
    for p in emb:
        rec = records[orbit_of[p]]
        partner = rec.maximum if p == rec.minimum else rec.minimum
        induced.append(rev[partner])
    result = tuple(induced)
    verdict = check_spm(sub, result)
    if not verdict.valid:
        raise ClaimViolation(f"induced matching fails verification: {verdict}")
    return InducedSpm(subposet=sub, embedding=emb, matching=result)


# -- ideal-by-ideal pipeline --------------------------------------------


@dataclass(frozen=True)
class IdealEntry:
    ideal_top: str
    size: int
    fixed_count: int
    spm_found: bool
    induced_valid: bool
    claims_checked: bool


@dataclass(frozen=True)
class FixedPirconReport:
    entries: tuple[IdealEntry, ...]
    ok: bool

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "ideals": [
                {
                    "ideal_top": e.ideal_top,
                    "size": e.size,
                    "fixed_count": e.fixed_count,
                    "spm_found": e.spm_found,
                    "claims_checked": e.claims_checked,
                    "induced_valid": e.induced_valid,
                }
                for e in self.entries
            ],
        }


def _ideal_entry(P: Poset, t, p: int, check_claims: bool) -> IdealEntry:
    sub, emb = P.induced(P.ideal_indices(p))
    rev = {orig: i for i, orig in enumerate(emb)}
    tau_sub = tuple(rev[t[orig]] for orig in emb)
    fixed_count = sum(1 for i, orig in enumerate(emb) if tau_sub[i] == i)
    m = search_spm(sub)
    if m is None:
        return IdealEntry(P.elements[p], sub.n, fixed_count, False, False, check_claims)
    induced = induced_spm(sub, m, tau_sub, check_claims=check_claims)
    valid = check_spm(induced.subposet, induced.matching).valid
    return IdealEntry(P.elements[p], sub.n, fixed_count, True, valid, check_claims)


def verify_fixed_pircon(
    P: Poset, tau, *, check_claims: bool = True, jobs: int = 1
) -> FixedPirconReport:
    """Run the induced-spm pipeline over every ideal of a fixed element.

    For each non-minimal fixed point p, the principal ideal of p is
    searched for an spm, the automorphism is restricted to the ideal
    (fixed points map ideals into themselves), and the induced matching
    on the ideal's fixed subposet is built and verified.
    """
    t = P.verify_automorphism(tau)
    minimal = set(P.minimal_elements())
    tops = [p for p in range(P.n) if t[p] == p and p not in minimal]
    if jobs > 1 and len(tops) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            entries = list(
                pool.map(lambda p: _ideal_entry(P, t, p, check_claims), tops)
            )
    else:
        entries = [_ideal_entry(P, t, p, check_claims) for p in tops]
    ok = all(e.spm_found and e.induced_valid for e in entries)
    return FixedPirconReport(entries=tuple(entries), ok=ok)
