"""Edge labellings and EL-shellability verification by chain enumeration.

An edge labelling assigns a pair (i, j) to every cover of a bounded
graded poset; label pairs are compared lexicographically, or in the
reversed lexicographic order when the labelling's direction says so.  A
labelling is verified to be an EL-labelling by enumerating, for every
interval, all saturated chains: there must be exactly one chain with
weakly increasing labels and it must be lexicographically least.
"""

from __future__ import annotations

from dataclasses import dataclass

from .covers import edge_labelling
from .poset import NotComparable, Poset
from .signed_perms import build_bruhat_poset, generate_family

__all__ = [
    "MissingLabel",
    "NotBounded",
    "NotGraded",
    "NonUniqueDecreasing",
    "EdgeLabelling",
    "classify_chain",
    "IntervalReport",
    "verify_el_interval",
    "ElFailure",
    "ElPosetReport",
    "verify_el_poset",
    "decreasing_chain",
    "FpfClosureReport",
    "fpf_closure_check",
    "candidate_labelling",
]


class MissingLabel(Exception):
    pass


class NotBounded(Exception):
    pass


class NotGraded(Exception):
    pass


class NonUniqueDecreasing(Exception):
    pass


@dataclass(frozen=True)
class EdgeLabelling:
    """Cover labels plus the direction used to compare them.

    Direction "lex" compares label pairs in natural lexicographic order;
    "reversed-lex" uses the opposite total order (obtained by negating
    both coordinates, which reverses lexicographic comparison).
    """

    labels: dict[tuple[int, int], tuple[int, int]]
    direction: str = "lex"

    def __post_init__(self):
        if self.direction not in ("lex", "reversed-lex"):
            raise ValueError(f"unknown direction {self.direction!r}")

    def key(self, label: tuple[int, int]) -> tuple[int, int]:
        if self.direction == "lex":
            return label
        return (-label[0], -label[1])

    def chain_labels(self, chain) -> tuple[tuple[int, int], ...]:
        out = []
        for lo, hi in zip(chain, chain[1:]):
            if (lo, hi) not in self.labels:
                raise MissingLabel(f"cover ({lo}, {hi}) has no label")
            out.append(self.labels[(lo, hi)])
        return tuple(out)

    def chain_keys(self, chain) -> tuple[tuple[int, int], ...]:
        return tuple(self.key(l) for l in self.chain_labels(chain))


def classify_chain(labelling: EdgeLabelling, chain) -> frozenset[str]:
    """Tags for one saturated chain: increasing means weakly increasing
    keys, decreasing means strictly decreasing, and weakly-decreasing is
    tracked separately.  A chain of length zero carries all three."""
    keys = labelling.chain_keys(chain)
    tags = set()
    if all(a <= b for a, b in zip(keys, keys[1:])):
        tags.add("increasing")
    if all(a > b for a, b in zip(keys, keys[1:])):
        tags.add("decreasing")
    if all(a >= b for a, b in zip(keys, keys[1:])):
        tags.add("weakly-decreasing")
    if "increasing" not in tags and "decreasing" not in tags:
        tags.add("neither")
    return frozenset(tags)


@dataclass(frozen=True)
class IntervalReport:
    x: int
    y: int
    chain_count: int
    increasing_count: int
    increasing_is_lex_minimal: bool
    decreasing_count: int
    graded: bool

    @property
    def el_pass(self) -> bool:
        return self.increasing_count == 1 and self.increasing_is_lex_minimal


def verify_el_interval(
    P: Poset, labelling: EdgeLabelling, x: int, y: int
) -> IntervalReport:
    """Full chain enumeration of one interval; pre: x strictly below y."""
    if not P.less(x, y):
        raise NotComparable(f"{x} is not strictly below {y}")
    chains = P.saturated_chains(x, y)
    keyed = [labelling.chain_keys(c) for c in chains]
    increasing = [
        k for k in keyed if all(a <= b for a, b in zip(k, k[1:]))
    ]
    decreasing = [
        k for k in keyed if all(a > b for a, b in zip(k, k[1:]))
    ]
    minimal = min(keyed)
    lex_ok = len(increasing) == 1 and increasing[0] <= minimal
    graded = len({len(c) for c in chains}) == 1
    return IntervalReport(
        x=x,
        y=y,
        chain_count=len(chains),
        increasing_count=len(increasing),
        increasing_is_lex_minimal=lex_ok,
        decreasing_count=len(decreasing),
        graded=graded,
    )


@dataclass(frozen=True)
class ElFailure:
    x: int
    y: int
    reason: str
    interval_size: int
    chains: tuple[tuple[int, ...], ...]
    labels: tuple[tuple[tuple[int, int], ...], ...]


@dataclass(frozen=True)
class ElPosetReport:
    poset_name: str
    direction: str
    intervals_checked: int
    failures: tuple[ElFailure, ...]

    @property
    def passed(self) -> bool:
        return not self.failures

    def minimal_counterexample(self) -> ElFailure | None:
        if not self.failures:
            return None
        return min(self.failures, key=lambda f: (f.interval_size, f.x, f.y))

    def to_json(self, P: Poset | None = None) -> dict:
        def name(i: int):
            return P.elements[i] if P is not None else i

        fail = []
        for f in self.failures:
            fail.append(
                {
                    "x": name(f.x),
                    "y": name(f.y),
                    "reason": f.reason,
                    "interval_size": f.interval_size,
                    "chains": [
                        {
                            "chain": [name(i) for i in c],
                            "labels": [list(l) for l in ls],
                        }
                        for c, ls in zip(f.chains, f.labels)
                    ],
                }
            )
        return {
            "poset": self.poset_name,
            "direction": self.direction,
            "intervals_checked": self.intervals_checked,
            "passed": self.passed,
            "failures": fail,
        }


def verify_el_poset(
    P: Poset, labelling: EdgeLabelling, *, jobs: int = 1
) -> ElPosetReport:
    """Check the EL condition on every interval of a bounded graded poset."""
    if P.top is None or P.bottom is None:
        raise NotBounded("EL verification needs a bounded poset")
    if not P.is_graded():
        raise NotGraded("EL verification needs a graded poset")
    for cover in P.covers:
        if cover not in labelling.labels:
            raise MissingLabel(f"cover {cover} has no label")

    pairs = [(x, y) for x in range(P.n) for y in range(P.n) if P.less(x, y)]

    def examine(pair):
        x, y = pair
        report = verify_el_interval(P, labelling, x, y)
        if report.el_pass:
            return None
        if report.increasing_count != 1:
            reason = f"increasing-chain-count={report.increasing_count}"
        else:
            reason = "increasing-chain-not-lex-minimal"
        chains = tuple(P.saturated_chains(x, y))
        labels = tuple(labelling.chain_labels(c) for c in chains)
        size = sum(1 for z in range(P.n) if P.leq(x, z) and P.leq(z, y))
        return ElFailure(x, y, reason, size, chains, labels)

    if jobs > 1 and len(pairs) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            found = list(pool.map(examine, pairs))
    else:
        found = [examine(p) for p in pairs]
    failures = tuple(f for f in found if f is not None)
    return ElPosetReport(
        poset_name=P.name,
        direction=labelling.direction,
        intervals_checked=len(pairs),
        failures=failures,
    )


def decreasing_chain(P: Poset, labelling: EdgeLabelling, x: int, y: int):
    """The unique saturated chain with strictly decreasing labels."""
    if not P.less(x, y):
        raise NotComparable(f"{x} is not strictly below {y}")
    found = [
        c
        for c in P.saturated_chains(x, y)
        if "decreasing" in classify_chain(labelling, c)
    ]
    if len(found) != 1:
        raise NonUniqueDecreasing(
            f"{len(found)} strictly decreasing chains between {x} and {y}"
        )
    return found[0]


# -- family-level checks --------------------------------------------------


def candidate_labelling(
    n: int, family: str = "fpf-signed-involutions", *, second: str = "scan-index",
    direction: str = "reversed-lex",
) -> tuple[Poset, EdgeLabelling, list]:
    """Bruhat poset of a family plus its scanned candidate labelling."""
    elements = generate_family(family, n)
    P = build_bruhat_poset(elements, "bruhat", name=f"{family}-n{n}")
    labels = edge_labelling(P, elements, second=second)
    return P, EdgeLabelling(labels=labels, direction=direction), elements


@dataclass(frozen=True)
class FpfClosureReport:
    n: int
    pairs_checked: int
    nonunique_pairs: tuple[tuple[int, int], ...]
    escaped_pairs: tuple[tuple[int, int], ...]

    @property
    def closed(self) -> bool:
        return not self.escaped_pairs

    @property
    def unique(self) -> bool:
        return not self.nonunique_pairs


def fpf_closure_check(n: int) -> FpfClosureReport:
    """Decreasing chains between fpf endpoints stay inside the fpf family.

    The ambient poset is the full signed-involution family under Bruhat
    order with the plain-lex candidate labelling.  For every comparable
    pair of fpf elements, every strictly decreasing chain is checked for
    fpf membership; pairs whose decreasing chain is not unique are
    reported separately rather than guessed about.
    """
    P, labelling, elements = candidate_labelling(
        n, "signed-involutions", direction="lex"
    )
    fpf = [i for i, p in enumerate(elements) if p.is_fpf()]
    nonunique = []
    escaped = []
    pairs = 0
    for a in fpf:
        for b in fpf:
            if not P.less(a, b):
                continue
            pairs += 1
            chains = [
                c
                for c in P.saturated_chains(a, b)
                if "decreasing" in classify_chain(labelling, c)
            ]
            if len(chains) != 1:
                nonunique.append((a, b))
            for c in chains:
                if any(not elements[i].is_fpf() for i in c):
                    escaped.append((a, b))
                    break
    return FpfClosureReport(
        n=n,
        pairs_checked=pairs,
        nonunique_pairs=tuple(nonunique),
        escaped_pairs=tuple(escaped),
    )
