"""Finite posets with dense reachability matrices.

A poset is stored as a strict order matrix (transitively closed) together
with its transitive reduction (the cover relation).  Elements are referred
to by index; every element also carries an opaque display name used in
serialized output.  All enumeration methods iterate in ascending index
order so results are deterministic.
"""

from __future__ import annotations

import enum
import json

import numpy as np

__all__ = [
    "CycleDetected",
    "IndexOutOfRange",
    "NotComparable",
    "MissingBound",
    "NotAutomorphism",
    "Relation",
    "Poset",
    "build_poset",
    "poset_from_json",
]


class PosetError(Exception):
    pass


class CycleDetected(PosetError):
    pass


class IndexOutOfRange(PosetError):
    pass


class NotComparable(PosetError):
    pass


class MissingBound(PosetError):
    pass


class NotAutomorphism(PosetError):
    pass


class Relation(enum.Enum):
    """Outcome of comparing two elements; cover relations take priority."""

    EQUAL = "equal"
    LESS = "less"
    GREATER = "greater"
    INCOMPARABLE = "incomparable"
    COVERED_BY = "covered_by"  # first argument is covered by the second
    COVERS = "covers"  # first argument covers the second


def _transitive_closure(adj: np.ndarray) -> np.ndarray:
    reach = adj.copy()
    while True:
        more = reach | ((reach.astype(np.uint8) @ reach.astype(np.uint8)) > 0)
        if (more == reach).all():
            return reach
        reach = more


class Poset:
    """Immutable finite poset.

    Construct through :func:`build_poset` unless the strict matrix is
    already known to be irreflexive and transitively closed.
    """

    __slots__ = (
        "name",
        "elements",
        "n",
        "covers",
        "top",
        "bottom",
        "_lt",
        "_cov",
        "_ups",
        "_downs",
        "_up_bits",
    )

    def __init__(self, elements: tuple[str, ...], lt: np.ndarray, name: str = ""):
        n = len(elements)
        if lt.shape != (n, n):
            raise ValueError("strict order matrix has wrong shape")
        if n and np.diagonal(lt).any():
            raise CycleDetected("strict order matrix has a reflexive entry")
        self.name = name
        self.elements = tuple(elements)
        self.n = n
        self._lt = lt
        composite = (lt.astype(np.uint8) @ lt.astype(np.uint8)) > 0
        self._cov = lt & ~composite
        self.covers = tuple(
            (int(lo), int(hi)) for lo, hi in np.argwhere(self._cov)
        )
        ups: list[list[int]] = [[] for _ in range(n)]
        downs: list[list[int]] = [[] for _ in range(n)]
        for lo, hi in self.covers:
            ups[lo].append(hi)
            downs[hi].append(lo)
        self._ups = tuple(tuple(u) for u in ups)
        self._downs = tuple(tuple(d) for d in downs)
        maxima = [x for x in range(n) if not lt[x].any()]
        minima = [x for x in range(n) if not lt[:, x].any()]
        self.top = maxima[0] if len(maxima) == 1 else None
        self.bottom = minima[0] if len(minima) == 1 else None
        self._up_bits = None

    # -- basic queries ------------------------------------------------

    def less(self, x: int, y: int) -> bool:
        return bool(self._lt[x, y])

    def leq(self, x: int, y: int) -> bool:
        return x == y or bool(self._lt[x, y])

    def covered_by(self, x: int, y: int) -> bool:
        return bool(self._cov[x, y])

    def relation(self, x: int, y: int) -> Relation:
        self._check_index(x)
        self._check_index(y)
        if x == y:
            return Relation.EQUAL
        if self._cov[x, y]:
            return Relation.COVERED_BY
        if self._cov[y, x]:
            return Relation.COVERS
        if self._lt[x, y]:
            return Relation.LESS
        if self._lt[y, x]:
            return Relation.GREATER
        return Relation.INCOMPARABLE

    def upper_covers(self, x: int) -> tuple[int, ...]:
        return self._ups[x]

    def lower_covers(self, x: int) -> tuple[int, ...]:
        return self._downs[x]

    def down_set(self, x: int) -> tuple[int, ...]:
        """Elements strictly below x."""
        return tuple(int(i) for i in np.flatnonzero(self._lt[:, x]))

    def up_set(self, x: int) -> tuple[int, ...]:
        """Elements strictly above x."""
        return tuple(int(i) for i in np.flatnonzero(self._lt[x]))

    def maximal_elements(self) -> tuple[int, ...]:
        return tuple(x for x in range(self.n) if not self._lt[x].any())

    def minimal_elements(self) -> tuple[int, ...]:
        return tuple(x for x in range(self.n) if not self._lt[:, x].any())

    @property
    def up_bits(self) -> tuple[int, ...]:
        """Per-element bitmask of strictly greater elements."""
        if self._up_bits is None:
            bits = []
            for x in range(self.n):
                row = 0
                for y in np.flatnonzero(self._lt[x]):
                    row |= 1 << int(y)
                bits.append(row)
            self._up_bits = tuple(bits)
        return self._up_bits

    def _check_index(self, x: int) -> None:
        if not (isinstance(x, (int, np.integer)) and 0 <= x < self.n):
            raise IndexOutOfRange(f"element index {x!r} out of range 0..{self.n - 1}")

    # -- derived posets -----------------------------------------------

    def induced(self, indices) -> tuple["Poset", tuple[int, ...]]:
        """Subposet on the given indices plus the sorted index embedding."""
        emb = tuple(sorted(set(int(i) for i in indices)))
        for i in emb:
            self._check_index(i)
        ix = np.array(emb, dtype=int)
        lt = self._lt[np.ix_(ix, ix)].copy() if emb else np.zeros((0, 0), dtype=bool)
        sub = Poset(tuple(self.elements[i] for i in emb), lt, name=self.name)
        return sub, emb

    def ideal_indices(self, p: int) -> tuple[int, ...]:
        self._check_index(p)
        return tuple(sorted(set(self.down_set(p)) | {p}))

    def principal_ideal(self, p: int) -> "Poset":
        return self.induced(self.ideal_indices(p))[0]

    def interval(self, x: int, y: int, open_: bool = False) -> "Poset":
        self._check_index(x)
        self._check_index(y)
        if not self.leq(x, y):
            raise NotComparable(f"{x} is not below {y}")
        between = {z for z in range(self.n) if self.leq(x, z) and self.leq(z, y)}
        if open_:
            between -= {x, y}
        return self.induced(between)[0]

    def dual(self) -> "Poset":
        name = f"dual({self.name})" if self.name else ""
        return Poset(self.elements, self._lt.T.copy(), name=name)

    def proper_part(self) -> "Poset":
        if self.top is None or self.bottom is None:
            raise MissingBound("proper part needs both a top and a bottom")
        rest = set(range(self.n)) - {self.top, self.bottom}
        return self.induced(rest)[0]

    # -- automorphisms ------------------------------------------------

    def is_automorphism(self, mapping) -> bool:
        m = tuple(int(v) for v in mapping)
        if len(m) != self.n or sorted(m) != list(range(self.n)):
            return False
        if self.n == 0:
            return True
        t = np.array(m, dtype=int)
        return bool((self._cov == self._cov[np.ix_(t, t)]).all())

    def verify_automorphism(self, mapping) -> tuple[int, ...]:
        m = tuple(int(v) for v in mapping)
        if not self.is_automorphism(m):
            raise NotAutomorphism("mapping is not a poset automorphism")
        return m

    def automorphisms(self) -> list[tuple[int, ...]]:
        """All automorphisms, found by backtracking over invariant classes."""
        n = self.n
        if n == 0:
            return [()]
        heights = self.heights()
        sig = [
            (
                len(self._downs[x]),
                len(self._ups[x]),
                len(self.down_set(x)),
                len(self.up_set(x)),
                heights[x],
            )
            for x in range(n)
        ]
        cands = [
            tuple(y for y in range(n) if sig[y] == sig[x]) for x in range(n)
        ]
        out: list[tuple[int, ...]] = []
        img: list[int] = [-1] * n
        used = [False] * n

        def place(x: int) -> None:
            if x == n:
                out.append(tuple(img))
                return
            for y in cands[x]:
                if used[y]:
                    continue
                ok = True
                for z in range(x):
                    if self._cov[z, x] != self._cov[img[z], y] or self._cov[
                        x, z
                    ] != self._cov[y, img[z]]:
                        ok = False
                        break
                if ok:
                    img[x] = y
                    used[y] = True
                    place(x + 1)
                    used[y] = False
            img[x] = -1

        place(0)
        return out

    def fixed_subposet(self, mapping) -> tuple["Poset", tuple[int, ...]]:
        """Subposet of fixed points of a verified automorphism."""
        m = self.verify_automorphism(mapping)
        fixed = [x for x in range(self.n) if m[x] == x]
        return self.induced(fixed)

    # -- chains ---------------------------------------------------------

    def saturated_chains(self, x: int, y: int) -> list[tuple[int, ...]]:
        """All saturated chains from x to y, in lexicographic order."""
        self._check_index(x)
        self._check_index(y)
        if not self.leq(x, y):
            raise NotComparable(f"{x} is not below {y}")
        chains: list[tuple[int, ...]] = []
        path = [x]

        def walk(cur: int) -> None:
            if cur == y:
                chains.append(tuple(path))
                return
            for nxt in self._ups[cur]:
                if self.leq(nxt, y):
                    path.append(nxt)
                    walk(nxt)
                    path.pop()

        walk(x)
        return chains

    def maximal_chains(self) -> list[tuple[int, ...]]:
        chains: list[tuple[int, ...]] = []
        path: list[int] = []

        def walk(cur: int) -> None:
            path.append(cur)
            ups = self._ups[cur]
            if not ups:
                chains.append(tuple(path))
            else:
                for nxt in ups:
                    walk(nxt)
            path.pop()

        for m in self.minimal_elements():
            walk(m)
        return chains

    def heights(self) -> tuple[int, ...]:
        """Longest chain length from a minimal element up to each element."""
        order = sorted(range(self.n), key=lambda x: (len(self.down_set(x)), x))
        h = [0] * self.n
        for x in order:
            for y in self._ups[x]:
                h[y] = max(h[y], h[x] + 1)
        return tuple(h)

    def is_graded(self) -> bool:
        """True when all maximal chains have the same length."""
        if self.n == 0:
            return True
        order = sorted(range(self.n), key=lambda x: (len(self.down_set(x)), x))
        lo_in = [0] * self.n
        hi_in = [0] * self.n
        for x in order:
            ins = self._downs[x]
            if ins:
                lo_in[x] = min(lo_in[w] for w in ins) + 1
                hi_in[x] = max(hi_in[w] for w in ins) + 1
        lo_out = [0] * self.n
        hi_out = [0] * self.n
        for x in reversed(order):
            outs = self._ups[x]
            if outs:
                lo_out[x] = min(lo_out[v] for v in outs) + 1
                hi_out[x] = max(hi_out[v] for v in outs) + 1
        totals = {lo_in[x] + lo_out[x] for x in range(self.n)}
        totals |= {hi_in[x] + hi_out[x] for x in range(self.n)}
        return len(totals) == 1

    # -- serialization --------------------------------------------------

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "elements": list(self.elements),
            "covers": [[lo, hi] for lo, hi in self.covers],
        }

    def to_dot(self) -> str:
        def esc(s: str) -> str:
            return s.replace("\\", "\\\\").replace('"', '\\"')

        lines = [f'digraph "{esc(self.name or "poset")}" {{', "  rankdir=BT;"]
        for i, e in enumerate(self.elements):
            lines.append(f'  n{i} [label="{esc(e)}"];')
        for lo, hi in self.covers:
            lines.append(f"  n{lo} -> n{hi};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Poset)
            and self.elements == other.elements
            and self.covers == other.covers
        )

    def __hash__(self):
        return hash((self.elements, self.covers))

    def __repr__(self) -> str:
        label = self.name or "poset"
        return f"<Poset {label!r} n={self.n} covers={len(self.covers)}>"


def build_poset(elements, relation_pairs, name: str = "") -> Poset:
    """Build a poset from element names and strict relation pairs.

    Pairs may use indices or element names (names must then be unique).
    The pairs need not be covers; the relation is transitively closed and
    then reduced.  Raises CycleDetected if the input has a directed cycle
    and IndexOutOfRange for bad indices.
    """
    names = tuple(str(e) for e in elements)
    n = len(names)
    by_name = {nm: i for i, nm in enumerate(names)}

    def resolve(item) -> int:
        if isinstance(item, str):
            if item not in by_name:
                raise IndexOutOfRange(f"unknown element name {item!r}")
            if names.count(item) > 1:
                raise IndexOutOfRange(f"ambiguous element name {item!r}")
            return by_name[item]
        return int(item)

    adj = np.zeros((n, n), dtype=bool)
    for lo, hi in relation_pairs:
        lo, hi = resolve(lo), resolve(hi)
        if not (0 <= lo < n) or not (0 <= hi < n):
            raise IndexOutOfRange(f"relation pair ({lo}, {hi}) out of range 0..{n - 1}")
        if lo == hi:
            raise CycleDetected(f"element {lo} related to itself")
        adj[lo, hi] = True
    lt = _transitive_closure(adj)
    if n and np.diagonal(lt).any():
        culprit = int(np.flatnonzero(np.diagonal(lt))[0])
        raise CycleDetected(f"cycle through element {culprit}")
    return Poset(names, lt, name=name)


def poset_from_json(payload) -> Poset:
    if isinstance(payload, str):
        payload = json.loads(payload)
    return build_poset(
        payload["elements"], payload["covers"], name=payload.get("name", "")
    )
