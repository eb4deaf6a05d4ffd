"""Signed permutations, involution families, and Bruhat order.

Permutations act on the 2n letters -n..-1, 1..n (zero is skipped); the
letters double as positions, ordered -n < ... < -1 < 1 < ... < n.  A
signed permutation satisfies s(-i) = -s(i) and is written in window
notation (s(1), ..., s(n)).  Bruhat order is computed through dominance
tables, which works uniformly for signed and unsigned permutations.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from math import lcm

import numpy as np

from .poset import Poset

__all__ = [
    "SizeMismatch",
    "ParityViolation",
    "FullPermutation",
    "SignedPermutation",
    "PermStats",
    "positions",
    "dominance_count",
    "bruhat_leq",
    "bruhat_leq_matrix",
    "generate_family",
    "longest_element",
    "minimal_fpf_involution",
    "conjugate_by_longest",
    "stats",
    "build_bruhat_poset",
    "index_map",
    "stats_csv",
]

FAMILIES = (
    "symmetric-involutions",
    "fpf-involutions",
    "signed-involutions",
    "fpf-signed-involutions",
)

_FAMILY_ALIASES = {
    "sym-inv": "symmetric-involutions",
    "fpf-inv": "fpf-involutions",
    "signed-inv": "signed-involutions",
    "fpf-signed-inv": "fpf-signed-involutions",
}


class SizeMismatch(Exception):
    pass


class ParityViolation(Exception):
    pass


def positions(n: int) -> tuple[int, ...]:
    """The letters -n..-1, 1..n in increasing order."""
    return tuple(range(-n, 0)) + tuple(range(1, n + 1))


class FullPermutation:
    """Permutation of the letters -n..-1, 1..n, stored as its full line."""

    __slots__ = ("n", "values", "_table")

    def __init__(self, n: int, values):
        values = tuple(int(v) for v in values)
        if len(values) != 2 * n or sorted(values) != list(positions(n)):
            raise ValueError(f"not a permutation of the letters for n={n}: {values}")
        self.n = n
        self.values = values
        self._table = None

    def _idx(self, i: int) -> int:
        if not (-self.n <= i <= self.n) or i == 0:
            raise ValueError(f"letter {i} out of range for n={self.n}")
        return i + self.n if i < 0 else i + self.n - 1

    def __call__(self, i: int) -> int:
        return self.values[self._idx(i)]

    def compose(self, other: "FullPermutation") -> "FullPermutation":
        """Left-to-right application: (self.compose(other))(i) = self(other(i))."""
        if self.n != other.n:
            raise SizeMismatch("cannot compose permutations of different sizes")
        vals = tuple(self(other(i)) for i in positions(self.n))
        return _rebuild(self, vals)

    def inverse(self) -> "FullPermutation":
        pos = positions(self.n)
        out = [0] * (2 * self.n)
        for i, v in zip(pos, self.values):
            out[self._idx(v)] = i
        return _rebuild(self, out)

    def is_identity(self) -> bool:
        return self.values == positions(self.n)

    def is_involution(self) -> bool:
        return all(self(self(i)) == i for i in positions(self.n))

    def is_fpf(self) -> bool:
        return all(self(i) != i for i in positions(self.n))

    def is_signed(self) -> bool:
        return all(self(-i) == -self(i) for i in range(1, self.n + 1))

    def dominance_table(self) -> np.ndarray:
        """Counts t[i, j] = #{k <= i with s(k) >= j}, indices over the letters."""
        if self._table is None:
            vals = np.array(self.values, dtype=np.int16)
            thresh = np.array(positions(self.n), dtype=np.int16)
            ge = vals[:, None] >= thresh[None, :]
            self._table = np.cumsum(ge, axis=0, dtype=np.int16)
        return self._table

    def line_str(self) -> str:
        return ",".join(str(v) for v in self.values)

    @classmethod
    def from_line_str(cls, text: str) -> "FullPermutation":
        vals = tuple(int(t) for t in text.replace(" ", "").split(","))
        if len(vals) % 2:
            raise ValueError("full line must list an even number of letters")
        return cls(len(vals) // 2, vals)

    def display(self) -> str:
        return self.line_str()

    def sort_key(self) -> tuple[int, ...]:
        return self.values

    def __eq__(self, other) -> bool:
        return isinstance(other, FullPermutation) and self.values == other.values

    def __hash__(self):
        return hash(self.values)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.display()!r})"


class SignedPermutation(FullPermutation):
    """Permutation with s(-i) = -s(i), determined by its window."""

    __slots__ = ()

    def __init__(self, n: int, values):
        super().__init__(n, values)
        if not self.is_signed():
            raise ValueError(f"full line {values} is not symmetric under negation")

    @classmethod
    def from_window(cls, window) -> "SignedPermutation":
        window = tuple(int(v) for v in window)
        n = len(window)
        vals = tuple(-v for v in reversed(window)) + window
        return cls(n, vals)

    @classmethod
    def from_window_str(cls, text: str) -> "SignedPermutation":
        vals = tuple(int(t) for t in text.replace(" ", "").split(","))
        return cls.from_window(vals)

    @property
    def window(self) -> tuple[int, ...]:
        return self.values[self.n :]

    def window_str(self) -> str:
        return ",".join(str(v) for v in self.window)

    def display(self) -> str:
        return self.window_str()

    def sort_key(self) -> tuple[int, ...]:
        return self.window


def _rebuild(template: FullPermutation, values) -> FullPermutation:
    """Reconstruct in the most specific class the values admit."""
    values = tuple(values)
    if isinstance(template, SignedPermutation):
        return SignedPermutation(template.n, values)
    return FullPermutation(template.n, values)


def parse_element(text: str, n: int | None = None):
    """Parse window notation, falling back to full-line notation."""
    vals = tuple(int(t) for t in text.replace(" ", "").split(","))
    try:
        return SignedPermutation.from_window(vals)
    except ValueError:
        pass
    if len(vals) % 2 == 0:
        p = FullPermutation(len(vals) // 2, vals)
        return SignedPermutation(p.n, p.values) if p.is_signed() else p
    raise ValueError(f"cannot parse permutation {text!r}")


# -- distinguished elements -------------------------------------------


def longest_element(n: int) -> SignedPermutation:
    """The order-reversing permutation i -> -i."""
    return SignedPermutation.from_window([-i for i in range(1, n + 1)])


def minimal_fpf_involution(n: int) -> SignedPermutation:
    """Product of the disjoint adjacent transpositions pairing the letters.

    Consecutive letters are paired off from the left; for odd n the middle
    pair straddles zero, i.e. it is (-1, 1).
    """
    pos = positions(n)
    out = {}
    for k in range(0, 2 * n, 2):
        a, b = pos[k], pos[k + 1]
        out[a], out[b] = b, a
    return SignedPermutation(n, tuple(out[i] for i in pos))


def conjugate_by_longest(p: FullPermutation) -> FullPermutation:
    """Conjugation by the order-reversing permutation: i -> -p(-i)."""
    return _rebuild(p, tuple(-v for v in reversed(p.values)))


# -- Bruhat order ------------------------------------------------------


def dominance_count(p: FullPermutation, i: int, j: int) -> int:
    """#{k <= i with p(k) >= j}; i and j range over the letters."""
    return int(p.dominance_table()[p._idx(i), p._idx(j)])


def bruhat_leq(a: FullPermutation, b: FullPermutation) -> bool:
    """Dominance criterion: a <= b iff every table entry of a is <= b's."""
    if a.n != b.n:
        raise SizeMismatch(f"cannot compare n={a.n} with n={b.n}")
    return bool((a.dominance_table() <= b.dominance_table()).all())


def bruhat_leq_matrix(elements) -> np.ndarray:
    """Boolean matrix of all pairwise Bruhat comparisons within a family."""
    m = len(elements)
    if m == 0:
        return np.zeros((0, 0), dtype=bool)
    ns = {p.n for p in elements}
    if len(ns) > 1:
        raise SizeMismatch("family mixes permutation sizes")
    tables = np.stack([p.dominance_table().ravel() for p in elements])
    out = np.zeros((m, m), dtype=bool)
    step = max(1, 2_000_000 // (tables.shape[1] * m + 1))
    for start in range(0, m, step):
        stop = min(m, start + step)
        out[start:stop] = (tables[start:stop, None, :] <= tables[None, :, :]).all(
            axis=2
        )
    return out


# -- family generation -------------------------------------------------


def canonical_family(family: str) -> str:
    name = _FAMILY_ALIASES.get(family, family)
    if name not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; choose from {FAMILIES}")
    return name


def _signed_involutions(n: int, fpf: bool) -> list[SignedPermutation]:
    out: list[SignedPermutation] = []
    image: dict[int, int] = {}

    def assign(i: int, v: int) -> None:
        image[i], image[v] = v, i
        image[-i], image[-v] = -v, -i

    def clear(i: int, v: int) -> None:
        for k in (i, v, -i, -v):
            image.pop(k, None)

    def extend(letters: tuple[int, ...]) -> None:
        if not letters:
            out.append(
                SignedPermutation(n, tuple(image[i] for i in positions(n)))
            )
            return
        i, rest = letters[0], letters[1:]
        choices = [] if fpf else [i]
        choices.append(-i)
        for j in rest:
            choices.extend((j, -j))
        for v in sorted(choices):
            assign(i, v)
            extend(tuple(k for k in rest if k != abs(v)))
            clear(i, v)

    extend(tuple(range(1, n + 1)))
    out.sort(key=lambda p: p.window)
    return out


def _full_involutions(n: int, fpf: bool) -> list[FullPermutation]:
    pos = positions(n)
    out: list[FullPermutation] = []
    image: dict[int, int] = {}

    def extend(letters: tuple[int, ...]) -> None:
        if not letters:
            out.append(FullPermutation(n, tuple(image[i] for i in pos)))
            return
        i, rest = letters[0], letters[1:]
        if not fpf:
            image[i] = i
            extend(rest)
            del image[i]
        for j in rest:
            image[i], image[j] = j, i
            extend(tuple(k for k in rest if k != j))
            del image[i], image[j]

    extend(pos)
    out.sort(key=lambda p: p.values)
    return out


def generate_family(family: str, n: int):
    """All members of an involution family, in canonical sorted order.

    Signed families are sorted by window, unsigned ones by full line.  The
    unsigned families live in the symmetric group on the 2n letters; the
    fpf ones form the conjugacy class of the order-reversing permutation.
    """
    name = canonical_family(family)
    if n < 0:
        raise ValueError("n must be nonnegative")
    if name == "signed-involutions":
        return _signed_involutions(n, fpf=False)
    if name == "fpf-signed-involutions":
        return _signed_involutions(n, fpf=True)
    if name == "symmetric-involutions":
        return _full_involutions(n, fpf=False)
    return _full_involutions(n, fpf=True)


# -- statistics --------------------------------------------------------


@dataclass(frozen=True)
class PermStats:
    inv: int
    neg: int
    length: int
    dna: int
    rank: int


def stats(p: FullPermutation) -> PermStats:
    """Inversion, negation, length, deficiency, and rank statistics.

    length is (inv + neg) / 2 and rank is (length + dna) / 2; both sums
    must be even.  The second parity holds on involutions, which is where
    the rank statistic is meaningful.
    """
    n = p.n
    pos = positions(n)
    vals = p.values
    inv = sum(
        1
        for a in range(2 * n)
        for b in range(a + 1, 2 * n)
        if vals[a] > vals[b]
    )
    neg = sum(1 for i in range(1, n + 1) if p(i) < 0)
    if (inv + neg) % 2:
        raise ParityViolation(f"inv + neg odd for {p.display()}")
    length = (inv + neg) // 2
    dna = sum(1 for i in range(1, n + 1) if -i <= p(i) < i)
    if (length + dna) % 2:
        raise ParityViolation(
            f"length + dna odd for {p.display()}; rank needs an involution"
        )
    rank = (length + dna) // 2
    return PermStats(inv=inv, neg=neg, length=length, dna=dna, rank=rank)


# -- posets over families ----------------------------------------------


def build_bruhat_poset(elements, order: str = "bruhat", name: str = "") -> Poset:
    """Poset on a family under (possibly dualized) induced Bruhat order."""
    if order not in ("bruhat", "dual"):
        raise ValueError(f"order must be 'bruhat' or 'dual', got {order!r}")
    leq = bruhat_leq_matrix(list(elements))
    lt = leq & ~np.eye(len(elements), dtype=bool)
    if order == "dual":
        lt = lt.T.copy()
    return Poset(tuple(p.display() for p in elements), lt, name=name)


def index_map(elements, func) -> tuple[int, ...]:
    """Apply func to each family member and look the image up by index."""
    where = {p: i for i, p in enumerate(elements)}
    out = []
    for p in elements:
        q = func(p)
        if q not in where:
            raise ValueError(f"{q!r} left the family")
        out.append(where[q])
    return tuple(out)


def permutation_order(mapping) -> int:
    """Multiplicative order of an index permutation."""
    m = tuple(mapping)
    seen = [False] * len(m)
    order = 1
    for start in range(len(m)):
        if seen[start]:
            continue
        size, cur = 0, start
        while not seen[cur]:
            seen[cur] = True
            cur = m[cur]
            size += 1
        order = lcm(order, size)
    return order


def stats_csv(family: str, ns) -> str:
    """CSV table of the five statistics over one or more family sizes."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "window", "inv", "neg", "len", "dna", "rho"])
    for n in ns:
        for p in generate_family(family, n):
            s = stats(p)
            writer.writerow([n, p.display(), s.inv, s.neg, s.length, s.dna, s.rank])
    return buf.getvalue()
