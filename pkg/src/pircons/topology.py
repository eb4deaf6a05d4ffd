"""Order complexes and mod-2 homology.

Faces of the order complex are the chains of a poset.  Reduced Betti
numbers are computed over the two-element field from boundary-matrix
ranks; matrices are held as lists of bitmask rows and reduced by Gaussian
elimination.  The empty complex (no facets) keeps the empty face, so its
only reduced Betti number is 1 in dimension -1.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from itertools import combinations

from .poset import Poset

__all__ = [
    "NotPure",
    "FormulaMismatch",
    "HomologyInconsistency",
    "SimplicialComplex",
    "make_complex",
    "order_complex",
    "euler_characteristic",
    "HomologySignature",
    "homology_z2",
    "ball_sphere_signature",
    "expected_dimension",
    "ShellingVerdict",
    "verify_shelling",
    "complex_to_json",
    "homology_csv_row",
]


class NotPure(Exception):
    pass


class FormulaMismatch(Exception):
    pass


class HomologyInconsistency(Exception):
    pass


@dataclass(frozen=True)
class SimplicialComplex:
    n_vertices: int
    facets: tuple[frozenset[int], ...]

    def __post_init__(self):
        for f in self.facets:
            for v in f:
                if not (0 <= v < self.n_vertices):
                    raise ValueError(f"vertex {v} out of range")
        for a in self.facets:
            for b in self.facets:
                if a is not b and a <= b:
                    raise ValueError("facet list contains a nested pair")

    @property
    def dim(self) -> int:
        """Dimension; -1 for the empty complex."""
        return max((len(f) for f in self.facets), default=0) - 1

    def faces(self) -> dict[int, list[tuple[int, ...]]]:
        """All faces grouped by dimension, sorted; the empty face included."""
        seen: set[tuple[int, ...]] = set()
        for f in self.facets:
            base = tuple(sorted(f))
            for size in range(len(base) + 1):
                seen.update(combinations(base, size))
        seen.add(())
        grouped: dict[int, list[tuple[int, ...]]] = {}
        for face in seen:
            grouped.setdefault(len(face) - 1, []).append(face)
        for d in grouped:
            grouped[d].sort()
        return grouped


def make_complex(n_vertices: int, faces) -> SimplicialComplex:
    """Build a complex from arbitrary faces, keeping only the maximal ones."""
    sets = sorted({frozenset(f) for f in faces}, key=lambda s: (-len(s), sorted(s)))
    facets: list[frozenset[int]] = []
    for s in sets:
        if not any(s <= kept for kept in facets):
            facets.append(s)
    facets.sort(key=lambda s: (len(s), sorted(s)))
    return SimplicialComplex(n_vertices=n_vertices, facets=tuple(facets))


def order_complex(P: Poset) -> SimplicialComplex:
    """Chains of the poset as a simplicial complex on its elements."""
    return make_complex(P.n, P.maximal_chains())


def euler_characteristic(K: SimplicialComplex) -> int:
    """Unreduced alternating face count; the empty face does not count."""
    total = 0
    for d, faces in K.faces().items():
        if d >= 0:
            total += len(faces) if d % 2 == 0 else -len(faces)
    return total


def _rank_gf2(rows: list[int]) -> int:
    rank = 0
    pivots: list[int] = []
    for row in rows:
        for p in pivots:
            low = p & -p
            if row & low:
                row ^= p
        if row:
            pivots.append(row)
            rank += 1
    return rank


@dataclass(frozen=True)
class HomologySignature:
    dim: int
    betti: tuple[int, ...]  # indexed -1 .. dim

    def betti_at(self, d: int) -> int:
        if not (-1 <= d <= self.dim):
            return 0
        return self.betti[d + 1]

    @property
    def reduced_all_zero(self) -> bool:
        return all(b == 0 for b in self.betti)


def homology_z2(K: SimplicialComplex) -> HomologySignature:
    """Reduced Betti numbers over the two-element field.

    The alternating sum of the reduced Betti numbers is checked against
    the reduced Euler characteristic; a mismatch would mean a broken rank
    computation and raises.
    """
    faces = K.faces()
    top = K.dim
    index: dict[int, dict[tuple[int, ...], int]] = {
        d: {f: i for i, f in enumerate(fs)} for d, fs in faces.items()
    }
    ranks: dict[int, int] = {}
    for d in range(0, top + 1):
        rows = []
        below = index.get(d - 1, {})
        for face in faces.get(d, []):
            row = 0
            for skip in range(len(face)):
                sub = face[:skip] + face[skip + 1 :]
                row |= 1 << below[sub]
            rows.append(row)
        ranks[d] = _rank_gf2(rows)
    betti = []
    for d in range(-1, top + 1):
        dim_cd = len(faces.get(d, []))
        kernel = dim_cd - ranks.get(d, 0) if d >= 0 else dim_cd
        betti.append(kernel - ranks.get(d + 1, 0))
    sig = HomologySignature(dim=top, betti=tuple(betti))
    reduced_euler = sum(
        (len(fs) if d % 2 == 0 else -len(fs)) for d, fs in faces.items() if d >= 0
    ) - 1
    alternating = sum(
        (b if d % 2 == 0 else -b) for d, b in zip(range(-1, top + 1), betti)
    )
    if alternating != reduced_euler:
        raise HomologyInconsistency(
            f"betti alternation {alternating} != reduced euler {reduced_euler}"
        )
    return sig


def ball_sphere_signature(K: SimplicialComplex, expected_dim: int) -> str:
    """"ball-consistent", "sphere-consistent", or "neither"."""
    sig = homology_z2(K)
    if sig.reduced_all_zero and K.dim == expected_dim:
        return "ball-consistent"
    sphere = all(
        sig.betti_at(d) == (1 if d == expected_dim else 0)
        for d in range(-1, max(sig.dim, expected_dim) + 1)
    )
    if sphere:
        return "sphere-consistent"
    return "neither"


def expected_dimension(n: int) -> int:
    """Expected dimension of the proper-part order complex of the signed
    fpf involution family: half of n squared (rounded down) minus 2.

    Cross-checked against the rank difference form; a mismatch raises.
    """
    direct = n * n // 2 - 2 if n % 2 == 0 else (n * n - 1) // 2 - 2
    top_rank = (n * n + n) // 2
    bottom_rank = n // 2 if n % 2 == 0 else (n + 1) // 2
    via_ranks = top_rank - bottom_rank - 2
    if direct != via_ranks:
        raise FormulaMismatch(f"{direct} != {via_ranks} for n={n}")
    return direct


@dataclass(frozen=True)
class ShellingVerdict:
    ok: bool
    witness: int | None = None  # position in the facet order


def verify_shelling(K: SimplicialComplex, facet_order) -> ShellingVerdict:
    """Check that a facet order is a shelling of a pure complex.

    Each facet after the first must meet the union of its predecessors in
    a nonempty union of faces of codimension one.  Pure complexes of
    dimension zero are shellable in any order.
    """
    order = [K.facets[i] for i in facet_order]
    if sorted(facet_order) != list(range(len(K.facets))):
        raise ValueError("facet order must be a permutation of the facets")
    sizes = {len(f) for f in order}
    if len(sizes) > 1:
        raise NotPure(f"facet sizes {sorted(sizes)} differ")
    if not order or len(order) == 1:
        return ShellingVerdict(True)
    size = len(order[0])
    if size == 1:
        return ShellingVerdict(True)
    for k in range(1, len(order)):
        ridge_hits = [order[k] & prev for prev in order[:k]]
        big = [h for h in ridge_hits if len(h) == size - 1]
        if not big:
            return ShellingVerdict(False, witness=k)
        for hit in ridge_hits:
            if not any(hit <= b for b in big):
                return ShellingVerdict(False, witness=k)
    return ShellingVerdict(True)


def complex_to_json(K: SimplicialComplex) -> dict:
    return {
        "n_vertices": K.n_vertices,
        "facets": [sorted(f) for f in K.facets],
    }


def homology_csv_row(n: int, sig: HomologySignature, verdict: str) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["n", "dim"] + [f"betti_{d}" for d in range(0, sig.dim + 1)] + ["verdict"]
    writer.writerow(header)
    writer.writerow(
        [n, sig.dim] + [sig.betti_at(d) for d in range(0, sig.dim + 1)] + [verdict]
    )
    return buf.getvalue()
