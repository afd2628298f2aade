"""Set relations between categories: subsets, equivalences, intersections, closeness.

Member sets are turned into Python-int bitsets over a shared id index, so pair
checks are an ``&`` plus a popcount.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .corpus import Category

CatRef = tuple[str, str]


class BitIndex:
    """Maps corpus ids to bit positions (sorted-id order)."""

    def __init__(self, ids: Iterable[str]):
        self.ids = sorted(set(ids))
        self.pos = {i: k for k, i in enumerate(self.ids)}

    @classmethod
    def of(cls, *groups: Iterable[Category]) -> "BitIndex":
        return cls(i for cats in groups for c in cats for i in c.members)

    def mask(self, members: Iterable[str]) -> int:
        m = 0
        for i in members:
            m |= 1 << self.pos[i]
        return m


def closeness(cat_a: Category, cat_b: Category) -> float:
    """|A & B| / min(|A|, |B|), the overlap coefficient."""
    if not cat_a.members or not cat_b.members:
        raise ValueError("closeness is undefined for an empty category")
    return len(cat_a.members & cat_b.members) / min(len(cat_a.members), len(cat_b.members))


@dataclass(frozen=True, order=True)
class IntersectionRecord:
    cat_a: CatRef
    cat_b: CatRef
    size: int
    closeness: float

    @classmethod
    def make(cls, a: CatRef, b: CatRef, size: int, size_a: int, size_b: int) -> "IntersectionRecord":
        if b < a:
            a, b = b, a
        return cls(a, b, size, size / min(size_a, size_b))


@dataclass
class RelationReport:
    left: str
    right: str
    same_system: bool
    sizes: dict[CatRef, int]
    equivalences: set[tuple[CatRef, CatRef]] = field(default_factory=set)
    subsets: set[tuple[CatRef, CatRef]] = field(default_factory=set)
    pure_subsets: set[CatRef] = field(default_factory=set)
    supersets: set[CatRef] = field(default_factory=set)
    standalone: set[CatRef] = field(default_factory=set)
    intersections: set[IntersectionRecord] = field(default_factory=set)
    intersect_counts: dict[CatRef, int] = field(default_factory=dict)

    @property
    def subset_categories(self) -> set[CatRef]:
        return {sub for sub, _ in self.subsets}

    def supersets_of(self, ref: CatRef) -> set[CatRef]:
        return {sup for sub, sup in self.subsets if sub == ref}

    def summary(self) -> dict:
        left_refs = [r for r in self.sizes if r[0] == self.left]
        out = {
            "left": self.left,
            "right": self.right,
            "same_system": self.same_system,
            "n_categories": len(self.sizes),
            "n_equivalences": len(self.equivalences),
            "n_subset_pairs": len(self.subsets),
            "n_subset_categories": len(self.subset_categories),
            "n_superset_categories": len(self.supersets),
            "n_pure_subsets": len(self.pure_subsets),
            "n_standalone": len(self.standalone),
            "n_intersecting": sum(1 for r in left_refs if self.intersect_counts.get(r, 0) > 0),
        }
        if not self.same_system:
            # directional view: left categories holding a right category as a subset
            out["n_left_with_right_subsets"] = len(
                {sup for sub, sup in self.subsets if sup[0] == self.left}
            )
            out["n_left_subset_of_right"] = len(
                {sub for sub, sup in self.subsets if sub[0] == self.left}
            )
        return out

    def to_dict(self) -> dict:
        def ref(r):
            return {"system": r[0], "name": r[1]}

        return {
            "summary": self.summary(),
            "categories": [
                {**ref(r), "size": n, "intersecting": self.intersect_counts.get(r, 0)}
                for r, n in sorted(self.sizes.items())
            ],
            "equivalences": [[ref(a), ref(b)] for a, b in sorted(self.equivalences)],
            "subsets": [{"sub": ref(a), "super": ref(b)} for a, b in sorted(self.subsets)],
            "pure_subsets": [ref(r) for r in sorted(self.pure_subsets)],
            "supersets": [ref(r) for r in sorted(self.supersets)],
            "standalone": [ref(r) for r in sorted(self.standalone)],
            "intersections": [
                {"a": ref(x.cat_a), "b": ref(x.cat_b), "size": x.size, "closeness": x.closeness}
                for x in sorted(self.intersections)
            ],
        }


def relate(
    categories_left: Sequence[Category],
    categories_right: Sequence[Category],
    same_system: bool,
) -> RelationReport:
    """Enumerate pairwise relations between two category collections.

    With ``same_system`` the right collection is ignored and every unordered
    pair of distinct left categories is compared. Otherwise every (left, right)
    pair is compared and subset pairs are recorded in both directions.

    A pure subset (intra-system only) is a category with at least one superset
    whose every intersecting category is one of its supersets, i.e. each of its
    journals sits only in it and in its supersets. A standalone category shares
    no journal with any category on the compared side.
    """
    left = sorted(categories_left, key=lambda c: c.ref)
    right = left if same_system else sorted(categories_right, key=lambda c: c.ref)
    idx = BitIndex.of(left, right)
    masks = {c.ref: idx.mask(c.members) for c in (*left, *right)}
    sizes = {c.ref: c.size for c in (*left, *right)}
    sys_l = left[0].system_id if left else ""
    sys_r = right[0].system_id if right else ""
    report = RelationReport(sys_l, sys_r, same_system, sizes)
    counts = {r: 0 for r in sizes}
    # per category, the refs it intersects (needed for purity)
    touching = {r: set() for r in sizes}

    if same_system:
        pairs = ((left[i], left[j]) for i in range(len(left)) for j in range(i + 1, len(left)))
    else:
        pairs = ((a, b) for a in left for b in right)

    for a, b in pairs:
        ra, rb = a.ref, b.ref
        inter = (masks[ra] & masks[rb]).bit_count()
        a_in_b = inter == sizes[ra]
        b_in_a = inter == sizes[rb]
        if a_in_b:
            report.subsets.add((ra, rb))
            report.supersets.add(rb)
        if b_in_a:
            report.subsets.add((rb, ra))
            report.supersets.add(ra)
        if a_in_b and b_in_a:
            report.equivalences.add((min(ra, rb), max(ra, rb)))
        if inter:
            report.intersections.add(IntersectionRecord.make(ra, rb, inter, sizes[ra], sizes[rb]))
            counts[ra] += 1
            counts[rb] += 1
            touching[ra].add(rb)
            touching[rb].add(ra)

    report.intersect_counts = counts
    report.standalone = {r for r, n in counts.items() if n == 0}
    if same_system:
        supers = {r: set() for r in sizes}
        for sub, sup in report.subsets:
            supers[sub].add(sup)
        report.pure_subsets = {
            r for r in sizes if supers[r] and touching[r] <= supers[r]
        }
    return report


def intersection_histogram(categories: Sequence[Category]) -> dict[CatRef, int]:
    """For each category, how many other categories of the collection it intersects."""
    return dict(sorted(relate(categories, categories, same_system=True).intersect_counts.items()))


def _step_thresholds(step) -> list[int]:
    frac = Fraction(str(step))
    if frac <= 0 or frac.denominator != 1 or 100 % frac.numerator:
        raise ValueError(f"sweep step {step!r} must be a positive integer dividing 100")
    s = frac.numerator
    return list(range(s, 101, s))


def best_overlaps(src: Sequence[Category], dst: Sequence[Category]) -> dict[CatRef, int]:
    """For each src category, the largest number of its journals shared with one dst category."""
    idx = BitIndex.of(src, dst)
    dst_masks = [idx.mask(d.members) for d in dst]
    out = {}
    for s in sorted(src, key=lambda c: c.ref):
        m = idx.mask(s.members)
        out[s.ref] = max(((m & d).bit_count() for d in dst_masks), default=0)
    return out


def similarity_sweep(
    categories_src: Sequence[Category], categories_dst: Sequence[Category], step=5
) -> list[tuple[int, float]]:
    """Fraction of src categories with some dst category sharing more than t% of src's journals.

    t runs over step, 2*step, ..., 100 (percent). The comparison is strict and
    done in exact integer arithmetic.
    """
    thresholds = _step_thresholds(step)
    sizes = {c.ref: c.size for c in categories_src}
    best = best_overlaps(categories_src, categories_dst)
    n = len(best)
    curve = []
    for t in thresholds:
        hits = sum(1 for r, shared in best.items() if shared * 100 > t * sizes[r])
        curve.append((t, hits / n if n else 0.0))
    return curve
