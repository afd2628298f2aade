"""Minimal (partial) set cover of a journal set by categories.

A cover must reach ``required = ceil(threshold * |target|)`` target journals.
Small instances are solved exactly by branch and bound; larger ones greedily.
Every result reports the method used and whether it is provably optimal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .corpus import Category, Corpus, check_system
from .setalgebra import BitIndex, CatRef

DEFAULT_EXACT_CAP = 25
DEFAULT_BUDGET = 200_000

MODES = ("intra_a", "intra_b", "a_by_b", "b_by_a")


class BudgetExceeded(Exception):
    pass


def required_count(threshold: float, target_size: int) -> int:
    if not 0 < threshold <= 1:
        raise ValueError(f"threshold {threshold!r} must lie in (0, 1]")
    # decimal parse so that e.g. 0.95 * 20 is exactly 19
    return max(1, math.ceil(Fraction(str(threshold)) * target_size))


@dataclass(frozen=True)
class CoverInstance:
    target: frozenset[str]
    candidates: tuple[Category, ...]
    threshold: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "target", frozenset(self.target))
        object.__setattr__(self, "candidates", tuple(self.candidates))
        if not self.target:
            raise ValueError("cover target is empty")
        refs = [c.ref for c in self.candidates]
        if len(set(refs)) != len(refs):
            raise ValueError("duplicate candidate categories")
        self.required  # validates threshold

    @property
    def required(self) -> int:
        return required_count(self.threshold, len(self.target))

    def masks(self) -> tuple[int, list[tuple[CatRef, int]]]:
        """Target mask and the (ref, mask) of candidates touching the target, ref-sorted."""
        idx = BitIndex(self.target)
        cands = []
        for c in sorted(self.candidates, key=lambda c: c.ref):
            m = idx.mask(c.members & self.target)
            if m:
                cands.append((c.ref, m))
        return (1 << len(idx.ids)) - 1, cands


@dataclass(frozen=True)
class CoverResult:
    chosen: tuple[CatRef, ...]
    covered: int
    required: int
    target_size: int
    feasible: bool
    optimal: bool
    method: str
    nodes: int = 0

    @property
    def size(self) -> int:
        return len(self.chosen)

    @property
    def names(self) -> list[str]:
        return [r[1] for r in self.chosen]


def _union(masks) -> int:
    u = 0
    for m in masks:
        u |= m
    return u


def _greedy(cands: list[tuple[CatRef, int]], required: int, prune: bool) -> tuple[list, int]:
    chosen = []
    covered = 0
    while covered.bit_count() < required:
        best, best_gain = None, 0
        for item in cands:  # ref-sorted, so strict > keeps the smallest name on ties
            gain = (item[1] & ~covered).bit_count()
            if gain > best_gain:
                best, best_gain = item, gain
        if best is None:
            break
        chosen.append(best)
        covered |= best[1]
    if prune:
        need = min(required, covered.bit_count())
        for k in range(len(chosen) - 1, -1, -1):
            rest = chosen[:k] + chosen[k + 1:]
            if _union(m for _, m in rest).bit_count() >= need:
                chosen = rest
        covered = _union(m for _, m in chosen)
    return chosen, covered.bit_count()


def greedy_cover(instance: CoverInstance, prune: bool = True) -> CoverResult:
    """Max-gain greedy, then drop picks made redundant, latest pick first."""
    _, cands = instance.masks()
    return _greedy_result(cands, instance.required, len(instance.target), prune)


def _greedy_result(cands, required, target_size, prune=True) -> CoverResult:
    chosen, covered = _greedy(cands, required, prune)
    return CoverResult(
        chosen=tuple(r for r, _ in chosen),
        covered=covered,
        required=required,
        target_size=target_size,
        feasible=covered >= required,
        optimal=False,
        method="greedy",
    )


def _reduce(cands: list[tuple[CatRef, int]]) -> list[tuple[CatRef, int]]:
    """Drop candidates whose target part equals or sits inside another's.

    Any cover using a dropped candidate stays a cover, of the same size, when it
    is swapped for its dominator, so optimal sizes are unchanged.
    """
    seen = {}
    for ref, m in cands:
        seen.setdefault(m, ref)  # cands are ref-sorted: keep the smallest name
    items = sorted(((ref, m) for m, ref in seen.items()), key=lambda x: (-x[1].bit_count(), x[0]))
    kept = []
    for ref, m in items:
        if not any(m & k == m for _, k in kept):
            kept.append((ref, m))
    return kept


def _branch_and_bound(cands, required: int, best_size: int, budget: int):
    """Smallest index set reaching ``required`` bits, if smaller than best_size.

    Include/exclude search over candidates ordered by decreasing size. Pruned by
    the incumbent, by reachability (remaining union), and by the lower bound
    ceil(remaining / largest marginal gain).
    """
    masks = [m for _, m in cands]
    n = len(masks)
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] | masks[i]
    state = {"best": best_size, "sol": None, "nodes": 0}

    def visit(i: int, covered: int, picked: list[int]):
        state["nodes"] += 1
        if state["nodes"] > budget:
            raise BudgetExceeded
        have = covered.bit_count()
        if have >= required:
            if len(picked) < state["best"]:
                state["best"] = len(picked)
                state["sol"] = list(picked)
            return
        if i == n or len(picked) + 1 >= state["best"]:
            return
        if (covered | suffix[i]).bit_count() < required:
            return
        free = ~covered
        max_gain = max((masks[j] & free).bit_count() for j in range(i, n))
        if len(picked) + -(-(required - have) // max_gain) >= state["best"]:
            return
        if masks[i] & free:
            picked.append(i)
            visit(i + 1, covered | masks[i], picked)
            picked.pop()
        visit(i + 1, covered, picked)

    visit(0, 0, [])
    return state["sol"], state["nodes"]


def exact_cover(instance: CoverInstance, budget: int = DEFAULT_BUDGET) -> CoverResult:
    """Provably minimal cover by branch and bound, seeded with the greedy solution.

    Returns the greedy result (optimal=False) if the instance is infeasible or
    the search visits more than ``budget`` nodes.
    """
    _, cands = instance.masks()
    return _exact_result(cands, instance.required, len(instance.target), budget)


def _exact_result(cands, required, target_size, budget) -> CoverResult:
    greedy = _greedy_result(cands, required, target_size)
    if not greedy.feasible:
        return greedy
    reduced = _reduce(cands)
    try:
        sol, nodes = _branch_and_bound(reduced, required, greedy.size, budget)
    except BudgetExceeded:
        return greedy
    if sol is None:
        chosen = greedy.chosen
        covered = greedy.covered
    else:
        chosen = tuple(reduced[i][0] for i in sol)
        covered = _union(reduced[i][1] for i in sol).bit_count()
    return CoverResult(
        chosen=tuple(sorted(chosen)),
        covered=covered,
        required=required,
        target_size=target_size,
        feasible=True,
        optimal=True,
        method="exact",
        nodes=nodes,
    )


def solve(instance: CoverInstance, exact_cap: int = DEFAULT_EXACT_CAP, budget: int = DEFAULT_BUDGET) -> CoverResult:
    """Exact when at most ``exact_cap`` candidates touch the target, greedy otherwise."""
    _, cands = instance.masks()
    return _solve_masks(cands, instance.required, len(instance.target), exact_cap, budget)


def _solve_masks(cands, required, target_size, exact_cap, budget) -> CoverResult:
    if len(cands) <= exact_cap:
        return _exact_result(cands, required, target_size, budget)
    return _greedy_result(cands, required, target_size)


def _mode_systems(mode: str) -> tuple[str, str]:
    """(system of the targets, system of the candidates)."""
    if mode not in MODES:
        raise ValueError(f"unknown cover mode {mode!r}; expected one of {MODES}")
    if mode.startswith("intra_"):
        s = mode[-1]
        return s, s
    return mode[0], mode[-1]


def cover_survey(
    corpus: Corpus,
    mode: str,
    threshold: float,
    exact_cap: int = DEFAULT_EXACT_CAP,
    budget: int = DEFAULT_BUDGET,
) -> list[tuple[Category, CoverResult]]:
    """Cover every category of one system by the categories of ``mode``'s covering system.

    In intra modes the target category is never its own candidate.
    """
    tsys, csys = _mode_systems(mode)
    targets = corpus.categories(tsys)
    pool = corpus.categories(csys)
    idx = BitIndex(corpus.journal_ids)
    pool_masks = [(c.ref, idx.mask(c.members)) for c in pool]  # ref-sorted already
    out = []
    for cat in targets:
        tmask = idx.mask(cat.members)
        cands = [(r, m & tmask) for r, m in pool_masks if m & tmask and r != cat.ref]
        # bits stay in corpus-wide positions; only counts matter to the solvers
        req = required_count(threshold, cat.size)
        out.append((cat, _solve_masks(cands, req, cat.size, exact_cap, budget)))
    return out


def meta_cover(
    corpus: Corpus,
    direction: str,
    threshold: float,
    exact_cap: int = DEFAULT_EXACT_CAP,
    budget: int = DEFAULT_BUDGET,
) -> CoverResult:
    """Cover the whole corpus (one meta-category) by the covering system's categories."""
    if direction not in ("a_by_b", "b_by_a"):
        raise ValueError(f"unknown direction {direction!r}")
    csys = check_system(direction[-1])
    instance = CoverInstance(corpus.journal_ids, corpus.categories(csys), threshold)
    return solve(instance, exact_cap, budget)


def summarize_survey(results: Sequence[tuple[Category, CoverResult]]) -> dict:
    feasible = [(c, r) for c, r in results if r.feasible]
    sizes = [r.size for _, r in feasible]
    tsizes = [c.size for c, _ in feasible]
    return {
        "n_categories": len(results),
        "n_coverable": len(feasible),
        "fraction_coverable": len(feasible) / len(results) if results else 0.0,
        "min_cover_size": min(sizes, default=None),
        "max_cover_size": max(sizes, default=None),
        "min_target_size": min(tsizes, default=None),
        "max_target_size": max(tsizes, default=None),
        "n_optimal": sum(1 for _, r in feasible if r.optimal),
    }
