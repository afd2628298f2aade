"""Independent oracles and fixture builders shared by the test modules.

The oracles are deliberately naive (enumeration, counting, two-pass loops) and
share no code with the library paths they check.
"""

from __future__ import annotations

import itertools
import math

from subjcat.corpus import Category, JournalRecord, build_corpus, match_journals


def brute_rank_desc(values, i):
    """1-based descending rank of values[i], ties averaged, by counting."""
    higher = sum(1 for v in values if v > values[i])
    equal = sum(1 for v in values if v == values[i])
    return higher + (equal + 1) / 2


def brute_percentiles(values):
    n = len(values)
    return [(n - brute_rank_desc(values, i) + 0.5) / n * 100 for i in range(n)]


def two_pass_var(values):
    n = len(values)
    total = 0.0
    for v in values:
        total += v
    mean = total / n
    acc = 0.0
    for v in values:
        acc += (v - mean) * (v - mean)
    return acc / n


def brute_min_cover(target, candidates, required):
    """Smallest number of candidate sets covering >= required target members, or None."""
    target = set(target)
    sets = [set(c) & target for c in candidates]
    if len(set().union(*sets) if sets else set()) < required:
        return None
    for k in range(0, len(sets) + 1):
        for combo in itertools.combinations(sets, k):
            if len(set().union(*combo)) >= required:
                return k
    return None


def exact_wilcoxon_p(diffs):
    """Two-sided exact sign-flip permutation p-value of the signed-rank statistic."""
    d = [x for x in diffs if x != 0]
    absd = [abs(x) for x in d]
    n = len(d)
    ranks = []
    for v in absd:
        less = sum(1 for u in absd if u < v)
        eq = sum(1 for u in absd if u == v)
        ranks.append(less + (eq + 1) / 2)
    total = sum(ranks)
    mu = total / 2
    w_plus = sum(r for r, x in zip(ranks, d) if x > 0)
    obs = abs(w_plus - mu)
    hits = 0
    for signs in itertools.product((0, 1), repeat=n):
        s = sum(r for r, on in zip(ranks, signs) if on)
        if abs(s - mu) >= obs - 1e-9:
            hits += 1
    return hits / 2**n


def cats(system, mapping):
    """Category objects from {name: iterable of member ids}."""
    return [Category(system, name, frozenset(members)) for name, members in sorted(mapping.items())]


def make_corpus(assign_a, assign_b, scores_a=None, scores_b=None):
    """Corpus from {journal id: [category names]} per system, matched through ISSN."""
    recs_a, recs_b = [], []
    for k, jid in enumerate(sorted(assign_a)):
        issn = f"{k + 1:08d}"
        sa = (scores_a or {}).get(jid, float(k + 1))
        sb = (scores_b or {}).get(jid, float(k + 1))
        recs_a.append(JournalRecord("a", f"J{jid}", tuple(assign_a[jid]), sa, issn))
        recs_b.append(JournalRecord("b", f"J{jid}", tuple(assign_b[jid]), sb, issn))
    matches, _ = match_journals(recs_a, recs_b)
    return build_corpus(matches)


def assignments_to_categories(assign):
    out = {}
    for jid, names in assign.items():
        for n in names:
            out.setdefault(n, set()).add(jid)
    return out
