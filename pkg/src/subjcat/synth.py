"""Deterministic synthetic two-system journal tables.

Journals get a latent position on [0, 1); each system places its categories at
its own evenly spaced centres and assigns a journal to categories near its
position, so the two schemes overlap without coinciding. Identifier formats,
inactive and unscored journals and unmatched extras are mixed in to exercise
every matching pass.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import JournalRecord, write_journal_table


@dataclass
class SynthConfig:
    n_journals: int = 500
    n_cats_a: int = 40
    n_cats_b: int = 55
    extra_frac: float = 0.1
    inactive_frac: float = 0.03
    unscored_frac: float = 0.03
    spread: float = 0.04
    niche_frac: float = 0.02
    seed: int = 0


_K_A = ([1, 2, 3, 4, 5], [0.55, 0.28, 0.11, 0.04, 0.02])
_K_B = ([1, 2, 3, 4, 5, 6], [0.25, 0.35, 0.2, 0.1, 0.06, 0.04])


def _fmt_issn(n: int, dashed: bool) -> str:
    s = f"{n:08d}"
    return f"{s[:4]}-{s[4:]}" if dashed else s


def _pick(rng, pos: float, n_cats: int, k: int, spread: float) -> list[int]:
    centres = (np.arange(n_cats) + 0.5) / n_cats
    d = np.abs(centres - pos)
    d = np.minimum(d, 1 - d)
    w = np.exp(-((d / spread) ** 2)) + 1e-3
    k = min(k, n_cats)
    picked = rng.choice(n_cats, size=k, replace=False, p=w / w.sum())
    return sorted(int(i) for i in picked)


def synthetic_records(cfg: SynthConfig = SynthConfig()) -> tuple[list[JournalRecord], list[JournalRecord]]:
    rng = np.random.default_rng(cfg.seed)
    n_extra = int(round(cfg.extra_frac * cfg.n_journals))
    total = cfg.n_journals + 2 * n_extra
    # unique ISSN / e-ISSN numbers; some below 10^7 so that they carry leading zeros
    ids = rng.choice(10**8 - 10**5, size=2 * total, replace=False) + 10**5
    issns, eissns = ids[:total], ids[total:]
    recs_a, recs_b = [], []

    def cats(prefix, pos, n, kdist):
        k = int(rng.choice(kdist[0], p=kdist[1]))
        return tuple(f"{prefix} {i:03d}" for i in _pick(rng, pos, n, k, cfg.spread))

    for i in range(total):
        pos = float(rng.random())
        quality = float(rng.lognormal(0.0, 0.8))
        name = f"Journal of Synthetic Topic {i:05d}"
        in_a = i < cfg.n_journals + n_extra
        in_b = i < cfg.n_journals or i >= cfg.n_journals + n_extra
        route = rng.random()
        score_a = round(quality * float(rng.lognormal(0, 0.3)), 3)
        score_b = round(quality * float(rng.lognormal(0, 0.3)), 3)
        if rng.random() < cfg.unscored_frac:
            if rng.random() < 0.5:
                score_a = None
            else:
                score_b = None
        issn = _fmt_issn(int(issns[i]), True)
        eissn = _fmt_issn(int(eissns[i]), True)
        if in_a:
            a_issn, a_eissn, a_name = issn, eissn, name
            if route > 0.95:
                a_issn, a_eissn = None, None  # name-only match
            elif route > 0.85:
                a_issn = None  # e-ISSN match
            cats_a = cats("WA", pos, cfg.n_cats_a, _K_A)
            if rng.random() < cfg.niche_frac:
                # a category held by this journal alone: standalone if it is the only one
                cats_a = (f"WA niche {i:05d}",) if len(cats_a) == 1 else cats_a + (f"WA niche {i:05d}",)
            recs_a.append(JournalRecord("a", a_name, cats_a, score_a, a_issn, a_eissn))
        if in_b:
            b_issn = _fmt_issn(int(issns[i]), rng.random() < 0.5)
            b_eissn = _fmt_issn(int(eissns[i]), rng.random() < 0.5).lstrip("0")
            b_name = name.upper() if rng.random() < 0.3 else name
            if route > 0.95:
                b_issn, b_eissn = None, None
            active = not rng.random() < cfg.inactive_frac
            cats_b = cats("SB", pos, cfg.n_cats_b, _K_B)
            if rng.random() < cfg.niche_frac:
                cats_b = cats_b + (f"SB niche {i % 3}",)  # shared by a few journals
            recs_b.append(JournalRecord("b", b_name, cats_b, score_b, b_issn, b_eissn, active))
    return recs_a, recs_b


def write_synthetic(out_dir: str | Path, cfg: SynthConfig = SynthConfig()) -> tuple[Path, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    a, b = synthetic_records(cfg)
    pa, pb = out / "system_a.csv", out / "system_b.csv"
    write_journal_table(pa, a, with_active=False)
    write_journal_table(pb, b, with_active=True)
    return pa, pb
