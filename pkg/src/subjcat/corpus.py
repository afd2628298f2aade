"""Ingest per-system journal tables, match journals across systems, build the corpus.

Two systems are handled, labelled ``"a"`` and ``"b"``. Matching runs three passes
(ISSN, then e-ISSN, then case-folded name) over the records still unmatched, and
any key that would pair more than one record on either side is a hard error.
"""

from __future__ import annotations

import csv
import statistics
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

SYSTEMS = ("a", "b")
ID_KINDS = ("issn", "eissn", "name")

REQUIRED_COLUMNS = ("name", "issn", "eissn", "categories", "score")
_MISSING_SCORE = {"", "-", "na", "n/a", "none", "null"}
_TRUE = {"true", "1", "yes", "y", "active"}
_FALSE = {"false", "0", "no", "n", "inactive", "discontinued"}


class CorpusError(Exception):
    """Base class for ingest / matching / corpus construction failures."""


class ParseError(CorpusError):
    pass


class InvalidIdentifierError(CorpusError, ValueError):
    pass


class AmbiguousMatchError(CorpusError):
    def __init__(self, kind: str, key: str, records_a, records_b):
        self.kind = kind
        self.key = key
        self.records_a = list(records_a)
        self.records_b = list(records_b)
        names_a = ", ".join(repr(r.name) for r in self.records_a)
        names_b = ", ".join(repr(r.name) for r in self.records_b)
        super().__init__(
            f"ambiguous {kind} key {key!r}: system a [{names_a}] vs system b [{names_b}]"
        )


class EmptyCorpusError(CorpusError):
    pass


def check_system(system: str) -> str:
    if system not in SYSTEMS:
        raise ValueError(f"unknown system label {system!r}; expected one of {SYSTEMS}")
    return system


@dataclass(frozen=True)
class JournalRecord:
    system_id: str
    name: str
    categories: tuple[str, ...]
    score: float | None = None
    raw_issn: str | None = None
    raw_eissn: str | None = None
    active: bool = True
    line: int | None = field(default=None, compare=False)

    def __post_init__(self):
        cats = tuple(self.categories)
        if not cats:
            raise ValueError(f"journal {self.name!r} has no categories")
        if len(set(cats)) != len(cats):
            raise ValueError(f"journal {self.name!r} lists a category twice")
        object.__setattr__(self, "categories", cats)
        if self.score is not None and not self.score >= 0:
            raise ValueError(f"journal {self.name!r} has negative or NaN score {self.score}")

    def key(self, kind: str) -> str | None:
        """Normalized matching key of the given kind, or None when absent/invalid."""
        raw = {"issn": self.raw_issn, "eissn": self.raw_eissn, "name": self.name}[kind]
        if raw is None or not raw.strip():
            return None
        try:
            return normalize_identifier(raw, kind).value
        except InvalidIdentifierError:
            return None


@dataclass(frozen=True)
class NormalizedId:
    value: str
    kind: str


def normalize_identifier(raw: str, kind: str) -> NormalizedId:
    """Normalize an ISSN / e-ISSN (drop dashes and leading zeros) or a name (case-fold).

    >>> normalize_identifier("0012-3456", "issn").value
    '123456'
    >>> normalize_identifier("The Journal of X", "name").value
    'the journal of x'
    """
    if kind not in ID_KINDS:
        raise ValueError(f"unknown identifier kind {kind!r}")
    text = raw.strip()
    if kind == "name":
        value = text.casefold()
    else:
        value = text.replace("-", "").upper().lstrip("0")
        if value and not value.isalnum():
            raise InvalidIdentifierError(f"{kind} {raw!r} contains non-alphanumeric characters")
    if not value:
        raise InvalidIdentifierError(f"{kind} {raw!r} is empty after normalization")
    return NormalizedId(value, kind)


@dataclass(frozen=True)
class MatchedJournal:
    corpus_id: str
    record_a: JournalRecord
    record_b: JournalRecord
    matched_by: str

    def record(self, system: str) -> JournalRecord:
        return self.record_a if check_system(system) == "a" else self.record_b

    @property
    def scored(self) -> bool:
        return self.record_a.score is not None and self.record_b.score is not None


@dataclass
class MatchDiagnostics:
    per_pass: dict[str, int]
    unmatched_a: list[JournalRecord]
    unmatched_b: list[JournalRecord]
    inactive: list[JournalRecord] = field(default_factory=list)

    @property
    def matched(self) -> int:
        return sum(self.per_pass.values())

    def to_dict(self) -> dict:
        return {
            "matched": self.matched,
            "matched_per_pass": dict(self.per_pass),
            "unmatched_a": len(self.unmatched_a),
            "unmatched_b": len(self.unmatched_b),
            "inactive_excluded": len(self.inactive),
        }

    def rows(self) -> list[dict]:
        """One row per record dropped before corpus build, with the reason."""
        out = []
        for rec in self.inactive:
            out.append(_diag_row(rec, "inactive"))
        for rec in (*self.unmatched_a, *self.unmatched_b):
            has_key = any(rec.key(k) is not None for k in ("issn", "eissn"))
            out.append(_diag_row(rec, "no match" if has_key else "no match (no valid issn/eissn)"))
        return out


def _diag_row(rec: JournalRecord, reason: str) -> dict:
    return {
        "system": rec.system_id,
        "line": "" if rec.line is None else rec.line,
        "name": rec.name,
        "issn": rec.raw_issn or "",
        "eissn": rec.raw_eissn or "",
        "reason": reason,
    }


def filter_active(records: Iterable[JournalRecord]) -> tuple[list[JournalRecord], list[JournalRecord]]:
    """Split records into (active, inactive)."""
    kept, dropped = [], []
    for rec in records:
        (kept if rec.active else dropped).append(rec)
    return kept, dropped


def match_journals(
    records_a: Sequence[JournalRecord], records_b: Sequence[JournalRecord]
) -> tuple[list[MatchedJournal], MatchDiagnostics]:
    """Pair records of system a with records of system b.

    Passes run in the order issn, eissn, name; each pass only sees records left
    unmatched by the previous ones and only compares keys of the same kind.
    A key shared by both sides must identify exactly one record on each side,
    otherwise AmbiguousMatchError is raised. Keys present on one side only are
    never an error.
    """
    pool_a = dict(enumerate(records_a))
    pool_b = dict(enumerate(records_b))
    matches: list[MatchedJournal] = []
    per_pass = {}
    for kind in ID_KINDS:
        index_a = _index(pool_a, kind)
        index_b = _index(pool_b, kind)
        count = 0
        for key in sorted(index_a.keys() & index_b.keys()):
            ia, ib = index_a[key], index_b[key]
            if len(ia) > 1 or len(ib) > 1:
                raise AmbiguousMatchError(
                    kind, key, [pool_a[i] for i in ia], [pool_b[i] for i in ib]
                )
            rec_a = pool_a.pop(ia[0])
            rec_b = pool_b.pop(ib[0])
            matches.append(MatchedJournal(f"{kind}:{key}", rec_a, rec_b, kind))
            count += 1
        per_pass[kind] = count
    diag = MatchDiagnostics(
        per_pass=per_pass,
        unmatched_a=[pool_a[i] for i in sorted(pool_a)],
        unmatched_b=[pool_b[i] for i in sorted(pool_b)],
    )
    return matches, diag


def _index(pool: dict[int, JournalRecord], kind: str) -> dict[str, list[int]]:
    index = defaultdict(list)
    for i, rec in pool.items():
        key = rec.key(kind)
        if key is not None:
            index[key].append(i)
    return index


@dataclass(frozen=True)
class Category:
    system_id: str
    name: str
    members: frozenset[str]

    @property
    def ref(self) -> tuple[str, str]:
        return (self.system_id, self.name)

    @property
    def size(self) -> int:
        return len(self.members)

    def __repr__(self):
        return f"Category({self.system_id}:{self.name!r}, n={len(self.members)})"


@dataclass(frozen=True)
class Corpus:
    """Matched, scored journals with per-system category member sets.

    Journals and categories are stored sorted (by corpus id / category name), so
    every iteration over a corpus is deterministic.
    """

    journals: tuple[MatchedJournal, ...]
    categories_a: tuple[Category, ...]
    categories_b: tuple[Category, ...]
    unscored: tuple[MatchedJournal, ...] = field(default=(), compare=False)

    def __post_init__(self):
        by_id = {j.corpus_id: j for j in self.journals}
        if len(by_id) != len(self.journals):
            raise ValueError("duplicate corpus ids")
        object.__setattr__(self, "_by_id", by_id)

    def categories(self, system: str) -> tuple[Category, ...]:
        return self.categories_a if check_system(system) == "a" else self.categories_b

    def category(self, system: str, name: str) -> Category:
        for cat in self.categories(system):
            if cat.name == name:
                return cat
        raise KeyError((system, name))

    @property
    def journal_ids(self) -> frozenset[str]:
        return frozenset(self._by_id)

    def journal(self, corpus_id: str) -> MatchedJournal:
        return self._by_id[corpus_id]

    def scores(self, system: str) -> dict[str, float]:
        return {j.corpus_id: j.record(system).score for j in self.journals}

    def categories_per_journal(self, system: str) -> dict[str, int]:
        return {j.corpus_id: len(j.record(system).categories) for j in self.journals}


def build_corpus(matches: Sequence[MatchedJournal]) -> Corpus:
    """Drop journals unscored in either system and materialize category member sets."""
    scored = sorted((m for m in matches if m.scored), key=lambda m: m.corpus_id)
    unscored = tuple(sorted((m for m in matches if not m.scored), key=lambda m: m.corpus_id))
    if not scored:
        raise EmptyCorpusError(
            f"no journal is scored in both systems ({len(matches)} matched, {len(unscored)} unscored)"
        )
    cats = {}
    for system in SYSTEMS:
        members = defaultdict(set)
        for m in scored:
            for name in m.record(system).categories:
                members[name].add(m.corpus_id)
        # categories only exist through their members, so none can be empty here
        cats[system] = tuple(
            Category(system, name, frozenset(ids)) for name, ids in sorted(members.items())
        )
    return Corpus(tuple(scored), cats["a"], cats["b"], unscored)


@dataclass(frozen=True)
class DescriptiveStats:
    system: str
    n_journals: int
    n_categories: int
    journals_per_category_mean: float
    journals_per_category_sd: float
    journals_per_category_median: float
    categories_per_journal_mean: float
    categories_per_journal_sd: float
    categories_per_journal_median: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def corpus_stats(corpus: Corpus, system: str) -> DescriptiveStats:
    """Mean, population SD and median of category sizes and of categories per journal."""
    check_system(system)
    sizes = np.array([c.size for c in corpus.categories(system)], dtype=float)
    per_journal = np.array(list(corpus.categories_per_journal(system).values()), dtype=float)
    return DescriptiveStats(
        system=system,
        n_journals=len(corpus.journals),
        n_categories=len(sizes),
        journals_per_category_mean=float(sizes.mean()),
        journals_per_category_sd=float(sizes.std()),
        journals_per_category_median=float(statistics.median(sizes)),
        categories_per_journal_mean=float(per_journal.mean()),
        categories_per_journal_sd=float(per_journal.std()),
        categories_per_journal_median=float(statistics.median(per_journal)),
    )


def _parse_score(text: str, path, line: int) -> float | None:
    text = (text or "").strip()
    if text.casefold() in _MISSING_SCORE:
        return None
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"{path}:{line}: score {text!r} is not a number") from None
    if not value >= 0:
        raise ParseError(f"{path}:{line}: score {text!r} must be non-negative")
    return value


def _parse_active(text: str, path, line: int) -> bool:
    text = (text or "").strip().casefold()
    if not text or text in _TRUE:
        return True
    if text in _FALSE:
        return False
    raise ParseError(f"{path}:{line}: active flag {text!r} is not true/false")


def read_journal_table(path: str | Path, system_id: str) -> list[JournalRecord]:
    """Read one system's journal table (UTF-8 CSV with a header row).

    Columns: name, issn, eissn, categories (``;``-separated), score, and an
    optional ``active`` column. A missing or blank score means unscored.
    """
    check_system(system_id)
    path = Path(path)
    records = []
    with path.open(newline="", encoding="utf-8-sig") as fh:
        reader = csv.DictReader(fh)
        header = [h.strip() for h in (reader.fieldnames or [])]
        missing = [c for c in REQUIRED_COLUMNS if c not in header]
        if missing:
            raise ParseError(f"{path}: missing column(s) {', '.join(missing)}")
        reader.fieldnames = header
        has_active = "active" in header
        for line, row in enumerate(reader, start=2):
            if None in row:
                raise ParseError(f"{path}:{line}: more cells than header columns")
            name = (row["name"] or "").strip()
            if not name:
                raise ParseError(f"{path}:{line}: empty journal name")
            cats = []
            for cat in (row["categories"] or "").split(";"):
                cat = cat.strip()
                if cat and cat not in cats:
                    cats.append(cat)
            if not cats:
                raise ParseError(f"{path}:{line}: journal {name!r} has no categories")
            records.append(
                JournalRecord(
                    system_id=system_id,
                    name=name,
                    categories=tuple(cats),
                    score=_parse_score(row["score"], path, line),
                    raw_issn=(row["issn"] or "").strip() or None,
                    raw_eissn=(row["eissn"] or "").strip() or None,
                    active=_parse_active(row.get("active"), path, line) if has_active else True,
                    line=line,
                )
            )
    return records


def write_journal_table(path: str | Path, records: Iterable[JournalRecord], with_active: bool = True):
    """Inverse of read_journal_table; used for fixtures and synthetic data."""
    cols = [*REQUIRED_COLUMNS, "active"] if with_active else list(REQUIRED_COLUMNS)
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(cols)
        for r in records:
            row = [
                r.name,
                r.raw_issn or "",
                r.raw_eissn or "",
                ";".join(r.categories),
                "" if r.score is None else repr(r.score),
            ]
            if with_active:
                row.append("true" if r.active else "false")
            writer.writerow(row)
