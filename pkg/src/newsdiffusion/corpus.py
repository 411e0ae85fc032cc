"""Typed ingestion for FibVID-shaped corpora.

Three segments are supported: news claims, claim propagation (tweets and
retweets), and user profiles. Files may be RFC-4180 CSV or JSON-lines,
chosen by extension. Column names are bound to record fields through a
``SegmentMapping`` so upstream schema drift stays out of the loaders.

Rows that parse but violate a domain invariant are quarantined; rows
that cannot be parsed at all are counted as errored. Both are reported,
never silently dropped.
"""

from __future__ import annotations

import csv
import json
import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Any, Collection, Iterable, Iterator, Mapping, Sequence


class IngestError(Exception):
    """Base class for corpus ingestion failures."""


class UnparsableHeader(IngestError):
    """A mapped column is missing from the file header."""


class DuplicateClaimId(IngestError):
    """Two claim rows share the same claim_id."""


class DuplicateUserId(IngestError):
    """Two user rows share the same user_id."""


class TruthLabel(str, Enum):
    TRUE = "true"
    FAKE = "fake"


class Category(str, Enum):
    COVID = "covid"
    NONCOVID = "noncovid"


@dataclass(frozen=True)
class NewsClaim:
    claim_id: str
    text: str
    truth_label: TruthLabel
    category: Category

    def to_dict(self) -> dict[str, Any]:
        return {
            "claim_id": self.claim_id,
            "text": self.text,
            "truth_label": self.truth_label.value,
            "category": self.category.value,
        }


@dataclass(frozen=True)
class TweetRecord:
    tweet_id: str
    claim_id: str
    user_id: str
    text: str
    retweet_count: int
    like_count: int
    hashtags: tuple[str, ...]
    created_at: datetime

    def to_dict(self) -> dict[str, Any]:
        return {
            "tweet_id": self.tweet_id,
            "claim_id": self.claim_id,
            "user_id": self.user_id,
            "text": self.text,
            "retweet_count": self.retweet_count,
            "like_count": self.like_count,
            "hashtags": list(self.hashtags),
            "created_at": self.created_at.isoformat(),
        }


@dataclass(frozen=True)
class UserProfile:
    user_id: str
    description: str
    follower_count: int
    following_count: int
    created_at: datetime

    def to_dict(self) -> dict[str, Any]:
        return {
            "user_id": self.user_id,
            "description": self.description,
            "follower_count": self.follower_count,
            "following_count": self.following_count,
            "created_at": self.created_at.isoformat(),
        }


@dataclass(frozen=True)
class RowIssue:
    """One rejected input row with the reason it was rejected."""

    line: int
    reason: str
    raw: Mapping[str, Any]


@dataclass(frozen=True)
class IngestReport:
    accepted: int
    quarantined: int
    errored: int

    @property
    def malformed(self) -> int:
        return self.quarantined + self.errored

    @property
    def total(self) -> int:
        return self.accepted + self.quarantined + self.errored

    def to_dict(self) -> dict[str, int]:
        return {
            "accepted": self.accepted,
            "quarantined": self.quarantined,
            "errored": self.errored,
        }


@dataclass
class LoadResult:
    """Loader output: accepted records plus the rejected-row audit trail."""

    records: list
    quarantined: list[RowIssue] = field(default_factory=list)
    errored: list[RowIssue] = field(default_factory=list)

    @property
    def report(self) -> IngestReport:
        return IngestReport(len(self.records), len(self.quarantined), len(self.errored))


@dataclass(frozen=True)
class SegmentMapping:
    """Binds record fields to source columns, with optional value maps
    for the claim truth/category labels (the two may share a column)."""

    columns: Mapping[str, str]
    truth_values: Mapping[str, str] = field(default_factory=dict)
    category_values: Mapping[str, str] = field(default_factory=dict)


CLAIM_FIELDS = ("claim_id", "text", "truth_label", "category")
TWEET_FIELDS = (
    "tweet_id",
    "claim_id",
    "user_id",
    "text",
    "retweet_count",
    "like_count",
    "hashtags",
    "created_at",
)
USER_FIELDS = ("user_id", "description", "follower_count", "following_count", "created_at")

_IDENTITY_TRUTH = {t.value: t.value for t in TruthLabel}
_IDENTITY_CATEGORY = {c.value: c.value for c in Category}


def canonical_mapping(fields: Sequence[str]) -> SegmentMapping:
    """Mapping for the canonical dump format: columns named after fields."""
    return SegmentMapping(
        columns={f: f for f in fields},
        truth_values=_IDENTITY_TRUTH,
        category_values=_IDENTITY_CATEGORY,
    )


def fibvid_mapping() -> dict[str, SegmentMapping]:
    """Bundled default mapping for the published FibVID CSV layout."""
    raw = json.loads(resources.files("newsdiffusion.data").joinpath("fibvid_mapping.json").read_text())
    return {name: SegmentMapping(**seg) for name, seg in raw.items()}


class _RowError(Exception):
    """Row-level parse failure; routed to the errored bucket."""


def _iter_rows(path: str | Path) -> tuple[list[str], Iterator[tuple[int, Mapping[str, Any]]]]:
    # leading '#' lines are run stamps written by the pipeline; skip them
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(str(path))
    suffix = path.suffix.lower()
    lines = path.read_text(encoding="utf-8").splitlines()
    start = 0
    while start < len(lines) and lines[start].startswith("#"):
        start += 1
    if suffix == ".csv":
        reader = csv.DictReader(lines[start:])
        if reader.fieldnames is None:
            raise UnparsableHeader(f"{path}: empty file, no header row")
        fieldnames = list(reader.fieldnames)
        rows = [(start + 2 + i, row) for i, row in enumerate(reader)]
        return fieldnames, iter(rows)
    if suffix in (".jsonl", ".ndjson"):
        rows = []
        for i, line in enumerate(lines[start:], start=start + 1):
            if line.strip():
                rows.append((i, json.loads(line)))
        fieldnames = list(rows[0][1].keys()) if rows else []
        return fieldnames, iter(rows)
    raise ValueError(f"unsupported input format: {path} (expected .csv or .jsonl)")


def _check_header(fieldnames: Sequence[str], mapping: SegmentMapping, path: str | Path) -> None:
    if not fieldnames:
        return  # empty jsonl: zero rows, nothing to check
    missing = [col for col in mapping.columns.values() if col not in fieldnames]
    if missing:
        raise UnparsableHeader(f"{path}: missing column(s) {missing}")


def _get(row: Mapping[str, Any], mapping: SegmentMapping, fname: str) -> Any:
    col = mapping.columns[fname]
    if col not in row:
        raise _RowError(f"missing value for column {col!r}")
    return row[col]


def _text(row: Mapping[str, Any], mapping: SegmentMapping, fname: str) -> str:
    value = _get(row, mapping, fname)
    return "" if value is None else str(value)


def _int(row: Mapping[str, Any], mapping: SegmentMapping, fname: str) -> int:
    value = _get(row, mapping, fname)
    try:
        return int(str(value).strip())
    except (TypeError, ValueError) as exc:
        raise _RowError(f"{fname}: not an integer ({value!r})") from exc


def parse_timestamp(raw: Any) -> datetime:
    """Parse an ISO-8601 or Twitter-style timestamp; naive times are UTC."""
    text = str(raw).strip()
    if not text:
        raise _RowError("created_at: empty")
    candidate = text[:-1] + "+00:00" if text.endswith("Z") else text
    try:
        parsed = datetime.fromisoformat(candidate)
    except ValueError:
        try:
            parsed = datetime.strptime(text, "%a %b %d %H:%M:%S %z %Y")
        except ValueError as exc:
            raise _RowError(f"created_at: unparseable ({text!r})") from exc
    if parsed.tzinfo is None:
        parsed = parsed.replace(tzinfo=timezone.utc)
    return parsed.astimezone(timezone.utc)


_HASHTAG_SPLIT = re.compile(r"[,\s]+")


def _hashtags(row: Mapping[str, Any], mapping: SegmentMapping) -> tuple[str, ...]:
    value = _get(row, mapping, "hashtags")
    if value is None:
        return ()
    if isinstance(value, (list, tuple)):
        items = [str(v) for v in value]
    else:
        text = str(value).strip()
        if not text:
            return ()
        if text.startswith("["):
            try:
                items = [str(v) for v in json.loads(text)]
            except (json.JSONDecodeError, TypeError) as exc:
                raise _RowError(f"hashtags: bad list ({text!r})") from exc
        else:
            items = _HASHTAG_SPLIT.split(text)
    return tuple(t.lstrip("#").lower() for t in items if t.lstrip("#"))


def _mapped_enum(value: Any, value_map: Mapping[str, str], enum_cls, fname: str):
    key = str(value).strip()
    if key not in value_map:
        raise _RowError(f"{fname}: unmapped value {key!r}")
    return enum_cls(value_map[key])


def load_claims(path: str | Path, mapping: SegmentMapping | None = None) -> LoadResult:
    """Load the news-claim segment. Raises DuplicateClaimId on repeated keys."""
    mapping = mapping or canonical_mapping(CLAIM_FIELDS)
    fieldnames, rows = _iter_rows(path)
    _check_header(fieldnames, mapping, path)
    result = LoadResult(records=[])
    seen: set[str] = set()
    for line, row in rows:
        try:
            claim_id = _text(row, mapping, "claim_id").strip()
            text = _text(row, mapping, "text")
            truth = _mapped_enum(_get(row, mapping, "truth_label"), mapping.truth_values, TruthLabel, "truth_label")
            category = _mapped_enum(_get(row, mapping, "category"), mapping.category_values, Category, "category")
        except _RowError as exc:
            result.errored.append(RowIssue(line, str(exc), row))
            continue
        if not claim_id:
            result.quarantined.append(RowIssue(line, "claim_id: empty", row))
            continue
        if not text.strip():
            result.quarantined.append(RowIssue(line, "text: empty", row))
            continue
        if claim_id in seen:
            raise DuplicateClaimId(f"{path}: duplicate claim_id {claim_id!r} at line {line}")
        seen.add(claim_id)
        result.records.append(NewsClaim(claim_id, text, truth, category))
    return result


def load_propagation(
    path: str | Path,
    mapping: SegmentMapping | None = None,
    known_claims: Collection[str] | None = None,
) -> LoadResult:
    """Load the claim-propagation segment (tweets/retweets).

    When ``known_claims`` is given, rows referencing an unknown claim go
    to the quarantine list instead of being accepted.
    """
    mapping = mapping or canonical_mapping(TWEET_FIELDS)
    fieldnames, rows = _iter_rows(path)
    _check_header(fieldnames, mapping, path)
    result = LoadResult(records=[])
    seen: set[str] = set()
    for line, row in rows:
        try:
            tweet_id = _text(row, mapping, "tweet_id").strip()
            claim_id = _text(row, mapping, "claim_id").strip()
            user_id = _text(row, mapping, "user_id").strip()
            text = _text(row, mapping, "text")
            retweets = _int(row, mapping, "retweet_count")
            likes = _int(row, mapping, "like_count")
            tags = _hashtags(row, mapping)
            created = parse_timestamp(_get(row, mapping, "created_at"))
        except _RowError as exc:
            result.errored.append(RowIssue(line, str(exc), row))
            continue
        if not tweet_id or not user_id or not claim_id:
            result.quarantined.append(RowIssue(line, "empty key field", row))
            continue
        if retweets < 0 or likes < 0:
            result.quarantined.append(RowIssue(line, "negative engagement count", row))
            continue
        if tweet_id in seen:
            result.quarantined.append(RowIssue(line, f"duplicate tweet_id {tweet_id!r}", row))
            continue
        if known_claims is not None and claim_id not in known_claims:
            result.quarantined.append(RowIssue(line, f"unknown claim_id {claim_id!r}", row))
            continue
        seen.add(tweet_id)
        result.records.append(TweetRecord(tweet_id, claim_id, user_id, text, retweets, likes, tags, created))
    return result


def load_users(path: str | Path, mapping: SegmentMapping | None = None) -> LoadResult:
    """Load the user-information segment. Raises DuplicateUserId on repeats."""
    mapping = mapping or canonical_mapping(USER_FIELDS)
    fieldnames, rows = _iter_rows(path)
    _check_header(fieldnames, mapping, path)
    result = LoadResult(records=[])
    seen: set[str] = set()
    for line, row in rows:
        try:
            user_id = _text(row, mapping, "user_id").strip()
            description = _text(row, mapping, "description")
            followers = _int(row, mapping, "follower_count")
            following = _int(row, mapping, "following_count")
            created = parse_timestamp(_get(row, mapping, "created_at"))
        except _RowError as exc:
            result.errored.append(RowIssue(line, str(exc), row))
            continue
        if not user_id:
            result.quarantined.append(RowIssue(line, "user_id: empty", row))
            continue
        if followers < 0 or following < 0:
            result.quarantined.append(RowIssue(line, "negative follow count", row))
            continue
        if user_id in seen:
            raise DuplicateUserId(f"{path}: duplicate user_id {user_id!r} at line {line}")
        seen.add(user_id)
        result.records.append(UserProfile(user_id, description, followers, following, created))
    return result


def dump_jsonl(records: Iterable, path: str | Path) -> None:
    """Write records in the canonical JSON-lines dump format."""
    with Path(path).open("w", encoding="utf-8") as out:
        for record in records:
            out.write(json.dumps(record.to_dict(), ensure_ascii=False) + "\n")


def cell_key(category: Category, truth: TruthLabel) -> str:
    return f"{category.value}_{truth.value}"


ALL_CELLS = tuple(cell_key(c, t) for c in Category for t in TruthLabel)


@dataclass(frozen=True)
class CorpusSummary:
    """Counts and per-(category, truth) tweet averages over loaded records."""

    n_claims: dict[str, int]
    n_tweets: int
    n_users: int
    avg_tweets_per_claim: dict[str, float]

    def to_dict(self) -> dict[str, Any]:
        return {
            "n_claims": dict(self.n_claims),
            "n_tweets": self.n_tweets,
            "n_users": self.n_users,
            "avg_tweets_per_claim": dict(self.avg_tweets_per_claim),
        }


def dataset_summary(
    claims: Sequence[NewsClaim],
    tweets: Sequence[TweetRecord],
    users: Sequence[UserProfile],
) -> CorpusSummary:
    """Recount claims, tweets, and users; an empty corpus yields zero tables."""
    claim_counts = {cell: 0 for cell in ALL_CELLS}
    claim_cell: dict[str, str] = {}
    for claim in claims:
        key = cell_key(claim.category, claim.truth_label)
        claim_counts[key] += 1
        claim_cell[claim.claim_id] = key
    tweet_counts = {cell: 0 for cell in ALL_CELLS}
    for tweet in tweets:
        key = claim_cell.get(tweet.claim_id)
        if key is not None:
            tweet_counts[key] += 1
    averages = {
        cell: (tweet_counts[cell] / claim_counts[cell] if claim_counts[cell] else 0.0)
        for cell in ALL_CELLS
    }
    return CorpusSummary(
        n_claims=claim_counts,
        n_tweets=len(tweets),
        n_users=len(users),
        avg_tweets_per_claim=averages,
    )
