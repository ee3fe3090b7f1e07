"""Ingest tweet-like records: parse, clean, deduplicate, index.

Input is UTF-8 line-delimited JSON, one record per line with id, timestamp
(ISO-8601), author, and text fields; field names are remappable through a
schema dict. Cleaning strips URLs, then emails, then @handles, and collapses
whitespace. Hashtags are kept verbatim (the '#' is only stripped later, at
tokenization).
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Iterator

from .errors import CorpusRejected, EmptyCorpus

log = logging.getLogger(__name__)

DEFAULT_SCHEMA = {"id": "id", "timestamp": "timestamp", "author": "author", "text": "text"}

# Order matters: URLs first (an URL may contain '@'), then emails (so
# 'a@b.com' is not half-eaten as a handle), then handles.
_URL_RE = re.compile(r"(?:https?://|www\.)\S+", re.IGNORECASE)
_EMAIL_RE = re.compile(r"[A-Za-z0-9._%+-]+@[A-Za-z0-9-]+(?:\.[A-Za-z0-9-]+)*\.[A-Za-z]{2,}")
_HANDLE_RE = re.compile(r"@\w{1,15}")
_WS_RE = re.compile(r"\s+")


def clean_text(raw: str) -> str:
    """Remove URL, email, and @handle tokens; normalize whitespace.

    Total and idempotent: cleaning an already-clean string is a no-op.
    """
    s = _URL_RE.sub(" ", raw)
    s = _EMAIL_RE.sub(" ", s)
    s = _HANDLE_RE.sub(" ", s)
    return _WS_RE.sub(" ", s).strip()


@dataclass(frozen=True)
class TweetRecord:
    id: str
    timestamp: datetime
    author: str
    raw_text: str
    clean_text: str


@dataclass
class Corpus:
    """Records sorted by timestamp ascending, with an author index."""

    records: list[TweetRecord]
    author_index: dict[str, list[int]] = field(init=False)
    time_span: tuple[datetime, datetime] = field(init=False)

    def __post_init__(self):
        idx: dict[str, list[int]] = {}
        for i, rec in enumerate(self.records):
            idx.setdefault(rec.author, []).append(i)
        self.author_index = idx
        if self.records:
            stamps = [r.timestamp for r in self.records]
            self.time_span = (min(stamps), max(stamps))
        else:
            epoch = datetime.fromtimestamp(0, tz=timezone.utc)
            self.time_span = (epoch, epoch)

    def __len__(self) -> int:
        return len(self.records)

    def ids(self) -> list[str]:
        return [r.id for r in self.records]

    def texts(self) -> list[str]:
        return [r.clean_text for r in self.records]

    def subset(self, ids: Iterable[str]) -> "Corpus":
        """New corpus restricted to the given ids, original order kept."""
        keep = set(ids)
        return Corpus([r for r in self.records if r.id in keep])


@dataclass(frozen=True)
class DedupReport:
    total_records: int
    unique_texts: int
    unique_pairs: int
    dropped: int

    def to_dict(self) -> dict:
        return {
            "total_records": self.total_records,
            "unique_texts": self.unique_texts,
            "unique_pairs": self.unique_pairs,
            "dropped": self.dropped,
        }


@dataclass(frozen=True)
class ParseStats:
    total_lines: int
    valid: int
    malformed: int
    dropped_empty: int

    def to_dict(self) -> dict:
        return {
            "total_lines": self.total_lines,
            "valid": self.valid,
            "malformed": self.malformed,
            "dropped_empty": self.dropped_empty,
        }


def parse_timestamp(value: str) -> datetime:
    """ISO-8601 -> aware UTC datetime. Naive inputs are taken as UTC."""
    if not isinstance(value, str):
        raise ValueError("timestamp must be a string")
    text = value.strip()
    if text.endswith(("Z", "z")):  # fromisoformat rejects 'Z' on 3.10
        text = text[:-1] + "+00:00"
    ts = datetime.fromisoformat(text)
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def _lines_from(source) -> Iterator[str]:
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            yield from fh
    else:
        yield from source


def parse_corpus(source, schema: dict | None = None) -> tuple[Corpus, ParseStats]:
    """Parse line-delimited records into a timestamp-sorted Corpus.

    ``source`` is a path or an iterable of lines. Malformed lines (bad JSON,
    missing/empty fields, unparsable timestamp, duplicate id) are skipped and
    counted; records whose text cleans to "" are dropped and counted
    separately. Raises CorpusRejected when more than half of the nonblank
    lines are malformed, EmptyCorpus when nothing valid remains.
    """
    schema = schema or DEFAULT_SCHEMA
    f_id, f_ts = schema["id"], schema["timestamp"]
    f_author, f_text = schema["author"], schema["text"]

    records: list[TweetRecord] = []
    seen_ids: set[str] = set()
    total = malformed = dropped_empty = 0
    for line in _lines_from(source):
        line = line.strip()
        if not line:
            continue
        total += 1
        try:
            obj = json.loads(line)
            rec_id = obj[f_id]
            author = obj[f_author]
            raw = obj[f_text]
            if not isinstance(rec_id, str) or not rec_id:
                raise ValueError("empty id")
            if not isinstance(author, str) or not author:
                raise ValueError("empty author")
            if not isinstance(raw, str):
                raise ValueError("text must be a string")
            if rec_id in seen_ids:
                raise ValueError("duplicate id")
            ts = parse_timestamp(obj[f_ts])
        except (json.JSONDecodeError, KeyError, TypeError, ValueError):
            malformed += 1
            continue
        cleaned = clean_text(raw)
        if not cleaned:
            dropped_empty += 1
            continue
        seen_ids.add(rec_id)
        records.append(TweetRecord(rec_id, ts, author.lower(), raw, cleaned))

    if total and malformed > 0.5 * total:
        raise CorpusRejected(f"{malformed} of {total} lines malformed")
    if not records:
        raise EmptyCorpus("no valid records in input")
    if malformed:
        log.warning("skipped %d malformed line(s)", malformed)
    if dropped_empty:
        log.warning("dropped %d record(s) whose text cleaned to empty", dropped_empty)

    records.sort(key=lambda r: r.timestamp)  # stable: input order breaks ties
    stats = ParseStats(total, len(records), malformed, dropped_empty)
    return Corpus(records), stats


def dedup(corpus: Corpus, key: str = "timestamp_text") -> tuple[Corpus, DedupReport]:
    """Drop duplicate records, keeping the first occurrence per key.

    ``key`` is "text" or "timestamp_text". Records are visited in corpus
    order (timestamp ascending, then input order), so the earliest record
    wins. The report counts both key cardinalities regardless of the key
    used for dropping.
    """
    if key not in ("text", "timestamp_text"):
        raise ValueError(f"unknown dedup key {key!r}")
    texts: set[str] = set()
    pairs: set[tuple[datetime, str]] = set()
    kept: list[TweetRecord] = []
    for rec in corpus.records:
        pair = (rec.timestamp, rec.clean_text)
        fresh = rec.clean_text not in texts if key == "text" else pair not in pairs
        texts.add(rec.clean_text)
        pairs.add(pair)
        if fresh:
            kept.append(rec)
    report = DedupReport(
        total_records=len(corpus.records),
        unique_texts=len(texts),
        unique_pairs=len(pairs),
        dropped=len(corpus.records) - len(kept),
    )
    return Corpus(kept), report


def save_corpus(corpus: Corpus, path) -> None:
    """Write the canonical corpus file (itself valid parse_corpus input)."""
    with open(path, "w", encoding="utf-8") as fh:
        for rec in corpus.records:
            fh.write(json.dumps({
                "id": rec.id,
                "timestamp": rec.timestamp.isoformat(),
                "author": rec.author,
                "text": rec.raw_text,
                "clean_text": rec.clean_text,
            }, ensure_ascii=True, sort_keys=True))
            fh.write("\n")


def load_corpus(path) -> Corpus:
    corpus, _ = parse_corpus(path)
    return corpus
