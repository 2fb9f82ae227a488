"""Parsing of Pushshift-style line-delimited dumps into posts and per-user histories."""

from __future__ import annotations

import json
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple

from .errors import MalformedRecord

logger = logging.getLogger(__name__)

DELETED_AUTHORS = frozenset({"[deleted]", "[removed]"})
KINDS = ("submission", "comment")


class Month(NamedTuple):
    year: int
    month: int

    @classmethod
    def from_epoch(cls, ts: int) -> "Month":
        dt = datetime.fromtimestamp(ts, tz=timezone.utc)
        return cls(dt.year, dt.month)

    @classmethod
    def parse(cls, text: str) -> "Month":
        try:
            y, m = str(text).split("-")
            out = cls(int(y), int(m))
        except ValueError:
            raise ValueError(f"bad month {text!r}, expected YYYY-MM") from None
        if not 1 <= out.month <= 12:
            raise ValueError(f"bad month {text!r}")
        return out

    def next(self) -> "Month":
        if self.month == 12:
            return Month(self.year + 1, 1)
        return Month(self.year, self.month + 1)

    def __str__(self) -> str:
        return f"{self.year:04d}-{self.month:02d}"


def month_range(start: Month, end: Month) -> list[Month]:
    if start > end:
        raise ValueError(f"range start {start} after end {end}")
    out = [start]
    while out[-1] < end:
        out.append(out[-1].next())
    return out


@dataclass(frozen=True)
class Post:
    id: str
    author: str
    subreddit: str
    kind: str
    created_utc: int
    body: str = ""
    title: str | None = None
    pretagged_entities: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise MalformedRecord(f"unknown kind {self.kind!r}")
        if self.kind == "comment" and self.title is not None:
            raise MalformedRecord(f"comment {self.id} carries a title")
        if self.created_utc <= 0:
            raise MalformedRecord(f"post {self.id}: created_utc must be positive")
        if not self.author:
            raise MalformedRecord(f"post {self.id}: empty author")

    @property
    def text(self) -> str:
        if self.title:
            return f"{self.title}\n{self.body}" if self.body else self.title
        return self.body

    @property
    def month(self) -> Month:
        return Month.from_epoch(self.created_utc)


def _as_int(value, name: str) -> int:
    if isinstance(value, bool):
        raise MalformedRecord(f"{name} is not an integer")
    try:
        f = float(value)
    except (TypeError, ValueError):
        raise MalformedRecord(f"{name} is not numeric: {value!r}") from None
    if f != int(f):
        raise MalformedRecord(f"{name} is not integral: {value!r}")
    return int(f)


def post_from_dict(rec: dict) -> Post:
    if not isinstance(rec, dict):
        raise MalformedRecord("record is not an object")
    for key in ("id", "author", "subreddit", "created_utc"):
        if rec.get(key) in (None, ""):
            raise MalformedRecord(f"missing required field {key!r}")
    title = rec.get("title")
    # Pushshift submissions keep their text in "selftext"
    body = rec.get("body")
    if body is None:
        body = rec.get("selftext")
    if body is None and title is None:
        raise MalformedRecord("record has neither body nor title")
    kind = rec.get("kind") or ("submission" if title is not None else "comment")
    tags = rec.get("pretagged_entities")
    if tags is not None:
        if not isinstance(tags, list) or not all(isinstance(t, str) for t in tags):
            raise MalformedRecord("pretagged_entities must be a list of strings")
        tags = tuple(tags)
    subreddit = str(rec["subreddit"]).strip()
    if subreddit.lower().startswith("r/"):
        subreddit = subreddit[2:]
    return Post(
        id=str(rec["id"]),
        author=str(rec["author"]),
        subreddit=subreddit.lower(),
        kind=kind,
        created_utc=_as_int(rec["created_utc"], "created_utc"),
        body=str(body) if body is not None else "",
        title=str(title) if title is not None else None,
        pretagged_entities=tags,
    )


def parse_post_record(line: str) -> Post:
    try:
        rec = json.loads(line)
    except (json.JSONDecodeError, TypeError) as exc:
        raise MalformedRecord(f"unparseable record: {exc}") from None
    return post_from_dict(rec)


def post_to_record(post: Post) -> dict:
    rec = {
        "id": post.id,
        "author": post.author,
        "subreddit": post.subreddit,
        "kind": post.kind,
        "created_utc": post.created_utc,
        "body": post.body,
    }
    if post.title is not None:
        rec["title"] = post.title
    if post.pretagged_entities is not None:
        rec["pretagged_entities"] = list(post.pretagged_entities)
    return rec


@dataclass
class IngestStats:
    read: int = 0
    kept: int = 0
    malformed: int = 0
    errors: Counter = field(default_factory=Counter)

    def as_dict(self) -> dict:
        return {"read": self.read, "kept": self.kept, "malformed": self.malformed,
                "errors": dict(sorted(self.errors.items()))}


def read_posts(paths: Iterable[str | Path], strict: bool = False,
               stats: IngestStats | None = None) -> Iterator[Post]:
    """Yield posts from dump files; malformed lines are counted into ``stats``
    unless ``strict`` is set, in which case the first one raises."""
    stats = stats if stats is not None else IngestStats()
    for path in paths:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                stats.read += 1
                try:
                    post = parse_post_record(line)
                except MalformedRecord as exc:
                    if strict:
                        raise MalformedRecord(f"{path}:{lineno}: {exc}") from None
                    stats.malformed += 1
                    stats.errors[str(exc).split(":")[0]] += 1
                    continue
                stats.kept += 1
                yield post


@dataclass(frozen=True)
class UserHistory:
    author: str
    posts: tuple[Post, ...]

    def __post_init__(self):
        if any(p.author != self.author for p in self.posts):
            raise ValueError(f"history for {self.author} holds foreign posts")

    @property
    def post_count(self) -> int:
        return len(self.posts)

    @property
    def first_post(self) -> int | None:
        return self.posts[0].created_utc if self.posts else None

    @property
    def last_post(self) -> int | None:
        return self.posts[-1].created_utc if self.posts else None

    @property
    def duration_days(self) -> float:
        if not self.posts:
            return 0.0
        return (self.last_post - self.first_post) / 86400.0


def _post_key(p: Post):
    return (p.created_utc, p.id, p.subreddit, p.kind)


def group_by_user(posts: Iterable[Post], drop_deleted: bool = True) -> list[UserHistory]:
    """Partition posts into histories, sorted by author; input order is irrelevant."""
    buckets: dict[str, list[Post]] = defaultdict(list)
    for p in posts:
        if drop_deleted and p.author in DELETED_AUTHORS:
            continue
        buckets[p.author].append(p)
    return [UserHistory(a, tuple(sorted(buckets[a], key=_post_key))) for a in sorted(buckets)]


def merge_histories(*shards: Iterable[UserHistory]) -> list[UserHistory]:
    """Associative merge of shard-local groupings."""
    return group_by_user((p for shard in shards for h in shard for p in h.posts), drop_deleted=False)


def monthly_volume(posts: Iterable[Post], start: Month, end: Month) -> dict[Month, int]:
    months = month_range(start, end)
    counts = dict.fromkeys(months, 0)
    for p in posts:
        m = p.month
        if m in counts:
            counts[m] += 1
    return counts


def history_to_record(h: UserHistory) -> dict:
    return {"author": h.author, "posts": [post_to_record(p) for p in h.posts]}


def history_from_record(rec: dict) -> UserHistory:
    posts = tuple(sorted((post_from_dict(p) for p in rec["posts"]), key=_post_key))
    return UserHistory(str(rec["author"]), posts)
