"""Place-mention extraction: gazetteer n-gram scan or pre-tagged spans, then
blocklist filtering, abbreviation/alias/large-state expansion and per-user counting."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from .corpus import Post, UserHistory
from .errors import MissingPretags
from .gazetteer import GazetteerIndex, NormalizationTables

MODES = ("gazetteer_scan", "pretagged")
SOURCES = ("text", "pretagged", "subreddit")
MAX_NGRAM = 3

# dotted abbreviations first so "L.A." stays one token
_TOKEN_RE = re.compile(r"(?:[^\W\d_]\.){2,}|\w+(?:[-.]\w+)*")


@dataclass(frozen=True)
class EntityMention:
    surface: str
    normalized_names: tuple[str, ...]
    source: str
    count: int

    def as_record(self, author: str) -> dict:
        return {"author": author, "surface": self.surface,
                "normalized_names": list(self.normalized_names),
                "source": self.source, "count": self.count}

    @classmethod
    def from_record(cls, rec: dict) -> "EntityMention":
        return cls(rec["surface"], tuple(rec["normalized_names"]), rec["source"], int(rec["count"]))


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text)


class Extractor:
    """Bundles the index and tables; all methods are pure."""

    def __init__(self, index: GazetteerIndex, tables: NormalizationTables):
        self.index = index
        self.tables = tables
        self._scan_keys = set(tables.aliases) | set(tables.state_abbrev)
        self.max_ngram = MAX_NGRAM

    def _is_key(self, s: str) -> bool:
        return s in self.index or s in self._scan_keys

    def scan(self, text: str) -> list[tuple[str, str]]:
        """Leftmost-longest n-gram matches as (lowercase surface, original span)."""
        tokens = tokenize(text)
        lowered = [t.lower() for t in tokens]
        out = []
        i, n = 0, len(tokens)
        while i < n:
            for k in range(min(self.max_ngram, n - i), 0, -1):
                cand = " ".join(lowered[i:i + k])
                if self._is_key(cand):
                    out.append((cand, " ".join(tokens[i:i + k])))
                    i += k
                    break
            else:
                i += 1
        return out

    def raw_spans(self, post: Post, mode: str) -> list[tuple[str, str]]:
        if mode == "gazetteer_scan":
            return self.scan(post.text)
        if mode == "pretagged":
            if post.pretagged_entities is None:
                raise MissingPretags(f"post {post.id} has no pretagged entities")
            return [(s.strip().lower(), s.strip()) for s in post.pretagged_entities if s.strip()]
        raise ValueError(f"unknown extraction mode {mode!r}")

    def extract_raw_entities(self, post: Post, mode: str) -> list[str]:
        return [s for s, _ in self.raw_spans(post, mode)]

    def normalize_and_expand(self, surface: str, original_token_was_uppercase: bool = False) -> list[str]:
        t = self.tables
        if surface in t.blocklist:
            return []
        name = surface
        if original_token_was_uppercase and name in t.state_abbrev:
            name = t.state_abbrev[name]
        name = t.aliases.get(name, name)
        names = list(t.large_state_regions.get(name, (name,)))
        out = []
        for nm in names:
            if nm not in t.blocklist and nm in self.index and nm not in out:
                out.append(nm)
        return out

    def subreddit_entity(self, post: Post) -> EntityMention | None:
        place = self.tables.location_subreddits.get(post.subreddit)
        if place is None:
            return None
        names = self.normalize_and_expand(place)
        if not names:
            return None
        return EntityMention(place, tuple(names), "subreddit", 1)

    def user_mentions(self, history: UserHistory, mode: str = "gazetteer_scan") -> list[EntityMention]:
        """Per-user mentions deduplicated by (surface, expansion), sorted by surface."""
        counts: Counter = Counter()
        sources: dict[tuple, str] = {}

        def add(surface, names, source):
            key = (surface, names)
            counts[key] += 1
            prev = sources.get(key)
            if prev is None or SOURCES.index(source) < SOURCES.index(prev):
                sources[key] = source

        text_source = "text" if mode == "gazetteer_scan" else "pretagged"
        for post in history.posts:
            for surface, original in self.raw_spans(post, mode):
                names = tuple(self.normalize_and_expand(surface, _is_upper(original)))
                if names:
                    add(surface, names, text_source)
            sub = self.subreddit_entity(post)
            if sub is not None:
                add(sub.surface, sub.normalized_names, "subreddit")
        return [EntityMention(s, names, sources[(s, names)], counts[(s, names)])
                for (s, names) in sorted(counts)]


def _is_upper(span: str) -> bool:
    letters = [c for c in span if c.isalpha()]
    return bool(letters) and all(c.isupper() for c in letters)


def extract_raw_entities(post: Post, mode: str, index: GazetteerIndex,
                         tables: NormalizationTables) -> list[str]:
    return Extractor(index, tables).extract_raw_entities(post, mode)


def normalize_and_expand(surface: str, tables: NormalizationTables, index: GazetteerIndex,
                         original_token_was_uppercase: bool = False) -> list[str]:
    return Extractor(index, tables).normalize_and_expand(surface, original_token_was_uppercase)


def total_entities(mentions: Iterable[EntityMention]) -> int:
    return sum(m.count for m in mentions)
