"""Topic keyword counting over monthly buckets, volume-adjusted series and the
vote-share cohort split."""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .corpus import Month, Post, month_range, monthly_volume
from .errors import MissingState
from .inference import LocationGuess

DEFAULT_TOPICS: dict[str, tuple[str, ...]] = {
    "covid-19": ("covid", "virus", "expose", "pandemic", "quarantine", "corona", "vaccination"),
    "crime": ("arrest", "bust", "narc", "nark"),
    "drug": ("heroin", "oxy", "dope", "fent", "stimulant", "diacetylmorphine"),
    "government money": ("unemployment", "irs", "stimulus"),
    "money": ("money", "pay", "spend", "account", "bill", "bank", "broke", "fund", "payment",
              "finance", "wage", "salary", "bankrupt", "skint"),
    "narcan": ("narcan", "naloxone"),
    "overdose and death": ("die", "overdose", "death", "dying", "o.d."),
    "physical": ("pain", "withdrawal", "tolerance", "addict", "sick", "junkie", "hurt", "mental",
                 "health", "ill", "hook", "withdraw", "puke", "suicide", "vomit", "nauseous",
                 "dopesick", "junky"),
    "recovery prescriptions": ("methadone", "suboxone", "buprenorphine", "subutex"),
}

_TOKEN_RE = re.compile(r"[a-z](?:\.[a-z])+\.?|[a-z0-9]+")

# irregular forms and words the suffix rules would mangle
_IRREGULAR = {
    "paid": "pay", "spent": "spend", "died": "die", "dies": "die", "broken": "break",
    "withdrew": "withdraw", "withdrawn": "withdraw", "was": "be", "is": "be", "are": "be", "were": "be",
    "has": "have", "had": "have", "does": "do", "did": "do", "goes": "go", "went": "go",
    "got": "get", "gets": "get", "this": "this", "his": "his", "its": "its", "us": "us",
    "thus": "thus", "yes": "yes", "news": "news", "series": "series", "species": "species",
}
_VOWELS = set("aeiou")


def _known_lemmas() -> frozenset[str]:
    return frozenset(k for kws in DEFAULT_TOPICS.values() for k in kws)


_KNOWN = _known_lemmas()


def _pick(cands: Sequence[str], fallback: str) -> str:
    for c in cands:
        if c in _KNOWN:
            return c
    return fallback


def _strip_verbal(stem: str) -> str:
    """Post-suffix repair for -ing/-ed stems outside the keyword vocabulary."""
    if len(stem) >= 3 and stem[-1] == stem[-2] and stem[-1] not in _VOWELS | set("lsz"):
        return stem[:-1]
    if (len(stem) == 3 and stem[-1] not in _VOWELS | set("wxy")
            and stem[-2] in _VOWELS and stem[-3] not in _VOWELS):
        return stem + "e"
    return stem


@lru_cache(maxsize=65536)
def lemmatize(token: str) -> str:
    """Suffix-stripping lemmatizer; every default topic keyword is a fixed point."""
    if token in _KNOWN:
        return token
    if token in _IRREGULAR:
        return _IRREGULAR[token]
    n = len(token)
    if n >= 5 and token.endswith("ies"):
        stem = token[:-3]
        return _pick([stem + "y", stem + "ie"], stem + "y")
    if n >= 5 and token.endswith("ing"):
        stem = token[:-3]
        return _pick([stem, stem + "e", stem[:-1]], _strip_verbal(stem))
    if n >= 5 and token.endswith("ied"):
        return token[:-3] + "y"
    if n >= 5 and token.endswith("ed"):
        stem = token[:-2]
        return _pick([stem, token[:-1], stem[:-1]], _strip_verbal(stem))
    if n >= 4 and token.endswith("es"):
        stem = token[:-2]
        if stem.endswith(("s", "x", "z", "ch", "sh")):
            return _pick([stem, token[:-1]], stem)
        return token[:-1]
    if n >= 4 and token.endswith("s") and not token.endswith(("ss", "us", "is")):
        return token[:-1]
    return token


def tokenize(text: str) -> list[str]:
    out = []
    for t in _TOKEN_RE.findall(text.lower()):
        if "." in t and not t.endswith("."):
            t += "."
        out.append(t)
    return out


def topic_map(raw: Mapping[str, Iterable[str]] | None = None) -> dict[str, frozenset[str]]:
    raw = DEFAULT_TOPICS if raw is None else raw
    out = {}
    for topic, kws in raw.items():
        kws = frozenset(k.strip().lower() for k in kws if k.strip())
        if not kws:
            raise ValueError(f"topic {topic!r} has no keywords")
        out[str(topic)] = kws
    return out


def count_topic_mentions(posts: Iterable[Post], topics: Mapping[str, Iterable[str]],
                         start: Month, end: Month) -> dict[str, dict[Month, int]]:
    """Raw keyword hits per topic and month; every month of the range is present."""
    months = month_range(start, end)
    by_keyword = defaultdict(list)
    for topic, kws in topics.items():
        for k in kws:
            by_keyword[k].append(topic)
    counts = {t: dict.fromkeys(months, 0) for t in topics}
    for post in posts:
        m = post.month
        if m < start or m > end:
            continue
        for tok in tokenize(post.text):
            lemma = tok if tok in by_keyword else lemmatize(tok)
            for topic in by_keyword.get(lemma, ()):
                counts[topic][m] += 1
    return counts


def adjusted_counts(raw: Mapping[Month, int], volume: Mapping[Month, int],
                    scale: float = 100000.0) -> dict[Month, float]:
    """``scale * raw / volume`` per month; months without volume are absent."""
    missing = set(raw) - set(volume)
    if missing:
        raise ValueError(f"volume lacks months {sorted(map(str, missing))}")
    return {m: scale * raw[m] / volume[m] for m in sorted(raw) if volume[m] > 0}


@dataclass(frozen=True)
class TopicSeries:
    topic: str
    cohort: str
    points: dict  # Month -> adjusted count
    raw: dict = field(default_factory=dict)
    volume: dict = field(default_factory=dict)

    def rows(self):
        for m in sorted(self.points):
            yield (self.cohort, self.topic, str(m), self.raw.get(m, ""), self.volume.get(m, ""),
                   repr(float(self.points[m])))


def cohort_topic_series(posts: Sequence[Post], topics: Mapping[str, Iterable[str]], start: Month,
                        end: Month, cohort: str, scale: float = 100000.0) -> list[TopicSeries]:
    volume = monthly_volume(posts, start, end)
    raw = count_topic_mentions(posts, topics, start, end)
    return [TopicSeries(t, cohort, adjusted_counts(raw[t], volume, scale), raw[t], volume)
            for t in topics]


@dataclass(frozen=True)
class CohortSplit:
    red: frozenset[str]
    blue: frozenset[str]
    excluded: dict  # author -> reason


def split_by_cohort(guesses: Iterable[LocationGuess], vote_shares: Mapping[str, float],
                    threshold: float = 0.5) -> CohortSplit:
    """Red: state vote share strictly above ``threshold``; blue: at or below."""
    shares = {k.lower(): float(v) for k, v in vote_shares.items()}
    red, blue, excluded = set(), set(), {}
    for g in guesses:
        c = g.candidate
        if c is None:
            excluded[g.user] = "no location"
        elif not c.is_us:
            excluded[g.user] = "non-US"
        elif not c.admin1:
            excluded[g.user] = "no state"
        elif c.admin1 not in shares:
            raise MissingState(f"no vote share for state {c.admin1!r}")
        elif shares[c.admin1] > threshold:
            red.add(g.user)
        else:
            blue.add(g.user)
    return CohortSplit(frozenset(red), frozenset(blue), excluded)
