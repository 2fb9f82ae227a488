"""Grading of inferred locations against annotations, accuracy rates, and the
confidence-filtered cohort summary."""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import AuthorMismatch, EmptyInput, MissingPopulation
from .inference import LocationGuess


class Grade(str, enum.Enum):
    FULL = "Full"
    PARTIAL = "Partial"
    MISS = "Miss"
    CORRECT_NONE = "CorrectNone"
    MISSED_NONE = "MissedNone"
    FALSE_GUESS = "FalseGuess"


# training targets for the positive model (guess) and negative model (no guess)
GRADE_LABEL = {
    Grade.FULL: 1.0, Grade.PARTIAL: 0.5, Grade.MISS: 0.0, Grade.FALSE_GUESS: 0.0,
    Grade.CORRECT_NONE: 1.0, Grade.MISSED_NONE: 0.0,
}


def _norm(name: str | None, aliases: Mapping[str, str]) -> str | None:
    if name is None:
        return None
    name = name.strip().lower()
    if not name:
        return None
    return aliases.get(name, name)


@dataclass(frozen=True)
class Annotation:
    author: str
    city: str | None = None
    admin1: str | None = None
    country: str | None = None
    none_findable: bool = False

    def __post_init__(self):
        if self.none_findable and (self.city or self.admin1 or self.country):
            raise ValueError(f"{self.author}: none_findable annotation carries a location")

    @classmethod
    def from_record(cls, rec: Mapping) -> "Annotation":
        flag = rec.get("none_findable", False)
        if isinstance(flag, str):
            flag = flag.strip().lower() in ("1", "true", "yes", "y")
        blank = lambda v: None if v in (None, "") else str(v)
        country = blank(rec.get("country"))
        return cls(str(rec["author"]), blank(rec.get("city")), blank(rec.get("admin1")),
                   country.upper() if country else None, bool(flag))


def grade_guess(guess: LocationGuess | None, annotation: Annotation,
                aliases: Mapping[str, str] | None = None) -> Grade:
    aliases = aliases or {}
    if guess is not None and guess.user != annotation.author:
        raise AuthorMismatch(f"guess for {guess.user} graded against {annotation.author}")
    has_guess = guess is not None and guess.candidate is not None
    if not has_guess:
        return Grade.CORRECT_NONE if annotation.none_findable else Grade.MISSED_NONE
    if annotation.none_findable:
        return Grade.FALSE_GUESS

    c = guess.candidate
    country_ok = (annotation.country or "").upper() == c.country_code.upper()
    if annotation.country == "US":
        admin_ok = _norm(annotation.admin1, aliases) == _norm(c.admin1, aliases)
        city_ok = _norm(annotation.city, aliases) == _norm(c.city, aliases)
        if country_ok and admin_ok and city_ok:
            return Grade.FULL
        if country_ok and admin_ok:
            return Grade.PARTIAL
        return Grade.MISS
    return Grade.FULL if country_ok else Grade.MISS


@dataclass(frozen=True)
class AccuracyReport:
    n: int
    full_rate: float
    partial_rate: float
    combined_rate: float
    counts: dict

    def as_dict(self) -> dict:
        return {"n": self.n, "full_rate": self.full_rate, "partial_rate": self.partial_rate,
                "combined_rate": self.combined_rate, "counts": dict(self.counts)}

    def render(self) -> str:
        lines = [
            f"users graded      {self.n}",
            f"full rate         {self.full_rate:.4f}",
            f"partial rate      {self.partial_rate:.4f}",
            f"combined rate     {self.combined_rate:.4f}",
            "",
            "grade counts",
        ]
        lines += [f"  {g.value:<12} {self.counts[g.value]}" for g in Grade]
        return "\n".join(lines) + "\n"


def accuracy_report(grades: Sequence[Grade]) -> AccuracyReport:
    if not grades:
        raise EmptyInput("no grades")
    tally = Counter(Grade(g) for g in grades)
    n = len(grades)
    full = tally[Grade.FULL] + tally[Grade.CORRECT_NONE]
    partial = tally[Grade.PARTIAL]
    return AccuracyReport(
        n=n,
        full_rate=full / n,
        partial_rate=partial / n,
        combined_rate=(full + partial) / n,
        counts={g.value: tally[g] for g in Grade},
    )


@dataclass(frozen=True)
class CohortSummary:
    threshold: float
    pre: dict
    post: dict
    state_rates: list  # (state, users, users per 100k)

    def as_dict(self) -> dict:
        return {"threshold": self.threshold, "pre_filter": dict(self.pre),
                "post_filter": dict(self.post),
                "state_rates": [{"state": s, "count": c, "rate": r} for s, c, r in self.state_rates]}


def _granularity_counts(guesses: Iterable[LocationGuess]) -> dict:
    out = {"city": 0, "admin1": 0, "country": 0}
    for g in guesses:
        c = g.candidate
        out["country"] += 1
        out["admin1"] += c.admin1 is not None
        out["city"] += c.city is not None
    return out


def cohort_summary(guesses: Sequence[LocationGuess], threshold: float = 0.5,
                   population_table: Mapping[str, int] | None = None) -> CohortSummary:
    """Users resolved to city/state/country before and after dropping
    confidence < ``threshold``; per-state users per 100k residents."""
    located = [g for g in guesses if g.candidate is not None]
    if any(g.confidence is None for g in located):
        raise ValueError("cohort summary needs scored guesses")
    population_table = {k.lower(): v for k, v in (population_table or {}).items()}
    us_states = {g.candidate.admin1 for g in located if g.candidate.is_us and g.candidate.admin1}
    missing = sorted(us_states - set(population_table))
    if missing:
        raise MissingPopulation(f"no population for: {', '.join(missing)}")
    kept = [g for g in located if g.confidence >= threshold]
    per_state = Counter(g.candidate.admin1 for g in kept if g.candidate.is_us and g.candidate.admin1)
    rates = [(s, per_state[s], 100000.0 * per_state[s] / population_table[s])
             for s in sorted(population_table) if population_table[s] > 0]
    return CohortSummary(threshold, _granularity_counts(located), _granularity_counts(kept), rates)
