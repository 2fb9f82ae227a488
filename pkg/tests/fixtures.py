"""Hand-built fixtures shared by the unit and acceptance tests."""

import numpy as np

from geocohort.confidence import FeatureVector
from geocohort.corpus import Month, Post
from geocohort.evaluation import Annotation, Grade
from geocohort.gazetteer import GeoCandidate
from geocohort.inference import LocationGuess
from geocohort.topics import DEFAULT_TOPICS

FV = FeatureVector(5, 40, 300.0, 0.6, 1, 100000)
NEG_FV = FeatureVector(0, 12, 90.0)


def place(gid, city, admin1, cc="US", pop=1000, lat=40.0, lon=-75.0):
    gran = "city" if city else "admin1" if admin1 else "country"
    name = city or admin1 or cc.lower()
    return GeoCandidate(gid, name, lat, lon, cc, admin1, city, pop, gran)


def guess(user, candidate, confidence=None):
    fv = FV if candidate is not None else NEG_FV
    return LocationGuess(user, candidate, fv, confidence=confidence)


# --- confidence ---------------------------------------------------------------

def threshold_rows(n=500, seed=7, noise=0.08):
    """Label = 1 when cluster_size_fraction plus Gaussian noise exceeds 0.5;
    the other features are independent of the label."""
    rng = np.random.default_rng(seed)
    rows = []
    for _ in range(n):
        csf = float(rng.uniform(0.05, 1.0))
        label = 1.0 if csf + rng.normal(0, noise) > 0.5 else 0.0
        fv = FeatureVector(
            total_entities=int(rng.integers(2, 60)),
            total_posts=int(rng.integers(5, 2000)),
            history_duration_days=float(rng.uniform(1, 3000)),
            cluster_size_fraction=csf,
            is_us=int(rng.integers(0, 2)),
            guess_population=int(rng.integers(1000, 5_000_000)),
        )
        rows.append((fv, label))
    return rows


# --- grading ------------------------------------------------------------------

BOSTON = place(1, "boston", "massachusetts")
LOWELL = place(2, "lowell", "massachusetts")
DENVER = place(3, "denver", "colorado")
MASS = place(4, None, "massachusetts")
TORONTO = place(5, "toronto", "ontario", cc="CA")
VANCOUVER = place(6, "vancouver", "british columbia", cc="CA")
LONDON_UK = place(7, "london", "england", cc="GB")
NYC = place(8, "new york city", "new york")
US_ONLY = place(9, None, None)


def grading_matrix():
    """(guess candidate or None, annotation fields, expected grade)."""
    us_boston = dict(city="boston", admin1="massachusetts", country="US")
    return [
        (BOSTON, us_boston, Grade.FULL),
        (LOWELL, us_boston, Grade.PARTIAL),
        (MASS, us_boston, Grade.PARTIAL),
        (DENVER, us_boston, Grade.MISS),
        (TORONTO, us_boston, Grade.MISS),
        (US_ONLY, us_boston, Grade.MISS),
        (NYC, dict(city="NYC", admin1="new york", country="us"), Grade.FULL),
        (TORONTO, dict(city="toronto", admin1="ontario", country="CA"), Grade.FULL),
        (VANCOUVER, dict(city="toronto", admin1="ontario", country="CA"), Grade.FULL),
        (LONDON_UK, dict(city="toronto", admin1="ontario", country="CA"), Grade.MISS),
        (BOSTON, dict(city="london", country="GB"), Grade.MISS),
        (None, dict(none_findable=True), Grade.CORRECT_NONE),
        (None, us_boston, Grade.MISSED_NONE),
        (None, dict(country="CA"), Grade.MISSED_NONE),
        (BOSTON, dict(none_findable=True), Grade.FALSE_GUESS),
        (TORONTO, dict(none_findable=True), Grade.FALSE_GUESS),
    ]


def annotation(author, fields):
    return Annotation.from_record({"author": author, **fields})


def accuracy_grades():
    """100 grades: 52 Full + 7 CorrectNone, 4 Partial, 37 other."""
    grades = ([Grade.FULL] * 52 + [Grade.CORRECT_NONE] * 7 + [Grade.PARTIAL] * 4
              + [Grade.MISS] * 21 + [Grade.MISSED_NONE] * 11 + [Grade.FALSE_GUESS] * 5)
    return [grades[i] for i in np.random.default_rng(1).permutation(len(grades))]


# --- cohort summary -------------------------------------------------------------

POPULATIONS = {"massachusetts": 1_000_000, "colorado": 2_500_000, "vermont": 600_000}


def cohort_fixture():
    """Pre-filter (city, admin1, country) = (5, 7, 9); post-filter (4, 6, 8).

    Hand tally of the kept US users per state: massachusetts 3 (two cities and
    one state-level), colorado 2, vermont 0. Rates per 100k: 0.3, 0.08, 0.0.
    """
    g = [
        guess("a", place(10, "boston", "massachusetts"), 0.90),
        guess("b", place(11, "lowell", "massachusetts"), 0.50),
        guess("c", place(12, "denver", "colorado"), 0.70),
        guess("d", place(13, "burlington", "vermont"), 0.49),  # dropped
        guess("e", place(14, "toronto", "ontario", cc="CA"), 0.80),
        guess("f", place(15, None, "massachusetts"), 0.60),
        guess("g", place(16, None, "colorado"), 0.99),
        guess("h", place(17, None, None, cc="GB"), 0.55),
        guess("i", place(18, None, None, cc="US"), 0.95),
        guess("j", None, 0.97),  # no location: never counted
    ]
    expected = {
        "pre": {"city": 5, "admin1": 7, "country": 9},
        "post": {"city": 4, "admin1": 6, "country": 8},
        "rates": [("colorado", 2, 0.08), ("massachusetts", 3, 0.3), ("vermont", 0, 0.0)],
    }
    return g, expected


# --- topics ---------------------------------------------------------------------

FILLER = ["the", "and", "really", "today", "about", "what", "then", "friend", "night", "weather"]
INFLECTED = {  # surface form -> keyword it must count as
    "arrested": "arrest", "arrests": "arrest", "overdoses": "overdose", "vaccinations": "vaccination",
    "paying": "pay", "paid": "pay", "bills": "bill", "banks": "bank", "deaths": "death",
    "pandemics": "pandemic", "withdrawals": "withdrawal", "addicts": "addict", "junkies": "junky",
    "stimulants": "stimulant", "accounts": "account", "wages": "wage", "salaries": "salary",
    "funds": "fund", "payments": "payment", "quarantined": "quarantine", "busted": "bust",
}


def planted_topic_posts(n=1000, seed=3):
    """Posts with a known number of keyword hits per (topic, month)."""
    rng = np.random.default_rng(seed)
    kw_topic = {k: t for t, kws in DEFAULT_TOPICS.items() for k in kws}
    surfaces = list(kw_topic) + list(INFLECTED)
    months = [Month(2019, m) for m in range(1, 13)] + [Month(2020, m) for m in range(1, 13)]
    truth = {t: {m: 0 for m in months} for t in DEFAULT_TOPICS}
    posts = []
    for i in range(n):
        m = months[int(rng.integers(len(months)))]
        ts = int(np.datetime64(f"{m.year:04d}-{m.month:02d}-01", "s").astype(np.int64)) + int(rng.integers(0, 27 * 86400))
        words = [FILLER[j] for j in rng.integers(0, len(FILLER), size=int(rng.integers(3, 12)))]
        for _ in range(int(rng.integers(0, 5))):
            s = surfaces[int(rng.integers(len(surfaces)))]
            truth[kw_topic[INFLECTED.get(s, s)]][m] += 1
            words.insert(int(rng.integers(0, len(words) + 1)), s.upper() if rng.random() < 0.2 else s)
        title = None
        if rng.random() < 0.3:
            title, words = " ".join(words[:2]), words[2:]
        posts.append(Post(f"p{i}", f"u{i % 37}", "opiates", "submission" if title is not None else "comment",
                          ts, " ".join(words) + ".", title))
    return posts, truth, (months[0], months[-1])
