"""Synthetic fixtures: a small Geonames-format gazetteer and a planted corpus
of users with known home locations, for tests and demo runs.

Coordinates and populations are approximate; vote shares are made up.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .corpus import Post, post_to_record
from .jsonio import write_csv, write_jsonl, write_text

# code, name, lat, lon, population, synthetic vote share
US_STATES = [
    ("AL", "Alabama", 32.8, -86.8, 5024279, 0.62), ("AK", "Alaska", 64.0, -150.0, 733391, 0.52),
    ("AZ", "Arizona", 34.3, -111.7, 7151502, 0.49), ("AR", "Arkansas", 34.9, -92.4, 3011524, 0.61),
    ("CA", "California", 37.2, -119.5, 39538223, 0.33), ("CO", "Colorado", 39.0, -105.5, 5773714, 0.42),
    ("CT", "Connecticut", 41.6, -72.7, 3605944, 0.40), ("DE", "Delaware", 39.0, -75.5, 989948, 0.40),
    ("DC", "District of Columbia", 38.9, -77.03, 689545, 0.05), ("FL", "Florida", 28.6, -82.4, 21538187, 0.51),
    ("GA", "Georgia", 32.7, -83.4, 10711908, 0.498), ("HI", "Hawaii", 20.8, -156.3, 1455271, 0.32),
    ("ID", "Idaho", 44.4, -114.6, 1839106, 0.62), ("IL", "Illinois", 40.0, -89.2, 12812508, 0.40),
    ("IN", "Indiana", 39.9, -86.3, 6785528, 0.57), ("IA", "Iowa", 42.1, -93.5, 3190369, 0.52),
    ("KS", "Kansas", 38.5, -98.4, 2937880, 0.56), ("KY", "Kentucky", 37.5, -85.3, 4505836, 0.62),
    ("LA", "Louisiana", 31.1, -92.0, 4657757, 0.58), ("ME", "Maine", 45.4, -69.2, 1362359, 0.44),
    ("MD", "Maryland", 39.0, -76.8, 6177224, 0.33), ("MA", "Massachusetts", 42.3, -71.8, 7029917, 0.33),
    ("MI", "Michigan", 44.3, -85.4, 10077331, 0.48), ("MN", "Minnesota", 46.3, -94.3, 5706494, 0.45),
    ("MS", "Mississippi", 32.7, -89.7, 2961279, 0.58), ("MO", "Missouri", 38.4, -92.5, 6154913, 0.57),
    ("MT", "Montana", 47.0, -109.6, 1084225, 0.56), ("NE", "Nebraska", 41.5, -99.8, 1961504, 0.58),
    ("NV", "Nevada", 39.3, -116.6, 3104614, 0.47), ("NH", "New Hampshire", 43.7, -71.6, 1377529, 0.46),
    ("NJ", "New Jersey", 40.2, -74.7, 9288994, 0.41), ("NM", "New Mexico", 34.4, -106.1, 2117522, 0.42),
    ("NY", "New York", 42.9, -75.5, 20201249, 0.37), ("NC", "North Carolina", 35.6, -79.4, 10439388, 0.499),
    ("ND", "North Dakota", 47.5, -100.5, 779094, 0.64), ("OH", "Ohio", 40.3, -82.8, 11799448, 0.52),
    ("OK", "Oklahoma", 35.6, -97.5, 3959353, 0.65), ("OR", "Oregon", 43.9, -120.6, 4237256, 0.40),
    ("PA", "Pennsylvania", 40.9, -77.8, 13002700, 0.49), ("RI", "Rhode Island", 41.7, -71.5, 1097379, 0.39),
    ("SC", "South Carolina", 33.9, -80.9, 5118425, 0.55), ("SD", "South Dakota", 44.4, -100.2, 886667, 0.62),
    ("TN", "Tennessee", 35.9, -86.4, 6910840, 0.61), ("TX", "Texas", 31.5, -99.3, 29145505, 0.52),
    ("UT", "Utah", 39.3, -111.7, 3271616, 0.52), ("VT", "Vermont", 44.1, -72.7, 643077, 0.31),
    ("VA", "Virginia", 37.5, -78.8, 8631393, 0.44), ("WA", "Washington", 47.4, -120.5, 7705281, 0.38),
    ("WV", "West Virginia", 38.6, -80.6, 1793716, 0.68), ("WI", "Wisconsin", 44.6, -89.9, 5893718, 0.48),
    ("WY", "Wyoming", 43.0, -107.5, 576851, 0.69),
]

# name, state code, lat, lon, population
US_CITIES = [
    ("Boston", "MA", 42.36, -71.06, 675647), ("Lowell", "MA", 42.64, -71.32, 115554),
    ("Worcester", "MA", 42.26, -71.80, 206518), ("Springfield", "MA", 42.10, -72.59, 155929),
    ("Cambridge", "MA", 42.37, -71.11, 118403), ("New York City", "NY", 40.71, -74.01, 8804190),
    ("Buffalo", "NY", 42.89, -78.88, 278349), ("Rochester", "NY", 43.16, -77.61, 211328),
    ("Albany", "NY", 42.65, -73.75, 99224), ("Los Angeles", "CA", 34.05, -118.24, 3898747),
    ("San Francisco", "CA", 37.77, -122.42, 873965), ("San Diego", "CA", 32.72, -117.16, 1386932),
    ("Sacramento", "CA", 38.58, -121.49, 524943), ("Fresno", "CA", 36.74, -119.79, 542107),
    ("Richmond", "CA", 37.94, -122.35, 116448), ("Houston", "TX", 29.76, -95.37, 2304580),
    ("Dallas", "TX", 32.78, -96.80, 1304379), ("El Paso", "TX", 31.76, -106.49, 678815),
    ("Austin", "TX", 30.27, -97.74, 961855), ("San Antonio", "TX", 29.42, -98.49, 1434625),
    ("Paris", "TX", 33.66, -95.56, 24476), ("Miami", "FL", 25.76, -80.19, 442241),
    ("Tallahassee", "FL", 30.44, -84.28, 196169), ("Orlando", "FL", 28.54, -81.38, 307573),
    ("Tampa", "FL", 27.95, -82.46, 384959), ("Jacksonville", "FL", 30.33, -81.66, 949611),
    ("Melbourne", "FL", 28.08, -80.61, 84678), ("Juneau", "AK", 58.30, -134.42, 32255),
    ("Anchorage", "AK", 61.22, -149.90, 291247), ("Fairbanks", "AK", 64.84, -147.72, 32515),
    ("Chicago", "IL", 41.88, -87.63, 2746388), ("Springfield", "IL", 39.78, -89.65, 114394),
    ("Aurora", "IL", 41.76, -88.32, 180542), ("Philadelphia", "PA", 39.95, -75.17, 1603797),
    ("Pittsburgh", "PA", 40.44, -80.00, 302971), ("Columbus", "OH", 39.96, -83.00, 905748),
    ("Cleveland", "OH", 41.50, -81.69, 372624), ("Cincinnati", "OH", 39.10, -84.51, 309317),
    ("Dayton", "OH", 39.76, -84.19, 137644), ("Springfield", "OH", 39.92, -83.81, 58662),
    ("Dublin", "OH", 40.10, -83.11, 49328), ("Detroit", "MI", 42.33, -83.05, 639111),
    ("Grand Rapids", "MI", 42.96, -85.67, 198917), ("Seattle", "WA", 47.61, -122.33, 737015),
    ("Spokane", "WA", 47.66, -117.43, 228989), ("Portland", "OR", 45.52, -122.68, 652503),
    ("Springfield", "OR", 44.05, -123.02, 61851), ("Eugene", "OR", 44.05, -123.09, 176654),
    ("Portland", "ME", 43.66, -70.26, 68408), ("Bangor", "ME", 44.80, -68.77, 31753),
    ("Denver", "CO", 39.74, -104.99, 715522), ("Aurora", "CO", 39.73, -104.83, 386261),
    ("Colorado Springs", "CO", 38.83, -104.82, 478961), ("Phoenix", "AZ", 33.45, -112.07, 1608139),
    ("Tucson", "AZ", 32.22, -110.97, 542629), ("Las Vegas", "NV", 36.17, -115.14, 641903),
    ("Reno", "NV", 39.53, -119.81, 264165), ("Atlanta", "GA", 33.75, -84.39, 498715),
    ("Columbus", "GA", 32.46, -84.99, 206922), ("Savannah", "GA", 32.08, -81.09, 147780),
    ("Nashville", "TN", 36.16, -86.78, 689447), ("Memphis", "TN", 35.15, -90.05, 633104),
    ("Jackson", "TN", 35.61, -88.81, 68205), ("Knoxville", "TN", 35.96, -83.92, 190740),
    ("Jackson", "MS", 32.30, -90.18, 153701), ("Baltimore", "MD", 39.29, -76.61, 585708),
    ("Richmond", "VA", 37.54, -77.44, 226610), ("Virginia Beach", "VA", 36.85, -75.98, 459470),
    ("Charlotte", "NC", 35.23, -80.84, 874579), ("Raleigh", "NC", 35.78, -78.64, 467665),
    ("Charleston", "SC", 32.78, -79.93, 150227), ("Columbia", "SC", 34.00, -81.03, 136632),
    ("Louisville", "KY", 38.25, -85.76, 617638), ("Lexington", "KY", 38.04, -84.50, 322570),
    ("London", "KY", 37.13, -84.08, 7532), ("Indianapolis", "IN", 39.77, -86.16, 887642),
    ("Milwaukee", "WI", 43.04, -87.91, 577222), ("Madison", "WI", 43.07, -89.40, 269840),
    ("Minneapolis", "MN", 44.98, -93.27, 429954), ("Saint Paul", "MN", 44.95, -93.09, 311527),
    ("Kansas City", "MO", 39.10, -94.58, 508090), ("Springfield", "MO", 37.21, -93.29, 169176),
    ("Omaha", "NE", 41.26, -95.94, 486051), ("Wichita", "KS", 37.69, -97.34, 397532),
    ("Oklahoma City", "OK", 35.47, -97.52, 681054), ("Tulsa", "OK", 36.15, -95.99, 413066),
    ("Albuquerque", "NM", 35.08, -106.65, 564559), ("Salt Lake City", "UT", 40.76, -111.89, 200133),
    ("Boise", "ID", 43.62, -116.20, 235684), ("Billings", "MT", 45.78, -108.50, 117116),
    ("Fargo", "ND", 46.88, -96.79, 125990), ("Sioux Falls", "SD", 43.55, -96.73, 192517),
    ("Des Moines", "IA", 41.59, -93.62, 214133), ("Little Rock", "AR", 34.75, -92.29, 202591),
    ("New Orleans", "LA", 29.95, -90.07, 383997), ("Birmingham", "AL", 33.52, -86.80, 200733),
    ("Manchester", "NH", 42.99, -71.46, 115644), ("Burlington", "VT", 44.48, -73.21, 44743),
    ("Providence", "RI", 41.82, -71.41, 190934), ("Hartford", "CT", 41.76, -72.69, 121054),
    ("Newark", "NJ", 40.74, -74.17, 311549), ("Wilmington", "DE", 39.74, -75.55, 70898),
    ("Charleston", "WV", 38.35, -81.63, 48006), ("Honolulu", "HI", 21.31, -157.86, 350964),
    ("Cheyenne", "WY", 41.14, -104.82, 65132),
]

CA_REGIONS = [
    ("Central California", 36.5, -120.0), ("Southern California", 34.0, -117.5),
    ("Northern California", 39.5, -121.5),
]

# name, ISO code, lat, lon, population, alternate names
COUNTRIES = [
    ("United States", "US", 39.76, -98.5, 331449281, "usa,united states of america,america"),
    ("United Kingdom", "GB", 54.0, -2.0, 67081000, "uk,britain,great britain"),
    ("Canada", "CA", 60.0, -95.0, 38005238, ""), ("Australia", "AU", -25.0, 135.0, 25687041, ""),
    ("Ireland", "IE", 53.0, -8.0, 4994724, ""), ("Germany", "DE", 51.5, 10.5, 83240525, ""),
    ("France", "FR", 46.0, 2.0, 67391582, ""), ("India", "IN", 22.0, 79.0, 1380004385, ""),
    ("Mexico", "MX", 23.0, -102.0, 128932753, ""), ("China", "CN", 35.0, 105.0, 1402112000, ""),
    ("Russia", "RU", 60.0, 100.0, 144104080, ""), ("Turkey", "TR", 39.0, 35.0, 84339067, ""),
    ("New Zealand", "NZ", -42.0, 174.0, 5084300, ""),
]

# name, ISO code, admin1 code, lat, lon, population
INTL_CITIES = [
    ("London", "GB", "ENG", 51.51, -0.13, 8961989), ("Manchester", "GB", "ENG", 53.48, -2.24, 553230),
    ("Birmingham", "GB", "ENG", 52.49, -1.89, 1141816), ("Leeds", "GB", "ENG", 53.80, -1.55, 793139),
    ("Toronto", "CA", "08", 43.65, -79.38, 2731571), ("Vancouver", "CA", "02", 49.28, -123.12, 675218),
    ("Montreal", "CA", "10", 45.50, -73.57, 1780000), ("Ottawa", "CA", "08", 45.42, -75.70, 994837),
    ("Sydney", "AU", "02", -33.87, 151.21, 5312163), ("Melbourne", "AU", "07", -37.81, 144.96, 5078193),
    ("Brisbane", "AU", "04", -27.47, 153.03, 2560720), ("Dublin", "IE", "L", 53.35, -6.26, 1173179),
    ("Cork", "IE", "M", 51.90, -8.47, 210000), ("Berlin", "DE", "16", 52.52, 13.40, 3644826),
    ("Munich", "DE", "02", 48.14, 11.58, 1471508), ("Paris", "FR", "11", 48.86, 2.35, 2165423),
    ("Lyon", "FR", "84", 45.76, 4.84, 513275), ("Mumbai", "IN", "16", 19.08, 72.88, 12442373),
    ("Delhi", "IN", "07", 28.70, 77.10, 11034555), ("Mexico City", "MX", "09", 19.43, -99.13, 9209944),
    ("Auckland", "NZ", "E7", -36.85, 174.76, 1657200),
]

# non-populated features the loader must skip
OTHER_FEATURES = [
    ("Lake Tahoe", "H", "LK", "US", "CA", 39.09, -120.04),
    ("Fenway Park", "S", "STDM", "US", "MA", 42.35, -71.10),
    ("Cape Cod", "T", "CAPE", "US", "MA", 41.67, -70.30),
]


def _row(gid, name, alternates, lat, lon, fclass, fcode, cc, admin1, pop) -> str:
    cols = [str(gid), name, name, alternates, f"{lat:.5f}", f"{lon:.5f}", fclass, fcode, cc, "",
            admin1, "", "", "", str(pop), "", "0", "", "2021-01-01"]
    return "\t".join(cols)


def gazetteer_rows() -> list[str]:
    rows = []
    gid = 1000
    for name, cc, lat, lon, pop, alts in COUNTRIES:
        gid += 1
        rows.append(_row(gid, name, alts, lat, lon, "A", "PCLI", cc, "00", pop))
    for code, name, lat, lon, pop, _ in US_STATES:
        gid += 1
        rows.append(_row(gid, name, "", lat, lon, "A", "ADM1", "US", code, pop))
    for name, lat, lon in CA_REGIONS:
        gid += 1
        rows.append(_row(gid, name, "", lat, lon, "L", "RGN", "US", "CA", 0))
    for name, st, lat, lon, pop in US_CITIES:
        gid += 1
        rows.append(_row(gid, name, "", lat, lon, "P", "PPL", "US", st, pop))
    for name, cc, adm, lat, lon, pop in INTL_CITIES:
        gid += 1
        rows.append(_row(gid, name, "", lat, lon, "P", "PPL", cc, adm, pop))
    for name, fclass, fcode, cc, adm, lat, lon in OTHER_FEATURES:
        gid += 1
        rows.append(_row(gid, name, "", lat, lon, fclass, fcode, cc, adm, 0))
    return rows


def write_gazetteer(path: str | Path) -> Path:
    path = Path(path)
    write_text(path, "\n".join(gazetteer_rows()) + "\n")
    return path


STATE_BY_CODE = {s[0]: s for s in US_STATES}
VOTE_SHARES = {s[1].lower(): s[5] for s in US_STATES}
STATE_POPULATIONS = {s[1].lower(): s[4] for s in US_STATES}

HOME_TEMPLATES = [
    "just got back home to {place} after a long week",
    "anyone know a decent clinic in {place}?",
    "the weather in {place} has been brutal lately",
    "been living in {place} for years now",
    "traffic in {place} is getting worse every month",
    "{place} prices are insane right now",
]
STATE_TEMPLATES = ["things here in {place} are rough", "{city}, {abbr} represent"]
NEAR_TEMPLATES = ["drove over to {place} for the weekend", "my cousin lives out in {place}"]
FAR_TEMPLATES = ["would love to visit {place} someday", "saw a documentary about {place}",
                 "my buddy is moving to {place}"]
FILLER = [
    "anyone else having a rough day", "just finished a long shift at work",
    "this game last night was something else", "what is everyone watching these days",
    "finally fixed my car after three weeks", "cannot sleep again tonight",
    "coffee is the only thing keeping me going", "thanks for all the support folks",
]
TOPIC_TEMPLATES = {
    "covid-19": ["the pandemic changed everything", "stuck in quarantine again", "worried about the virus"],
    "crime": ["my friend got arrested yesterday", "almost got busted last week"],
    "drug": ["the dope around here is mostly fent now", "heroin supply is weird lately"],
    "government money": ["still waiting on unemployment", "the stimulus check finally came"],
    "money": ["money is tight and bills keep piling up", "cannot pay rent this month"],
    "narcan": ["always carry narcan", "got naloxone from the pharmacy"],
    "overdose and death": ["lost another friend to an overdose", "almost died last night"],
    "physical": ["withdrawal is hitting hard", "so sick and in pain"],
    "recovery prescriptions": ["starting suboxone next week", "methadone clinic line was long"],
}
# baseline rate per topic post and multiplier for red-state users after March 2020
TOPIC_BASE = {t: 1.0 for t in TOPIC_TEMPLATES}
RED_POST_BOOST = {"crime": 2.0, "money": 1.8, "drug": 1.3}

STUDY_START = 1535760000  # 2018-09-01
STUDY_END = 1633046399    # 2021-09-30
COVID_START = 1583020800  # 2020-03-01
HISTORY_START = 1451606400  # 2016-01-01


@dataclass
class SyntheticCorpus:
    posts: list[Post]
    annotations: list[dict]
    kinds: dict[str, str] = field(default_factory=dict)  # author -> planted user type


def _title(name: str) -> str:
    return " ".join(w.capitalize() for w in name.split())


class _Builder:
    def __init__(self, rng: np.random.Generator):
        self.rng = rng
        self.posts: list[Post] = []
        self.n = 0

    def post(self, author, text, subreddit="AskReddit", ts=None, submission=False):
        self.n += 1
        ts = int(ts if ts is not None else self.rng.integers(HISTORY_START, STUDY_END))
        pid = f"p{self.n:07d}"
        if submission:
            self.posts.append(Post(pid, author, subreddit.lower(), "submission", ts, "", text))
        else:
            self.posts.append(Post(pid, author, subreddit.lower(), "comment", ts, text))

    def pick(self, seq):
        return seq[int(self.rng.integers(len(seq)))]


def _near_cities(city, radius=2.3):
    _, st, lat, lon, _ = city
    return [c for c in US_CITIES if c[1] == st and c[0] != city[0]
            and math.hypot(c[2] - lat, c[3] - lon) <= radius]


def _far_places(lat, lon, min_dist=8.0):
    out = [c[0] for c in US_CITIES if math.hypot(c[2] - lat, c[3] - lon) >= min_dist]
    out += [c[0] for c in INTL_CITIES if math.hypot(c[3] - lat, c[4] - lon) >= min_dist]
    return sorted(set(out))


def generate_corpus(n_users: int = 200, seed: int = 0, filler_posts: tuple[int, int] = (5, 20),
                    topic_posts: tuple[int, int] = (2, 8)) -> SyntheticCorpus:
    """Plant users of known home location.

    Mix: 78% US homes, 10% international, 8% with nothing findable, 4% hard
    cases that the method is expected to miss. Every user also writes topic
    posts in the opiate subreddits inside the study window.
    """
    rng = np.random.default_rng(seed)
    b = _Builder(rng)
    annotations = []
    kinds = {}
    n_intl = round(0.10 * n_users)
    n_none = round(0.08 * n_users)
    n_hard = round(0.04 * n_users)
    n_us = n_users - n_intl - n_none - n_hard
    plan = ["us"] * n_us + ["intl"] * n_intl + ["none"] * n_none + ["hard"] * n_hard
    plan = [plan[i] for i in rng.permutation(len(plan))]
    unique_us = [c for c in US_CITIES if sum(1 for d in US_CITIES if d[0] == c[0]) == 1]

    for i, kind in enumerate(plan):
        author = f"user_{i:05d}"
        kinds[author] = kind
        home_state = None
        if kind == "us":
            city = b.pick(US_CITIES)
            name, st, lat, lon, _ = city
            state = STATE_BY_CODE[st][1]
            home_state = state.lower()
            k_home = int(rng.integers(3, 7))
            for _ in range(k_home):
                b.post(author, b.pick(HOME_TEMPLATES).format(place=name))
            for _ in range(int(rng.integers(1, min(3, k_home - 1)))):
                tpl = b.pick(STATE_TEMPLATES)
                b.post(author, tpl.format(place=state, city=name, abbr=st))
            near = _near_cities(city)
            if near and rng.random() < 0.6:
                b.post(author, b.pick(NEAR_TEMPLATES).format(place=b.pick(near)[0]))
            far = _far_places(lat, lon)
            for _ in range(int(rng.integers(1, 3))):
                b.post(author, b.pick(FAR_TEMPLATES).format(place=b.pick(far)))
            if rng.random() < 0.5:
                b.post(author, "honestly " + b.pick(["China", "Russia", "Turkey"]) + " is in the news again")
            annotations.append({"author": author, "city": name.lower(), "admin1": home_state,
                                "country": "US", "none_findable": False})
        elif kind == "intl":
            name, cc, _, lat, lon, _ = b.pick(INTL_CITIES)
            for _ in range(int(rng.integers(3, 6))):
                b.post(author, b.pick(HOME_TEMPLATES).format(place=name))
            far = _far_places(lat, lon)
            b.post(author, b.pick(FAR_TEMPLATES).format(place=b.pick(far)))
            annotations.append({"author": author, "city": name.lower(), "admin1": None,
                                "country": cc, "none_findable": False})
        elif kind == "none":
            if rng.random() < 0.5:
                b.post(author, "the OP is right, " + b.pick(["China", "Russia"]) + " makes everything")
            annotations.append({"author": author, "city": None, "admin1": None, "country": None,
                                "none_findable": True})
        else:
            # home mentioned once; talks about unrelated cities apart from each other
            name, st, lat, lon, _ = b.pick(unique_us)
            b.post(author, b.pick(HOME_TEMPLATES).format(place=name))
            far = _far_places(lat, lon, min_dist=10.0)
            b.post(author, b.pick(FAR_TEMPLATES).format(place=b.pick(far)))
            annotations.append({"author": author, "city": name.lower(),
                                "admin1": STATE_BY_CODE[st][1].lower(), "country": "US",
                                "none_findable": False})
        for _ in range(int(rng.integers(*filler_posts))):
            b.post(author, b.pick(FILLER))
        red = home_state is not None and VOTE_SHARES[home_state] > 0.5
        for _ in range(int(rng.integers(*topic_posts))):
            ts = int(rng.integers(STUDY_START, STUDY_END))
            post_covid = ts >= COVID_START
            weights = np.array([TOPIC_BASE[t] * (RED_POST_BOOST.get(t, 1.0) if red and post_covid else 1.0)
                                for t in TOPIC_TEMPLATES])
            topic = list(TOPIC_TEMPLATES)[int(rng.choice(len(weights), p=weights / weights.sum()))]
            sub = "opiates" if rng.random() < 0.7 else "heroin"
            b.post(author, b.pick(TOPIC_TEMPLATES[topic]), subreddit=sub, ts=ts,
                   submission=bool(rng.random() < 0.2))
    return SyntheticCorpus(b.posts, annotations, kinds)


def write_fixture_set(out_dir: str | Path, n_users: int = 200, seed: int = 0) -> dict[str, Path]:
    """Write gazetteer, corpus, annotations, vote shares and populations."""
    out = Path(out_dir)
    corpus = generate_corpus(n_users, seed)
    paths = {
        "gazetteer": write_gazetteer(out / "gazetteer.tsv"),
        "corpus": out / "corpus.jsonl",
        "annotations": out / "annotations.csv",
        "vote_shares": out / "vote_shares.csv",
        "populations": out / "populations.csv",
    }
    write_jsonl(paths["corpus"], (post_to_record(p) for p in corpus.posts))
    write_csv(paths["annotations"], ["author", "city", "admin1", "country", "none_findable"],
              ([a["author"], a["city"] or "", a["admin1"] or "", a["country"] or "",
                int(a["none_findable"])] for a in corpus.annotations))
    write_csv(paths["vote_shares"], ["state", "avg_share"], sorted(VOTE_SHARES.items()))
    write_csv(paths["populations"], ["state", "population"], sorted(STATE_POPULATIONS.items()))
    return paths
