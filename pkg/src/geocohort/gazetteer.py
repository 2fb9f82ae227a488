"""Geonames-format place index and the static name-normalization tables."""

from __future__ import annotations

import csv
import json
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from .errors import ConfigInvalid, MalformedGazetteerRow

logger = logging.getLogger(__name__)

GRANULARITIES = ("city", "admin1", "country")
GRANULARITY_RANK = {g: i for i, g in enumerate(GRANULARITIES)}

N_COLUMNS = 19  # standard Geonames dump layout


@dataclass(frozen=True)
class GeoCandidate:
    gazetteer_id: int
    primary_name: str
    latitude: float
    longitude: float
    country_code: str
    admin1: str | None
    city: str | None
    population: int
    granularity: str

    def __post_init__(self):
        if not -90.0 <= self.latitude <= 90.0 or not -180.0 <= self.longitude <= 180.0:
            raise MalformedGazetteerRow(f"{self.gazetteer_id}: coordinates out of range")
        if self.granularity not in GRANULARITY_RANK:
            raise MalformedGazetteerRow(f"{self.gazetteer_id}: bad granularity {self.granularity}")
        if self.granularity == "city" and not self.city:
            raise MalformedGazetteerRow(f"{self.gazetteer_id}: city granularity without city")
        if self.granularity == "country" and (self.city or self.admin1):
            raise MalformedGazetteerRow(f"{self.gazetteer_id}: country carries city/admin1")
        if self.population < 0:
            raise MalformedGazetteerRow(f"{self.gazetteer_id}: negative population")

    @property
    def is_us(self) -> bool:
        return self.country_code == "US"

    def as_record(self) -> dict:
        return {
            "gazetteer_id": self.gazetteer_id,
            "primary_name": self.primary_name,
            "latitude": self.latitude,
            "longitude": self.longitude,
            "country_code": self.country_code,
            "admin1": self.admin1,
            "city": self.city,
            "population": self.population,
            "granularity": self.granularity,
        }

    @classmethod
    def from_record(cls, rec: Mapping) -> "GeoCandidate":
        return cls(**{k: rec[k] for k in cls.__dataclass_fields__})


def _candidate_order(c: GeoCandidate):
    return (-c.population, c.gazetteer_id)


class GazetteerIndex:
    """Exact lowercase-name lookup over accepted gazetteer rows. Immutable after load."""

    def __init__(self, by_name: Mapping[str, Iterable[GeoCandidate]], malformed: int = 0):
        self._by_name = {k: tuple(sorted(set(v), key=_candidate_order)) for k, v in by_name.items()}
        self.malformed = malformed
        self.max_name_tokens = max((len(k.split()) for k in self._by_name), default=0)

    def lookup(self, name: str) -> list[GeoCandidate]:
        return list(self._by_name.get(name, ()))

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def names(self) -> Iterable[str]:
        return self._by_name.keys()

    @property
    def size(self) -> int:
        """Number of distinct (name, gazetteer id) pairs."""
        return sum(len(v) for v in self._by_name.values())

    def candidates(self) -> list[GeoCandidate]:
        seen = {c.gazetteer_id: c for v in self._by_name.values() for c in v}
        return [seen[k] for k in sorted(seen)]


def _granularity(fclass: str, fcode: str, name: str, region_names: frozenset[str]) -> str | None:
    if fclass == "P":
        return "city"
    if fclass == "A" and fcode == "ADM1":
        return "admin1"
    if fclass == "A" and fcode.startswith("PCL"):
        return "country"
    # sub-state regions are only needed as large-state expansion targets
    if fclass == "L" and fcode in ("RGN", "RGNE") and name in region_names:
        return "admin1"
    return None


def load_admin1_codes(path: str | Path) -> dict[tuple[str, str], str]:
    """Read a Geonames ``admin1CodesASCII.txt`` file: ``CC.CODE<TAB>name<TAB>...``."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            parts = line.rstrip("\n").split("\t")
            if len(parts) < 2 or "." not in parts[0]:
                continue
            cc, code = parts[0].split(".", 1)
            out[(cc, code)] = parts[1].strip().lower()
    return out


def _parse_row(parts: list[str], lineno: int):
    if len(parts) != N_COLUMNS:
        raise MalformedGazetteerRow(f"line {lineno}: expected {N_COLUMNS} columns, got {len(parts)}")
    try:
        gid = int(parts[0])
        lat = float(parts[4])
        lon = float(parts[5])
        pop = int(parts[14]) if parts[14].strip() else 0
    except ValueError as exc:
        raise MalformedGazetteerRow(f"line {lineno}: {exc}") from None
    if not (-90.0 <= lat <= 90.0 and -180.0 <= lon <= 180.0):
        raise MalformedGazetteerRow(f"line {lineno}: coordinate out of range ({lat}, {lon})")
    if pop < 0:
        raise MalformedGazetteerRow(f"line {lineno}: negative population")
    names = {parts[1].strip().lower(), parts[2].strip().lower()}
    names.update(a.strip().lower() for a in parts[3].split(",") if a.strip())
    names.discard("")
    return {
        "id": gid, "name": parts[1].strip().lower(), "names": names, "lat": lat, "lon": lon,
        "fclass": parts[6].strip(), "fcode": parts[7].strip(), "cc": parts[8].strip().upper(),
        "admin1_code": parts[10].strip(), "pop": pop,
    }


def load_gazetteer(path: str | Path, admin1_codes: Mapping[tuple[str, str], str] | None = None,
                   region_names: Iterable[str] = (), state_abbrev: Mapping[str, str] | None = None,
                   strict: bool = False) -> GazetteerIndex:
    """Load a Geonames dump into a :class:`GazetteerIndex`.

    Admin1 codes are resolved to names from, in order, ``admin1_codes``, the
    file's own ADM1 rows, and (for US rows) ``state_abbrev``. Malformed rows
    are skipped and counted unless ``strict``.
    """
    region_names = frozenset(n.lower() for n in region_names)
    rows = []
    malformed = 0
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            try:
                rows.append(_parse_row(line.split("\t"), lineno))
            except MalformedGazetteerRow:
                if strict:
                    raise
                malformed += 1
    if malformed:
        logger.warning("gazetteer %s: skipped %d malformed rows", path, malformed)

    admin_names: dict[tuple[str, str], str] = {}
    for r in rows:
        if r["fclass"] == "A" and r["fcode"] == "ADM1":
            admin_names[(r["cc"], r["admin1_code"])] = r["name"]
    if admin1_codes:
        admin_names.update(admin1_codes)

    def admin1_name(cc: str, code: str) -> str | None:
        if not code or code == "00":
            return None
        if (cc, code) in admin_names:
            return admin_names[(cc, code)]
        if cc == "US" and state_abbrev and code.lower() in state_abbrev:
            return state_abbrev[code.lower()]
        return code.lower()

    by_name: dict[str, list[GeoCandidate]] = defaultdict(list)
    for r in rows:
        gran = _granularity(r["fclass"], r["fcode"], r["name"], region_names)
        if gran is None:
            continue
        if gran == "country":
            admin1, city = None, None
        elif gran == "admin1":
            admin1 = r["name"] if r["fcode"] == "ADM1" else admin1_name(r["cc"], r["admin1_code"])
            city = None
        else:
            admin1, city = admin1_name(r["cc"], r["admin1_code"]), r["name"]
        cand = GeoCandidate(r["id"], r["name"], r["lat"], r["lon"], r["cc"], admin1, city,
                            r["pop"], gran)
        for n in r["names"]:
            by_name[n].append(cand)
    return GazetteerIndex(by_name, malformed=malformed)


@dataclass(frozen=True)
class NormalizationTables:
    blocklist: frozenset[str]
    aliases: dict[str, str]
    state_abbrev: dict[str, str]
    large_state_regions: dict[str, tuple[str, ...]]
    location_subreddits: dict[str, str] = field(default_factory=dict)

    @property
    def region_names(self) -> set[str]:
        return {r for regions in self.large_state_regions.values() for r in regions}

    def as_dict(self) -> dict:
        return {
            "blocklist": sorted(self.blocklist),
            "aliases": dict(self.aliases),
            "state_abbrev": dict(self.state_abbrev),
            "large_state_regions": {k: list(v) for k, v in self.large_state_regions.items()},
            "location_subreddits": dict(self.location_subreddits),
        }


def load_location_subreddits(path: str | Path) -> dict[str, str]:
    """Two-column file (subreddit, place name); tab or comma separated, optional header."""
    text = Path(path).read_text(encoding="utf-8")
    delim = "\t" if "\t" in text.split("\n", 1)[0] else ","
    out = {}
    for row in csv.reader(text.splitlines(), delimiter=delim):
        if len(row) < 2 or not row[0].strip() or row[0].startswith("#"):
            continue
        sub, place = row[0].strip().lower(), row[1].strip().lower()
        if (sub, place) == ("subreddit", "place"):
            continue
        out[sub.removeprefix("r/")] = place
    return out


def _lower_map(d) -> dict[str, str]:
    return {str(k).lower(): str(v).lower() for k, v in d.items()}


def tables_from_dict(raw: Mapping, location_subreddits: Mapping[str, str] | None = None) -> NormalizationTables:
    try:
        tables = NormalizationTables(
            blocklist=frozenset(str(x).lower() for x in raw["blocklist"]),
            aliases=_lower_map(raw["aliases"]),
            state_abbrev=_lower_map(raw["state_abbrev"]),
            large_state_regions={str(k).lower(): tuple(str(x).lower() for x in v)
                                 for k, v in raw["large_state_regions"].items()},
            location_subreddits=_lower_map(raw.get("location_subreddits")
                                           or location_subreddits or {}),
        )
    except (KeyError, AttributeError, TypeError) as exc:
        raise ConfigInvalid(f"normalization tables: {exc!r}") from None
    if any(len(k) != 2 for k in tables.state_abbrev):
        raise ConfigInvalid("state abbreviations must be two letters")
    return tables


def load_tables(path: str | Path | None = None, subreddits_path: str | Path | None = None) -> NormalizationTables:
    """Load normalization tables; ``None`` gives the packaged defaults."""
    data = resources.files("geocohort") / "data"
    if path is None:
        raw = json.loads((data / "tables.json").read_text(encoding="utf-8"))
    else:
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigInvalid(f"{path}: {exc}") from None
    if subreddits_path is not None:
        subs = load_location_subreddits(subreddits_path)
        raw = {**raw, "location_subreddits": subs}
    elif not raw.get("location_subreddits"):
        with resources.as_file(data / "location_subreddits.tsv") as p:
            raw = {**raw, "location_subreddits": load_location_subreddits(p)}
    return tables_from_dict(raw)


def validate_tables(tables: NormalizationTables, index: GazetteerIndex) -> list[str]:
    """Report table targets that have no gazetteer entry."""
    problems = []
    for key, target in tables.aliases.items():
        if target not in index:
            problems.append(f"alias {key!r} -> {target!r} has no gazetteer entry")
    for code, state in tables.state_abbrev.items():
        if state not in index:
            problems.append(f"state {code!r} -> {state!r} has no gazetteer entry")
    for state, regions in tables.large_state_regions.items():
        for r in regions:
            if r not in index:
                problems.append(f"region {r!r} of {state!r} has no gazetteer entry")
    for sub, place in tables.location_subreddits.items():
        if place not in index and place not in tables.aliases and place not in tables.large_state_regions:
            problems.append(f"subreddit {sub!r} -> {place!r} has no gazetteer entry")
    for p in problems:
        logger.warning(p)
    return problems
