"""Pipeline configuration: one JSON file plus ``section.key=value`` overrides.

Every method constant lives here as a default."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields, is_dataclass
from pathlib import Path
from typing import Any

from .corpus import Month
from .errors import ConfigInvalid
from .extraction import MODES


@dataclass
class Paths:
    corpus: list[str] = field(default_factory=list)
    gazetteer: str | None = None
    admin1_codes: str | None = None
    tables: str | None = None
    location_subreddits: str | None = None
    labels: str | None = None
    annotations: str | None = None
    vote_shares: str | None = None
    populations: str | None = None
    output_dir: str = "out"


@dataclass
class DbscanConfig:
    eps: float = 2.5
    min_pts: int = 2
    weight_by_count: bool = True


@dataclass
class ConfidenceConfig:
    n_trees: int = 200
    max_depth: int = 8
    min_leaf: int = 3
    features_per_split: int | None = None
    holdout_fraction: float = 0.33
    threshold: float = 0.5


@dataclass
class TopicsConfig:
    scale: float = 100000.0
    covid_cutoff: str = "2020-03"
    start: str = "2018-09"
    end: str = "2021-09"
    subreddits: list[str] = field(default_factory=lambda: ["opiates", "heroin"])
    vote_share_threshold: float = 0.5
    keywords: dict[str, list[str]] | None = None  # None: built-in topic table


@dataclass
class PipelineConfig:
    paths: Paths = field(default_factory=Paths)
    dbscan: DbscanConfig = field(default_factory=DbscanConfig)
    confidence: ConfidenceConfig = field(default_factory=ConfidenceConfig)
    topics: TopicsConfig = field(default_factory=TopicsConfig)
    extraction_mode: str = "gazetteer_scan"
    strict: bool = False
    seed: int = 0
    workers: int = 1

    def as_dict(self) -> dict:
        return asdict(self)

    @property
    def output_dir(self) -> Path:
        return Path(self.paths.output_dir)

    def validate(self) -> "PipelineConfig":
        problems = []
        if not self.dbscan.eps > 0:
            problems.append("dbscan.eps must be > 0")
        if self.dbscan.min_pts < 1:
            problems.append("dbscan.min_pts must be >= 1")
        c = self.confidence
        if c.n_trees < 1 or c.max_depth < 0 or c.min_leaf < 1:
            problems.append("confidence forest params out of range")
        if c.features_per_split is not None and c.features_per_split < 1:
            problems.append("confidence.features_per_split must be >= 1")
        if not 0 < c.holdout_fraction < 1:
            problems.append("confidence.holdout_fraction must be in (0, 1)")
        if not 0 <= c.threshold <= 1:
            problems.append("confidence.threshold must be in [0, 1]")
        t = self.topics
        try:
            if Month.parse(t.start) > Month.parse(t.end):
                problems.append("topics.start after topics.end")
            Month.parse(t.covid_cutoff)
        except ValueError as exc:
            problems.append(str(exc))
        if not t.scale > 0:
            problems.append("topics.scale must be > 0")
        if self.extraction_mode not in MODES:
            problems.append(f"extraction_mode must be one of {MODES}")
        if self.workers < 1:
            problems.append("workers must be >= 1")
        if problems:
            raise ConfigInvalid("; ".join(problems))
        return self


def _build(cls, data: dict):
    if not isinstance(data, dict):
        raise ConfigInvalid(f"{cls.__name__}: expected an object")
    known = {f.name: f for f in fields(cls)}
    unknown = set(data) - set(known)
    if unknown:
        raise ConfigInvalid(f"unknown config keys: {', '.join(sorted(unknown))}")
    kwargs = {}
    for name, value in data.items():
        default = getattr(cls(), name) if name in ("paths", "dbscan", "confidence", "topics") else None
        if is_dataclass(default):
            kwargs[name] = _build(type(default), value)
        else:
            kwargs[name] = value
    return cls(**kwargs)


def _coerce(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def apply_override(raw: dict, assignment: str) -> None:
    if "=" not in assignment:
        raise ConfigInvalid(f"override {assignment!r} is not key=value")
    key, value = assignment.split("=", 1)
    parts = key.strip().split(".")
    node = raw
    for p in parts[:-1]:
        node = node.setdefault(p, {})
        if not isinstance(node, dict):
            raise ConfigInvalid(f"override {key!r} descends into a scalar")
    node[parts[-1]] = _coerce(value)


def load_config(path: str | Path | None = None, overrides: list[str] = ()) -> PipelineConfig:
    raw: dict = {}
    if path is not None:
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ConfigInvalid(f"config file {path} not found") from None
        except json.JSONDecodeError as exc:
            raise ConfigInvalid(f"{path}: {exc}") from None
    for ov in overrides:
        apply_override(raw, ov)
    try:
        cfg = _build(PipelineConfig, raw)
    except TypeError as exc:
        raise ConfigInvalid(str(exc)) from None
    if isinstance(cfg.paths.corpus, str):
        cfg.paths.corpus = [cfg.paths.corpus]
    if path is not None:
        _resolve_paths(cfg.paths, Path(path).parent)
    return cfg.validate()


def _resolve_paths(paths: Paths, base: Path) -> None:
    """Relative paths in a config file are relative to that file."""
    def fix(p):
        return p if p is None or Path(p).is_absolute() else str(base / p)

    for f in fields(paths):
        v = getattr(paths, f.name)
        if isinstance(v, list):
            setattr(paths, f.name, [fix(x) for x in v])
        else:
            setattr(paths, f.name, fix(v))
