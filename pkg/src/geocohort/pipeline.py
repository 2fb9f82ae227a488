"""Pipeline stages. Each stage reads upstream artifacts from the output
directory, checks that every input exists before writing anything, and
writes its own artifacts atomically.

Artifacts (all under ``paths.output_dir``)::

    ingest            histories.jsonl, ingest_summary.json
    extract           mentions.jsonl
    infer             guesses.jsonl
    train-confidence  model_positive.json, model_negative.json, training_report.json,
                      labels_used.csv, holdout_{roc,pr}_<variant>.csv, figures/*.png
    score             scored_guesses.jsonl, locations.jsonl
    evaluate          evaluation.json, evaluation.txt, grades.csv
    topics            topic_series.csv, cohorts.json
    regress           regression.txt, regression.csv
    export            cohort.csv, cohort_summary.json, state_rates.csv,
                      figures/confidence_hist.png
"""

from __future__ import annotations

import json
import logging
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, Iterable, Sequence

from . import plotting
from .config import PipelineConfig
from .confidence import (MIN_TRAINING_ROWS, SCHEMAS, Forest, ForestParams, binarize_labels,
                         check_label, evaluate_auc, holdout_evaluation, precision_recall_curve,
                         roc_curve, train_forest)
from .corpus import (IngestStats, Month, group_by_user, history_from_record, history_to_record,
                     read_posts)
from .errors import DataError, InvalidLabel, MissingInput, TooFewRows
from .evaluation import GRADE_LABEL, Annotation, accuracy_report, cohort_summary, grade_guess
from .extraction import EntityMention, Extractor
from .gazetteer import (GazetteerIndex, NormalizationTables, load_admin1_codes, load_gazetteer,
                        load_tables, validate_tables)
from .inference import LocationGuess, rank_user_locations, select_best
from .jsonio import read_csv, read_jsonl, write_csv, write_json, write_jsonl, write_text
from .regression import TERMS, build_design, ols_fit, report_rows, report_table
from .topics import TopicSeries, cohort_topic_series, split_by_cohort, topic_map

log = logging.getLogger(__name__)

HISTORIES = "histories.jsonl"
MENTIONS = "mentions.jsonl"
GUESSES = "guesses.jsonl"
SCORED = "scored_guesses.jsonl"
LOCATIONS = "locations.jsonl"
TOPIC_SERIES = "topic_series.csv"
COHORTS = "cohorts.json"


def model_path(cfg: PipelineConfig, variant: str) -> Path:
    return cfg.output_dir / f"model_{variant}.json"


# --- helpers -----------------------------------------------------------------

def require(*paths: str | Path | None, what: str = "input") -> None:
    """Fail with MissingInput before any output is written."""
    for p in paths:
        if p is None:
            raise MissingInput(f"{what} path not configured")
        if not Path(p).exists():
            raise MissingInput(f"{p} does not exist")


def _artifact(cfg: PipelineConfig, name: str) -> Path:
    return cfg.output_dir / name


def _pmap(fn: Callable, items: Sequence, workers: int, initializer=None, initargs=()) -> list:
    """Order-preserving map, optionally across worker processes."""
    if workers <= 1 or len(items) < 2:
        if initializer is not None:
            initializer(*initargs)
        return [fn(x) for x in items]
    chunk = max(1, len(items) // (workers * 8))
    with ProcessPoolExecutor(workers, initializer=initializer, initargs=initargs) as ex:
        return list(ex.map(fn, items, chunksize=chunk))


def load_normalization(cfg: PipelineConfig) -> tuple[GazetteerIndex, NormalizationTables]:
    p = cfg.paths
    require(p.gazetteer, what="gazetteer")
    for opt in (p.tables, p.location_subreddits, p.admin1_codes):
        if opt is not None:
            require(opt)
    tables = load_tables(p.tables, p.location_subreddits)
    codes = load_admin1_codes(p.admin1_codes) if p.admin1_codes else None
    index = load_gazetteer(p.gazetteer, codes, region_names=tables.region_names,
                           state_abbrev=tables.state_abbrev, strict=cfg.strict)
    validate_tables(tables, index)
    return index, tables


def read_histories(cfg: PipelineConfig):
    return [history_from_record(r) for r in read_jsonl(_artifact(cfg, HISTORIES))]


def read_guess_groups(path: Path) -> dict[str, list[LocationGuess]]:
    groups: dict[str, list[LocationGuess]] = defaultdict(list)
    for rec in read_jsonl(path):
        groups[rec["author"]].append(LocationGuess.from_record(rec))
    return dict(groups)


def read_locations(path: Path) -> list[LocationGuess]:
    return [LocationGuess.from_record(r) for r in read_jsonl(path)]


def _float_table(path, key: str, value: str, cast=float) -> dict[str, float]:
    out = {}
    for i, row in enumerate(read_csv(path), 2):
        try:
            out[row[key].strip().lower()] = cast(row[value])
        except (KeyError, ValueError, TypeError):
            raise DataError(f"{path}:{i}: expected columns {key},{value}") from None
    return out


def read_vote_shares(path) -> dict[str, float]:
    shares = _float_table(path, "state", "avg_share")
    bad = [s for s, v in shares.items() if not 0.0 <= v <= 1.0]
    if bad:
        raise DataError(f"vote shares outside [0, 1]: {', '.join(sorted(bad))}")
    return shares


def read_populations(path) -> dict[str, int]:
    return _float_table(path, "state", "population", cast=lambda v: int(float(v)))


def read_annotations(path) -> dict[str, Annotation]:
    out = {}
    for i, row in enumerate(read_csv(path), 2):
        try:
            ann = Annotation.from_record(row)
        except (KeyError, ValueError) as exc:
            raise DataError(f"{path}:{i}: {exc}") from None
        out[ann.author] = ann
    return out


def read_labels(path) -> dict[str, float]:
    out = {}
    for i, row in enumerate(read_csv(path), 2):
        try:
            out[row["author"]] = check_label(float(row["label"]))
        except (KeyError, ValueError):
            raise InvalidLabel(f"{path}:{i}: label must be one of 0, 0.5, 1") from None
    return out


# --- stages --------------------------------------------------------------------

def run_ingest(cfg: PipelineConfig) -> dict:
    if not cfg.paths.corpus:
        raise MissingInput("no corpus files configured")
    require(*cfg.paths.corpus)
    stats = IngestStats()
    histories = group_by_user(read_posts(cfg.paths.corpus, cfg.strict, stats))
    n = write_jsonl(_artifact(cfg, HISTORIES), (history_to_record(h) for h in histories))
    summary = {**stats.as_dict(), "users": n, "posts": sum(h.post_count for h in histories)}
    write_json(_artifact(cfg, "ingest_summary.json"), summary)
    return summary


_WORKER: dict = {}


def _init_extractor(index, tables, mode):
    _WORKER["extractor"] = Extractor(index, tables)
    _WORKER["mode"] = mode


def _extract_one(history):
    return [m.as_record(history.author)
            for m in _WORKER["extractor"].user_mentions(history, _WORKER["mode"])]


def run_extract(cfg: PipelineConfig) -> dict:
    require(_artifact(cfg, HISTORIES))
    index, tables = load_normalization(cfg)
    histories = read_histories(cfg)
    per_user = _pmap(_extract_one, histories, cfg.workers, _init_extractor,
                     (index, tables, cfg.extraction_mode))
    n = write_jsonl(_artifact(cfg, MENTIONS), (r for recs in per_user for r in recs))
    return {"users": len(histories), "mentions": n}


def run_infer(cfg: PipelineConfig) -> dict:
    require(_artifact(cfg, HISTORIES), _artifact(cfg, MENTIONS))
    index, _ = load_normalization(cfg)
    mentions: dict[str, list[EntityMention]] = defaultdict(list)
    for rec in read_jsonl(_artifact(cfg, MENTIONS)):
        mentions[rec["author"]].append(EntityMention.from_record(rec))
    d = cfg.dbscan
    records = []
    located = 0
    histories = read_histories(cfg)
    for h in histories:
        guesses = rank_user_locations(h, mentions.get(h.author, []), index, d.eps, d.min_pts,
                                      d.weight_by_count)
        located += guesses[0].has_guess
        for rank, g in enumerate(guesses):
            records.append({**g.as_record(), "rank": rank})
    write_jsonl(_artifact(cfg, GUESSES), records)
    return {"users": len(histories), "located": located, "guesses": len(records)}


def derive_labels(groups: dict[str, list[LocationGuess]], annotations: dict[str, Annotation],
                  aliases) -> dict[str, float]:
    """Grade each annotated user's top guess and map the grade to a 0/0.5/1 label."""
    out = {}
    for author, ann in annotations.items():
        top = groups.get(author, [None])[0]
        out[author] = GRADE_LABEL[grade_guess(top, ann, aliases)]
    return out


def training_rows(groups: dict[str, list[LocationGuess]], labels: dict[str, float]) -> dict[str, list]:
    """Positive rows from each located user's top-by-size guess, negative rows
    from users without a guess."""
    rows = {"positive": [], "negative": []}
    for author in sorted(labels):
        guesses = groups.get(author)
        if not guesses:
            continue
        top = guesses[0]
        rows["positive" if top.has_guess else "negative"].append((top.features, labels[author]))
    return rows


def _write_curves(cfg: PipelineConfig, variant: str, scores, labels) -> None:
    fpr, tpr, thr = roc_curve(scores, labels)
    write_csv(cfg.output_dir / f"holdout_roc_{variant}.csv", ["fpr", "tpr", "threshold"],
              ([repr(float(a)), repr(float(b)), repr(float(c))] for a, b, c in zip(fpr, tpr, thr)))
    prec, rec, pthr = precision_recall_curve(scores, labels)
    write_csv(cfg.output_dir / f"holdout_pr_{variant}.csv", ["precision", "recall", "threshold"],
              ([repr(float(a)), repr(float(b)), repr(float(c))] for a, b, c in zip(prec, rec, pthr)))
    fig_dir = cfg.output_dir / "figures"
    plotting.plot_roc(fpr, tpr, evaluate_auc(scores, labels), fig_dir / f"roc_{variant}.png",
                      title=f"ROC, {variant} model")
    plotting.plot_pr(prec, rec, fig_dir / f"pr_{variant}.png", title=f"Precision-recall, {variant} model")


def run_train_confidence(cfg: PipelineConfig) -> dict:
    require(_artifact(cfg, GUESSES))
    if cfg.paths.labels is None and cfg.paths.annotations is None:
        raise MissingInput("train-confidence needs paths.labels or paths.annotations")
    require(cfg.paths.labels or cfg.paths.annotations)
    groups = read_guess_groups(_artifact(cfg, GUESSES))
    if cfg.paths.labels:
        labels = read_labels(cfg.paths.labels)
        source = "labels"
    else:
        labels = derive_labels(groups, read_annotations(cfg.paths.annotations),
                               load_tables(cfg.paths.tables).aliases)
        source = "annotations"
    rows = training_rows(groups, labels)
    c = cfg.confidence
    params = ForestParams(seed=cfg.seed, n_trees=c.n_trees, max_depth=c.max_depth,
                          min_leaf=c.min_leaf, features_per_split=c.features_per_split)
    report = {"label_source": source, "seed": cfg.seed, "holdout_fraction": c.holdout_fraction,
              "variants": {}}
    write_csv(cfg.output_dir / "labels_used.csv", ["author", "label"],
              ([a, labels[a]] for a in sorted(labels)))
    for variant in SCHEMAS:
        vrows = rows[variant]
        entry = {"n_rows": len(vrows)}
        report["variants"][variant] = entry
        if len(vrows) < MIN_TRAINING_ROWS:
            entry["skipped"] = f"fewer than {MIN_TRAINING_ROWS} labeled rows"
            log.warning("%s model skipped: %d labeled rows", variant, len(vrows))
            continue
        try:
            ho = holdout_evaluation(vrows, params, c.holdout_fraction)
        except TooFewRows as exc:
            entry["holdout"] = {"skipped": str(exc)}
        else:
            entry["holdout"] = {"n_train": ho["n_train"], "n_test": ho["n_test"], "auc": ho["auc"]}
            if ho["auc"] is not None:
                _write_curves(cfg, variant, ho["scores"], ho["labels"])
        forest = train_forest(vrows, params, variant)
        entry["label_counts"] = {str(k): sum(1 for _, y in vrows if y == k) for k in (0.0, 0.5, 1.0)}
        entry["positive_rate"] = sum(binarize_labels(y for _, y in vrows)) / len(vrows)
        entry["importances"] = forest.importance_by_name()
        write_json(model_path(cfg, variant), forest.as_dict())
    write_json(cfg.output_dir / "training_report.json", report)
    return report


def run_score(cfg: PipelineConfig) -> dict:
    pos_path = model_path(cfg, "positive")
    require(_artifact(cfg, GUESSES), pos_path)
    groups = read_guess_groups(_artifact(cfg, GUESSES))
    models = {"positive": Forest.from_dict(json.loads(pos_path.read_text(encoding="utf-8")))}
    neg_path = model_path(cfg, "negative")
    if neg_path.exists():
        models["negative"] = Forest.from_dict(json.loads(neg_path.read_text(encoding="utf-8")))
    scored_records, best_records = [], []
    for author in sorted(groups):
        guesses = groups[author]
        variant = "positive" if guesses[0].has_guess else "negative"
        forest = models.get(variant)
        if forest is not None:
            preds = forest.predict_matrix([g.features.values(variant) for g in guesses])
            guesses = [g.scored(p) for g, p in zip(guesses, preds)]
        for rank, g in enumerate(guesses):
            scored_records.append({**g.as_record(), "rank": rank})
        best_records.append(select_best(guesses).as_record())
    write_jsonl(_artifact(cfg, SCORED), scored_records)
    write_jsonl(_artifact(cfg, LOCATIONS), best_records)
    return {"users": len(best_records), "negative_model": "negative" in models}


def run_evaluate(cfg: PipelineConfig) -> dict:
    require(_artifact(cfg, LOCATIONS), cfg.paths.annotations)
    best = {g.user: g for g in read_locations(_artifact(cfg, LOCATIONS))}
    annotations = read_annotations(cfg.paths.annotations)
    aliases = load_tables(cfg.paths.tables).aliases
    grades = []
    rows = []
    for author in sorted(annotations):
        ann = annotations[author]
        guess = best.get(author)
        grade = grade_guess(guess, ann, aliases)
        grades.append(grade)
        c = guess.candidate if guess is not None else None
        rows.append([author, grade.value, c.city if c else "", c.admin1 if c else "",
                     c.country_code if c else "", ann.city or "", ann.admin1 or "",
                     ann.country or "", int(ann.none_findable)])
    report = accuracy_report(grades)
    write_csv(cfg.output_dir / "grades.csv",
              ["author", "grade", "guess_city", "guess_admin1", "guess_country",
               "city", "admin1", "country", "none_findable"], rows)
    write_json(cfg.output_dir / "evaluation.json", report.as_dict())
    write_text(cfg.output_dir / "evaluation.txt", report.render())
    return report.as_dict()


def _topic_posts(histories, authors: set[str] | None, subreddits: set[str]):
    for h in histories:
        if authors is not None and h.author not in authors:
            continue
        for p in h.posts:
            if not subreddits or p.subreddit.lower() in subreddits:
                yield p


def run_topics(cfg: PipelineConfig) -> dict:
    require(_artifact(cfg, HISTORIES), _artifact(cfg, LOCATIONS), cfg.paths.vote_shares)
    t = cfg.topics
    topics = topic_map(t.keywords)
    start, end = Month.parse(t.start), Month.parse(t.end)
    shares = read_vote_shares(cfg.paths.vote_shares)
    located = read_locations(_artifact(cfg, LOCATIONS))
    eligible = [g for g in located if g.has_guess and g.confidence is not None
                and g.confidence >= cfg.confidence.threshold]
    split = split_by_cohort(eligible, shares, t.vote_share_threshold)
    histories = read_histories(cfg)
    subs = {s.lower() for s in t.subreddits}
    rows = []
    for cohort, authors in (("all", None), ("red", split.red), ("blue", split.blue)):
        posts = list(_topic_posts(histories, authors, subs))
        for series in cohort_topic_series(posts, topics, start, end, cohort, t.scale):
            rows.extend(series.rows())
    write_csv(_artifact(cfg, TOPIC_SERIES), ["cohort", "topic", "month", "raw", "volume", "adjusted"], rows)
    kept = {g.user for g in eligible}
    below = sorted(g.user for g in located if g.has_guess and g.user not in kept)
    cohorts = {"threshold": cfg.confidence.threshold, "vote_share_threshold": t.vote_share_threshold,
               "red": sorted(split.red), "blue": sorted(split.blue),
               "excluded": dict(sorted(split.excluded.items())), "below_threshold": below}
    write_json(_artifact(cfg, COHORTS), cohorts)
    return {"red": len(split.red), "blue": len(split.blue), "excluded": len(split.excluded),
            "rows": len(rows)}


def read_topic_series(path) -> dict[tuple[str, str], TopicSeries]:
    points: dict = defaultdict(dict)
    raw: dict = defaultdict(dict)
    volume: dict = defaultdict(dict)
    for i, row in enumerate(read_csv(path), 2):
        try:
            key = (row["cohort"], row["topic"])
            m = Month.parse(row["month"])
            points[key][m] = float(row["adjusted"])
            raw[key][m] = int(row["raw"])
            volume[key][m] = int(row["volume"])
        except (KeyError, ValueError):
            raise DataError(f"{path}:{i}: malformed topic series row") from None
    return {k: TopicSeries(k[1], k[0], points[k], raw[k], volume[k]) for k in points}


def run_regress(cfg: PipelineConfig) -> dict:
    require(_artifact(cfg, TOPIC_SERIES))
    series = read_topic_series(_artifact(cfg, TOPIC_SERIES))
    cutoff = Month.parse(cfg.topics.covid_cutoff)
    topics = list(topic_map(cfg.topics.keywords))
    results = {}
    for topic in topics:
        red = series.get(("red", topic), TopicSeries(topic, "red", {}))
        blue = series.get(("blue", topic), TopicSeries(topic, "blue", {}))
        results[topic] = ols_fit(build_design(red, blue, cutoff))
    write_text(cfg.output_dir / "regression.txt", report_table(results))
    rows = report_rows(results)
    write_csv(cfg.output_dir / "regression.csv", ["topic", "term", "coef", "se", "t", "p", "stars"],
              ([r["topic"], r["term"], repr(r["coef"]), repr(r["se"]), repr(r["t"]), repr(r["p"]),
                r["stars"]] for r in rows))
    return {"topics": len(results), "terms": list(TERMS)}


def run_export(cfg: PipelineConfig) -> dict:
    require(_artifact(cfg, LOCATIONS), cfg.paths.populations)
    located = [g for g in read_locations(_artifact(cfg, LOCATIONS)) if g.has_guess]
    populations = read_populations(cfg.paths.populations)
    threshold = cfg.confidence.threshold
    summary = cohort_summary(located, threshold, populations)
    kept = [g for g in located if g.confidence >= threshold]
    write_csv(cfg.output_dir / "cohort.csv",
              ["author", "city", "admin1", "country", "latitude", "longitude", "confidence"],
              ([g.user, g.candidate.city or "", g.candidate.admin1 or "", g.candidate.country_code,
                repr(g.candidate.latitude), repr(g.candidate.longitude), repr(g.confidence)]
               for g in sorted(kept, key=lambda g: g.user)))
    write_json(cfg.output_dir / "cohort_summary.json", summary.as_dict())
    write_csv(cfg.output_dir / "state_rates.csv", ["state", "count", "rate"],
              ([s, c, repr(r)] for s, c, r in summary.state_rates))
    plotting.plot_confidence_hist([g.confidence for g in located], threshold,
                                  cfg.output_dir / "figures" / "confidence_hist.png")
    return summary.as_dict()


STAGES: dict[str, Callable[[PipelineConfig], dict]] = {
    "ingest": run_ingest,
    "extract": run_extract,
    "infer": run_infer,
    "train-confidence": run_train_confidence,
    "score": run_score,
    "evaluate": run_evaluate,
    "topics": run_topics,
    "regress": run_regress,
    "export": run_export,
}


def run(command: str, cfg: PipelineConfig) -> dict:
    return STAGES[command](cfg)


def run_all(cfg: PipelineConfig, commands: Iterable[str] = tuple(STAGES)) -> dict:
    return {c: run(c, cfg) for c in commands}
