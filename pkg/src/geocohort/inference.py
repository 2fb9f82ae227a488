"""Per-user location ranking: pool candidate geocodes, cluster them with DBSCAN,
pick one representative per cluster and attach confidence features."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np
from scipy.spatial import cKDTree

from .confidence import FeatureVector
from .corpus import UserHistory
from .extraction import EntityMention, total_entities
from .gazetteer import GRANULARITY_RANK, GazetteerIndex, GeoCandidate

NOISE = -1


@dataclass(frozen=True)
class CoordPoint:
    latitude: float
    longitude: float
    candidate: GeoCandidate
    mention: EntityMention


@dataclass(frozen=True)
class Cluster:
    members: tuple[CoordPoint, ...]
    representative: GeoCandidate
    size_fraction: float


@dataclass(frozen=True)
class LocationGuess:
    user: str
    candidate: GeoCandidate | None
    features: FeatureVector
    cluster: Cluster | None = None
    confidence: float | None = None

    @property
    def has_guess(self) -> bool:
        return self.candidate is not None

    def scored(self, confidence: float) -> "LocationGuess":
        return replace(self, confidence=float(confidence))

    def as_record(self) -> dict:
        c = self.candidate
        rec = {
            "author": self.user,
            "candidate": c.as_record() if c else None,
            "city": c.city if c else None,
            "admin1": c.admin1 if c else None,
            "country": c.country_code if c else None,
            "lat": c.latitude if c else None,
            "lon": c.longitude if c else None,
            "cluster_size_fraction": self.features.cluster_size_fraction,
            "features": self.features.as_dict(),
            "confidence": self.confidence,
        }
        if self.cluster is not None:
            rec["cluster_members"] = sorted(p.candidate.gazetteer_id for p in self.cluster.members)
        return rec

    @classmethod
    def from_record(cls, rec: dict) -> "LocationGuess":
        cand = GeoCandidate.from_record(rec["candidate"]) if rec.get("candidate") else None
        return cls(rec["author"], cand, FeatureVector.from_dict(rec["features"]),
                   confidence=rec.get("confidence"))


def pool_coordinates(mentions: Sequence[EntityMention], index: GazetteerIndex,
                     weight_by_count: bool = True) -> list[CoordPoint]:
    """One point per (normalized name, candidate); repeated ``count`` times when weighting."""
    points = []
    for m in mentions:
        reps = m.count if weight_by_count else 1
        for name in m.normalized_names:
            for cand in index.lookup(name):
                p = CoordPoint(cand.latitude, cand.longitude, cand, m)
                points.extend([p] * reps)
    return points


def dbscan(points, eps: float = 2.5, min_pts: int = 2) -> np.ndarray:
    """DBSCAN on raw Euclidean (lat, lon) distance, neighbourhoods inclusive of eps.

    Returns an int array of cluster ids (``NOISE`` for noise). Clusters are
    numbered in order of their smallest member index.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if min_pts < 1:
        raise ValueError("min_pts must be >= 1")
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    n = len(pts)
    if n == 0:
        return np.empty(0, dtype=np.int64)

    # identical coordinates share one neighbourhood; count them by multiplicity
    uniq, first_idx, inverse, weight = np.unique(pts, axis=0, return_index=True,
                                                 return_inverse=True, return_counts=True)
    inverse = inverse.reshape(-1)
    tree = cKDTree(uniq)
    coarse = tree.query_ball_point(uniq, r=eps * (1 + 1e-9))
    neighbors = []
    for u, cand in enumerate(coarse):
        cand = np.asarray(cand, dtype=np.int64)
        dx = uniq[cand, 0] - uniq[u, 0]
        dy = uniq[cand, 1] - uniq[u, 1]
        neighbors.append(cand[np.sqrt(dx * dx + dy * dy) <= eps])
    mass = np.array([weight[nb].sum() for nb in neighbors])
    core = mass >= min_pts

    ulabel = np.full(len(uniq), NOISE, dtype=np.int64)
    next_label = 0
    for u in np.argsort(first_idx, kind="stable"):
        if ulabel[u] != NOISE or not core[u]:
            continue
        ulabel[u] = next_label
        stack = [u]
        while stack:
            v = stack.pop()
            for w in neighbors[v]:
                if ulabel[w] == NOISE:
                    ulabel[w] = next_label
                    if core[w]:
                        stack.append(w)
        next_label += 1

    labels = ulabel[inverse]
    # renumber by smallest member index
    order = {}
    for lab in labels:
        if lab != NOISE and lab not in order:
            order[lab] = len(order)
    return np.array([order.get(lab, NOISE) for lab in labels], dtype=np.int64)


def _priority(cand: GeoCandidate, mentions: int):
    return (GRANULARITY_RANK[cand.granularity], -mentions, -cand.population, cand.gazetteer_id)


def candidate_mention_counts(members: Sequence[CoordPoint]) -> dict[int, int]:
    """User mention count per candidate: summed over the distinct mentions that produced it."""
    seen = defaultdict(set)
    for p in members:
        seen[p.candidate.gazetteer_id].add(p.mention)
    return {gid: sum(m.count for m in ms) for gid, ms in seen.items()}


def cluster_representative(members: Sequence[CoordPoint]) -> GeoCandidate:
    """Most granular, then most mentioned, then most populous; gazetteer id breaks ties."""
    if not members:
        raise ValueError("empty cluster")
    counts = candidate_mention_counts(members)
    cands = {p.candidate.gazetteer_id: p.candidate for p in members}
    return min(cands.values(), key=lambda c: _priority(c, counts[c.gazetteer_id]))


def negative_features(history: UserHistory, mentions: Sequence[EntityMention]) -> FeatureVector:
    return FeatureVector(
        total_entities=total_entities(mentions),
        total_posts=history.post_count,
        history_duration_days=history.duration_days,
    )


def rank_user_locations(history: UserHistory, mentions: Sequence[EntityMention],
                        index: GazetteerIndex, eps: float = 2.5, min_pts: int = 2,
                        weight_by_count: bool = True) -> list[LocationGuess]:
    """Unscored guesses, one per cluster, largest cluster first.

    A user without any cluster gets a single no-guess record carrying the
    negative-model features.
    """
    points = pool_coordinates(mentions, index, weight_by_count)
    base = negative_features(history, mentions)
    labels = dbscan([(p.latitude, p.longitude) for p in points], eps, min_pts)
    groups: dict[int, list[CoordPoint]] = defaultdict(list)
    for p, lab in zip(points, labels):
        if lab != NOISE:
            groups[int(lab)].append(p)
    if not groups:
        return [LocationGuess(history.author, None, base)]

    guesses = []
    total = len(points)
    for lab in sorted(groups):
        members = groups[lab]
        rep = cluster_representative(members)
        cluster = Cluster(tuple(members), rep, len(members) / total)
        feats = replace(base, cluster_size_fraction=cluster.size_fraction,
                        is_us=int(rep.is_us), guess_population=rep.population)
        guesses.append(LocationGuess(history.author, rep, feats, cluster))
    # stable sort keeps cluster-id order among equal sizes
    guesses.sort(key=lambda g: -g.cluster.size_fraction)
    return guesses


def select_best(guesses: Sequence[LocationGuess]) -> LocationGuess:
    """Highest-confidence guess; earlier (larger-cluster) guesses win ties."""
    if not guesses:
        raise ValueError("no guesses")
    best = guesses[0]
    for g in guesses[1:]:
        if (g.confidence or 0.0) > (best.confidence or 0.0):
            best = g
    return best
