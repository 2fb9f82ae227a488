import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geocohort.confidence import FeatureVector
from geocohort.corpus import Post, UserHistory
from geocohort.extraction import EntityMention
from geocohort.gazetteer import GeoCandidate
from geocohort.inference import (NOISE, CoordPoint, LocationGuess, cluster_representative, dbscan,
                                 pool_coordinates, rank_user_locations, select_best)

from oracles import dbscan_components, dbscan_textbook

T0 = 1583020800


def mention(name, count=1):
    return EntityMention(name, (name,), "text", count)


def history(n=3, author="u"):
    return UserHistory(author, tuple(Post(str(i), author, "x", "comment", T0 + 86400 * i, "")
                                     for i in range(n)))


def test_dbscan_examples():
    assert dbscan([(0, 0)]).tolist() == [NOISE]
    assert dbscan([(0, 0), (1, 1), (10, 10), (11, 11)]).tolist() == [0, 0, 1, 1]
    assert dbscan([]).tolist() == []


def test_dbscan_boundary_inclusive():
    assert dbscan([(0, 0), (2.5, 0)]).tolist() == [0, 0]
    assert dbscan([(0, 0), (1.5, 2.0)]).tolist() == [0, 0]  # distance exactly 2.5
    assert dbscan([(0, 0), (2.5000001, 0)]).tolist() == [NOISE, NOISE]


def test_dbscan_random_vs_oracle():
    rng = np.random.default_rng(5)
    pts = np.column_stack([rng.uniform(-90, 90, 200), rng.uniform(-180, 180, 200)])
    assert dbscan(pts, 2.5, 2).tolist() == dbscan_components(pts.tolist(), 2.5)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(-20, 20), st.integers(-20, 20)), max_size=40),
       st.sampled_from([1.0, 2.5, 4.0]), st.integers(1, 5))
def test_dbscan_matches_textbook_with_duplicates(pts, eps, min_pts):
    # integer grid forces duplicates and exact-eps ties
    pts = [(x / 2, y / 2) for x, y in pts]
    assert dbscan(pts, eps, min_pts).tolist() == dbscan_textbook(pts, eps, min_pts)


def test_dbscan_rejects_bad_params():
    with pytest.raises(ValueError):
        dbscan([(0, 0)], eps=0)
    with pytest.raises(ValueError):
        dbscan([(0, 0)], min_pts=0)


def test_pool_counts(index):
    assert len(pool_coordinates([mention("boston")], index)) == 1
    n_spring = len(index.lookup("springfield"))
    assert n_spring >= 5
    assert len(pool_coordinates([mention("springfield")], index)) == n_spring
    pts = pool_coordinates([mention("boston", 3), mention("lowell", 2)], index)
    assert sorted(p.candidate.primary_name for p in pts) == ["boston"] * 3 + ["lowell"] * 2
    assert len(pool_coordinates([mention("boston", 3)], index, weight_by_count=False)) == 1
    for p in pts:
        assert (p.latitude, p.longitude) == (p.candidate.latitude, p.candidate.longitude)


def test_massachusetts_example(index):
    ms = [mention("massachusetts"), mention("boston"), mention("lowell")]
    guesses = rank_user_locations(history(), ms, index)
    assert len(guesses) == 1
    g = guesses[0]
    assert g.candidate.primary_name == "boston" and g.cluster.size_fraction == 1.0


def cand(gid, name, gran, pop, lat=0.0, lon=0.0):
    return GeoCandidate(gid, name, lat, lon, "US", "s" if gran != "country" else None,
                        name if gran == "city" else None, pop, gran)


def points(layout):
    out = []
    for c, count in layout:
        m = EntityMention(c.primary_name, (c.primary_name,), "text", count)
        out += [CoordPoint(c.latitude, c.longitude, c, m)] * count
    return out


def test_priority_rules():
    boston, lowell = cand(1, "boston", "city", 600000), cand(2, "lowell", "city", 100000)
    state = cand(3, "massachusetts", "admin1", 7000000)
    assert cluster_representative(points([(boston, 1), (lowell, 5)])) == lowell
    assert cluster_representative(points([(boston, 1), (lowell, 1)])) == boston
    assert cluster_representative(points([(state, 9), (lowell, 1)])) == lowell
    twin_a, twin_b = cand(8, "twin", "city", 50), cand(4, "twin", "city", 50)
    assert cluster_representative(points([(twin_a, 1), (twin_b, 1)])) == twin_b


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.integers(1, 30), st.sampled_from(["city", "admin1", "country"]),
                          st.integers(0, 5), st.integers(1, 4)), min_size=1, max_size=8,
                unique_by=lambda t: t[0]),
       st.randoms(use_true_random=False))
def test_representative_permutation_invariant(layout, rnd):
    pts = points([(cand(gid, f"p{gid}", g, pop), k) for gid, g, pop, k in layout])
    first = cluster_representative(pts)
    rnd.shuffle(pts)
    assert cluster_representative(pts) == first


def test_no_guess_for_single_point(index):
    (g,) = rank_user_locations(history(4), [mention("boston")], index)
    assert not g.has_guess and g.features.variant == "negative"
    assert g.features.total_posts == 4 and g.features.total_entities == 1


def test_two_clusters_ordered_by_size(index):
    ms = [mention("boston", 2), mention("lowell", 1), mention("london", 2)]
    guesses = rank_user_locations(history(), ms, index)
    names = [(g.candidate.primary_name, g.candidate.country_code) for g in guesses]
    assert names[0] == ("boston", "US")
    fracs = [g.cluster.size_fraction for g in guesses]
    assert fracs == sorted(fracs, reverse=True)
    assert sum(fracs) <= 1.0 + 1e-12


def test_size_fractions_sum_to_one_without_noise(index):
    guesses = rank_user_locations(history(), [mention("boston", 2), mention("lowell", 1)], index)
    assert sum(g.cluster.size_fraction for g in guesses) == pytest.approx(1.0)


def test_select_best_argmax_and_ties():
    fv = FeatureVector(1, 1, 1.0, 0.5, 1, 10)
    a = LocationGuess("u", cand(1, "a", "city", 1), fv, confidence=0.4)
    b = LocationGuess("u", cand(2, "b", "city", 1), fv, confidence=0.9)
    c = LocationGuess("u", cand(3, "c", "city", 1), fv, confidence=0.9)
    assert select_best([a, b, c]) is b


def test_guess_record_round_trip(index):
    (g,) = rank_user_locations(history(), [mention("boston", 2)], index)
    g = g.scored(0.75)
    back = LocationGuess.from_record(g.as_record())
    assert back.candidate == g.candidate and back.features == g.features and back.confidence == 0.75
