import json
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geocohort.corpus import (IngestStats, Month, Post, group_by_user, history_from_record,
                              history_to_record, merge_histories, month_range, monthly_volume,
                              parse_post_record, post_to_record, read_posts)
from geocohort.errors import MalformedRecord

T0 = 1583020800  # 2020-03-01T00:00:00Z


def test_comment_record():
    p = parse_post_record(json.dumps({"id": "c1", "author": "u1", "subreddit": "Opiates",
                                      "created_utc": T0, "body": "hi"}))
    assert p.kind == "comment" and p.subreddit == "opiates" and p.title is None


def test_submission_inferred_from_title():
    p = parse_post_record(json.dumps({"id": "s1", "author": "u1", "subreddit": "heroin",
                                      "created_utc": T0, "title": "t", "body": ""}))
    assert p.kind == "submission"
    assert p.text == "t"


def test_selftext_and_prefix():
    p = parse_post_record(json.dumps({"id": "s2", "author": "u", "subreddit": "r/Boston",
                                      "created_utc": str(T0), "title": "a", "selftext": "b"}))
    assert p.subreddit == "boston" and p.body == "b" and p.text == "a\nb"


def test_missing_body_is_empty_when_title_present():
    p = parse_post_record(json.dumps({"id": "s3", "author": "u", "subreddit": "x",
                                      "created_utc": T0, "title": "only"}))
    assert p.body == ""


@pytest.mark.parametrize("line", [
    "not-a-record",
    "[1, 2]",
    json.dumps({"author": "u", "subreddit": "x", "created_utc": T0, "body": ""}),
    json.dumps({"id": "a", "subreddit": "x", "created_utc": T0, "body": ""}),
    json.dumps({"id": "a", "author": "u", "subreddit": "x", "created_utc": 0, "body": ""}),
    json.dumps({"id": "a", "author": "u", "subreddit": "x", "created_utc": "soon", "body": ""}),
    json.dumps({"id": "a", "author": "u", "subreddit": "x", "created_utc": T0}),
    json.dumps({"id": "a", "author": "u", "subreddit": "x", "created_utc": T0, "body": "",
                "kind": "comment", "title": "t"}),
])
def test_malformed(line):
    with pytest.raises(MalformedRecord):
        parse_post_record(line)


def test_read_posts_skip_and_strict(tmp_path):
    path = tmp_path / "dump.jsonl"
    good = json.dumps({"id": "1", "author": "a", "subreddit": "x", "created_utc": T0, "body": "b"})
    path.write_text(good + "\nbroken\n\n" + good.replace('"1"', '"2"') + "\n")
    stats = IngestStats()
    posts = list(read_posts([path], stats=stats))
    assert len(posts) == 2 and stats.read == 3 and stats.malformed == 1 and stats.kept == 2
    with pytest.raises(MalformedRecord, match="dump.jsonl:2"):
        list(read_posts([path], strict=True))


def _post(i, author, ts, sub="x"):
    return Post(str(i), author, sub, "comment", ts, "body")


def test_group_by_user_counts_and_order():
    posts = [_post(1, "a", T0 + 5), _post(2, "b", T0), _post(3, "a", T0 + 1),
             _post(4, "a", T0 + 3), _post(5, "b", T0 + 9)]
    hs = group_by_user(posts)
    assert [(h.author, h.post_count) for h in hs] == [("a", 3), ("b", 2)]
    assert [p.created_utc for p in hs[0].posts] == [T0 + 1, T0 + 3, T0 + 5]
    assert hs[0].first_post == T0 + 1 and hs[0].last_post == T0 + 5
    assert group_by_user([]) == []


def test_deleted_authors_dropped():
    hs = group_by_user([_post(1, "[deleted]", T0), _post(2, "[removed]", T0), _post(3, "z", T0)])
    assert [h.author for h in hs] == ["z"]


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.sampled_from("abcde"), st.integers(1, 10**9)), max_size=60),
       st.randoms(use_true_random=False))
def test_grouping_partition_and_order_invariance(layout, rnd):
    posts = [_post(i, a, ts) for i, (a, ts) in enumerate(layout)]
    hs = group_by_user(posts)
    assert sum(h.post_count for h in hs) == len(posts)
    shuffled = posts[:]
    rnd.shuffle(shuffled)
    assert group_by_user(shuffled) == hs
    for h in hs:
        assert all(p.author == h.author for p in h.posts)
        assert h.first_post <= h.last_post


def test_merge_shards_equals_single_pass():
    rng = random.Random(3)
    posts = [_post(i, rng.choice("pqrs"), rng.randint(T0, T0 + 10**6)) for i in range(200)]
    merged = merge_histories(group_by_user(posts[:70]), group_by_user(posts[70:]))
    assert merged == group_by_user(posts)


post_strategy = st.builds(
    lambda i, a, s, ts, body, title, tags: Post(str(i), a, s, "submission" if title is not None else "comment",
                                                ts, body, title, tags),
    st.integers(0, 10**6), st.text(min_size=1, max_size=8).filter(str.strip),
    st.text(alphabet="abcdefghij_", min_size=1, max_size=10), st.integers(1, 2**40),
    st.text(max_size=40), st.none() | st.text(max_size=20),
    st.none() | st.lists(st.text(max_size=10), max_size=3).map(tuple))


@settings(max_examples=100, deadline=None)
@given(post_strategy)
def test_round_trip(post):
    again = parse_post_record(json.dumps(post_to_record(post)))
    assert again == post


def test_history_round_trip():
    hs = group_by_user([_post(1, "a", T0 + 5), _post(2, "a", T0)])
    assert history_from_record(json.loads(json.dumps(history_to_record(hs[0])))) == hs[0]


def test_monthly_volume_zero_fill_and_boundary():
    end_of_march = 1585699199  # 2020-03-31T23:59:59Z
    posts = [_post(i, "a", T0 + i) for i in range(4)] + [_post(9, "a", end_of_march)]
    vol = monthly_volume(posts, Month(2020, 3), Month(2020, 4))
    assert vol == {Month(2020, 3): 5, Month(2020, 4): 0}


def test_monthly_volume_binomial():
    rng = np.random.default_rng(0)
    start, end = 1577836800, 1609459200  # calendar 2020
    ts = rng.integers(start, end, size=10_000)
    posts = [_post(i, "a", int(t)) for i, t in enumerate(ts)]
    vol = monthly_volume(posts, Month(2020, 1), Month(2020, 12))
    edges = [1577836800 + 86400 * d for d in
             np.cumsum([0, 31, 29, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31])]
    for k, m in enumerate(month_range(Month(2020, 1), Month(2020, 12))):
        p = (edges[k + 1] - edges[k]) / (end - start)
        mu, sd = 10_000 * p, (10_000 * p * (1 - p)) ** 0.5
        assert abs(vol[m] - mu) <= 3 * sd


def test_monthly_volume_additive():
    a = [_post(i, "a", T0 + 86400 * 40 * i) for i in range(10)]
    b = [_post(i, "b", T0 + 86400 * 17 * i) for i in range(10)]
    rng = (Month(2020, 1), Month(2021, 12))
    va, vb, vab = monthly_volume(a, *rng), monthly_volume(b, *rng), monthly_volume(a + b, *rng)
    assert all(vab[m] == va[m] + vb[m] for m in vab)


def test_month_helpers():
    assert str(Month.parse("2020-03")) == "2020-03"
    assert month_range(Month(2019, 11), Month(2020, 2))[-1] == Month(2020, 2)
    assert len(month_range(Month(2018, 9), Month(2021, 8))) == 36
    with pytest.raises(ValueError):
        Month.parse("2020-13")
    with pytest.raises(ValueError):
        month_range(Month(2020, 2), Month(2020, 1))
