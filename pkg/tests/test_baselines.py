import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from smiselect.baselines import (
    QueryPhraseSet,
    badge_select,
    bundled_query_path,
    entropy_select,
    kmeans_select,
    kmeanspp,
    least_confidence_select,
    load_query_phrases,
    margin_select,
    random_select,
    regex_select,
)
from smiselect.classifier import SoftmaxTextClassifier
from smiselect.errors import ConfigError, ContractViolation
from smiselect.features import Document


# -- random ------------------------------------------------------------------


def test_random_full_budget_is_permutation():
    ids = [4, 7, 9, 11]
    picked = random_select(ids, 4, seed=0)
    assert sorted(picked) == sorted(ids)


def test_random_seed_reproducible():
    ids = list(range(100))
    assert random_select(ids, 10, seed=5) == random_select(ids, 10, seed=5)


def test_random_budget_validation():
    with pytest.raises(ConfigError):
        random_select([1, 2], 3, seed=0)


def test_random_rare_fraction_matches_binomial_expectation():
    # 1:9 imbalance; over many seeded draws the selected rare fraction
    # concentrates on 0.1
    ids = list(range(1000))
    rare = set(range(100))
    fractions = [
        sum(1 for i in random_select(ids, 10, seed=s) if i in rare) / 10
        for s in range(10_000)
    ]
    assert abs(np.mean(fractions) - 0.1) < 0.01


# -- uncertainty trio --------------------------------------------------------


def test_entropy_hand_values_and_ordering():
    probs = np.array([[0.9, 0.1], [0.6, 0.4], [0.5, 0.5]])
    assert entropy_select(probs, 2) == [2, 1]
    uniform = np.array([[0.5, 0.5], [1.0, 0.0]])
    h = -np.sum(np.where(uniform > 0, uniform * np.log(np.where(uniform > 0, uniform, 1)), 0), axis=1)
    assert h[0] == pytest.approx(math.log(2))
    assert h[1] == 0.0
    assert entropy_select(uniform, 1) == [0]


def test_entropy_rejects_bad_rows():
    with pytest.raises(ContractViolation):
        entropy_select(np.array([[0.7, 0.7]]), 1)


def test_least_confidence_ordering():
    probs = np.array([[0.9, 0.1], [0.5, 0.5]])
    assert least_confidence_select(probs, 1) == [1]
    three = np.array([[0.4, 0.35, 0.25], [0.8, 0.1, 0.1]])
    assert least_confidence_select(three, 1) == [0]  # max prob 0.4 < 0.8


def test_least_confidence_tie_breaks_low_ids():
    probs = np.tile([0.6, 0.4], (5, 1))
    assert least_confidence_select(probs, 3) == [0, 1, 2]


def test_margin_ordering():
    probs = np.array([[1.0, 0.0], [0.5, 0.5], [0.7, 0.3]])
    assert margin_select(probs, 3) == [1, 2, 0]


def test_margin_three_class_value():
    # (0.4, 0.35, 0.25): margin 0.05 beats (0.5, 0.4, 0.1): margin 0.1
    probs = np.array([[0.5, 0.4, 0.1], [0.4, 0.35, 0.25]])
    assert margin_select(probs, 1) == [1]


@settings(max_examples=60)
@given(
    st.lists(
        st.floats(0.01, 0.99).map(lambda x: round(x, 3)),
        min_size=3, max_size=8, unique_by=lambda x: round(abs(x - 0.5), 6),
    )
)
def test_binary_uncertainty_rankings_agree(p1s):
    probs = np.array([[p, 1.0 - p] for p in p1s])
    budget = len(p1s)
    assert (
        entropy_select(probs, budget)
        == least_confidence_select(probs, budget)
        == margin_select(probs, budget)
    )


# -- kmeans++ ----------------------------------------------------------------


def test_kmeanspp_single_point():
    assert kmeanspp(np.array([[3.0, 1.0]]), 1, seed=0) == [0]


def test_kmeanspp_distinct_indices():
    rng = np.random.default_rng(0)
    points = rng.normal(size=(20, 3))
    for seed in range(10):
        picks = kmeanspp(points, 8, seed=seed)
        assert len(set(picks)) == 8


def test_kmeanspp_collinear_d2_weights():
    # from first center 0, D^2 = [0, 1, 100]: point 10 is drawn with
    # probability 100/101
    points = np.array([[0.0], [1.0], [10.0]])
    hits = total = 0
    for seed in range(3000):
        picks = kmeanspp(points, 2, seed=seed)
        if picks[0] == 0:
            total += 1
            hits += picks[1] == 2
    assert total > 500
    assert abs(hits / total - 100 / 101) < 0.02


def test_kmeanspp_never_repeats_duplicate_while_distinct_remain():
    points = np.array([[1.0, 1.0], [1.0, 1.0], [9.0, 9.0]])
    for seed in range(50):
        picks = set(kmeanspp(points, 2, seed=seed))
        assert 2 in picks


def test_kmeanspp_all_duplicates_falls_back_deterministically():
    points = np.zeros((4, 2))
    picks = kmeanspp(points, 3, seed=1)
    assert len(set(picks)) == 3


# -- badge -------------------------------------------------------------------


def _random_model(rng, n_classes, dim):
    return SoftmaxTextClassifier(
        weights=rng.normal(size=(n_classes, dim)), bias=rng.normal(size=n_classes)
    )


def test_badge_full_budget_returns_everything():
    rng = np.random.default_rng(0)
    model = _random_model(rng, 3, 4)
    feats = rng.normal(size=(6, 4))
    assert sorted(badge_select(model, feats, 6, seed=0)) == list(range(6))


def test_badge_gradient_embedding_norm_structure():
    rng = np.random.default_rng(1)
    model = _random_model(rng, 3, 5)
    feats = rng.normal(size=(20, 5))
    probs = model.predict_proba(feats)
    grads = model.gradient_embedding(feats)
    for i in range(20):
        e = np.zeros(3)
        e[np.argmax(probs[i])] = 1.0
        expect = np.linalg.norm(probs[i] - e) * np.linalg.norm(feats[i])
        assert np.linalg.norm(grads[i]) == pytest.approx(expect, rel=1e-9)


def test_badge_avoids_duplicate_pairs():
    rng = np.random.default_rng(2)
    model = _random_model(rng, 2, 3)
    feats = np.array([[1.0, 2.0, 3.0], [1.0, 2.0, 3.0], [-5.0, 0.5, 8.0]])
    for seed in range(30):
        picks = set(badge_select(model, feats, 2, seed=seed, ids=[10, 11, 12]))
        assert 12 in picks


# -- regex -------------------------------------------------------------------


def queries(*phrases):
    return QueryPhraseSet(phrases=list(phrases))


def test_regex_counts_non_overlapping_matches():
    docs = [Document(0, "click the link click the link")]
    assert regex_select(queries("click the link"), docs, 1) == [0]
    # scoring detail: two matches beat one
    docs = [Document(0, "click the link"), Document(1, "click the link click the link")]
    assert regex_select(queries("click the link"), docs, 1) == [1]


def test_regex_zero_scores_tie_break():
    docs = [Document(3, "nothing here"), Document(1, "still nothing")]
    assert regex_select(queries("free gift"), docs, 1) == [1]


def test_regex_top_b_by_cumulative_count():
    docs = [
        Document(0, "win prizes win prizes"),
        Document(1, "plain text"),
        Document(2, "win prizes today"),
    ]
    assert regex_select(queries("win prizes"), docs, 2) == [0, 2]


def test_regex_case_insensitive_and_word_boundary():
    docs = [Document(0, "FREE GIFT inside"), Document(1, "freebie gifted")]
    assert regex_select(queries("free gift"), docs, 1) == [0]


def test_regex_empty_phrase_set_rejected():
    with pytest.raises(ConfigError):
        QueryPhraseSet(phrases=[])


# -- kmeans selector ---------------------------------------------------------


def test_kmeans_full_budget_all_ids():
    rng = np.random.default_rng(0)
    feats = rng.normal(size=(5, 2))
    assert sorted(kmeans_select(feats, 5, seed=0, ids=[7, 8, 9, 10, 11])) == [7, 8, 9, 10, 11]


def test_kmeans_two_separated_blobs():
    rng = np.random.default_rng(1)
    blob_a = rng.normal(size=(20, 2)) * 0.1
    blob_b = rng.normal(size=(20, 2)) * 0.1 + 100.0
    feats = np.vstack([blob_a, blob_b])
    for seed in range(5):
        picks = kmeans_select(feats, 2, seed=seed)
        assert (picks[0] < 20) != (picks[1] < 20)


def test_kmeans_duplicate_points_still_distinct_ids():
    # all-identical points leave most clusters empty every iteration, so the
    # farthest-point repair and the next-nearest-unused fallback both fire
    feats = np.zeros((6, 2))
    picks = kmeans_select(feats, 4, seed=3)
    assert len(set(picks)) == 4
    assert picks == kmeans_select(feats, 4, seed=3)


def test_kmeans_budget_validation():
    with pytest.raises(ConfigError):
        kmeans_select(np.zeros((2, 2)), 3, seed=0)


# -- fixtures ----------------------------------------------------------------


@pytest.mark.parametrize("tag,count", [("youtube", 15), ("sms", 25), ("tweet", 20)])
def test_bundled_fixtures_counts(tag, count):
    qs = load_query_phrases(bundled_query_path(tag), dataset_tag=tag)
    assert len(qs) == count
    assert all(p == p.lower() for p in qs.phrases)


def test_bundled_youtube_contains_known_exemplar():
    qs = load_query_phrases(bundled_query_path("youtube"), dataset_tag="youtube")
    assert "check out my latest video" in qs.phrases


def test_unknown_bundled_tag():
    with pytest.raises(ConfigError):
        bundled_query_path("custom")


# -- shared property ---------------------------------------------------------


def test_all_selectors_return_exactly_b_distinct_ids():
    rng = np.random.default_rng(4)
    n, budget = 25, 7
    ids = list(range(100, 100 + n))
    feats = rng.normal(size=(n, 3))
    probs = np.abs(rng.normal(size=(n, 2))) + 0.1
    probs /= probs.sum(axis=1, keepdims=True)
    model = _random_model(rng, 2, 3)
    docs = [Document(i, "some text") for i in ids]
    results = [
        random_select(ids, budget, seed=0),
        entropy_select(probs, budget, ids=ids),
        least_confidence_select(probs, budget, ids=ids),
        margin_select(probs, budget, ids=ids),
        badge_select(model, feats, budget, seed=0, ids=ids),
        regex_select(queries("some text"), docs, budget),
        kmeans_select(feats, budget, seed=0, ids=ids),
    ]
    for picked in results:
        assert len(picked) == budget
        assert len(set(picked)) == budget
        assert set(picked) <= set(ids)
