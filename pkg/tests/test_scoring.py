import math
import random
import string

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vocalize.errors import ConfigMismatch, InvalidScoringConfig, LengthMismatch, ZeroVector
from vocalize.scoring import (
    ScoringConfig,
    combined_score,
    keyword_score,
    levenshtein,
    normalize_text,
    shape_score_cosine,
    shape_score_profile,
)

from oracles import cosine as cosine_oracle
from oracles import levenshtein_matrix, levenshtein_recursive


class TestNormalize:
    def test_catch_phrase(self):
        assert normalize_text("I love Berlin") == "i love berlin"

    def test_messy_input(self):
        assert normalize_text("  I  LOVE,  Berlin! ") == "i love berlin"

    def test_empty(self):
        assert normalize_text("") == ""

    def test_idempotent(self):
        for text in ("Hello, World!", "  a  b  ", "ünïcödé?!"):
            once = normalize_text(text)
            assert normalize_text(once) == once


class TestLevenshtein:
    def test_identical(self):
        assert levenshtein("abc", "abc") == 0

    def test_insertions_only(self):
        assert levenshtein("", "abc") == 3

    def test_substitution_and_insertion(self):
        assert levenshtein("i love berlin", "we love berlin") == 2

    def test_against_full_matrix_oracle(self):
        rng = random.Random(99)
        for _ in range(300):
            a = "".join(rng.choices("abcde", k=rng.randint(0, 12)))
            b = "".join(rng.choices("abcde", k=rng.randint(0, 12)))
            assert levenshtein(a, b) == levenshtein_matrix(a, b)

    def test_oracles_agree_with_each_other(self):
        rng = random.Random(5)
        for _ in range(50):
            a = "".join(rng.choices("abc", k=rng.randint(0, 6)))
            b = "".join(rng.choices("abc", k=rng.randint(0, 6)))
            assert levenshtein_matrix(a, b) == levenshtein_recursive(a, b)

    @given(st.text(alphabet="abcdef", max_size=8),
           st.text(alphabet="abcdef", max_size=8),
           st.text(alphabet="abcdef", max_size=8))
    def test_triangle_inequality(self, a, b, c):
        assert levenshtein(a, c) <= levenshtein(a, b) + levenshtein(b, c)


class TestKeywordScore:
    def test_identical_is_one(self):
        assert keyword_score("I love Berlin", "I love Berlin").value == 1.0

    def test_disjoint_characters_zero(self):
        assert keyword_score("xyz", "abc").value == 0.0

    def test_two_edits(self):
        score = keyword_score("we love berlin", "i love berlin")
        assert score.distance == 2
        assert score.longer_len == 14
        assert score.value == pytest.approx(1 - 2 / 14)

    def test_both_empty(self):
        assert keyword_score("", "").value == 1.0

    def test_one_empty(self):
        assert keyword_score("", "hello").value == 0.0
        assert keyword_score("hello", "").value == 0.0

    @given(st.text(max_size=20), st.text(max_size=20))
    @settings(max_examples=60)
    def test_symmetry(self, a, b):
        assert keyword_score(a, b).value == pytest.approx(keyword_score(b, a).value)

    @given(st.text(max_size=30))
    def test_self_score_is_one(self, a):
        assert keyword_score(a, a).value == 1.0

    @given(st.text(alphabet="abcdefgh", min_size=1, max_size=15),
           st.text(alphabet="12345678", min_size=1, max_size=15))
    def test_disjoint_alphabets_score_zero(self, a, b):
        assert keyword_score(a, b).value == 0.0

    @given(st.text(max_size=25), st.text(max_size=25))
    @settings(max_examples=60)
    def test_bounds(self, a, b):
        score = keyword_score(a, b)
        assert 0.0 <= score.value <= 1.0
        assert score.distance <= score.longer_len


class TestShapeScores:
    def test_cosine_self_similarity(self):
        u = [float(i % 7 + 1) for i in range(40)]
        assert shape_score_cosine(u, u).value == pytest.approx(1.0, abs=1e-12)

    def test_cosine_disjoint_support(self):
        u = [1.0] * 20 + [0.0] * 20
        v = [0.0] * 20 + [1.0] * 20
        assert shape_score_cosine(u, v).value == 0.0

    def test_cosine_hand_computed(self):
        u = [3.0, 4.0] + [0.0] * 38
        v = [4.0, 3.0] + [0.0] * 38
        assert shape_score_cosine(u, v).value == pytest.approx(24 / 25)
        assert shape_score_cosine(u, v).value == pytest.approx(cosine_oracle(u, v))

    def test_cosine_scale_invariance(self):
        rng = random.Random(2)
        for _ in range(100):
            u = [rng.random() for _ in range(40)]
            c = rng.uniform(0.01, 50)
            assert shape_score_cosine(u, [c * x for x in u]).value == pytest.approx(
                1.0, abs=1e-12
            )

    def test_cosine_zero_norm(self):
        assert shape_score_cosine([0.0] * 40, [1.0] * 40).value == 0.0

    def test_cosine_symmetric_and_bounded(self):
        rng = random.Random(4)
        for _ in range(100):
            u = [rng.random() for _ in range(40)]
            v = [rng.random() for _ in range(40)]
            a = shape_score_cosine(u, v).value
            b = shape_score_cosine(v, u).value
            assert a == pytest.approx(b, abs=1e-12)
            assert 0.0 <= a <= 1.0 + 1e-12

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            shape_score_cosine([1.0] * 40, [1.0] * 39)

    def test_profile_identical(self):
        u = [float(i + 1) for i in range(40)]
        assert shape_score_profile(u, u).value == pytest.approx(1.0)

    def test_profile_extreme_mismatch(self):
        u = [1.0] * 40
        v = [0.0] * 39 + [1.0]
        # 39 bins differ by 1 after peak normalization
        assert shape_score_profile(u, v).value == pytest.approx(1 - 39 / 40)

    def test_profile_peak_normalization(self):
        v = [float(i % 5 + 1) for i in range(40)]
        u = [2 * x for x in v]
        assert shape_score_profile(u, v).value == pytest.approx(1.0)

    def test_profile_zero_vector(self):
        with pytest.raises(ZeroVector):
            shape_score_profile([0.0] * 40, [1.0] * 40)


class TestCombinedScore:
    def test_equal_weights_perfect(self):
        cfg = ScoringConfig()
        k = keyword_score("a", "a")
        s = shape_score_cosine([1.0] * 40, [1.0] * 40)
        assert combined_score(k, s, cfg) == pytest.approx(1.0, abs=1e-12)

    def test_keyword_only_pass_through(self):
        cfg = ScoringConfig(shape_enabled=False)
        k = keyword_score("abcdabcdab", "abcdabc")  # any value
        assert combined_score(k, None, cfg) == k.value

    def test_weighted_mean(self):
        from vocalize.scoring import KeywordScore, ShapeScore

        cfg = ScoringConfig(keyword_weight=0.25, shape_weight=0.75)
        k = KeywordScore(0.8, 1, 5, "a", "b")
        s = ShapeScore(0.6, "cosine")
        assert combined_score(k, s, cfg) == pytest.approx(0.65)

    def test_missing_score_raises(self):
        with pytest.raises(ConfigMismatch):
            combined_score(None, None, ScoringConfig())

    def test_monotone_in_each_input(self):
        from vocalize.scoring import KeywordScore, ShapeScore

        cfg = ScoringConfig(keyword_weight=0.3, shape_weight=0.7)
        prev = -1.0
        for kv in [0.0, 0.25, 0.5, 0.75, 1.0]:
            value = combined_score(
                KeywordScore(kv, 0, 1, "", ""), ShapeScore(0.5, "cosine"), cfg
            )
            assert value >= prev
            prev = value

    def test_config_validation(self):
        with pytest.raises(InvalidScoringConfig):
            ScoringConfig(keyword_enabled=False, shape_enabled=False)
        with pytest.raises(InvalidScoringConfig):
            ScoringConfig(keyword_weight=0.0, shape_weight=0.0)
        with pytest.raises(InvalidScoringConfig):
            ScoringConfig(shape_algorithm="fourier")
