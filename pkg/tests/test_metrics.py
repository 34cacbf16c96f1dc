import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mfcorr.metrics import (
    DistanceMatrix,
    condensed_index,
    condensed_pair,
    cosine_distance,
    cosine_matrix,
    euclidean_distance,
    euclidean_matrix,
    hamming,
    hamming_matrix,
    levenshtein,
    levenshtein_matrix,
    levenshtein_normalized,
    pairwise_matrix,
)
from mfcorr.langgen import enumerate_meanings

from oracles import levenshtein_dp, random_token_sequence

tokens = st.lists(st.sampled_from("abcde"), max_size=10)


class TestHamming:
    def test_identity(self):
        assert hamming([0, 0, 0, 0, 0], [0, 0, 0, 0, 0]) == 0

    def test_full_flip(self):
        assert hamming([0, 0, 0, 0, 0], [1, 1, 1, 1, 1]) == 5

    def test_two_positions(self):
        assert hamming([1, 0, 1, 0, 1], [0, 0, 1, 0, 0]) == 2

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="length mismatch"):
            hamming([0, 1], [0, 1, 0])


class TestLevenshtein:
    def test_empty_against_any(self):
        assert levenshtein([], list("abcd")) == 4
        assert levenshtein(list("abc"), []) == 3
        assert levenshtein([], []) == 0

    def test_kitten_sitting(self):
        expected = levenshtein_dp("kitten", "sitting")
        assert expected == 3
        assert levenshtein(list("kitten"), list("sitting")) == expected

    def test_identity(self):
        assert levenshtein(list("same"), list("same")) == 0

    def test_token_level_not_character_level(self):
        assert levenshtein(("red", "cat"), ("red", "cart")) == 1

    @given(tokens, tokens)
    @settings(max_examples=300, deadline=None)
    def test_matches_oracle(self, x, y):
        assert levenshtein(x, y) == levenshtein_dp(x, y)

    @given(tokens, tokens, tokens)
    @settings(max_examples=150, deadline=None)
    def test_metric_axioms(self, x, y, z):
        assert levenshtein(x, x) == 0
        assert levenshtein(x, y) == levenshtein(y, x)
        assert levenshtein(x, z) <= levenshtein(x, y) + levenshtein(y, z)


class TestLevenshteinNormalized:
    def test_kitten_sitting(self):
        assert levenshtein_normalized(list("kitten"), list("sitting")) == pytest.approx(3 / 7)

    def test_identity(self):
        assert levenshtein_normalized(list("abc"), list("abc")) == 0.0

    def test_both_empty(self):
        assert levenshtein_normalized([], []) == 0.0

    @given(tokens, tokens)
    @settings(max_examples=200, deadline=None)
    def test_unit_interval(self, x, y):
        assert 0.0 <= levenshtein_normalized(x, y) <= 1.0


class TestMetricAxioms:
    bits = st.lists(st.integers(min_value=0, max_value=1), min_size=4, max_size=4)

    @given(bits, bits, bits)
    @settings(max_examples=100, deadline=None)
    def test_hamming(self, a, b, c):
        assert hamming(a, a) == 0
        assert hamming(a, b) == hamming(b, a)
        assert hamming(a, c) <= hamming(a, b) + hamming(b, c)

    reals = st.lists(
        st.floats(min_value=-10, max_value=10, allow_nan=False), min_size=3, max_size=3
    )

    @given(reals, reals, reals)
    @settings(max_examples=100, deadline=None)
    def test_euclidean(self, a, b, c):
        assert euclidean_distance(a, a) == 0.0
        assert euclidean_distance(a, b) == pytest.approx(euclidean_distance(b, a))
        assert euclidean_distance(a, c) <= euclidean_distance(a, b) + euclidean_distance(b, c) + 1e-9


class TestVectorDistances:
    def test_cosine_identity(self):
        assert cosine_distance([1.0, 2.0], [1.0, 2.0]) == pytest.approx(0.0)

    def test_cosine_orthogonal(self):
        assert cosine_distance([1.0, 0.0], [0.0, 1.0]) == pytest.approx(1.0)

    def test_cosine_antipodal(self):
        assert cosine_distance([1.0, 0.0], [-1.0, 0.0]) == pytest.approx(2.0)

    def test_cosine_zero_norm(self):
        with pytest.raises(ValueError, match="zero-norm"):
            cosine_distance([0.0, 0.0], [1.0, 0.0])

    def test_cosine_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension mismatch"):
            cosine_distance([1.0], [1.0, 2.0])

    def test_euclidean_identity(self):
        assert euclidean_distance([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]) == 0.0

    def test_euclidean_345(self):
        assert euclidean_distance([0.0, 0.0], [3.0, 4.0]) == pytest.approx(5.0)

    def test_euclidean_sqrt3(self):
        assert euclidean_distance([1.0, 1.0, 1.0], [0.0, 0.0, 0.0]) == pytest.approx(np.sqrt(3))

    def test_euclidean_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension mismatch"):
            euclidean_distance([1.0], [1.0, 2.0])


class TestCondensedIndexing:
    def test_roundtrip(self):
        n = 9
        for k in range(n * (n - 1) // 2):
            i, j = condensed_pair(k, n)
            assert condensed_index(i, j, n) == k

    def test_bad_pair(self):
        with pytest.raises(ValueError):
            condensed_index(2, 2, 5)


class TestDistanceMatrix:
    def test_validation_length(self):
        with pytest.raises(ValueError, match="needs"):
            DistanceMatrix(n=4, values=np.zeros(5))

    def test_validation_negative(self):
        with pytest.raises(ValueError, match="non-negative"):
            DistanceMatrix(n=3, values=np.array([1.0, -0.5, 2.0]))

    def test_validation_nonfinite(self):
        with pytest.raises(ValueError, match="finite"):
            DistanceMatrix(n=3, values=np.array([1.0, np.inf, 2.0]))

    def test_square_roundtrip(self, rng):
        vals = rng.random(10)
        dm = DistanceMatrix(n=5, values=vals)
        back = DistanceMatrix.from_square(dm.to_square())
        np.testing.assert_allclose(back.values, vals)

    def test_get(self):
        dm = DistanceMatrix(n=3, values=np.array([1.0, 2.0, 3.0]))
        assert dm.get(0, 1) == 1.0
        assert dm.get(1, 0) == 1.0
        assert dm.get(2, 2) == 0.0

    def test_csv_roundtrip_condensed(self, tmp_path, rng):
        dm = DistanceMatrix(n=6, values=rng.random(15))
        path = tmp_path / "m.csv"
        dm.save_csv(path)
        loaded = DistanceMatrix.load_csv(path)
        assert loaded.n == dm.n
        np.testing.assert_array_equal(loaded.values, dm.values)

    def test_csv_roundtrip_square(self, tmp_path, rng):
        dm = DistanceMatrix(n=4, values=rng.random(6))
        path = tmp_path / "sq.csv"
        dm.save_csv(path, square=True)
        loaded = DistanceMatrix.load_csv(path)
        np.testing.assert_allclose(loaded.values, dm.values)


class TestPairwiseMatrix:
    def test_three_identical(self):
        dm = pairwise_matrix(["aa", "aa", "aa"], lambda a, b: levenshtein(a, b))
        np.testing.assert_array_equal(dm.values, np.zeros(3))

    def test_meanings_hamming_bounds(self):
        meanings = enumerate_meanings(5)
        dm = pairwise_matrix(meanings, hamming)
        assert dm.values.min() >= 1
        assert dm.values.max() <= 5

    def test_pair_count(self):
        dm = pairwise_matrix([1, 2, 3, 4], lambda a, b: abs(a - b))
        assert dm.values.shape == (6,)

    def test_too_few_items(self):
        with pytest.raises(ValueError, match="at least 3"):
            pairwise_matrix([1, 2], lambda a, b: 0.0)

    def test_failure_reports_pair(self):
        def bad(a, b):
            if a == 2 and b == 3:
                raise RuntimeError("boom")
            return 0.0

        with pytest.raises(ValueError, match=r"pair \(1, 2\)"):
            pairwise_matrix([1, 2, 3], bad)

    def test_order_stability(self, rng):
        items = [tuple(rng.integers(0, 2, 5)) for _ in range(7)]
        dm = pairwise_matrix(items, hamming)
        for i in range(7):
            for j in range(i + 1, 7):
                assert dm.get(i, j) == hamming(items[i], items[j])

    def test_constant_metric_constant_matrix(self):
        dm = pairwise_matrix(list(range(5)), lambda a, b: 7.0)
        assert np.all(dm.values == 7.0)

    def test_permutation_consistency(self, rng):
        items = [tuple(rng.integers(0, 2, 6)) for _ in range(8)]
        dm = pairwise_matrix(items, hamming)
        perm = rng.permutation(8)
        dm_perm = pairwise_matrix([items[i] for i in perm], hamming)
        for a in range(8):
            for b in range(a + 1, 8):
                assert dm_perm.get(a, b) == dm.get(perm[a], perm[b])


class TestFastBuilders:
    def test_hamming_matrix_equals_generic(self, rng):
        vectors = [tuple(rng.integers(0, 2, 5)) for _ in range(12)]
        fast = hamming_matrix(vectors)
        slow = pairwise_matrix(vectors, hamming)
        np.testing.assert_array_equal(fast.values, slow.values)

    @pytest.mark.parametrize("normalized", [False, True])
    def test_levenshtein_matrix_equals_generic(self, rng, normalized):
        msgs = [random_token_sequence(rng, 9) for _ in range(15)]
        fast = levenshtein_matrix(msgs, normalized=normalized)
        metric = levenshtein_normalized if normalized else levenshtein
        slow = pairwise_matrix(msgs, metric)
        np.testing.assert_allclose(fast.values, slow.values)

    def test_cosine_matrix_equals_scalar(self, rng):
        vectors = rng.normal(size=(9, 4))
        fast = cosine_matrix(vectors)
        slow = pairwise_matrix(list(vectors), cosine_distance)
        np.testing.assert_allclose(fast.values, slow.values, atol=1e-12)

    def test_euclidean_matrix_equals_scalar(self, rng):
        vectors = rng.normal(size=(9, 4))
        fast = euclidean_matrix(vectors)
        slow = pairwise_matrix(list(vectors), euclidean_distance)
        np.testing.assert_allclose(fast.values, slow.values, atol=1e-12)

    def test_cosine_matrix_zero_norm(self):
        with pytest.raises(ValueError, match="zero-norm"):
            cosine_matrix(np.array([[1.0, 0.0], [0.0, 0.0], [0.0, 1.0]]))
