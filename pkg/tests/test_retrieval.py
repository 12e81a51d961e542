import numpy as np
import pytest

from tools.error_handler import NoRelevantCandidate, ValidationError
from tools.retrieval import (
    bleu_at_1, cosine_similarity_matrix, rank, retrieval_metrics, similarity_histograms,
)

SIMILARITY = [
    [0.9, 0.8, 0.1, 0.3],
    [0.2, 0.7, 0.6, 0.1],
    [0.5, 0.4, 0.3, 0.95],
]
RELEVANCE = [
    [0, 1, 0, 1],
    [1, 0, 0, 1],
    [0, 0, 1, 0],
]


class TestRetrievalMetrics:
    """Test P@k, MAP and MRR"""

    def test_hand_matrix(self):
        """Test a 3x4 matrix against hand-computed values.

        Relevant ranks are {2, 3}, {3, 4} and {4}; average precisions are
        7/12, 5/12 and 1/4; reciprocal ranks are 1/2, 1/3 and 1/4.
        """
        report = retrieval_metrics(SIMILARITY, RELEVANCE, k=10)
        assert report.precision_at_k == pytest.approx(1 / 6, abs=1e-6)
        assert report.mean_average_precision == pytest.approx(5 / 12, abs=1e-6)
        assert report.mean_reciprocal_rank == pytest.approx(13 / 36, abs=1e-6)
        assert report.to_dict()["precision@10"] == report.precision_at_k

    def test_perfect_ranking(self):
        """Test that a relevant top-1 everywhere gives MRR and MAP of one"""
        report = retrieval_metrics(np.eye(5), np.eye(5, dtype=bool), k=1)
        assert report.mean_reciprocal_rank == 1.0
        assert report.mean_average_precision == 1.0
        assert report.precision_at_k == 1.0

    def test_always_second(self):
        """Test that the relevant item ranked second gives MRR of one half"""
        similarity = np.tile(np.linspace(1.0, 0.0, 6), (4, 1))
        relevance = np.zeros((4, 6), dtype=bool)
        relevance[:, 1] = True
        assert retrieval_metrics(similarity, relevance).mean_reciprocal_rank == 0.5

    def test_monotone_transform_invariance(self):
        """Test that strictly increasing transforms of the scores change nothing"""
        rng = np.random.default_rng(42)
        similarity = rng.random((20, 30))
        relevance = rng.random((20, 30)) < 0.2
        relevance[:, 0] = True
        baseline = retrieval_metrics(similarity, relevance, k=5).to_dict()

        for _ in range(10):
            scale, shift = rng.uniform(0.1, 10.0), rng.uniform(-5.0, 5.0)
            power = rng.uniform(0.5, 3.0)
            for transformed in (scale * similarity + shift, np.exp(similarity * scale), similarity ** power):
                assert retrieval_metrics(transformed, relevance, k=5).to_dict() == pytest.approx(baseline)

    def test_ties_keep_candidate_order(self):
        """Test stable ranking"""
        assert rank([[1.0, 1.0, 0.0, 1.0]]).tolist() == [[0, 1, 3, 2]]

    def test_query_without_relevant_item(self):
        """Test that every query needs a relevant candidate"""
        with pytest.raises(NoRelevantCandidate):
            retrieval_metrics(SIMILARITY, [[1, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 0]])

    def test_shape_mismatch(self):
        """Test that relevance must match the similarity matrix"""
        with pytest.raises(ValidationError):
            retrieval_metrics(SIMILARITY, [[1, 0]])
        with pytest.raises(ValidationError):
            retrieval_metrics(SIMILARITY, RELEVANCE, k=0)


class TestSimilarity:
    """Test helpers around the similarity matrix"""

    def test_bleu_at_1(self):
        """Test BLEU of each query against its top candidate"""
        queries = [["a", "b", "c", "d"], ["e", "f", "g", "h"]]
        candidates = [["e", "f", "g", "h"], ["a", "b", "c", "d"]]
        assert bleu_at_1(queries, candidates, [[0.1, 0.9], [0.8, 0.2]]) == pytest.approx(100.0)
        assert bleu_at_1(queries, candidates, [[0.9, 0.1], [0.2, 0.8]]) == 0.0

    def test_cosine(self):
        """Test cosine similarity of unit and scaled vectors"""
        matrix = cosine_similarity_matrix([[1.0, 0.0], [0.0, 2.0]], [[3.0, 0.0], [1.0, 1.0]])
        assert matrix[0, 0] == pytest.approx(1.0)
        assert matrix[1, 0] == pytest.approx(0.0)
        assert matrix[1, 1] == pytest.approx(1 / np.sqrt(2))

    def test_cosine_zero_vector(self):
        """Test that zero vectors are rejected"""
        with pytest.raises(ValidationError):
            cosine_similarity_matrix([[0.0, 0.0]], [[1.0, 0.0]])

    def test_histogram_overlap(self):
        """Test overlap of identical and disjoint samples"""
        assert similarity_histograms([0.1, 0.5, 0.9], [0.1, 0.5, 0.9])["overlap"] == pytest.approx(1.0)
        histograms = similarity_histograms([0.9, 0.95], [0.0, 0.05], bins=10)
        assert histograms["overlap"] == 0.0
        assert len(histograms["edges"]) == 11
