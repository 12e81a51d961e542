"""
Retrieval metrics over externally supplied similarity scores
"""

import logging
from typing import Dict, Sequence

import numpy as np

from models.evaluation import RetrievalReport
from tools.bleu import bleu
from tools.error_handler import NoRelevantCandidate, ValidationError

logger = logging.getLogger("retrieval")


def _matrix(values, name: str) -> np.ndarray:
    array = np.asarray(values, dtype=float)
    if array.ndim != 2 or 0 in array.shape:
        raise ValidationError(f"{name} must be a non-empty 2-D matrix", name)
    return array


def rank(similarity) -> np.ndarray:
    """Candidate indices per query, best first; ties keep candidate order"""
    return np.argsort(-_matrix(similarity, "similarity"), axis=1, kind="stable")


def retrieval_metrics(similarity, relevance, k: int = 10) -> RetrievalReport:
    """Precision@k, MAP and MRR averaged over queries"""
    scores = _matrix(similarity, "similarity")
    relevant = np.asarray(relevance, dtype=bool)
    if relevant.shape != scores.shape:
        raise ValidationError(f"relevance shape {relevant.shape} does not match similarity {scores.shape}", "relevance")
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise ValidationError("k must be a positive integer", "k")

    ranked = np.take_along_axis(relevant, rank(scores), axis=1)
    precision, average, reciprocal = [], [], []
    for query, row in enumerate(ranked):
        hits = np.flatnonzero(row)
        if hits.size == 0:
            raise NoRelevantCandidate(query)
        precision.append(row[:k].sum() / k)
        # precision at the rank of each relevant item
        average.append(np.mean(np.arange(1, hits.size + 1) / (hits + 1)))
        reciprocal.append(1.0 / (hits[0] + 1))

    report = RetrievalReport(
        k=int(k),
        precision_at_k=float(np.mean(precision)),
        mean_average_precision=float(np.mean(average)),
        mean_reciprocal_rank=float(np.mean(reciprocal)),
    )
    logger.debug(f"Retrieval over {ranked.shape[0]} queries: {report.to_dict()}")
    return report


def bleu_at_1(queries: Sequence[Sequence[str]], candidates: Sequence[Sequence[str]], similarity) -> float:
    """Mean BLEU between each query and its highest-scoring candidate"""
    order = rank(similarity)
    if order.shape != (len(queries), len(candidates)):
        raise ValidationError("similarity shape does not match queries x candidates", "similarity")
    return float(np.mean([bleu(candidates[order[i, 0]], query) for i, query in enumerate(queries)]))


def cosine_similarity_matrix(query_vectors, candidate_vectors) -> np.ndarray:
    queries = _matrix(query_vectors, "query_vectors")
    candidates = _matrix(candidate_vectors, "candidate_vectors")
    if queries.shape[1] != candidates.shape[1]:
        raise ValidationError("query and candidate vectors differ in dimension", "candidate_vectors")
    q_norm = np.linalg.norm(queries, axis=1, keepdims=True)
    c_norm = np.linalg.norm(candidates, axis=1, keepdims=True)
    if not q_norm.all() or not c_norm.all():
        raise ValidationError("zero vectors have no cosine similarity", "vectors")
    return (queries / q_norm) @ (candidates / c_norm).T


def similarity_histograms(positive, negative, bins: int = 20) -> Dict[str, list]:
    """Histograms of positive/negative pair similarities on shared bins, plus their overlap.

    The overlap coefficient is the shared mass of the two normalized histograms,
    1.0 for identical distributions and 0.0 for disjoint ones.
    """
    positive = np.asarray(positive, dtype=float).ravel()
    negative = np.asarray(negative, dtype=float).ravel()
    if positive.size == 0 or negative.size == 0:
        raise ValidationError("both similarity samples must be non-empty", "similarities")
    low = min(positive.min(), negative.min())
    high = max(positive.max(), negative.max())
    if low == high:
        high = low + 1.0
    edges = np.linspace(low, high, bins + 1)
    pos_counts, _ = np.histogram(positive, bins=edges)
    neg_counts, _ = np.histogram(negative, bins=edges)
    overlap = np.minimum(pos_counts / positive.size, neg_counts / negative.size).sum()
    return {
        "edges": edges.tolist(),
        "positive": pos_counts.tolist(),
        "negative": neg_counts.tolist(),
        "overlap": float(overlap),
    }
