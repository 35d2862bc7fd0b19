"""
Evaluation measures for bag-of-words experiments

CCC for continuous targets, weighted and unweighted accuracy for class
labels. All moments are population moments (divide by n).
"""

from typing import Hashable, Sequence
import numpy as np
from scipy.stats import pearsonr
from xbow.utils.errors import XbowError


def _as_series(gold: Sequence[float], pred: Sequence[float]):
    gold = np.asarray(gold, dtype=np.float64)
    pred = np.asarray(pred, dtype=np.float64)
    if gold.ndim != 1 or pred.ndim != 1:
        raise XbowError("Prediction series must be one-dimensional")
    if len(gold) != len(pred):
        raise XbowError(f"Series lengths differ: {len(gold)} gold vs {len(pred)} predicted")
    if not (np.all(np.isfinite(gold)) and np.all(np.isfinite(pred))):
        raise XbowError("Prediction series contain non-finite values")
    return gold, pred


def ccc(gold: Sequence[float], pred: Sequence[float]) -> float:
    """Concordance correlation coefficient"""
    gold, pred = _as_series(gold, pred)
    if len(gold) < 2:
        raise XbowError("CCC needs at least two values")

    mean_gold, mean_pred = gold.mean(), pred.mean()
    var_gold, var_pred = gold.var(), pred.var()
    if var_gold == 0 and var_pred == 0:
        raise XbowError("CCC is undefined when both series are constant")

    covariance = np.mean((gold - mean_gold) * (pred - mean_pred))
    return float(2 * covariance / (var_gold + var_pred + (mean_gold - mean_pred) ** 2))


def pearson(gold: Sequence[float], pred: Sequence[float]) -> float:
    """Linear correlation coefficient, reported next to CCC"""
    gold, pred = _as_series(gold, pred)
    if len(gold) < 2:
        raise XbowError("Correlation needs at least two values")
    if gold.var() == 0 or pred.var() == 0:
        raise XbowError("Correlation is undefined for a constant series")
    r, _ = pearsonr(gold, pred)
    return float(r)


def _check_labels(gold: Sequence[Hashable], pred: Sequence[Hashable]):
    if len(gold) != len(pred):
        raise XbowError(f"Label lists differ in length: {len(gold)} vs {len(pred)}")
    if len(gold) == 0:
        raise XbowError("Accuracy needs at least one label")


def weighted_accuracy(gold: Sequence[Hashable], pred: Sequence[Hashable]) -> float:
    """Overall fraction of correct predictions"""
    _check_labels(gold, pred)
    correct = sum(1 for g, p in zip(gold, pred) if g == p)
    return correct / len(gold)


def unweighted_accuracy(gold: Sequence[Hashable], pred: Sequence[Hashable]) -> float:
    """Mean per-class recall over the classes present in gold"""
    _check_labels(gold, pred)
    totals = {}
    hits = {}
    for g, p in zip(gold, pred):
        totals[g] = totals.get(g, 0) + 1
        if g == p:
            hits[g] = hits.get(g, 0) + 1
    recalls = [hits.get(label, 0) / count for label, count in totals.items()]
    return sum(recalls) / len(recalls)
