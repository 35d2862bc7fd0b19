from typing import Optional, Sequence, Tuple
import numpy as np
from xbow.models.codebook import WeightingState
from xbow.utils.errors import DataFormatError, DimensionMismatchError
from xbow.utils.logger import get_logger

logger = get_logger(__name__)


class PostprocessService:
    """
    Term-frequency weighting and normalisation of assembled bags

    All operations accept a single bag (vector) or a bags-by-words matrix.
    The order is fixed: log, then IDF, then normalisation.
    """

    def apply_log_tf(self, tf: np.ndarray) -> np.ndarray:
        """x -> log10(x + 1)"""
        tf = np.asarray(tf, dtype=np.float64)
        if np.any(tf < 0):
            raise DataFormatError("Logarithmic weighting needs non-negative term frequencies")
        return np.log10(tf + 1)

    def fit_idf(self, bags: np.ndarray) -> Tuple[np.ndarray, int]:
        """Document frequency of every word over the training bags, and the bag count"""
        bags = np.atleast_2d(np.asarray(bags, dtype=np.float64))
        if len(bags) == 0:
            raise DataFormatError("IDF weighting needs at least one training bag")
        df = np.count_nonzero(bags > 0, axis=0).astype(np.float64)
        return df, len(bags)

    def apply_idf(self, tf: np.ndarray, df: np.ndarray, n: int) -> np.ndarray:
        """x -> x * log10(n / df); words unseen in training map to 0"""
        tf = np.asarray(tf, dtype=np.float64)
        df = np.asarray(df, dtype=np.float64)
        if tf.shape[-1] != len(df):
            raise DimensionMismatchError(f"Bags have {tf.shape[-1]} words, IDF table has {len(df)}")
        factors = np.zeros_like(df)
        seen = df > 0
        factors[seen] = np.log10(n / df[seen])
        return tf * factors

    def normalize_bag(self, tf: np.ndarray, layout: Optional[Sequence[Tuple[int, int]]] = None) -> np.ndarray:
        """Divide every sub-bag by its L1 mass; zero sub-bags stay zero"""
        tf = np.asarray(tf, dtype=np.float64)
        if not np.all(np.isfinite(tf)):
            raise DataFormatError("Cannot normalise bags with non-finite values")
        sizes = [size for _, size in layout] if layout else [tf.shape[-1]]
        if sum(sizes) != tf.shape[-1]:
            raise DimensionMismatchError(f"Sub-bag layout covers {sum(sizes)} words, bags have {tf.shape[-1]}")

        result = tf.copy()
        start = 0
        for size in sizes:
            part = result[..., start:start + size]
            mass = np.abs(part).sum(axis=-1, keepdims=True)
            np.divide(part, mass, out=part, where=mass > 0)
            start += size
        return result

    def fit(self, bags: np.ndarray, log: bool = False, idf: bool = False,
            normalize: bool = False) -> WeightingState:
        """Weighting state for training bags; document frequencies are counted after log weighting"""
        state = WeightingState(log=log, idf=idf, normalize=normalize)
        if idf:
            weighted = self.apply_log_tf(bags) if log else bags
            state.df, state.n = self.fit_idf(weighted)
            logger.info(f"Fitted IDF over {state.n} bags")
        return state

    def transform(self, bags: np.ndarray, state: WeightingState,
                  layout: Optional[Sequence[Tuple[int, int]]] = None) -> np.ndarray:
        """Apply the weighting state to bags"""
        state.validate()
        result = np.asarray(bags, dtype=np.float64)
        if state.log:
            result = self.apply_log_tf(result)
        if state.idf:
            result = self.apply_idf(result, state.df, state.n)
        if state.normalize:
            result = self.normalize_bag(result, layout)
        return result
