from typing import Iterator, Optional, Tuple
import numpy as np
from scipy.spatial.distance import cdist
from config.config import Config


def squared_distances(vectors: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    """
    Squared Euclidean distances between every vector and every centroid
    Returns an array of shape (len(vectors), len(centroids))
    """
    return cdist(np.atleast_2d(vectors), np.atleast_2d(centroids), 'sqeuclidean')


def iter_distance_blocks(vectors: np.ndarray, centroids: np.ndarray,
                         chunk_rows: Optional[int] = None) -> Iterator[Tuple[int, np.ndarray]]:
    """Yield (first_row, distances) blocks so the full matrix is never materialised"""
    chunk_rows = chunk_rows or Config.DISTANCE_CHUNK_ROWS
    for start in range(0, len(vectors), chunk_rows):
        yield start, squared_distances(vectors[start:start + chunk_rows], centroids)


def nearest_centroids(vectors: np.ndarray, centroids: np.ndarray,
                      count: int = 1) -> Tuple[np.ndarray, np.ndarray]:
    """
    Find the `count` nearest centroids of every vector
    Ties go to the lower centroid index. Returns (indices, squared distances),
    both of shape (len(vectors), count), ordered nearest first.
    """
    n = len(vectors)
    indices = np.empty((n, count), dtype=np.int64)
    distances = np.empty((n, count), dtype=np.float64)

    for start, block in iter_distance_blocks(vectors, centroids):
        if count == 1:
            best = np.argmin(block, axis=1)[:, np.newaxis]
        else:
            best = np.argsort(block, axis=1, kind='stable')[:, :count]
        stop = start + len(block)
        indices[start:stop] = best
        distances[start:stop] = np.take_along_axis(block, best, axis=1)

    return indices, distances
