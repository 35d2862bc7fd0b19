from typing import List, Optional, Sequence, Tuple
import numpy as np
from config.config import Config
from xbow.models.codebook import ClassBoundary, CodebookMethod, SubCodebook, SvqStructure
from xbow.models.dataset import Dataset
from xbow.utils.distance import nearest_centroids, squared_distances
from xbow.utils.errors import CodebookError
from xbow.utils.logger import get_logger
from xbow.utils.rng import RngStream

logger = get_logger(__name__)

# Relative slack for the inertia check; Lloyd steps never increase it beyond rounding
INERTIA_TOLERANCE = 1e-9


class CodebookService:
    """Learning of numeric codebooks"""

    def __init__(self, max_iterations: Optional[int] = None):
        self.max_iterations = max_iterations or Config.KMEANS_MAX_ITERATIONS

    def learn(self, vectors: np.ndarray, size: int, method: CodebookMethod, rng: RngStream,
              feature_class: int = 1) -> SubCodebook:
        """Generate a codebook with any of the four methods"""
        if method.is_kmeans:
            codebook = self.run_kmeans(vectors, size, method.seeding, rng, feature_class=feature_class)
            codebook.method = method
        elif method == CodebookMethod.RANDOM:
            codebook = self.generate_random(vectors, size, rng, feature_class)
        else:
            codebook = self.generate_random_pp(vectors, size, rng, feature_class)
        logger.info(
            f"Learned {method.value} codebook of {size} words for feature class {feature_class} "
            f"from {len(vectors)} vectors"
        )
        return codebook

    def generate_random(self, vectors: np.ndarray, size: int, rng: RngStream,
                        feature_class: int = 1) -> SubCodebook:
        """`size` distinct input rows drawn uniformly without replacement"""
        vectors = self._check_vectors(vectors, size)
        picks = rng.generator.choice(len(vectors), size=size, replace=False)
        return SubCodebook(feature_class, vectors[picks].copy(), CodebookMethod.RANDOM)

    def generate_random_pp(self, vectors: np.ndarray, size: int, rng: RngStream,
                           feature_class: int = 1, first_index: Optional[int] = None) -> SubCodebook:
        """
        k-means++ seeding: the first word uniformly, every further word with
        probability proportional to its squared distance to the nearest word
        chosen so far
        """
        vectors = self._check_vectors(vectors, size)
        n = len(vectors)
        generator = rng.generator

        first = int(generator.integers(n)) if first_index is None else int(first_index)
        chosen = [first]
        taken = np.zeros(n, dtype=bool)
        taken[first] = True
        nearest = squared_distances(vectors, vectors[first])[:, 0]

        while len(chosen) < size:
            weights = _seeding_weights(nearest, taken)
            cumulative = np.cumsum(weights)
            pick = int(np.searchsorted(cumulative, generator.random() * cumulative[-1], side='right'))
            pick = min(pick, n - 1)
            chosen.append(pick)
            taken[pick] = True
            nearest = np.minimum(nearest, squared_distances(vectors, vectors[pick])[:, 0])

        return SubCodebook(feature_class, vectors[chosen].copy(), CodebookMethod.RANDOM_PP)

    def seeding_probabilities(self, vectors: np.ndarray, chosen: Sequence[int]) -> np.ndarray:
        """Probability of every vector being the next random++ pick given the words chosen so far"""
        vectors = np.asarray(vectors, dtype=np.float64)
        if vectors.ndim == 1:
            vectors = vectors[:, np.newaxis]
        taken = np.zeros(len(vectors), dtype=bool)
        taken[list(chosen)] = True
        nearest = squared_distances(vectors, vectors[list(chosen)]).min(axis=1)
        weights = _seeding_weights(nearest, taken)
        return weights / weights.sum()

    def run_kmeans(self, vectors: np.ndarray, size: int, init: CodebookMethod, rng: RngStream,
                   max_iterations: Optional[int] = None, feature_class: int = 1) -> SubCodebook:
        """
        Lloyd iterations after random or random++ seeding, until the
        assignments stop changing or the iteration limit is reached
        """
        vectors = self._check_vectors(vectors, size)
        max_iterations = max_iterations or self.max_iterations
        if init == CodebookMethod.RANDOM_PP:
            seed = self.generate_random_pp(vectors, size, rng, feature_class)
        else:
            seed = self.generate_random(vectors, size, rng, feature_class)
        centroids = seed.centroids.copy()

        labels, distances = _assign(vectors, centroids)
        history = [float(distances.sum())]
        iterations = 0
        converged = False

        for iteration in range(1, max_iterations + 1):
            centroids = _update_centroids(vectors, labels, distances, centroids)
            new_labels, distances = _assign(vectors, centroids)
            inertia = float(distances.sum())
            if inertia > history[-1] * (1 + INERTIA_TOLERANCE) + INERTIA_TOLERANCE:
                raise CodebookError(f"k-means inertia increased from {history[-1]} to {inertia}")
            history.append(inertia)
            iterations = iteration
            logger.debug(f"k-means iteration {iteration}: inertia {inertia:.6g}")

            if np.array_equal(new_labels, labels):
                converged = True
                break
            labels = new_labels

        if not converged:
            logger.info(f"k-means stopped after {max_iterations} iterations without converging")

        method = CodebookMethod.KMEANS_PP if init == CodebookMethod.RANDOM_PP else CodebookMethod.KMEANS
        return SubCodebook(feature_class, centroids, method,
                           iterations=iterations, inertia_history=tuple(history))

    def generate_supervised(self, ds: Dataset, feature_class: int, per_class_size: int,
                            method: CodebookMethod, rng: RngStream,
                            frame_labels: Optional[Sequence[Optional[str]]] = None,
                            expected_labels: Optional[Sequence[str]] = None) -> SubCodebook:
        """
        Learn one codebook per class label and concatenate them into a
        super-codebook; label i uses the random stream rng.child(i)
        """
        labels = list(frame_labels) if frame_labels is not None else [f.label for f in ds.frames]
        if len(labels) != len(ds):
            raise CodebookError("Supervised codebook needs exactly one label per frame")
        if any(label is None for label in labels):
            raise CodebookError("Supervised codebook generation needs a label on every frame")

        order = list(dict.fromkeys(expected_labels)) if expected_labels else list(dict.fromkeys(labels))
        labels_array = np.array(labels, dtype=object)
        matrix = ds.matrix(feature_class)

        parts: List[np.ndarray] = []
        boundaries: List[ClassBoundary] = []
        iterations = 0
        for i, label in enumerate(order):
            members = np.flatnonzero(labels_array == label)
            if len(members) == 0:
                raise CodebookError(f"No frames with class '{label}' for the supervised codebook")
            if len(members) < per_class_size:
                raise CodebookError(
                    f"Class '{label}' has {len(members)} frames, fewer than the {per_class_size} words requested"
                )
            sub = self.learn(matrix[members], per_class_size, method, rng.child(i), feature_class)
            boundaries.append(ClassBoundary(label, sum(len(p) for p in parts), per_class_size))
            parts.append(sub.centroids)
            iterations = max(iterations, sub.iterations)

        return SubCodebook(feature_class, np.vstack(parts), method, tuple(boundaries), iterations=iterations)

    def build_svq(self, vectors: np.ndarray, block_count: int, block_size: int, top_size: int,
                  method: CodebookMethod, rng: RngStream, feature_class: int = 1) -> SvqStructure:
        """
        Split vector quantisation: a codebook per contiguous block of
        dimensions, then a codebook over the vectors of block word indices
        """
        vectors = self._check_vectors(vectors, 1)
        dims = vectors.shape[1]
        if block_count > dims:
            raise CodebookError(f"SVQ with {block_count} blocks needs at least as many dimensions, got {dims}")

        block_dims = split_blocks(dims, block_count)
        bounds = np.cumsum((0,) + block_dims)
        blocks = []
        index_vectors = np.empty((len(vectors), block_count), dtype=np.float64)
        for b in range(block_count):
            part = vectors[:, bounds[b]:bounds[b + 1]]
            block = self.learn(part, block_size, method, rng.child(b), feature_class)
            index_vectors[:, b] = nearest_centroids(part, block.centroids)[0][:, 0]
            blocks.append(block)

        top = self.learn(index_vectors, top_size, method, rng.child(block_count), feature_class)
        return SvqStructure(feature_class, block_dims, tuple(blocks), top)

    def _check_vectors(self, vectors: np.ndarray, size: int) -> np.ndarray:
        vectors = np.asarray(vectors, dtype=np.float64)
        if vectors.ndim == 1:
            vectors = vectors[:, np.newaxis]
        if vectors.ndim != 2:
            raise CodebookError("Codebook input must be a matrix of vectors")
        if size < 1:
            raise CodebookError("Codebook size must be at least 1")
        if size > len(vectors):
            raise CodebookError(f"Codebook size {size} exceeds the {len(vectors)} available vectors")
        return vectors


def split_blocks(dims: int, block_count: int) -> Tuple[int, ...]:
    """Near-equal contiguous blocks; the last block takes the remainder"""
    base = dims // block_count
    return (base,) * (block_count - 1) + (dims - base * (block_count - 1),)


def _seeding_weights(nearest: np.ndarray, taken: np.ndarray) -> np.ndarray:
    weights = np.where(taken, 0.0, nearest)
    if weights.sum() <= 0:
        # every remaining vector coincides with a chosen word
        weights = (~taken).astype(np.float64)
    return weights


def _assign(vectors: np.ndarray, centroids: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    indices, distances = nearest_centroids(vectors, centroids)
    return indices[:, 0], distances[:, 0]


def _update_centroids(vectors: np.ndarray, labels: np.ndarray, distances: np.ndarray,
                      previous: np.ndarray) -> np.ndarray:
    size, dims = previous.shape
    counts = np.bincount(labels, minlength=size)
    sums = np.column_stack([np.bincount(labels, weights=vectors[:, j], minlength=size) for j in range(dims)])
    centroids = previous.copy()
    filled = counts > 0
    centroids[filled] = sums[filled] / counts[filled, np.newaxis]

    empty = np.flatnonzero(~filled)
    if len(empty):
        # reseed from the points farthest from their current word
        farthest = np.argsort(-distances, kind='stable')[:len(empty)]
        centroids[empty] = vectors[farthest]
        logger.debug(f"Reseeded {len(empty)} empty clusters")
    return centroids
