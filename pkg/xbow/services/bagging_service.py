from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple
import numpy as np
from xbow.models.bag import Bag
from xbow.models.codebook import NumericCodebook, SubCodebook, SvqStructure
from xbow.models.dataset import Dataset, LabelTable, time_key
from xbow.models.settings import QuantizationConfig, WindowingConfig
from xbow.utils.distance import nearest_centroids
from xbow.utils.errors import DimensionMismatchError, UsageError
from xbow.utils.logger import get_logger

logger = get_logger(__name__)

# Slack for comparing frame times against window edges and the last frame
TIME_EPSILON = 1e-9

NO_FRAMES = np.empty(0, dtype=np.int64)

# Smallest Gaussian assignment weight; exp(-d^2/2s^2) underflows for far words
GAUSSIAN_FLOOR = np.finfo(np.float64).tiny


@dataclass(frozen=True, eq=False)
class Window:
    """Frames (dataset positions) that make up one bag"""

    name: str
    indices: np.ndarray
    time: Optional[float] = None
    label: Optional[str] = None

    def __len__(self):
        return len(self.indices)


def window_count(last_time: float, hop: float) -> int:
    """Number of centers k*hop that do not pass the last frame time"""
    if last_time < -TIME_EPSILON:
        return 0
    return int(np.floor(last_time / hop + TIME_EPSILON)) + 1


def window_instant(k: int, hop: float) -> float:
    """Center of window k, rounded to the millisecond grid labels are keyed on"""
    return time_key(k * hop) / 1000


def instance_ends(ds: Dataset) -> Dict[str, Optional[float]]:
    """Last frame time of every instance in dataset order; None without a time column"""
    times = ds.times() if ds.has_time else None
    return {name: None if times is None else float(times[idx[-1]]) for name, idx in ds.instances().items()}


class BaggingService:
    """Windowing, vector quantisation and histogram accumulation"""

    def __init__(self, quantization: Optional[QuantizationConfig] = None):
        self.quantization = quantization or QuantizationConfig()

    def segment_windows(self, ds: Dataset, windowing: Optional[WindowingConfig] = None,
                        labels: Optional[LabelTable] = None,
                        ends: Optional[Mapping[str, Optional[float]]] = None) -> List[Window]:
        """
        Without windowing every instance name becomes one window. With
        windowing, window k of an instance is centered on k*hop and holds
        the frames in [center - width/2, center + width/2).

        `ends` gives the last frame time of every instance before filtering
        (see instance_ends); windows then span the whole original stream and
        instances left without frames still give their (empty) windows.
        """
        instances = ds.instances()
        ends = ends or {}
        names = list(dict.fromkeys(list(ends) + list(instances)))
        if windowing is not None and not ds.has_time:
            logger.warning("Input has no time column; -t is ignored and every instance gives one bag")
            windowing = None
        if windowing is None:
            windows = [Window(name, instances.get(name, NO_FRAMES), None,
                              self._instance_label(ds, name, instances.get(name, NO_FRAMES), labels))
                       for name in names]
            logger.info(f"Built {len(windows)} whole-instance windows")
            return windows

        times = ds.times()
        half = windowing.width / 2
        windows = []
        for name in names:
            idx = instances.get(name, NO_FRAMES)
            stream = times[idx]
            for k in range(window_count(self._last_time(name, stream, ends), windowing.hop)):
                center = k * windowing.hop
                lo = np.searchsorted(stream, center - half - TIME_EPSILON, side='left')
                hi = np.searchsorted(stream, center + half - TIME_EPSILON, side='left')
                members = idx[lo:hi]
                instant = window_instant(k, windowing.hop)
                label = self._window_label(ds, name, instant, center, members, labels)
                windows.append(Window(name, members, instant, label))

        empty = sum(1 for w in windows if len(w) == 0)
        if empty:
            logger.warning(f"{empty} windows hold no frames and give all-zero bags")
        logger.info(f"Segmented {len(names)} instances into {len(windows)} windows")
        return windows

    def frame_labels(self, ds: Dataset, windowing: Optional[WindowingConfig] = None,
                     labels: Optional[LabelTable] = None,
                     ends: Optional[Mapping[str, Optional[float]]] = None) -> List[Optional[str]]:
        """
        Label of every frame: its own label column, or from the labels file at
        the nearest window instant (by instance name without windowing).
        A frame halfway between two instants takes the later one.
        """
        if labels is None:
            return [frame.label for frame in ds.frames]
        if windowing is None or not ds.has_time:
            return [labels.lookup(frame.name) for frame in ds.frames]

        times = ds.times()
        result: List[Optional[str]] = [None] * len(ds)
        for name, idx in ds.instances().items():
            count = window_count(self._last_time(name, times[idx], ends or {}), windowing.hop)
            nearest = np.floor(times[idx] / windowing.hop + 0.5)
            for i, k in zip(idx, np.clip(nearest, 0, max(count - 1, 0)).astype(np.int64)):
                result[i] = labels.lookup(name, window_instant(int(k), windowing.hop))
        return result

    def assign_vector(self, x: np.ndarray, codebook: SubCodebook,
                      quantization: Optional[QuantizationConfig] = None) -> List[Tuple[int, float]]:
        """The N_a nearest words of one vector with their weights, nearest first"""
        indices, weights = self._assign(np.atleast_2d(np.asarray(x, dtype=np.float64)), codebook,
                                        quantization or self.quantization)
        return [(int(i), float(w)) for i, w in zip(indices[0], weights[0])]

    def quantize_frames(self, vectors: np.ndarray, quantizer: NumericCodebook,
                        quantization: Optional[QuantizationConfig] = None) -> Tuple[np.ndarray, np.ndarray]:
        """Word indices and weights for every frame, shape (frames, N_a) each"""
        quantization = quantization or self.quantization
        vectors = np.asarray(vectors, dtype=np.float64)
        if vectors.ndim == 1:
            vectors = vectors[np.newaxis, :]
        if vectors.shape[1] != quantizer.dims:
            raise DimensionMismatchError(
                f"Codebook of feature class {quantizer.feature_class} expects {quantizer.dims} "
                f"dimensions, input has {vectors.shape[1]}"
            )
        if isinstance(quantizer, SvqStructure):
            vectors = self._index_vectors(vectors, quantizer)
            quantizer = quantizer.top_codebook
        return self._assign(vectors, quantizer, quantization)

    def bag_numeric_window(self, vectors: np.ndarray, quantizer: NumericCodebook,
                           quantization: Optional[QuantizationConfig] = None) -> np.ndarray:
        """Term frequencies of one window: summed assignment weights per word"""
        if len(vectors) == 0:
            return np.zeros(quantizer.size, dtype=np.float64)
        indices, weights = self.quantize_frames(vectors, quantizer, quantization)
        return histogram(indices, weights, quantizer.size)

    def bag_numeric(self, ds: Dataset, windows: Sequence[Window], quantizer: NumericCodebook,
                    quantization: Optional[QuantizationConfig] = None) -> np.ndarray:
        """Sub-bags of one feature class for all windows; each frame is quantised once"""
        k = quantizer.feature_class
        indices, weights = self.quantize_frames(ds.matrix(k), quantizer, quantization)
        result = np.zeros((len(windows), quantizer.size), dtype=np.float64)
        for row, window in enumerate(windows):
            if len(window):
                result[row] = histogram(indices[window.indices], weights[window.indices], quantizer.size)
        logger.debug(f"Quantised {len(ds)} frames of feature class {k} into {len(windows)} sub-bags")
        return result

    def assemble_bag(self, parts: Dict[int, np.ndarray], layout: Sequence[Tuple[int, int]], name: str,
                     time: Optional[float] = None, label: Optional[str] = None) -> Bag:
        """Concatenate sub-bags in layout order (feature classes 1..9, then text)"""
        return Bag(name, concatenate_parts(parts, layout), time, label)

    def _assign(self, vectors: np.ndarray, codebook: SubCodebook,
                quantization: QuantizationConfig) -> Tuple[np.ndarray, np.ndarray]:
        if vectors.shape[1] != codebook.dims:
            raise DimensionMismatchError(
                f"Vector has {vectors.shape[1]} dimensions, codebook words have {codebook.dims}"
            )
        if quantization.num_assignments > codebook.size:
            raise UsageError(
                f"Cannot assign {quantization.num_assignments} words per frame with a codebook of {codebook.size}"
            )
        indices, distances = nearest_centroids(vectors, codebook.centroids, quantization.num_assignments)
        if quantization.gaussian:
            # weights stay in (0, 1]
            weights = np.maximum(np.exp(-distances / (2 * quantization.sigma ** 2)), GAUSSIAN_FLOOR)
        else:
            weights = np.ones_like(distances)
        return indices, weights

    def _index_vectors(self, vectors: np.ndarray, svq: SvqStructure) -> np.ndarray:
        columns = [nearest_centroids(vectors[:, part], block.centroids)[0][:, 0]
                   for part, block in zip(svq.block_slices(), svq.block_codebooks)]
        return np.column_stack(columns).astype(np.float64)

    def _last_time(self, name: str, stream: np.ndarray, ends: Mapping[str, Optional[float]]) -> float:
        end = ends.get(name)
        if end is None:
            return float(stream[-1]) if len(stream) else -np.inf
        return max(float(end), float(stream[-1])) if len(stream) else float(end)

    def _instance_label(self, ds: Dataset, name: str, idx: np.ndarray,
                        labels: Optional[LabelTable]) -> Optional[str]:
        if labels is not None:
            return labels.lookup(name)
        return ds.frames[idx[0]].label if len(idx) else None

    def _window_label(self, ds: Dataset, name: str, instant: float, center: float, members: np.ndarray,
                      labels: Optional[LabelTable]) -> Optional[str]:
        if labels is not None:
            return labels.lookup(name, instant)
        if len(members) == 0:
            return None
        # label column: the frame closest to the center
        times = np.array([ds.frames[i].time for i in members])
        return ds.frames[members[int(np.argmin(np.abs(times - center)))]].label


def histogram(indices: np.ndarray, weights: np.ndarray, size: int) -> np.ndarray:
    """Accumulate weights per word index"""
    return np.bincount(indices.ravel(), weights=weights.ravel(), minlength=size).astype(np.float64)


def concatenate_parts(parts: Dict[int, np.ndarray], layout: Sequence[Tuple[int, int]]) -> np.ndarray:
    """Join sub-bags (vectors or window-by-word matrices) along the word axis"""
    pieces = []
    for k, size in layout:
        if k not in parts:
            raise DimensionMismatchError(f"No sub-bag for feature class {k}")
        part = np.asarray(parts[k], dtype=np.float64)
        if part.shape[-1] != size:
            raise DimensionMismatchError(f"Sub-bag of feature class {k} has {part.shape[-1]} words, expected {size}")
        pieces.append(part)
    return np.concatenate(pieces, axis=-1)

