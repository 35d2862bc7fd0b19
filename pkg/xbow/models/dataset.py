from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple
import numpy as np
from xbow.utils.errors import DataFormatError, DimensionMismatchError, MissingLabelError


@dataclass(frozen=True, eq=False)
class Frame:
    """One input row"""

    name: str
    time: Optional[float] = None
    label: Optional[str] = None
    numeric: Mapping[int, np.ndarray] = field(default_factory=dict)
    text: Optional[str] = None


@dataclass(frozen=True, eq=False)
class Dataset:
    """
    Frames grouped by instance name

    Frames of one name are contiguous (first-appearance order of names) and
    time-sorted when times are present. Build through `from_frames`.
    """

    frames: Tuple[Frame, ...]
    dims: Mapping[int, int]
    has_time: bool = False
    has_names: bool = True
    has_text: bool = False
    _matrices: Dict[int, np.ndarray] = field(default_factory=dict, init=False, repr=False)

    @classmethod
    def from_frames(cls, frames: Iterable[Frame], dims: Mapping[int, int], has_time: bool = False,
                    has_names: bool = True, has_text: bool = False) -> 'Dataset':
        groups: Dict[str, List[Frame]] = {}
        for frame in frames:
            for k, size in dims.items():
                vector = frame.numeric.get(k)
                if vector is None or len(vector) != size:
                    got = None if vector is None else len(vector)
                    raise DimensionMismatchError(
                        f"Frame of '{frame.name}' has {got} values for feature class {k}, expected {size}"
                    )
            groups.setdefault(frame.name, []).append(frame)

        ordered: List[Frame] = []
        for group in groups.values():
            if has_time:
                group = sorted(group, key=lambda f: f.time)
            ordered.extend(group)

        return cls(tuple(ordered), dict(dims), has_time, has_names, has_text)

    def __len__(self):
        return len(self.frames)

    @property
    def feature_classes(self) -> Tuple[int, ...]:
        return tuple(sorted(self.dims))

    def matrix(self, feature_class: int) -> np.ndarray:
        """All vectors of one feature class stacked in frame order"""
        if feature_class not in self.dims:
            raise DimensionMismatchError(f"Dataset has no feature class {feature_class}")
        if feature_class not in self._matrices:
            size = self.dims[feature_class]
            if self.frames:
                stacked = np.vstack([f.numeric[feature_class] for f in self.frames]).astype(np.float64)
            else:
                stacked = np.empty((0, size), dtype=np.float64)
            stacked.setflags(write=False)
            self._matrices[feature_class] = stacked
        return self._matrices[feature_class]

    def times(self) -> np.ndarray:
        if not self.has_time:
            raise DataFormatError("Dataset has no time column")
        return np.array([f.time for f in self.frames], dtype=np.float64)

    def instances(self) -> Dict[str, np.ndarray]:
        """Frame positions of each instance name, in dataset order"""
        positions: Dict[str, List[int]] = {}
        for i, frame in enumerate(self.frames):
            positions.setdefault(frame.name, []).append(i)
        return {name: np.array(idx, dtype=np.int64) for name, idx in positions.items()}

    def subset(self, indices: Sequence[int]) -> 'Dataset':
        """Dataset holding the frames at `indices`, order preserved"""
        return Dataset(tuple(self.frames[i] for i in indices), dict(self.dims),
                       self.has_time, self.has_names, self.has_text)

    def with_numeric(self, matrices: Mapping[int, np.ndarray]) -> 'Dataset':
        """Copy with numeric vectors replaced class by class"""
        for k, matrix in matrices.items():
            if matrix.shape != (len(self.frames), self.dims.get(k, -1)):
                raise DimensionMismatchError(
                    f"Replacement for feature class {k} has shape {matrix.shape}"
                )
        frames = []
        for i, frame in enumerate(self.frames):
            numeric = dict(frame.numeric)
            for k, matrix in matrices.items():
                numeric[k] = matrix[i]
            frames.append(Frame(frame.name, frame.time, frame.label, numeric, frame.text))
        return Dataset(tuple(frames), dict(self.dims), self.has_time, self.has_names, self.has_text)


def time_key(time: Optional[float]) -> Optional[int]:
    """Quantise a time in seconds to whole milliseconds"""
    if time is None:
        return None
    return int(round(time * 1000))


def format_instant(name: str, time: Optional[float]) -> str:
    if time is None:
        return f"'{name}'"
    return f"'{name}' at {time:.3f} s"


@dataclass
class LabelTable:
    """Labels keyed by (instance name, time in ms); time is None for whole instances"""

    entries: Dict[Tuple[str, Optional[int]], str] = field(default_factory=dict)

    def add(self, name: str, time: Optional[float], label: str, line: Optional[int] = None):
        key = (name, time_key(time))
        if key in self.entries:
            raise DataFormatError(f"Duplicate label for {format_instant(name, time)}", line=line)
        self.entries[key] = label

    def get(self, name: str, time: Optional[float] = None) -> Optional[str]:
        return self.entries.get((name, time_key(time)))

    def lookup(self, name: str, time: Optional[float] = None) -> str:
        label = self.get(name, time)
        if label is None:
            raise MissingLabelError(f"No label for {format_instant(name, time)}")
        return label

    def __len__(self):
        return len(self.entries)

    def __contains__(self, key):
        name, time = key
        return (name, time_key(time)) in self.entries

    def items(self):
        return self.entries.items()
