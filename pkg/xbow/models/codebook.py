import enum
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union
import numpy as np
from xbow.models.attribute_spec import TEXT_CLASS
from xbow.models.settings import TextConfig
from xbow.utils.errors import CodebookError


class CodebookMethod(enum.Enum):
    RANDOM = "random"
    RANDOM_PP = "random++"
    KMEANS = "kmeans"
    KMEANS_PP = "kmeans++"

    @property
    def is_kmeans(self) -> bool:
        return self in (CodebookMethod.KMEANS, CodebookMethod.KMEANS_PP)

    @property
    def seeding(self) -> 'CodebookMethod':
        """Sampling rule used to pick the initial words"""
        if self in (CodebookMethod.RANDOM_PP, CodebookMethod.KMEANS_PP):
            return CodebookMethod.RANDOM_PP
        return CodebookMethod.RANDOM


class ScalingMode(enum.Enum):
    NONE = "none"
    STANDARDIZE = "standardize"
    NORMALIZE = "normalize"


@dataclass(frozen=True)
class ClassBoundary:
    label: str
    start: int
    count: int


@dataclass(eq=False)
class SubCodebook:
    feature_class: int
    centroids: np.ndarray
    method: CodebookMethod
    class_boundaries: Tuple[ClassBoundary, ...] = ()
    iterations: int = 0
    inertia_history: Tuple[float, ...] = ()

    def __post_init__(self):
        self.centroids = np.atleast_2d(np.asarray(self.centroids, dtype=np.float64))
        if self.centroids.ndim != 2 or len(self.centroids) < 1:
            raise CodebookError("A codebook needs at least one word")

    @property
    def size(self) -> int:
        return len(self.centroids)

    @property
    def dims(self) -> int:
        return self.centroids.shape[1]


@dataclass(eq=False)
class SvqStructure:
    """Split vector quantiser: per-block codebooks plus a codebook over index vectors"""

    feature_class: int
    block_dims: Tuple[int, ...]
    block_codebooks: Tuple[SubCodebook, ...]
    top_codebook: SubCodebook

    def __post_init__(self):
        if len(self.block_dims) != len(self.block_codebooks):
            raise CodebookError("SVQ needs one codebook per block")
        for size, block in zip(self.block_dims, self.block_codebooks):
            if block.dims != size:
                raise CodebookError(f"SVQ block codebook has {block.dims} dims, block has {size}")
        if self.top_codebook.dims != len(self.block_dims):
            raise CodebookError("SVQ top codebook must have one dimension per block")

    @property
    def block_count(self) -> int:
        return len(self.block_dims)

    @property
    def dims(self) -> int:
        return sum(self.block_dims)

    @property
    def size(self) -> int:
        return self.top_codebook.size

    @property
    def method(self) -> CodebookMethod:
        return self.top_codebook.method

    def block_slices(self) -> List[slice]:
        bounds = np.cumsum((0,) + tuple(self.block_dims))
        return [slice(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:])]


NumericCodebook = Union[SubCodebook, SvqStructure]


@dataclass(eq=False)
class ScalingParams:
    mode: ScalingMode = ScalingMode.NONE
    offsets: Dict[int, np.ndarray] = field(default_factory=dict)
    scales: Dict[int, np.ndarray] = field(default_factory=dict)


@dataclass(eq=False)
class WeightingState:
    log: bool = False
    idf: bool = False
    normalize: bool = False
    df: Optional[np.ndarray] = None
    n: int = 0

    def validate(self):
        if self.idf != (self.df is not None):
            raise CodebookError("Document frequencies must be present exactly when IDF is enabled")
        if self.df is not None and (np.any(self.df < 0) or np.any(self.df > self.n)):
            raise CodebookError("Document frequencies must lie between 0 and the bag count")


@dataclass(eq=False)
class Dictionary:
    terms: Tuple[str, ...]
    term_index: Dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        self.terms = tuple(self.terms)
        self.term_index = {term: i for i, term in enumerate(self.terms)}
        if len(self.term_index) != len(self.terms):
            raise CodebookError("Dictionary terms must be unique")

    @property
    def size(self) -> int:
        return len(self.terms)


@dataclass(eq=False)
class Codebook:
    """Everything needed to turn new input into bags the way training did"""

    scaling: ScalingParams = field(default_factory=ScalingParams)
    weighting: WeightingState = field(default_factory=WeightingState)
    numeric: Dict[int, NumericCodebook] = field(default_factory=dict)
    dictionary: Optional[Dictionary] = None
    text_config: Optional[TextConfig] = None
    # nominal class labels in output order; empty for numeric or absent labels
    classes: Tuple[str, ...] = ()

    def layout(self) -> List[Tuple[int, int]]:
        """(feature class, sub-bag size) in bag order: classes 1..9, then text"""
        parts = [(k, self.numeric[k].size) for k in sorted(self.numeric)]
        if self.dictionary is not None:
            parts.append((TEXT_CLASS, self.dictionary.size))
        return parts

    @property
    def size(self) -> int:
        return sum(size for _, size in self.layout())

    @property
    def feature_classes(self) -> Tuple[int, ...]:
        return tuple(sorted(self.numeric))
