from dataclasses import dataclass
from config.config import Config


@dataclass(frozen=True)
class WindowingConfig:
    width: float
    hop: float

    def __post_init__(self):
        if self.width <= 0 or self.hop <= 0:
            raise ValueError("Window width and hop must be positive")


@dataclass(frozen=True)
class QuantizationConfig:
    num_assignments: int = Config.DEFAULT_ASSIGNMENTS
    gaussian: bool = False
    sigma: float = Config.DEFAULT_GAUSSIAN_SIGMA

    def __post_init__(self):
        if self.num_assignments < 1:
            raise ValueError("Number of assignments must be at least 1")
        if self.sigma <= 0:
            raise ValueError("Gaussian sigma must be positive")


@dataclass(frozen=True)
class TextConfig:
    n_gram: int = Config.DEFAULT_NGRAM
    n_char_gram: int = Config.DEFAULT_NCHARGRAM  # 0 disables character grams
    min_term_freq: int = Config.DEFAULT_MIN_TERM_FREQ
    max_term_freq: int = Config.DEFAULT_MAX_TERM_FREQ

    def __post_init__(self):
        if self.n_gram < 1:
            raise ValueError("nGram must be at least 1")
        if self.n_char_gram < 0:
            raise ValueError("nCharGram must not be negative")
        if self.min_term_freq > self.max_term_freq:
            raise ValueError("minTermFreq must not exceed maxTermFreq")


@dataclass(frozen=True)
class ActivityFilter:
    feature_class: int
    dim: int
    threshold: float


@dataclass(frozen=True)
class SvqConfig:
    block_count: int
    block_size: int

    def __post_init__(self):
        if self.block_count < 1 or self.block_size < 1:
            raise ValueError("SVQ block count and block codebook size must be positive")
