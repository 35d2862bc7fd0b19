import re
from collections import Counter
from typing import List, Optional, Sequence
import numpy as np
from xbow.models.codebook import Dictionary
from xbow.models.dataset import Dataset
from xbow.models.settings import TextConfig
from xbow.utils.errors import CodebookError
from xbow.utils.logger import get_logger

logger = get_logger(__name__)

# Runs of letters and digits; everything else separates tokens
TOKEN_PATTERN = re.compile(r'[^\W_]+')


class TextService:
    """Tokenisation, dictionary learning and term counting for text columns"""

    def __init__(self, config: Optional[TextConfig] = None):
        self.config = config or TextConfig()

    def tokenize(self, text: Optional[str], config: Optional[TextConfig] = None) -> List[str]:
        """
        Lower-case word m-grams for m = 1..nGram, then the character
        nCharGram-grams of every token when nCharGram >= 2
        """
        config = config or self.config
        if not text:
            return []
        tokens = TOKEN_PATTERN.findall(text.lower())

        terms: List[str] = []
        for m in range(1, config.n_gram + 1):
            terms.extend(' '.join(tokens[i:i + m]) for i in range(len(tokens) - m + 1))

        m = config.n_char_gram
        if m >= 2:
            for token in tokens:
                terms.extend(token[i:i + m] for i in range(len(token) - m + 1))
        return terms

    def build_dictionary(self, corpus: Sequence[Sequence[str]], config: Optional[TextConfig] = None) -> Dictionary:
        """Terms within [minTermFreq, maxTermFreq], most frequent first, ties alphabetical"""
        config = config or self.config
        if not corpus:
            raise CodebookError("Cannot build a dictionary from an empty corpus")

        counts = Counter()
        for tokens in corpus:
            counts.update(tokens)

        kept = [(term, freq) for term, freq in counts.items()
                if config.min_term_freq <= freq <= config.max_term_freq]
        if not kept:
            raise CodebookError(
                f"Dictionary is empty after stopping ({len(counts)} distinct terms); "
                f"lower -minTermFreq or raise -maxTermFreq"
            )
        kept.sort(key=lambda item: (-item[1], item[0]))
        logger.info(f"Built dictionary of {len(kept)} terms from {len(counts)} distinct terms")
        return Dictionary(tuple(term for term, _ in kept))

    def bag_text(self, tokens: Sequence[str], dictionary: Dictionary) -> np.ndarray:
        """Occurrence count of every dictionary term; unknown terms are ignored"""
        return np.bincount(self.term_indices(tokens, dictionary), minlength=dictionary.size).astype(np.float64)

    def term_indices(self, tokens: Sequence[str], dictionary: Dictionary) -> np.ndarray:
        index = dictionary.term_index
        return np.array([index[t] for t in tokens if t in index], dtype=np.int64)

    def frame_tokens(self, ds: Dataset, config: Optional[TextConfig] = None) -> List[List[str]]:
        """Token list of every frame in dataset order"""
        return [self.tokenize(frame.text, config) for frame in ds.frames]

    def bag_windows(self, frame_tokens: Sequence[Sequence[str]], windows: Sequence,
                    dictionary: Dictionary) -> np.ndarray:
        """Text sub-bags of all windows; a window counts the terms of all its frames"""
        per_frame = [self.term_indices(tokens, dictionary) for tokens in frame_tokens]
        result = np.zeros((len(windows), dictionary.size), dtype=np.float64)
        for row, window in enumerate(windows):
            if len(window):
                merged = np.concatenate([per_frame[i] for i in window.indices])
                result[row] = np.bincount(merged, minlength=dictionary.size)
        return result
