import os
from typing import Optional, Tuple

OUTPUT_EXTENSIONS = ('arff', 'csv', 'libsvm')


def validate_output_path(path: str) -> Tuple[bool, Optional[str]]:
    """Validate an output file name; returns the format taken from its extension"""
    if not path:
        return False, "Output file is required"
    extension = os.path.splitext(path)[1].lower().lstrip('.')
    if extension not in OUTPUT_EXTENSIONS:
        return False, f"Output file must end in one of {', '.join('.' + e for e in OUTPUT_EXTENSIONS)}"
    directory = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(directory):
        return False, f"Output directory {directory} does not exist"
    return True, extension


def validate_input_path(path: str) -> Tuple[bool, Optional[str]]:
    """Validate that an input file exists"""
    if not path:
        return False, "Input file is required"
    if not os.path.isfile(path):
        return False, f"Input file {path} does not exist"
    return True, None


def validate_windowing(width: float, hop: float) -> Tuple[bool, Optional[str]]:
    """Validate window width and hop size in seconds"""
    if width <= 0:
        return False, "Window width must be positive"
    if hop <= 0:
        return False, "Window hop must be positive"
    return True, None


def validate_term_frequencies(min_freq: int, max_freq: int) -> Tuple[bool, Optional[str]]:
    """Validate the stopping thresholds of the dictionary"""
    if min_freq < 0:
        return False, "minTermFreq must not be negative"
    if min_freq > max_freq:
        return False, "minTermFreq must not exceed maxTermFreq"
    return True, None


def validate_codebook_size(size: int) -> Tuple[bool, Optional[str]]:
    """Validate a codebook size"""
    if size < 1:
        return False, "Codebook size must be at least 1"
    return True, None
