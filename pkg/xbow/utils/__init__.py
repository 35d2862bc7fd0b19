from .logger import setup_logger, get_logger
from .errors import (
    XbowError, UsageError, SpecError, DataFormatError, DimensionMismatchError,
    MissingLabelError, CodebookError
)
from .validators import validate_output_path, validate_input_path, validate_windowing, validate_term_frequencies
from .distance import squared_distances, nearest_centroids
from .rng import RngStream
from .metrics import ccc, pearson, weighted_accuracy, unweighted_accuracy

__all__ = [
    'setup_logger', 'get_logger',
    'XbowError', 'UsageError', 'SpecError', 'DataFormatError', 'DimensionMismatchError',
    'MissingLabelError', 'CodebookError',
    'validate_output_path', 'validate_input_path', 'validate_windowing', 'validate_term_frequencies',
    'squared_distances', 'nearest_centroids',
    'RngStream',
    'ccc', 'pearson', 'weighted_accuracy', 'unweighted_accuracy'
]
