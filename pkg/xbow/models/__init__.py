from .attribute_spec import AttributeSpec, Role, RoleKind, TEXT_CLASS
from .dataset import Frame, Dataset, LabelTable
from .codebook import (
    Codebook, CodebookMethod, ScalingMode, ScalingParams, WeightingState,
    SubCodebook, SvqStructure, ClassBoundary, Dictionary
)
from .settings import WindowingConfig, QuantizationConfig, TextConfig, ActivityFilter, SvqConfig
from .bag import Bag
from .run_config import RunConfig

__all__ = [
    'AttributeSpec', 'Role', 'RoleKind', 'TEXT_CLASS',
    'Frame', 'Dataset', 'LabelTable',
    'Codebook', 'CodebookMethod', 'ScalingMode', 'ScalingParams', 'WeightingState',
    'SubCodebook', 'SvqStructure', 'ClassBoundary', 'Dictionary',
    'WindowingConfig', 'QuantizationConfig', 'TextConfig', 'ActivityFilter', 'SvqConfig',
    'Bag', 'RunConfig'
]
