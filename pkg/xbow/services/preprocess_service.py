import numpy as np
from xbow.models.codebook import ScalingMode, ScalingParams
from xbow.models.dataset import Dataset
from xbow.utils.errors import DataFormatError, DimensionMismatchError
from xbow.utils.logger import get_logger

logger = get_logger(__name__)


class PreprocessService:
    """Activity filtering and per-feature-class scaling of numeric frames"""

    def filter_activity(self, ds: Dataset, feature_class: int, dim: int, threshold: float) -> Dataset:
        """Keep the frames whose raw value at (feature_class, dim) is >= threshold"""
        if feature_class not in ds.dims:
            raise DimensionMismatchError(f"Activity filter: no feature class {feature_class} in input")
        if not 0 <= dim < ds.dims[feature_class]:
            raise DimensionMismatchError(
                f"Activity filter: dimension {dim} out of range for feature class {feature_class} "
                f"with {ds.dims[feature_class]} dimensions"
            )
        if threshold == -np.inf:
            return ds

        keep = np.flatnonzero(ds.matrix(feature_class)[:, dim] >= threshold)
        logger.info(f"Activity filter kept {len(keep)} of {len(ds)} frames")
        if len(keep) == len(ds):
            return ds
        return ds.subset(keep)

    def fit_scaling(self, ds: Dataset, mode: ScalingMode) -> ScalingParams:
        """Learn offsets and scales per feature class; zero scales become 1"""
        if mode == ScalingMode.NONE:
            return ScalingParams(ScalingMode.NONE)

        offsets = {}
        scales = {}
        for k in ds.feature_classes:
            values = ds.matrix(k)
            if len(values) == 0:
                raise DataFormatError(f"Cannot fit scaling: feature class {k} has no frames")
            if mode == ScalingMode.STANDARDIZE:
                offset = values.mean(axis=0)
                scale = values.std(axis=0)
            else:
                offset = values.min(axis=0)
                scale = values.max(axis=0) - offset
            constant = (scale == 0) | (values.max(axis=0) == values.min(axis=0))
            if np.any(constant):
                logger.warning(f"Feature class {k}: {int(constant.sum())} constant dimensions keep scale 1")
            offsets[k] = offset
            scales[k] = np.where(constant, 1.0, scale)

        return ScalingParams(mode, offsets, scales)

    def apply_scaling(self, ds: Dataset, params: ScalingParams) -> Dataset:
        """x -> (x - offset) / scale for every numeric value"""
        if params.mode == ScalingMode.NONE:
            return ds

        if set(params.offsets) != set(ds.feature_classes):
            raise DimensionMismatchError(
                f"Scaling covers feature classes {sorted(params.offsets)}, input has {list(ds.feature_classes)}"
            )
        scaled = {}
        for k in ds.feature_classes:
            if len(params.offsets[k]) != ds.dims[k]:
                raise DimensionMismatchError(
                    f"Scaling for feature class {k} has {len(params.offsets[k])} dimensions, "
                    f"input has {ds.dims[k]}"
                )
            scale = np.where(params.scales[k] == 0, 1.0, params.scales[k])
            scaled[k] = (ds.matrix(k) - params.offsets[k]) / scale
        return ds.with_numeric(scaled)
