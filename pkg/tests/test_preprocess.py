import numpy as np
import pytest
from xbow.models import Dataset, Frame, ScalingMode
from xbow.services.preprocess_service import PreprocessService
from xbow.utils.errors import DataFormatError, DimensionMismatchError


def make_dataset(values, feature_class=1, name='A'):
    """Dataset with one frame per row of `values`, times 0, 1, 2, ..."""
    values = np.atleast_2d(np.asarray(values, dtype=np.float64))
    frames = [Frame(name, time=float(i), numeric={feature_class: row}) for i, row in enumerate(values)]
    return Dataset.from_frames(frames, {feature_class: values.shape[1]}, has_time=True)


@pytest.fixture
def service():
    return PreprocessService()


@pytest.fixture
def random_dataset():
    rng = np.random.default_rng(3)
    return make_dataset(rng.normal(loc=4.0, scale=2.5, size=(200, 5)))


class TestActivityFilter:
    """Test activity-based frame removal"""

    def test_keeps_frames_at_or_above_threshold(self, service):
        ds = make_dataset([[-3.2, 1], [0.5, 2], [1.0, 3]])
        kept = service.filter_activity(ds, 1, 0, 0.0)
        assert len(kept) == 2
        np.testing.assert_array_equal(kept.matrix(1)[:, 1], [2, 3])

    def test_minus_infinity_is_identity(self, service):
        ds = make_dataset([[-3.2], [0.5]])
        assert service.filter_activity(ds, 1, 0, -np.inf) is ds

    def test_all_frames_removed(self, service):
        ds = make_dataset([[-3.2], [0.5]])
        assert len(service.filter_activity(ds, 1, 0, 10.0)) == 0

    def test_idempotent(self, service, random_dataset):
        once = service.filter_activity(random_dataset, 1, 2, 4.0)
        twice = service.filter_activity(once, 1, 2, 4.0)
        np.testing.assert_array_equal(once.matrix(1), twice.matrix(1))

    def test_dimension_out_of_range(self, service):
        with pytest.raises(DimensionMismatchError):
            service.filter_activity(make_dataset([[1.0, 2.0]]), 1, 2, 0.0)

    def test_unknown_feature_class(self, service):
        with pytest.raises(DimensionMismatchError):
            service.filter_activity(make_dataset([[1.0]]), 2, 0, 0.0)


class TestScaling:
    """Test standardisation and normalisation"""

    def test_standardize_two_values(self, service):
        params = service.fit_scaling(make_dataset([[0.0], [2.0]]), ScalingMode.STANDARDIZE)
        np.testing.assert_array_equal(params.offsets[1], [1.0])
        np.testing.assert_array_equal(params.scales[1], [1.0])

    def test_normalize_three_values(self, service):
        params = service.fit_scaling(make_dataset([[2.0], [4.0], [6.0]]), ScalingMode.NORMALIZE)
        np.testing.assert_array_equal(params.offsets[1], [2.0])
        np.testing.assert_array_equal(params.scales[1], [4.0])

    def test_constant_column_keeps_unit_scale(self, service):
        params = service.fit_scaling(make_dataset([[5.0], [5.0]]), ScalingMode.STANDARDIZE)
        np.testing.assert_array_equal(params.offsets[1], [5.0])
        np.testing.assert_array_equal(params.scales[1], [1.0])

    def test_apply_fitted_standardization(self, service):
        params = service.fit_scaling(make_dataset([[0.0], [2.0]]), ScalingMode.STANDARDIZE)
        scaled = service.apply_scaling(make_dataset([[3.0], [1.0]]), params)
        np.testing.assert_array_equal(scaled.matrix(1)[:, 0], [2.0, 0.0])

    def test_none_is_identity(self, service, random_dataset):
        params = service.fit_scaling(random_dataset, ScalingMode.NONE)
        assert service.apply_scaling(random_dataset, params) is random_dataset

    def test_standardized_moments(self, service, random_dataset):
        params = service.fit_scaling(random_dataset, ScalingMode.STANDARDIZE)
        values = service.apply_scaling(random_dataset, params).matrix(1)
        np.testing.assert_allclose(values.mean(axis=0), 0.0, atol=1e-9)
        np.testing.assert_allclose(values.std(axis=0), 1.0, atol=1e-9)

    def test_normalized_range(self, service, random_dataset):
        params = service.fit_scaling(random_dataset, ScalingMode.NORMALIZE)
        values = service.apply_scaling(random_dataset, params).matrix(1)
        np.testing.assert_allclose(values.min(axis=0), 0.0, atol=1e-12)
        np.testing.assert_allclose(values.max(axis=0), 1.0, atol=1e-12)

    def test_affine(self, service, random_dataset):
        """Scaling a point between two others keeps its relative position"""
        params = service.fit_scaling(random_dataset, ScalingMode.STANDARDIZE)
        a = np.array([1.0, 2.0, 3.0, 4.0, 5.0])
        b = np.array([-2.0, 0.0, 7.0, 1.0, 3.0])
        points = make_dataset([a, b, 0.25 * a + 0.75 * b])
        scaled = service.apply_scaling(points, params).matrix(1)
        np.testing.assert_allclose(scaled[2], 0.25 * scaled[0] + 0.75 * scaled[1], atol=1e-12)

    def test_dimension_mismatch(self, service, random_dataset):
        params = service.fit_scaling(random_dataset, ScalingMode.STANDARDIZE)
        with pytest.raises(DimensionMismatchError):
            service.apply_scaling(make_dataset([[1.0, 2.0]]), params)

    def test_empty_dataset_cannot_be_fitted(self, service):
        ds = Dataset.from_frames([], {1: 3})
        with pytest.raises(DataFormatError):
            service.fit_scaling(ds, ScalingMode.NORMALIZE)

    def test_per_feature_class(self, service):
        """Every feature class gets its own parameters"""
        frames = [Frame('A', numeric={1: np.array([0.0]), 2: np.array([10.0, 1.0])}),
                  Frame('A', numeric={1: np.array([2.0]), 2: np.array([30.0, 1.0])})]
        ds = Dataset.from_frames(frames, {1: 1, 2: 2})
        params = service.fit_scaling(ds, ScalingMode.STANDARDIZE)
        np.testing.assert_array_equal(params.offsets[2], [20.0, 1.0])
        np.testing.assert_array_equal(params.scales[2], [10.0, 1.0])
