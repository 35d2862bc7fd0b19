import numpy as np
import pytest
from xbow.models import (
    CodebookMethod, Dataset, Frame, LabelTable, QuantizationConfig, SubCodebook, WindowingConfig
)
from xbow.services.bagging_service import BaggingService, instance_ends, window_count
from xbow.services.codebook_service import CodebookService
from xbow.utils.errors import DimensionMismatchError, MissingLabelError, UsageError
from xbow.utils.rng import RngStream


def stream_dataset(times, name='A', dims=1, labels=None):
    frames = []
    for i, t in enumerate(times):
        label = None if labels is None else labels[i]
        frames.append(Frame(name, time=float(t), label=label, numeric={1: np.full(dims, float(i))}))
    return Dataset.from_frames(frames, {1: dims}, has_time=True)


def brute_force_nearest(x, centroids, count):
    """Exhaustive N-nearest search, ties to the lower index"""
    distances = [(float(np.sum((x - c) ** 2)), i) for i, c in enumerate(centroids)]
    return [i for _, i in sorted(distances)[:count]]


@pytest.fixture
def service():
    return BaggingService()


@pytest.fixture
def half_second_stream():
    """Frames every 0.5 s from 0 to 3.5 s"""
    return stream_dataset(np.arange(0, 4, 0.5))


@pytest.fixture
def square_codebook():
    return SubCodebook(1, np.array([[0.0, 0.0], [1.0, 1.0]]), CodebookMethod.RANDOM)


class TestWindowing:
    """Test segmentation into windows"""

    def test_centers_and_members(self, service, half_second_stream):
        windows = service.segment_windows(half_second_stream, WindowingConfig(2.0, 1.0))
        assert [w.time for w in windows] == [0.0, 1.0, 2.0, 3.0]
        members = [[half_second_stream.frames[i].time for i in w.indices] for w in windows]
        assert members == [
            [0.0, 0.5],
            [0.0, 0.5, 1.0, 1.5],
            [1.0, 1.5, 2.0, 2.5],
            [2.0, 2.5, 3.0, 3.5],
        ]

    def test_window_count_for_long_recording(self):
        assert window_count(300.0, 0.8) == 376

    def test_labels_at_window_instants(self, service, half_second_stream):
        labels = LabelTable()
        for k in range(4):
            labels.add('A', float(k), f'l{k}')
        windows = service.segment_windows(half_second_stream, WindowingConfig(2.0, 1.0), labels)
        assert [w.label for w in windows] == ['l0', 'l1', 'l2', 'l3']

    def test_missing_label_names_instant(self, service, half_second_stream):
        labels = LabelTable()
        for k in (0, 1, 3):
            labels.add('A', float(k), 'x')
        with pytest.raises(MissingLabelError, match="'A' at 2.000 s"):
            service.segment_windows(half_second_stream, WindowingConfig(2.0, 1.0), labels)

    def test_fractional_hop_instants(self, service):
        ds = stream_dataset(np.round(np.arange(241) * 0.01, 2))
        labels = LabelTable()
        for k in range(4):
            labels.add('A', round(k * 0.8, 3), str(k))
        windows = service.segment_windows(ds, WindowingConfig(8.0, 0.8), labels)
        assert [w.time for w in windows] == [0.0, 0.8, 1.6, 2.4]
        assert [w.label for w in windows] == ['0', '1', '2', '3']

    def test_membership_property(self, service):
        """Every frame sits in at most ceil(width/hop) windows, all of which cover it"""
        rng = np.random.default_rng(5)
        times = np.sort(rng.uniform(0, 20, size=300))
        ds = stream_dataset(times)
        width, hop = 2.5, 0.7
        windows = service.segment_windows(ds, WindowingConfig(width, hop))
        seen = np.zeros(len(ds), dtype=int)
        for w in windows:
            for i in w.indices:
                assert w.time - width / 2 - 1e-9 <= ds.frames[i].time < w.time + width / 2
            seen[w.indices] += 1
        assert seen.max() <= np.ceil(width / hop)

    def test_whole_instance_windows(self, service):
        frames = [Frame('A', label='pos', numeric={1: np.zeros(1)}),
                  Frame('B', label='neg', numeric={1: np.ones(1)}),
                  Frame('A', label='pos', numeric={1: np.ones(1)})]
        ds = Dataset.from_frames(frames, {1: 1})
        windows = service.segment_windows(ds)
        assert [(w.name, len(w), w.label, w.time) for w in windows] == [('A', 2, 'pos', None), ('B', 1, 'neg', None)]

    def test_whole_instance_labels_from_table(self, service, half_second_stream):
        labels = LabelTable()
        labels.add('A', None, 'calm')
        assert service.segment_windows(half_second_stream, None, labels)[0].label == 'calm'

    def test_no_time_column_gives_whole_instances(self, service):
        frames = [Frame('A', numeric={1: np.zeros(1)}), Frame('A', numeric={1: np.ones(1)}),
                  Frame('B', numeric={1: np.ones(1)})]
        ds = Dataset.from_frames(frames, {1: 1})
        labels = LabelTable()
        labels.add('A', None, 'x')
        labels.add('B', None, 'y')
        windows = service.segment_windows(ds, WindowingConfig(1.0, 1.0), labels)
        assert [(w.name, len(w), w.label, w.time) for w in windows] == [('A', 2, 'x', None), ('B', 1, 'y', None)]

    def test_frame_labels_from_nearest_instant(self, service, half_second_stream):
        """Frames halfway between two instants take the later one"""
        labels = LabelTable()
        for k in range(4):
            labels.add('A', float(k), f'l{k}')
        frame_labels = service.frame_labels(half_second_stream, WindowingConfig(2.0, 1.0), labels)
        assert frame_labels == ['l0', 'l1', 'l1', 'l2', 'l2', 'l3', 'l3', 'l3']

    def test_span_from_unfiltered_stream(self, service):
        """Windows cover the original stream after its trailing frames are filtered away"""
        filtered = stream_dataset([0.0, 0.5, 1.0])
        windows = service.segment_windows(filtered, WindowingConfig(1.0, 1.0), ends={'A': 3.5})
        assert [w.time for w in windows] == [0.0, 1.0, 2.0, 3.0]
        assert [len(w) for w in windows] == [1, 2, 0, 0]

    def test_instance_without_frames_keeps_its_windows(self, service):
        labels = LabelTable()
        for name in ('A', 'B'):
            for k in range(3):
                labels.add(name, float(k), f'{name}{k}')
        ds = stream_dataset([0.0, 1.0, 2.0])
        windows = service.segment_windows(ds, WindowingConfig(1.0, 1.0), labels, ends={'A': 2.0, 'B': 2.0})
        assert [(w.name, w.label, len(w)) for w in windows] == [
            ('A', 'A0', 1), ('A', 'A1', 1), ('A', 'A2', 1),
            ('B', 'B0', 0), ('B', 'B1', 0), ('B', 'B2', 0),
        ]

    def test_instance_ends(self, half_second_stream):
        assert instance_ends(half_second_stream) == {'A': 3.5}
        frames = [Frame('A', numeric={1: np.zeros(1)})]
        assert instance_ends(Dataset.from_frames(frames, {1: 1})) == {'A': None}


class TestAssignment:
    """Test nearest-word assignment"""

    def test_single_assignment(self, service, square_codebook):
        assert service.assign_vector(np.array([0.1, 0.1]), square_codebook) == [(0, 1.0)]

    def test_gaussian_weights(self, square_codebook):
        service = BaggingService(QuantizationConfig(num_assignments=2, gaussian=True, sigma=1.0))
        result = service.assign_vector(np.array([0.1, 0.1]), square_codebook)
        assert [i for i, _ in result] == [0, 1]
        assert result[0][1] == pytest.approx(np.exp(-0.02 / 2), abs=1e-12)
        assert result[1][1] == pytest.approx(np.exp(-1.62 / 2), abs=1e-12)

    def test_tie_goes_to_lower_index(self, service, square_codebook):
        assert service.assign_vector(np.array([0.5, 0.5]), square_codebook)[0][0] == 0

    def test_gaussian_weight_bounds(self, square_codebook):
        service = BaggingService(QuantizationConfig(num_assignments=2, gaussian=True, sigma=0.5))
        weights = [w for _, w in service.assign_vector(np.array([0.0, 0.0]), square_codebook)]
        assert weights[0] == 1.0
        assert 0 < weights[1] < 1

    def test_far_gaussian_weight_stays_positive(self):
        service = BaggingService(QuantizationConfig(num_assignments=2, gaussian=True, sigma=0.01))
        codebook = SubCodebook(1, np.array([[0.0], [100.0]]), CodebookMethod.RANDOM)
        weights = [w for _, w in service.assign_vector(np.array([0.0]), codebook)]
        assert weights[0] == 1.0
        assert weights[1] == np.finfo(np.float64).tiny

    def test_dimension_mismatch(self, service, square_codebook):
        with pytest.raises(DimensionMismatchError):
            service.assign_vector(np.array([0.0, 0.0, 0.0]), square_codebook)

    def test_too_many_assignments(self, square_codebook):
        service = BaggingService(QuantizationConfig(num_assignments=3))
        with pytest.raises(UsageError):
            service.assign_vector(np.array([0.0, 0.0]), square_codebook)

    def test_matches_brute_force(self):
        """Indices and order agree with exhaustive search, ties included"""
        rng = np.random.default_rng(17)
        for _ in range(1000):
            size = int(rng.integers(1, 65))
            dims = int(rng.integers(1, 5))
            count = int(rng.integers(1, size + 1))
            # small integer grids make exact distance ties common
            centroids = rng.integers(-3, 4, size=(size, dims)).astype(float)
            x = rng.integers(-3, 4, size=dims).astype(float)
            service = BaggingService(QuantizationConfig(num_assignments=count))
            codebook = SubCodebook(1, centroids, CodebookMethod.RANDOM)
            got = [i for i, _ in service.assign_vector(x, codebook)]
            assert got == brute_force_nearest(x, centroids, count)


class TestNumericBags:
    """Test histogram accumulation"""

    def test_mass_is_frame_count(self, service, square_codebook):
        frames = np.array([[0.0, 0.1], [0.9, 1.0], [0.2, 0.0]])
        tf = service.bag_numeric_window(frames, square_codebook)
        np.testing.assert_array_equal(tf, [2.0, 1.0])

    def test_multiple_assignment_mass(self):
        rng = np.random.default_rng(0)
        codebook = SubCodebook(1, rng.normal(size=(30, 3)), CodebookMethod.RANDOM)
        service = BaggingService(QuantizationConfig(num_assignments=20))
        tf = service.bag_numeric_window(rng.normal(size=(3, 3)), codebook)
        assert tf.sum() == 60

    def test_empty_window(self, service, square_codebook):
        np.testing.assert_array_equal(service.bag_numeric_window(np.empty((0, 2)), square_codebook), [0, 0])

    def test_mass_conservation_on_random_datasets(self):
        rng = np.random.default_rng(23)
        codebooks = CodebookService()
        for trial in range(100):
            n = int(rng.integers(3, 201))
            dims = int(rng.integers(2, 17))
            count = int(rng.integers(1, 4))
            times = np.round(np.sort(rng.uniform(0, 10, size=n)), 3)
            frames = [Frame('A', time=float(t), numeric={1: v}) for t, v in zip(times, rng.normal(size=(n, dims)))]
            ds = Dataset.from_frames(frames, {1: dims}, has_time=True)
            codebook = codebooks.generate_random(ds.matrix(1), min(n, 8), RngStream(trial))
            service = BaggingService(QuantizationConfig(num_assignments=min(count, codebook.size)))
            windows = service.segment_windows(ds, WindowingConfig(2.0, 0.5))
            bags = service.bag_numeric(ds, windows, codebook)
            for window, tf in zip(windows, bags):
                assert tf.sum() == service.quantization.num_assignments * len(window)

    def test_svq_path(self, service):
        rng = np.random.default_rng(4)
        vectors = rng.normal(size=(50, 4))
        svq = CodebookService().build_svq(vectors, 2, 3, 5, CodebookMethod.RANDOM_PP, RngStream(0))
        tf = service.bag_numeric_window(vectors[:7], svq)
        assert len(tf) == 5
        assert tf.sum() == 7

    def test_bag_matrix_matches_single_windows(self, service, half_second_stream):
        codebook = SubCodebook(1, np.array([[0.0], [3.0], [6.0]]), CodebookMethod.RANDOM)
        windows = service.segment_windows(half_second_stream, WindowingConfig(2.0, 1.0))
        bags = service.bag_numeric(half_second_stream, windows, codebook)
        for window, tf in zip(windows, bags):
            expected = service.bag_numeric_window(half_second_stream.matrix(1)[window.indices], codebook)
            np.testing.assert_array_equal(tf, expected)


class TestAssembly:
    """Test sub-bag concatenation"""

    def test_numeric_then_text(self, service):
        bag = service.assemble_bag({1: np.array([1.0, 0.0]), 0: np.array([0.0, 2.0])}, [(1, 2), (0, 2)], 'A')
        np.testing.assert_array_equal(bag.tf, [1, 0, 0, 2])

    def test_single_modality(self, service):
        bag = service.assemble_bag({1: np.array([3.0, 1.0])}, [(1, 2)], 'A', time=0.8, label='x')
        np.testing.assert_array_equal(bag.tf, [3, 1])
        assert (bag.time, bag.label) == (0.8, 'x')

    def test_missing_feature_class(self, service):
        with pytest.raises(DimensionMismatchError):
            service.assemble_bag({1: np.array([1.0])}, [(1, 1), (2, 1)], 'A')
