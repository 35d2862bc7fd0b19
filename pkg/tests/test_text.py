import numpy as np
import pytest
from scripts.generate_synthetic_corpus import generate_text_rows
from xbow.models import Dataset, Dictionary, Frame, TextConfig
from xbow.services.bagging_service import BaggingService
from xbow.services.postprocess_service import PostprocessService
from xbow.services.text_service import TextService
from xbow.utils.errors import CodebookError
from xbow.utils.metrics import weighted_accuracy


BIGRAM_DOCS = ["red fox jumps", "red fox sleeps", "the red fox", "fox jumps high", "red red red", "the fox"]
BIGRAM_CONFIG = TextConfig(n_gram=2, min_term_freq=2, max_term_freq=5)


@pytest.fixture
def service():
    return TextService()


@pytest.fixture
def small_corpus(service):
    """Six documents: the, cat, sat and dog three times each; a and ran once"""
    docs = ["The cat sat", "the dog sat", "a cat ran", "the cat", "dog dog", "sat"]
    return [service.tokenize(doc) for doc in docs]


def text_dataset(rows):
    frames = [Frame(name, label=label, text=text) for name, label, _, text in rows]
    return Dataset.from_frames(frames, {}, has_text=True)


class TestTokenize:
    """Test word and character n-grams"""

    def test_word_bigrams(self, service):
        assert service.tokenize("Good day", TextConfig(n_gram=2)) == ['good', 'day', 'good day']

    def test_character_grams(self, service):
        assert service.tokenize("abc", TextConfig(n_char_gram=2)) == ['abc', 'ab', 'bc']

    def test_empty_text(self, service):
        assert service.tokenize("") == []
        assert service.tokenize(None) == []

    def test_punctuation_separates(self, service):
        assert service.tokenize("Hello, world!! it's") == ['hello', 'world', 'it', 's']

    def test_gram_counts(self, service):
        """A text of L tokens has L - m + 1 word m-grams for every m"""
        text = "one two three four five six seven"
        for n in range(1, 5):
            tokens = service.tokenize(text, TextConfig(n_gram=n))
            assert len(tokens) == sum(7 - m + 1 for m in range(1, n + 1))

    def test_short_token_gives_no_character_grams(self, service):
        assert service.tokenize("a bc", TextConfig(n_char_gram=3)) == ['a', 'bc']

    def test_frame_tokens(self, service):
        ds = text_dataset([('t1', 'x', 'u', 'Red fox'), ('t2', 'y', 'u', '')])
        assert service.frame_tokens(ds) == [['red', 'fox'], []]


class TestDictionary:
    """Test dictionary learning and stopping"""

    def test_frequency_stopping(self, service):
        corpus = [['the'] * 50 + ['cat'] * 5 + ['xq']]
        dictionary = service.build_dictionary(corpus, TextConfig(min_term_freq=2, max_term_freq=40))
        assert dictionary.terms == ('cat',)

    def test_order_is_frequency_then_alphabetical(self, service, small_corpus):
        assert service.build_dictionary(small_corpus).terms == ('cat', 'dog', 'sat', 'the', 'a', 'ran')

    def test_hand_counted_thresholds(self, service, small_corpus):
        frequent = service.build_dictionary(small_corpus, TextConfig(min_term_freq=2))
        assert frequent.terms == ('cat', 'dog', 'sat', 'the')
        rare = service.build_dictionary(small_corpus, TextConfig(max_term_freq=2))
        assert rare.terms == ('a', 'ran')

    def test_bigrams_counted_as_terms(self, service):
        corpus = [service.tokenize(doc, TextConfig(n_gram=2)) for doc in ("good day", "good day sir")]
        dictionary = service.build_dictionary(corpus, TextConfig(min_term_freq=2))
        assert dictionary.terms == ('day', 'good', 'good day')

    def test_hand_counted_bigram_corpus(self, service):
        """'red' occurs 6 times and is stopped by maxTermFreq; singletons fall below minTermFreq"""
        corpus = [service.tokenize(doc, BIGRAM_CONFIG) for doc in BIGRAM_DOCS]
        dictionary = service.build_dictionary(corpus, BIGRAM_CONFIG)
        assert dictionary.terms == ('fox', 'red fox', 'fox jumps', 'jumps', 'red red', 'the')

    def test_everything_stopped(self, service, small_corpus):
        with pytest.raises(CodebookError, match='minTermFreq'):
            service.build_dictionary(small_corpus, TextConfig(min_term_freq=10))

    def test_empty_corpus(self, service):
        with pytest.raises(CodebookError):
            service.build_dictionary([])


class TestTextBags:
    """Test term counting"""

    def test_counts_and_unknown_terms(self, service):
        dictionary = Dictionary(('cat', 'dog'))
        np.testing.assert_array_equal(service.bag_text(['dog', 'dog', 'bird'], dictionary), [0, 2])

    def test_no_known_terms(self, service):
        np.testing.assert_array_equal(service.bag_text(['bird'], Dictionary(('cat',))), [0])

    def test_windows_merge_frames(self, service):
        ds = text_dataset([('a', 'x', 'u', 'cat dog'), ('a', 'x', 'u', 'dog'), ('b', 'y', 'u', 'fish')])
        windows = BaggingService().segment_windows(ds)
        bags = service.bag_windows(service.frame_tokens(ds), windows, Dictionary(('cat', 'dog', 'fish')))
        np.testing.assert_array_equal(bags, [[1, 2, 0], [0, 0, 1]])

    def test_hand_counted_bigram_bags(self, service):
        rows = [(f'd{i}', 'x', 'u', doc) for i, doc in enumerate(BIGRAM_DOCS)]
        ds = text_dataset(rows)
        tokens = service.frame_tokens(ds, BIGRAM_CONFIG)
        dictionary = service.build_dictionary(tokens, BIGRAM_CONFIG)
        expected = [
            [1, 1, 1, 1, 0, 0],
            [1, 1, 0, 0, 0, 0],
            [1, 1, 0, 0, 0, 1],
            [1, 0, 1, 1, 0, 0],
            [0, 0, 0, 0, 2, 0],
            [1, 0, 0, 0, 0, 1],
        ]
        for doc_tokens, row in zip(tokens, expected):
            np.testing.assert_array_equal(service.bag_text(doc_tokens, dictionary), row)
        windows = BaggingService().segment_windows(ds)
        np.testing.assert_array_equal(service.bag_windows(tokens, windows, dictionary), expected)

    def test_classes_are_separable(self, service):
        """Nearest-centroid on normalised bags splits tweets with class-exclusive marker words"""
        train = text_dataset(generate_text_rows(1000, seed=0))
        test = text_dataset(generate_text_rows(1000, seed=1))
        bagging = BaggingService()
        postprocess = PostprocessService()

        train_tokens = service.frame_tokens(train)
        dictionary = service.build_dictionary(train_tokens)

        def bags_of(ds, tokens):
            windows = bagging.segment_windows(ds)
            return postprocess.normalize_bag(service.bag_windows(tokens, windows, dictionary)), windows

        train_bags, train_windows = bags_of(train, train_tokens)
        test_bags, test_windows = bags_of(test, service.frame_tokens(test))

        classes = sorted({w.label for w in train_windows})
        train_labels = np.array([w.label for w in train_windows])
        centroids = np.vstack([train_bags[train_labels == c].mean(axis=0) for c in classes])
        predicted = [classes[i] for i in np.argmax(test_bags @ centroids.T, axis=1)]

        assert weighted_accuracy([w.label for w in test_windows], predicted) >= 0.99
