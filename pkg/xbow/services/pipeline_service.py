import os
from typing import Callable, Dict, List, Optional
import numpy as np
from xbow.formats.arff_format import read_arff
from xbow.formats.attributes import parse_attribute_spec
from xbow.formats.codebook_file import load_codebook, save_codebook
from xbow.formats.csv_format import read_csv
from xbow.formats.labels import read_labels
from xbow.formats.common import nominal_classes
from xbow.formats.output import OutputFormat, write_bags
from xbow.models.attribute_spec import TEXT_CLASS
from xbow.models.bag import Bag
from xbow.models.codebook import Codebook, ScalingParams, WeightingState
from xbow.models.dataset import Dataset, LabelTable
from xbow.models.run_config import RunConfig
from xbow.services.bagging_service import BaggingService, Window, concatenate_parts, instance_ends
from xbow.services.codebook_service import CodebookService
from xbow.services.postprocess_service import PostprocessService
from xbow.services.preprocess_service import PreprocessService
from xbow.services.text_service import TextService
from xbow.utils.errors import DimensionMismatchError, UsageError, XbowError
from xbow.utils.logger import get_logger
from xbow.utils.rng import RngStream

logger = get_logger(__name__)


class PipelineService:
    """
    Runs the whole workflow for one RunConfig:

    read input -> activity filter -> scaling -> codebook (learn or load)
    -> windows -> quantise and bag -> weighting -> write output -> save codebook

    Errors are re-raised tagged with the stage they came from.
    """

    def __init__(self):
        self.preprocess_service = PreprocessService()
        self.codebook_service = CodebookService()
        self.text_service = TextService()
        self.postprocess_service = PostprocessService()

    def run(self, cfg: RunConfig) -> List[Bag]:
        bagging_service = BaggingService(cfg.quantization)

        ds = self._stage('read input', self.read_input, cfg)
        labels = self._stage('read labels', read_labels, cfg.labels_path) if cfg.labels_path else None

        # window spans come from the unfiltered streams
        ends = instance_ends(ds)
        if cfg.activity is not None:
            ds = self._stage('activity filter', self.preprocess_service.filter_activity, ds,
                             cfg.activity.feature_class, cfg.activity.dim, cfg.activity.threshold)

        codebook: Optional[Codebook] = None
        if cfg.train_mode:
            scaling = self._stage('scaling', self.preprocess_service.fit_scaling, ds, cfg.scaling)
        else:
            codebook = self._stage('read codebook', load_codebook, cfg.read_codebook)
            self._stage('read codebook', check_compatible, codebook, ds)
            scaling = codebook.scaling
        ds = self._stage('scaling', self.preprocess_service.apply_scaling, ds, scaling)

        windows = self._stage('windowing', bagging_service.segment_windows, ds, cfg.windowing, labels,
                              ends)
        tokens = self.text_service.frame_tokens(ds, cfg.text) if ds.has_text else None

        if codebook is None:
            codebook = self._stage('codebook', self.learn_codebook, cfg, ds, labels, tokens, scaling,
                                   bagging_service, ends)

        matrix = self._stage('bagging', self.bag_windows, ds, windows, codebook, tokens, bagging_service)

        if cfg.train_mode:
            codebook.weighting = self._stage('weighting', self.postprocess_service.fit, matrix,
                                             cfg.log, cfg.idf, cfg.normalize)
        else:
            codebook.weighting = self._stage('weighting', apply_mode_weighting, codebook.weighting, cfg)
        matrix = self._stage('weighting', self.postprocess_service.transform, matrix, codebook.weighting,
                             codebook.layout())

        bags = [Bag(w.name, row, w.time, w.label) for w, row in zip(windows, matrix)]
        classes = nominal_classes([bag.label for bag in bags], codebook.classes)
        if cfg.train_mode:
            codebook.classes = classes
        elif len(classes) > len(codebook.classes):
            unseen = list(classes[len(codebook.classes):])
            logger.warning(f"Labels unseen in training appended to the class list: {unseen}")

        if cfg.output_path:
            fmt = output_format(cfg.output_path)
            self._stage('write output', write_bags, bags, fmt, cfg.output_path, classes=classes)

        if cfg.train_mode and cfg.write_codebook:
            try:
                self._stage('save codebook', save_codebook, codebook, cfg.write_codebook)
            except Exception:
                # a run either produces both files or neither
                if cfg.output_path and os.path.exists(cfg.output_path):
                    os.remove(cfg.output_path)
                raise

        logger.info(f"Produced {len(bags)} bags of {codebook.size} words")
        return bags

    def read_input(self, cfg: RunConfig) -> Dataset:
        spec = parse_attribute_spec(cfg.attributes) if cfg.attributes else None
        if cfg.input_path.lower().endswith('.arff'):
            ds, _ = read_arff(cfg.input_path, spec)
        else:
            ds = read_csv(cfg.input_path, spec)
        logger.info(f"Read {len(ds)} frames from {cfg.input_path}")
        return ds

    def learn_codebook(self, cfg: RunConfig, ds: Dataset, labels: Optional[LabelTable],
                       tokens: Optional[List[List[str]]], scaling: ScalingParams,
                       bagging_service: BaggingService,
                       ends: Optional[Dict[str, Optional[float]]] = None) -> Codebook:
        """Learn one numeric codebook per feature class and the dictionary for text columns"""
        codebook = Codebook(scaling=scaling, text_config=cfg.text if tokens is not None else None)
        rng = RngStream(cfg.seed)

        frame_labels = None
        if cfg.supervised and ds.feature_classes:
            frame_labels = bagging_service.frame_labels(ds, cfg.windowing, labels, ends)

        for k in ds.feature_classes:
            stream = rng.child(k)
            if cfg.supervised:
                codebook.numeric[k] = self.codebook_service.generate_supervised(
                    ds, k, cfg.codebook_size, cfg.method, stream, frame_labels=frame_labels
                )
            elif cfg.svq is not None:
                codebook.numeric[k] = self.codebook_service.build_svq(
                    ds.matrix(k), cfg.svq.block_count, cfg.svq.block_size, cfg.codebook_size,
                    cfg.method, stream, k
                )
            else:
                codebook.numeric[k] = self.codebook_service.learn(ds.matrix(k), cfg.codebook_size, cfg.method,
                                                                  stream, k)

        if tokens is not None:
            codebook.dictionary = self.text_service.build_dictionary(tokens, cfg.text)
        return codebook

    def bag_windows(self, ds: Dataset, windows: List[Window], codebook: Codebook,
                    tokens: Optional[List[List[str]]], bagging_service: BaggingService) -> np.ndarray:
        """Raw term frequencies, one row per window"""
        parts = {k: bagging_service.bag_numeric(ds, windows, quantizer)
                 for k, quantizer in codebook.numeric.items()}
        if codebook.dictionary is not None:
            parts[TEXT_CLASS] = self.text_service.bag_windows(tokens, windows, codebook.dictionary)
        return concatenate_parts(parts, codebook.layout())

    def _stage(self, stage: str, func: Callable, *args, **kwargs):
        try:
            return func(*args, **kwargs)
        except XbowError as e:
            raise e.in_stage(stage)


def check_compatible(codebook: Codebook, ds: Dataset):
    """A loaded codebook must cover exactly the feature classes and dimensions of the input"""
    if set(codebook.numeric) != set(ds.feature_classes):
        raise DimensionMismatchError(
            f"Codebook covers feature classes {sorted(codebook.numeric)}, input has {list(ds.feature_classes)}"
        )
    for k, quantizer in codebook.numeric.items():
        if quantizer.dims != ds.dims[k]:
            raise DimensionMismatchError(
                f"Codebook was trained on {quantizer.dims} dimensions for feature class {k}, "
                f"input has {ds.dims[k]}"
            )
    if ds.has_text and codebook.dictionary is None:
        raise DimensionMismatchError("Input has text columns but the codebook holds no dictionary")
    if not ds.has_text and codebook.dictionary is not None:
        raise DimensionMismatchError("Codebook holds a dictionary but the input has no text columns")


def apply_mode_weighting(stored: WeightingState, cfg: RunConfig) -> WeightingState:
    """Weighting stored with the codebook, plus any flags restated on the command line"""
    if cfg.idf and not stored.idf:
        raise UsageError("-idf in apply mode needs document frequencies stored in the codebook")
    return WeightingState(
        log=stored.log or cfg.log,
        idf=stored.idf,
        normalize=stored.normalize or cfg.normalize,
        df=stored.df,
        n=stored.n,
    )


def output_format(path: str) -> OutputFormat:
    extension = os.path.splitext(path)[1].lower().lstrip('.')
    try:
        return OutputFormat(extension)
    except ValueError:
        raise UsageError(f"Cannot tell the output format of {path}; use .arff, .csv or .libsvm")
