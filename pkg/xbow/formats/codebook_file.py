"""
Codebook persistence

A UTF-8, line-oriented text file. The first line carries the format
version, then bracketed sections follow, closed by "[end]":

    xbow-codebook v1
    [scaling]          mode, then "offset <class> v..." / "scale <class> v..."
    [weighting]        log, idf, normalize flags, bag count, df vector
    [numeric <k>]      method, iterations, boundaries, one "word v..." per centroid
    [svq <k>]          block dimensions, followed by [svq <k> block <b>] and [svq <k> top]
    [text]             n-gram settings (informational) and one "term ..." per line
    [labels]           "classes <n>", then one "class <label>" per nominal class
    [end]

Numbers use the shortest decimal form that reads back to the same double.
"""

from typing import Dict, List, Optional, Tuple
import numpy as np
from config.config import Config
from xbow.formats.common import atomic_write, format_number
from xbow.models.codebook import (
    ClassBoundary, Codebook, CodebookMethod, Dictionary, ScalingMode, ScalingParams,
    SubCodebook, SvqStructure, WeightingState
)
from xbow.models.settings import TextConfig
from xbow.utils.errors import CodebookError
from xbow.utils.logger import get_logger

logger = get_logger(__name__)

MAGIC = 'xbow-codebook'
END = '[end]'


def _numbers(values) -> str:
    return ' '.join(format_number(v) for v in np.asarray(values, dtype=np.float64).ravel().tolist())


def _sub_codebook_lines(header: str, sub: SubCodebook) -> List[str]:
    lines = [header, f"method {sub.method.value}", f"iterations {sub.iterations}",
             f"words {sub.size}", f"dims {sub.dims}"]
    for boundary in sub.class_boundaries:
        lines.append(f"boundary {boundary.start} {boundary.count} {boundary.label}")
    lines.extend(f"word {_numbers(row)}" for row in sub.centroids)
    return lines


def save_codebook(codebook: Codebook, path: str):
    """Write a trained codebook; load_codebook reads it back losslessly"""
    codebook.weighting.validate()

    lines = [f"{MAGIC} {Config.CODEBOOK_FORMAT_VERSION}", '[scaling]', f"mode {codebook.scaling.mode.value}"]
    for k in sorted(codebook.scaling.offsets):
        lines.append(f"offset {k} {_numbers(codebook.scaling.offsets[k])}")
        lines.append(f"scale {k} {_numbers(codebook.scaling.scales[k])}")

    weighting = codebook.weighting
    lines += ['[weighting]', f"log {int(weighting.log)}", f"idf {int(weighting.idf)}",
              f"normalize {int(weighting.normalize)}", f"bags {weighting.n}"]
    if weighting.df is not None:
        lines.append(f"df {_numbers(weighting.df)}")

    for k in sorted(codebook.numeric):
        quantizer = codebook.numeric[k]
        if isinstance(quantizer, SvqStructure):
            lines += [f"[svq {k}]", f"blocks {' '.join(str(d) for d in quantizer.block_dims)}"]
            for b, block in enumerate(quantizer.block_codebooks):
                lines += _sub_codebook_lines(f"[svq {k} block {b}]", block)
            lines += _sub_codebook_lines(f"[svq {k} top]", quantizer.top_codebook)
        else:
            lines += _sub_codebook_lines(f"[numeric {k}]", quantizer)

    if codebook.dictionary is not None:
        text = codebook.text_config or TextConfig()
        lines += ['[text]', f"ngram {text.n_gram}", f"nchargram {text.n_char_gram}",
                  f"mintermfreq {text.min_term_freq}", f"maxtermfreq {text.max_term_freq}",
                  f"terms {codebook.dictionary.size}"]
        lines.extend(f"term {term}" for term in codebook.dictionary.terms)

    if codebook.classes:
        lines += ['[labels]', f"classes {len(codebook.classes)}"]
        lines.extend(f"class {label}" for label in codebook.classes)

    lines.append(END)
    with atomic_write(path) as fh:
        fh.write('\n'.join(lines) + '\n')
    logger.info(f"Saved codebook with {codebook.size} words to {path}")


class _Section:
    def __init__(self, header: Tuple[str, ...], line: int):
        self.header = header
        self.line = line
        self.entries: List[Tuple[int, str, str]] = []

    def values(self, key: str) -> List[Tuple[int, str]]:
        return [(line, rest) for line, k, rest in self.entries if k == key]

    def single(self, key: str, default: Optional[str] = None) -> str:
        found = self.values(key)
        if not found:
            if default is not None:
                return default
            raise CodebookError(f"Section [{' '.join(self.header)}] lacks '{key}'", line=self.line)
        return found[-1][1]


def _parse_floats(text: str, line: int) -> np.ndarray:
    try:
        return np.array([float(v) for v in text.split()], dtype=np.float64)
    except ValueError:
        raise CodebookError("Malformed number list", line=line)


def _parse_int(text: str, line: int) -> int:
    try:
        return int(text)
    except ValueError:
        raise CodebookError(f"Expected an integer, found '{text}'", line=line)


def _read_sections(path: str) -> List[_Section]:
    try:
        with open(path, encoding='utf-8') as fh:
            lines = fh.read().splitlines()
    except OSError as e:
        raise CodebookError(f"Cannot read codebook {path}: {e.strerror}")

    if not lines or not lines[0].startswith(MAGIC + ' '):
        raise CodebookError(f"{path} is not a codebook file", line=1)
    version = lines[0][len(MAGIC) + 1:].strip()
    if version != Config.CODEBOOK_FORMAT_VERSION:
        raise CodebookError(
            f"Unsupported codebook version '{version}', expected '{Config.CODEBOOK_FORMAT_VERSION}'", line=1
        )

    sections: List[_Section] = []
    finished = False
    for number, raw in enumerate(lines[1:], start=2):
        if finished:
            if raw.strip():
                raise CodebookError("Content after end marker", line=number)
            continue
        if raw == END:
            finished = True
        elif raw.startswith('[') and raw.endswith(']'):
            sections.append(_Section(tuple(raw[1:-1].split()), number))
        elif raw.strip():
            if not sections:
                raise CodebookError("Entry outside of a section", line=number)
            key, _, rest = raw.partition(' ')
            sections[-1].entries.append((number, key, rest))

    if not finished:
        raise CodebookError(f"Codebook {path} is truncated (missing end marker)")
    return sections


def _parse_method(section: _Section) -> CodebookMethod:
    value = section.single('method')
    try:
        return CodebookMethod(value)
    except ValueError:
        raise CodebookError(f"Unknown codebook method '{value}'", line=section.line)


def _parse_sub_codebook(section: _Section, feature_class: int) -> SubCodebook:
    words = [_parse_floats(rest, line) for line, rest in section.values('word')]
    expected = _parse_int(section.single('words'), section.line)
    dims = _parse_int(section.single('dims'), section.line)
    if len(words) != expected:
        raise CodebookError(f"Expected {expected} words, found {len(words)}", line=section.line)
    if any(len(w) != dims for w in words):
        raise CodebookError(f"Every word must have {dims} values", line=section.line)

    boundaries = []
    for line, rest in section.values('boundary'):
        parts = rest.split(' ', 2)
        if len(parts) != 3:
            raise CodebookError("Malformed class boundary", line=line)
        boundaries.append(ClassBoundary(parts[2], _parse_int(parts[0], line), _parse_int(parts[1], line)))

    return SubCodebook(
        feature_class=feature_class,
        centroids=np.vstack(words) if words else np.empty((0, dims)),
        method=_parse_method(section),
        class_boundaries=tuple(boundaries),
        iterations=_parse_int(section.single('iterations', '0'), section.line),
    )


def _feature_class(section: _Section, position: int = 1) -> int:
    try:
        k = int(section.header[position])
    except (IndexError, ValueError):
        raise CodebookError(f"Malformed section header [{' '.join(section.header)}]", line=section.line)
    if k not in range(1, 10):
        raise CodebookError(f"Feature class {k} out of range", line=section.line)
    return k


def load_codebook(path: str) -> Codebook:
    """Read a codebook written by save_codebook"""
    sections = _read_sections(path)
    codebook = Codebook()
    svq_blocks: Dict[int, Dict[int, SubCodebook]] = {}
    svq_tops: Dict[int, SubCodebook] = {}
    svq_dims: Dict[int, Tuple[int, ...]] = {}

    for section in sections:
        kind = section.header[0] if section.header else ''
        if kind == 'scaling':
            try:
                mode = ScalingMode(section.single('mode'))
            except ValueError:
                raise CodebookError("Unknown scaling mode", line=section.line)
            offsets = {}
            scales = {}
            for key, target in (('offset', offsets), ('scale', scales)):
                for line, rest in section.values(key):
                    k_text, _, values = rest.partition(' ')
                    target[_parse_int(k_text, line)] = _parse_floats(values, line)
            if set(offsets) != set(scales):
                raise CodebookError("Scaling offsets and scales cover different feature classes",
                                    line=section.line)
            codebook.scaling = ScalingParams(mode, offsets, scales)
        elif kind == 'weighting':
            df_values = section.values('df')
            codebook.weighting = WeightingState(
                log=section.single('log') == '1',
                idf=section.single('idf') == '1',
                normalize=section.single('normalize', '0') == '1',
                df=_parse_floats(df_values[-1][1], df_values[-1][0]) if df_values else None,
                n=_parse_int(section.single('bags'), section.line),
            )
            codebook.weighting.validate()
        elif kind == 'numeric':
            k = _feature_class(section)
            codebook.numeric[k] = _parse_sub_codebook(section, k)
        elif kind == 'svq' and len(section.header) == 2:
            k = _feature_class(section)
            svq_dims[k] = tuple(_parse_int(v, section.line) for v in section.single('blocks').split())
        elif kind == 'svq' and len(section.header) == 4 and section.header[2] == 'block':
            k = _feature_class(section)
            svq_blocks.setdefault(k, {})[_parse_int(section.header[3], section.line)] = \
                _parse_sub_codebook(section, k)
        elif kind == 'svq' and len(section.header) == 3 and section.header[2] == 'top':
            k = _feature_class(section)
            svq_tops[k] = _parse_sub_codebook(section, k)
        elif kind == 'text':
            terms = [rest for _, rest in section.values('term')]
            expected = _parse_int(section.single('terms'), section.line)
            if len(terms) != expected:
                raise CodebookError(f"Expected {expected} terms, found {len(terms)}", line=section.line)
            codebook.dictionary = Dictionary(tuple(terms))
            codebook.text_config = TextConfig(
                n_gram=_parse_int(section.single('ngram', '1'), section.line),
                n_char_gram=_parse_int(section.single('nchargram', '0'), section.line),
                min_term_freq=_parse_int(section.single('mintermfreq', '1'), section.line),
                max_term_freq=_parse_int(section.single('maxtermfreq', str(Config.DEFAULT_MAX_TERM_FREQ)),
                                         section.line),
            )
        elif kind == 'labels':
            classes = tuple(rest for _, rest in section.values('class'))
            expected = _parse_int(section.single('classes'), section.line)
            if len(classes) != expected or len(set(classes)) != len(classes):
                raise CodebookError(f"Expected {expected} distinct classes, found {len(classes)}", line=section.line)
            codebook.classes = classes
        else:
            raise CodebookError(f"Unknown section [{' '.join(section.header)}]", line=section.line)

    for k, dims in svq_dims.items():
        blocks = svq_blocks.get(k, {})
        if sorted(blocks) != list(range(len(dims))) or k not in svq_tops:
            raise CodebookError(f"Incomplete split vector quantiser for feature class {k}")
        codebook.numeric[k] = SvqStructure(k, dims, tuple(blocks[b] for b in range(len(dims))), svq_tops[k])

    _check_consistency(codebook)
    logger.info(f"Loaded codebook with {codebook.size} words from {path}")
    return codebook


def _check_consistency(codebook: Codebook):
    if not codebook.numeric and codebook.dictionary is None:
        raise CodebookError("Codebook holds neither numeric words nor a dictionary")
    if codebook.scaling.mode != ScalingMode.NONE and set(codebook.scaling.offsets) != set(codebook.numeric):
        raise CodebookError("Scaling parameters do not match the numeric feature classes")
    for k, quantizer in codebook.numeric.items():
        if k in codebook.scaling.offsets and len(codebook.scaling.offsets[k]) != quantizer.dims:
            raise CodebookError(f"Scaling parameters of feature class {k} have the wrong length")
    if codebook.weighting.df is not None and len(codebook.weighting.df) != codebook.size:
        raise CodebookError("Document frequency table does not match the codebook size")