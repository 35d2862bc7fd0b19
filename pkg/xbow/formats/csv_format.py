import os
from typing import List, Optional, Sequence
import numpy as np
from xbow.formats.attributes import default_attribute_spec
from xbow.formats.common import is_number, parse_number, read_rows
from xbow.models.attribute_spec import AttributeSpec, RoleKind, TEXT_CLASS
from xbow.models.dataset import Dataset, Frame
from xbow.utils.errors import DataFormatError
from xbow.utils.logger import get_logger

logger = get_logger(__name__)


def read_csv(path: str, spec: Optional[AttributeSpec] = None) -> Dataset:
    """
    Read a semicolon-separated input file into a Dataset

    Without a spec the default layout applies: name, time, numeric class 1
    for all remaining columns. A first row whose numeric or time fields do
    not parse is taken as a header.
    """
    rows = list(read_rows(path))
    if not rows:
        if spec is None:
            raise DataFormatError(f"{path} is empty and no attributes were given")
        return build_dataset([], spec, _instance_stem(path))

    if spec is None:
        spec = default_attribute_spec(len(rows[0][1]))

    for line, fields in rows:
        if len(fields) != len(spec):
            raise DataFormatError(
                f"Expected {len(spec)} fields as declared by attributes '{spec.code}', found {len(fields)}",
                line=line
            )

    if _looks_like_header(rows[0][1], spec):
        logger.debug(f"Skipping header row of {path}")
        rows = rows[1:]

    return build_dataset(rows, spec, _instance_stem(path))


def build_dataset(rows: Sequence, spec: AttributeSpec, default_name: str) -> Dataset:
    """Turn (line, fields) rows into frames according to the column roles"""
    name_col = spec.index_of(RoleKind.NAME)
    time_col = spec.index_of(RoleKind.TIME)
    label_col = spec.index_of(RoleKind.LABEL)
    text_cols = spec.columns_of(TEXT_CLASS)
    numeric_cols = {k: spec.columns_of(k) for k in spec.feature_classes}

    frames: List[Frame] = []
    for position, (line, fields) in enumerate(rows, start=1):
        if name_col is not None:
            name = fields[name_col]
        elif time_col is not None:
            name = default_name
        else:
            name = str(position)

        time = parse_number(fields[time_col], line, 'time') if time_col is not None else None
        label = fields[label_col] if label_col is not None else None
        text = ' '.join(fields[i] for i in text_cols) if text_cols else None

        numeric = {}
        for k, cols in numeric_cols.items():
            numeric[k] = np.array([parse_number(fields[i], line, f'feature (column {i + 1})') for i in cols],
                                  dtype=np.float64)

        frames.append(Frame(name=name, time=time, label=label, numeric=numeric, text=text))

    return Dataset.from_frames(
        frames, spec.dims,
        has_time=spec.has_time, has_names=spec.has_name, has_text=spec.has_text
    )


def _looks_like_header(fields: Sequence[str], spec: AttributeSpec) -> bool:
    checked = [i for i, role in enumerate(spec.roles) if role.kind in (RoleKind.NUMERIC, RoleKind.TIME)]
    return any(not is_number(fields[i]) for i in checked)


def _instance_stem(path: str) -> str:
    return os.path.splitext(os.path.basename(path))[0]
