import os
from typing import List, Optional, Sequence, Tuple
import arff
from config.config import Config
from xbow.formats.common import atomic_write, format_number, nominal_classes
from xbow.formats.csv_format import build_dataset
from xbow.models.attribute_spec import AttributeSpec, Role, NAME, TIME, LABEL, REMOVE, TEXT
from xbow.models.bag import Bag
from xbow.models.dataset import Dataset
from xbow.utils.errors import DataFormatError, SpecError
from xbow.utils.logger import get_logger

logger = get_logger(__name__)

NUMERIC_TYPES = ('NUMERIC', 'REAL', 'INTEGER')
TIME_NAMES = ('frametime', 'time')
LABEL_NAMES = ('class', 'label')


def read_arff(path: str, spec: Optional[AttributeSpec] = None) -> Tuple[Dataset, AttributeSpec]:
    """
    Read an ARFF file; roles are inferred from attribute names and types
    unless an explicit spec is given
    """
    try:
        with open(path, encoding='utf-8') as fh:
            document = arff.load(fh)
    except arff.ArffException as e:
        line = getattr(e, 'line', None)
        raise DataFormatError(f"Malformed ARFF: {str(e)}", line=line if line and line > 0 else None)
    except OSError as e:
        raise DataFormatError(f"Cannot read {path}: {e.strerror}")

    attributes = document['attributes']
    if spec is None:
        spec = infer_arff_spec(attributes)
    elif len(spec) != len(attributes):
        raise SpecError(f"Attributes '{spec.code}' declare {len(spec)} columns, {path} has {len(attributes)}")

    rows = []
    for position, values in enumerate(document['data'], start=1):
        if len(values) != len(attributes):
            raise DataFormatError(f"Data row {position} has {len(values)} values, expected {len(attributes)}")
        rows.append((position, [_field_text(v) for v in values]))

    stem = os.path.splitext(os.path.basename(path))[0]
    return build_dataset(rows, spec, stem), spec


def infer_arff_spec(attributes: Sequence[Tuple[str, object]]) -> AttributeSpec:
    """
    Role inference: string/nominal 'name' -> name, numeric 'frameTime'/'time' -> time,
    'class'/'label' (or else the last nominal) -> label,
    other strings -> text, other nominals -> removed, numerics -> feature class 1
    """
    roles: List[Optional[Role]] = [None] * len(attributes)
    lowered = [name.lower() for name, _ in attributes]

    def is_numeric(type_):
        return isinstance(type_, str) and type_.upper() in NUMERIC_TYPES

    for i, (_, type_) in enumerate(attributes):
        if lowered[i] == 'name' and not is_numeric(type_) and NAME not in roles:
            roles[i] = NAME
        elif lowered[i] in TIME_NAMES and is_numeric(type_) and TIME not in roles:
            roles[i] = TIME

    label_index = None
    named = [i for i, name in enumerate(lowered) if name in LABEL_NAMES and roles[i] is None]
    nominal = [i for i, (_, type_) in enumerate(attributes)
               if isinstance(type_, (list, tuple)) and roles[i] is None]
    if named:
        label_index = named[-1]
    elif nominal:
        label_index = nominal[-1]
    if label_index is not None:
        roles[label_index] = LABEL

    for i, (_, type_) in enumerate(attributes):
        if roles[i] is not None:
            continue
        if is_numeric(type_):
            roles[i] = Role.numeric(1)
        elif isinstance(type_, str) and type_.upper() == 'STRING':
            roles[i] = TEXT
        else:
            roles[i] = REMOVE

    return AttributeSpec(tuple(roles))


def _field_text(value) -> str:
    if value is None:
        return '?'
    if isinstance(value, float):
        return format_number(value)
    return str(value)


def write_arff(bags: Sequence[Bag], path: str, include_name: bool = True, classes: Sequence[str] = ()):
    """
    name (string), time (numeric, windowed bags only), tf_0..tf_{V-1}, class last.
    Nominal classes are declared in `classes` order, unseen labels appended.
    """
    size = bags[0].size
    include_time = any(bag.time is not None for bag in bags)
    labels = [bag.label for bag in bags]

    attributes = []
    if include_name:
        attributes.append(('name', 'STRING'))
    if include_time:
        attributes.append(('time', 'NUMERIC'))
    attributes.extend((f'tf_{i}', 'NUMERIC') for i in range(size))

    label_type = _label_type(labels, classes)
    if label_type is not None:
        attributes.append(('class', label_type))

    data = []
    for bag in bags:
        row = []
        if include_name:
            row.append(bag.name)
        if include_time:
            row.append(None if bag.time is None else format_number(bag.time))
        row.extend(format_number(v) for v in bag.tf.tolist())
        if label_type is not None:
            row.append(bag.label)
        data.append(row)

    document = {
        'relation': Config.ARFF_RELATION,
        'attributes': attributes,
        'data': data,
    }
    with atomic_write(path) as fh:
        arff.dump(document, fh)
    logger.info(f"Wrote {len(bags)} bags with {size} words to {path} (ARFF)")


def _label_type(labels: Sequence[Optional[str]], classes: Sequence[str] = ()):
    if all(label is None for label in labels):
        return None
    nominal = nominal_classes(labels, classes)
    return list(nominal) if nominal else 'NUMERIC'
