import enum
from typing import Dict, List, Optional, Sequence
from xbow.formats.arff_format import write_arff
from xbow.formats.common import atomic_write, csv_writer, format_number, nominal_classes
from xbow.models.bag import Bag
from xbow.utils.errors import DataFormatError
from xbow.utils.logger import get_logger

logger = get_logger(__name__)


class OutputFormat(enum.Enum):
    ARFF = "arff"
    CSV = "csv"
    LIBSVM = "libsvm"


def write_bags(bags: Sequence[Bag], fmt: OutputFormat, path: str, include_name: bool = True,
               classes: Sequence[str] = ()):
    """
    Write bags in one of the output formats; all bags must have the same length.
    `classes` fixes the order of nominal labels (ARFF header, LIBSVM codes).
    """
    if not bags:
        raise DataFormatError("nothing to write")
    sizes = {bag.size for bag in bags}
    if len(sizes) != 1:
        raise DataFormatError(f"Bags have inconsistent lengths: {sorted(sizes)}")

    if fmt == OutputFormat.ARFF:
        write_arff(bags, path, include_name=include_name, classes=classes)
    elif fmt == OutputFormat.CSV:
        write_csv(bags, path, include_name=include_name)
    elif fmt == OutputFormat.LIBSVM:
        write_libsvm(bags, path, classes)
    else:
        raise DataFormatError(f"Unsupported output format {fmt}")


def write_csv(bags: Sequence[Bag], path: str, include_name: bool = True):
    """Same column order as ARFF, semicolon-separated, no header"""
    include_time = any(bag.time is not None for bag in bags)
    include_label = any(bag.label is not None for bag in bags)

    with atomic_write(path) as fh:
        writer = csv_writer(fh)
        for bag in bags:
            row: List[str] = []
            if include_name:
                row.append(bag.name)
            if include_time:
                row.append('' if bag.time is None else format_number(bag.time))
            row.extend(format_number(v) for v in bag.tf.tolist())
            if include_label:
                row.append(bag.label or '')
            writer.writerow(row)

    logger.info(f"Wrote {len(bags)} bags to {path} (CSV)")


def libsvm_label_map(labels: Sequence[Optional[str]], classes: Sequence[str] = ()) -> Dict[Optional[str], str]:
    """
    Numeric labels pass through; nominal labels become 0, 1, 2, ... in
    `classes` order, then by first appearance
    """
    nominal = nominal_classes(labels, classes)
    if nominal:
        mapping: Dict[Optional[str], str] = {label: str(i) for i, label in enumerate(nominal)}
    else:
        mapping = {label: format_number(float(label)) for label in labels if label is not None}
    mapping.setdefault(None, '0')
    return mapping


def format_libsvm_line(label: str, tf) -> str:
    pairs = [f"{i + 1}:{format_number(v)}" for i, v in enumerate(tf.tolist()) if v != 0]
    return ' '.join([label] + pairs)


def write_libsvm(bags: Sequence[Bag], path: str, classes: Sequence[str] = ()):
    """"<label> i:v ..." with 1-based ascending indices; zero entries are omitted"""
    mapping = libsvm_label_map([bag.label for bag in bags], classes)
    with atomic_write(path) as fh:
        for bag in bags:
            fh.write(format_libsvm_line(mapping[bag.label], bag.tf) + '\n')

    logger.info(f"Wrote {len(bags)} bags to {path} (LIBSVM)")
