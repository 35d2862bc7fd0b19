import csv
import math
import os
import tempfile
from contextlib import contextmanager
from typing import Iterator, List, Optional, Sequence, TextIO, Tuple
from config.config import Config
from xbow.utils.errors import DataFormatError


def format_number(value: float) -> str:
    """Shortest decimal text that reads back to the same double; integral values without '.0'"""
    value = float(value)
    if math.isfinite(value) and value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


def parse_number(text: str, line: Optional[int] = None, what: str = 'value') -> float:
    try:
        return float(text)
    except ValueError:
        raise DataFormatError(f"Non-numeric {what} '{text}'", line=line)


def is_number(text: str) -> bool:
    try:
        float(text)
        return True
    except ValueError:
        return False


def read_rows(path: str) -> Iterator[Tuple[int, List[str]]]:
    """Yield (line number, fields) of a semicolon file; quotes are honoured, blank lines skipped"""
    try:
        with open(path, newline='', encoding='utf-8') as fh:
            reader = csv.reader(fh, delimiter=Config.CSV_SEPARATOR, quotechar='"', doublequote=True)
            try:
                for fields in reader:
                    if not fields or fields == ['']:
                        continue
                    yield reader.line_num, fields
            except csv.Error as e:
                raise DataFormatError(f"Malformed CSV: {str(e)}", line=reader.line_num)
    except OSError as e:
        raise DataFormatError(f"Cannot read {path}: {e.strerror}")


def nominal_classes(labels: Sequence[Optional[str]], known: Sequence[str] = ()) -> Tuple[str, ...]:
    """
    Class order for nominal labels: the known classes first, then unseen
    labels by first appearance. Empty when every label is numeric and no
    classes are known.
    """
    present = [label for label in labels if label is not None]
    if not known and all(is_number(label) for label in present):
        return ()
    return tuple(dict.fromkeys(list(known) + present))


def csv_writer(fh: TextIO, lineterminator: str = '\n'):
    return csv.writer(fh, delimiter=Config.CSV_SEPARATOR, quotechar='"',
                      doublequote=True, lineterminator=lineterminator, quoting=csv.QUOTE_MINIMAL)


@contextmanager
def atomic_write(path: str) -> Iterator[TextIO]:
    """Write through a temporary file in the target directory, replacing `path` only on success"""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix='.xbow-', suffix='.tmp')
    try:
        with os.fdopen(fd, 'w', encoding='utf-8', newline='') as fh:
            yield fh
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise
