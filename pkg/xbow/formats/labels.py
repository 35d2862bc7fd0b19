from xbow.formats.common import is_number, parse_number, read_rows
from xbow.models.dataset import LabelTable
from xbow.utils.errors import DataFormatError
from xbow.utils.logger import get_logger

logger = get_logger(__name__)

HEADER_NAMES = ('name', 'instance', 'id')


def read_labels(path: str) -> LabelTable:
    """
    Read a labels file: "name;time;label" rows, or "name;label" for
    whole-instance labels. An optional header row is skipped.
    """
    table = LabelTable()
    rows = list(read_rows(path))
    if not rows:
        logger.warning(f"Labels file {path} is empty")
        return table

    width = len(rows[0][1])
    if width not in (2, 3):
        raise DataFormatError(f"Labels need 2 or 3 fields (name;[time;]label), found {width}", line=rows[0][0])

    first = rows[0][1]
    if (width == 3 and not is_number(first[1])) or (width == 2 and first[0].lower() in HEADER_NAMES):
        rows = rows[1:]

    for line, fields in rows:
        if len(fields) != width:
            raise DataFormatError(f"Expected {width} fields, found {len(fields)}", line=line)
        if width == 3:
            time = parse_number(fields[1], line, 'time')
            table.add(fields[0], time, fields[2], line=line)
        else:
            table.add(fields[0], None, fields[1], line=line)

    logger.info(f"Read {len(table)} labels from {path}")
    return table
