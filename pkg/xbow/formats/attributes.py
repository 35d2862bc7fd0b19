import re
from typing import List
from xbow.models.attribute_spec import (
    AttributeSpec, Role, ROLE_CODES, TEXT, TEXT_CLASS, NAME, TIME
)
from xbow.utils.errors import SpecError

_REPEAT = re.compile(r'\[(\d+)\]')


def parse_attribute_spec(spec: str) -> AttributeSpec:
    """
    Parse an attribute string such as "ncr0" or "nt1[13]"

    n name, t time, c class label, r removed column, 0 text, 1-9 numeric
    feature class. "X[m]" repeats the role X m times.
    """
    if not spec:
        raise SpecError("Attribute specification is empty")

    roles: List[Role] = []
    pos = 0
    while pos < len(spec):
        char = spec[pos]
        if char in ROLE_CODES:
            role = Role(ROLE_CODES[char])
        elif char.isdigit() and char.isascii():
            digit = int(char)
            role = TEXT if digit == TEXT_CLASS else Role.numeric(digit)
        else:
            raise SpecError(f"Unknown attribute character '{char}' at position {pos + 1}")
        pos += 1

        count = 1
        if pos < len(spec) and spec[pos] == '[':
            match = _REPEAT.match(spec, pos)
            if not match:
                raise SpecError(f"Malformed repetition at position {pos + 1}")
            count = int(match.group(1))
            if count < 1:
                raise SpecError(f"Repetition count must be positive at position {pos + 1}")
            pos = match.end()
        roles.extend([role] * count)

    return AttributeSpec(tuple(roles))


def default_attribute_spec(column_count: int) -> AttributeSpec:
    """name, time, then numeric feature class 1 for every remaining column"""
    if column_count < 3:
        raise SpecError(
            f"Default attributes need name, time and at least one feature column, "
            f"input has {column_count} columns; use -attributes"
        )
    return AttributeSpec((NAME, TIME) + (Role.numeric(1),) * (column_count - 2))
