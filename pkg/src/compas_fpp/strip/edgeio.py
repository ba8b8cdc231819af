"""Compact text format of strip edge configurations.

::

    # K=2 model=standard
    origin V:1101
    0 H:11011 V:1111
    1 H:11111 V:0111

The header names the half width and the model. ``origin`` carries the vertical
flags of column 0 (standard model only). Line ``i`` carries the horizontal flags
``(i, j) -> (i + 1, j)`` and, for the standard model, the vertical flags of column
``i + 1``. Flags are listed in row order ``-K ...``, ``1`` open and ``0`` closed.
Blank lines and other ``#`` comment lines are ignored.
"""

import io
import re
from typing import TextIO
from typing import Union

import numpy

from compas_fpp.exceptions import ParameterError
from compas_fpp.strip.geometry import EdgeColumn
from compas_fpp.strip.geometry import Model
from compas_fpp.strip.geometry import StripConfiguration
from compas_fpp.strip.geometry import StripGeometry

HEADER = re.compile(r"^#\s*K=(\d+)\s+model=(\w+)\s*$")
LINE = re.compile(r"^(\d+)\s+H:([01]+)(?:\s+V:([01]+))?\s*$")
ORIGIN = re.compile(r"^origin\s+V:([01]+)\s*$")


def format_bits(flags) -> str:
    return "".join("1" if flag else "0" for flag in flags)


def parse_bits(text: str) -> numpy.ndarray:
    return numpy.frombuffer(text.encode("ascii"), dtype=numpy.uint8) == ord("1")


def dumps_edges(configuration: StripConfiguration) -> str:
    """Serialise a configuration to the text format."""
    geometry = configuration.geometry
    lines = ["# K={} model={}".format(geometry.K, geometry.model.value)]
    if not geometry.is_cross:
        lines.append("origin V:{}".format(format_bits(configuration.origin_vertical)))
    for i, column in enumerate(configuration.columns):
        line = "{} H:{}".format(i, format_bits(column.horizontal))
        if column.vertical is not None:
            line += " V:{}".format(format_bits(column.vertical))
        lines.append(line)
    return "\n".join(lines) + "\n"


def loads_edges(text: str) -> StripConfiguration:
    """Parse a configuration from the text format.

    Raises
    ------
    ParameterError
        On malformed input, with the offending line number.

    """
    geometry = None
    origin = None
    columns = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        match = HEADER.match(line)
        if match:
            if match.group(2) not in [model.value for model in Model]:
                raise ParameterError("line {}: unknown model {!r}".format(number, match.group(2)))
            geometry = StripGeometry(int(match.group(1)), Model(match.group(2)))
            continue
        if line.startswith("#"):
            continue
        if geometry is None:
            raise ParameterError("line {}: edge data before the '# K=... model=...' header".format(number))
        match = ORIGIN.match(line)
        if match:
            origin = parse_bits(match.group(1))
            continue
        match = LINE.match(line)
        if not match:
            raise ParameterError("line {}: cannot parse {!r}".format(number, raw))
        index = int(match.group(1))
        if index != len(columns):
            raise ParameterError("line {}: expected column {}, found {}".format(number, len(columns), index))
        horizontal = parse_bits(match.group(2))
        vertical = None if match.group(3) is None else parse_bits(match.group(3))
        if horizontal.size != geometry.rows or (vertical is not None and vertical.size != geometry.sites):
            raise ParameterError("line {}: flag count does not match K={}".format(number, geometry.K))
        columns.append(EdgeColumn(horizontal, vertical))
    if geometry is None:
        raise ParameterError("missing '# K=... model=...' header")
    try:
        return StripConfiguration(geometry, columns, origin)
    except Exception as error:
        raise ParameterError("inconsistent edge file: {}".format(error))


def dump_edges(configuration: StripConfiguration, target: Union[str, TextIO]) -> None:
    """Write a configuration to a path or an open text stream."""
    text = dumps_edges(configuration)
    if isinstance(target, io.TextIOBase) or hasattr(target, "write"):
        target.write(text)
        return
    with open(target, "w") as handle:
        handle.write(text)


def load_edges(source: Union[str, TextIO]) -> StripConfiguration:
    """Read a configuration from a path or an open text stream."""
    if hasattr(source, "read"):
        return loads_edges(source.read())
    with open(source, "r") as handle:
        return loads_edges(handle.read())
