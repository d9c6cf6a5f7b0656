"""Tabular data model and the .names / .data interchange formats.

A dataset is described by two files: an XML ``.names`` document holding the
attribute schema (names, types, nominal domains, skip flags, class choice,
separator, missing-value token) and a ``.data`` delimited text file with one
object per line. Readers collect row-level problems instead of aborting, so
a batch load with a few bad lines still yields a usable dataset plus an
error report.
"""

from __future__ import annotations

import math
import xml.parsers.expat
from dataclasses import dataclass, field, replace
from typing import Union
from xml.sax.saxutils import quoteattr

NOMINAL = "nominal"
CONTINUOUS = "continuous"

DEFAULT_MISSING = "?"


class DatasetError(Exception):
    """Base class for schema and format errors."""


class MetadataError(DatasetError):
    pass


class NamesParseError(DatasetError):
    """Raised for .names documents that violate the schema DTD."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DataWriteError(DatasetError):
    pass


class _MissingType:
    """Singleton marker for an absent cell value."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "MISSING"


MISSING = _MissingType()

# A cell is a nominal token, a finite real number, or MISSING.
Cell = Union[str, float, _MissingType]


@dataclass
class AttributeMeta:
    """Schema entry for one column.

    ``domain`` lists the allowed nominal tokens in order; an empty domain is
    open and gets filled with first-seen tokens while reading data. Skipped
    attributes are carried along but stay out of every computation.
    """

    name: str
    kind: str = NOMINAL
    domain: list[str] = field(default_factory=list)
    skip: bool = False
    description: str = ""
    missing_value_override: str | None = None

    def validate(self):
        if not self.name:
            raise MetadataError("attribute name must be non-empty")
        if self.kind not in (NOMINAL, CONTINUOUS):
            raise MetadataError(f"attribute {self.name!r}: unknown kind {self.kind!r}")
        if self.domain and self.kind != NOMINAL:
            raise MetadataError(f"attribute {self.name!r}: domain given for a continuous attribute")
        if len(set(self.domain)) != len(self.domain):
            raise MetadataError(f"attribute {self.name!r}: duplicate domain tokens")

    def missing_token(self, metadata):
        if self.missing_value_override is not None:
            return self.missing_value_override
        return metadata.missing_value


@dataclass
class Metadata:
    """Ordered attribute schema plus file-level parameters."""

    attributes: list[AttributeMeta] = field(default_factory=list)
    separator: str = ","
    missing_value: str = DEFAULT_MISSING
    description: str = ""
    class_attribute: str | None = None

    def validate(self):
        if len(self.separator) != 1:
            raise MetadataError(f"separator must be exactly one character, got {self.separator!r}")
        seen = set()
        for attr in self.attributes:
            attr.validate()
            if attr.name in seen:
                raise MetadataError(f"duplicate attribute name {attr.name!r}")
            seen.add(attr.name)
            for token in attr.domain:
                if self.separator in token:
                    raise MetadataError(
                        f"attribute {attr.name!r}: domain token {token!r} contains the separator"
                    )
        if self.class_attribute is not None:
            try:
                cls = self.attribute(self.class_attribute)
            except KeyError:
                raise MetadataError(f"class attribute {self.class_attribute!r} does not exist") from None
            if cls.kind != NOMINAL:
                raise MetadataError(f"class attribute {cls.name!r} must be nominal")
            if cls.skip:
                raise MetadataError(f"class attribute {cls.name!r} must not be skipped")

    @property
    def p(self):
        return len(self.attributes)

    @property
    def names(self):
        return [a.name for a in self.attributes]

    def attribute(self, name) -> AttributeMeta:
        for attr in self.attributes:
            if attr.name == name:
                return attr
        raise KeyError(name)

    def attr_index(self, name) -> int:
        for i, attr in enumerate(self.attributes):
            if attr.name == name:
                return i
        raise KeyError(name)

    def copy(self) -> "Metadata":
        return Metadata(
            attributes=[replace(a, domain=list(a.domain)) for a in self.attributes],
            separator=self.separator,
            missing_value=self.missing_value,
            description=self.description,
            class_attribute=self.class_attribute,
        )


@dataclass
class RowError:
    """One rejected input line; the line number is 1-based over the raw text."""

    line: int
    message: str


@dataclass
class Dataset:
    """N rows of p cells each, in attribute order.

    ``row_ids`` identify objects for the whole lifetime of a session: subset
    operations (filter, crop, delete) keep the original ids so exported
    extracts and projections stay traceable to the source rows.
    """

    metadata: Metadata
    rows: list[list[Cell]]
    row_ids: list[int]

    def __post_init__(self):
        if len(self.rows) != len(self.row_ids):
            raise DatasetError("rows and row_ids must have equal length")

    @property
    def n_rows(self):
        return len(self.rows)

    def validate(self):
        self.metadata.validate()
        if len(set(self.row_ids)) != len(self.row_ids):
            raise DatasetError("row_ids must be unique")
        p = self.metadata.p
        for rid, row in zip(self.row_ids, self.rows):
            if len(row) != p:
                raise DatasetError(f"row {rid}: expected {p} cells, got {len(row)}")
            for attr, cell in zip(self.metadata.attributes, row):
                if cell is MISSING:
                    continue
                if attr.kind == CONTINUOUS:
                    if not isinstance(cell, (int, float)) or not math.isfinite(cell):
                        raise DatasetError(f"row {rid}, attribute {attr.name!r}: not a finite number")
                else:
                    if not isinstance(cell, str):
                        raise DatasetError(f"row {rid}, attribute {attr.name!r}: nominal cell must be a token")
                    if attr.domain and cell not in attr.domain:
                        raise DatasetError(
                            f"row {rid}, attribute {attr.name!r}: token {cell!r} not in domain"
                        )

    def row_by_id(self, row_id) -> list[Cell]:
        return self.rows[self.row_ids.index(row_id)]

    def column_values(self, name) -> list[Cell]:
        i = self.metadata.attr_index(name)
        return [row[i] for row in self.rows]

    def subset(self, keep_ids) -> "Dataset":
        """Rows whose id is in ``keep_ids``, original order and ids preserved."""
        keep = set(keep_ids)
        rows, ids = [], []
        for rid, row in zip(self.row_ids, self.rows):
            if rid in keep:
                rows.append(row)
                ids.append(rid)
        return Dataset(self.metadata, rows, ids)


# --------------------------------------------------------------------------
# .names format
# --------------------------------------------------------------------------

_METADATA_XML_ATTRS = ("separator", "missingValue", "description", "class")
_ATTRIBUTE_XML_ATTRS = ("name", "type", "domain", "description", "missingValue", "skip")


def _scan_xml(xml_text):
    """Flat (tag, attrs, line, depth) list for the document's elements.

    expat keeps attribute and element document order, and its line counter
    gives error locations the tree API would lose.
    """
    parser = xml.parsers.expat.ParserCreate()
    elements = []
    stack = []

    def start(tag, attrs):
        elements.append((tag, attrs, parser.CurrentLineNumber, len(stack)))
        stack.append(tag)

    def end(tag):
        stack.pop()

    def text(data):
        if data.strip():
            raise NamesParseError(
                f"unexpected text content {data.strip()!r}", parser.CurrentLineNumber
            )

    parser.StartElementHandler = start
    parser.EndElementHandler = end
    parser.CharacterDataHandler = text
    try:
        parser.Parse(xml_text, True)
    except xml.parsers.expat.ExpatError as exc:
        raise NamesParseError(f"malformed XML: {exc}") from exc
    return elements


def parse_names(xml_text: str) -> Metadata:
    """Read a .names document into a validated Metadata.

    The document must follow the schema exactly: a ``metadata`` root with a
    required ``separator`` and optional ``missingValue``/``description``/
    ``class``, containing only ``attribute`` elements with a required
    ``name``, optional ``type`` (default nominal), ``domain`` (comma split),
    ``description``, ``missingValue`` and ``skip`` (default false).
    """
    elements = _scan_xml(xml_text)
    if not elements:
        raise NamesParseError("empty document")

    root_tag, root_attrs, root_line, _ = elements[0]
    if root_tag != "metadata":
        raise NamesParseError(f"root element must be 'metadata', got {root_tag!r}", root_line)
    for key in root_attrs:
        if key not in _METADATA_XML_ATTRS:
            raise NamesParseError(f"unknown metadata attribute {key!r}", root_line)
    if "separator" not in root_attrs:
        raise NamesParseError("missing required 'separator'", root_line)

    attributes = []
    seen_names = set()
    for tag, attrs, line, depth in elements[1:]:
        if tag != "attribute" or depth != 1:
            raise NamesParseError(f"unknown element {tag!r}", line)
        for key in attrs:
            if key not in _ATTRIBUTE_XML_ATTRS:
                raise NamesParseError(f"unknown attribute-element attribute {key!r}", line)
        if "name" not in attrs:
            raise NamesParseError("attribute element missing required 'name'", line)
        name = attrs["name"]
        if name in seen_names:
            raise NamesParseError(f"duplicate attribute name {name!r}", line)
        seen_names.add(name)
        kind = attrs.get("type", NOMINAL)
        if kind not in (NOMINAL, CONTINUOUS):
            raise NamesParseError(f"attribute {name!r}: invalid type {kind!r}", line)
        skip_text = attrs.get("skip", "false")
        if skip_text not in ("true", "false"):
            raise NamesParseError(f"attribute {name!r}: invalid skip value {skip_text!r}", line)
        domain_text = attrs.get("domain", "")
        domain = domain_text.split(",") if domain_text else []
        attributes.append(
            AttributeMeta(
                name=name,
                kind=kind,
                domain=domain,
                skip=skip_text == "true",
                description=attrs.get("description", ""),
                missing_value_override=attrs.get("missingValue"),
            )
        )

    if not attributes:
        raise NamesParseError("metadata must contain at least one attribute", root_line)

    meta = Metadata(
        attributes=attributes,
        separator=root_attrs["separator"],
        missing_value=root_attrs.get("missingValue", DEFAULT_MISSING),
        description=root_attrs.get("description", ""),
        class_attribute=root_attrs.get("class"),
    )
    try:
        meta.validate()
    except MetadataError as exc:
        raise NamesParseError(str(exc)) from exc
    return meta


def serialize_names(m: Metadata) -> str:
    """Schema-conformant XML for ``m``; defaults are omitted, so the output
    re-parses to an equal Metadata."""
    m.validate()
    out = [f"<metadata separator={quoteattr(m.separator)}"]
    if m.missing_value != DEFAULT_MISSING:
        out.append(f" missingValue={quoteattr(m.missing_value)}")
    if m.description:
        out.append(f" description={quoteattr(m.description)}")
    if m.class_attribute is not None:
        out.append(f" class={quoteattr(m.class_attribute)}")
    out.append(">\n")
    for attr in m.attributes:
        out.append(f"  <attribute name={quoteattr(attr.name)}")
        if attr.kind != NOMINAL:
            out.append(f" type={quoteattr(attr.kind)}")
        if attr.domain:
            out.append(f" domain={quoteattr(','.join(attr.domain))}")
        if attr.description:
            out.append(f" description={quoteattr(attr.description)}")
        if attr.missing_value_override is not None:
            out.append(f" missingValue={quoteattr(attr.missing_value_override)}")
        if attr.skip:
            out.append(' skip="true"')
        out.append("/>\n")
    out.append("</metadata>\n")
    return "".join(out)


# --------------------------------------------------------------------------
# .data format
# --------------------------------------------------------------------------

def format_number(x: float) -> str:
    """Shortest decimal text that reads back as the same float."""
    if x == int(x) and abs(x) < 1e16:
        return str(int(x))
    return repr(float(x))


def _parse_number(token):
    value = float(token)  # accepts "3", "3.1", "3e2"; the radix is '.'
    if not math.isfinite(value):
        raise ValueError(f"non-finite number {token!r}")
    return value


def parse_data(text: str, m: Metadata) -> tuple[Dataset, list[RowError]]:
    """Read delimited rows against ``m``.

    Cells are split on the separator and trimmed. The missing-value token
    (global or per-attribute override) becomes MISSING. Open nominal domains
    are extended with first-seen tokens; under a closed domain a row with an
    out-of-domain token is rejected, recorded in the error list with its
    line number, and reading continues. The returned metadata is a copy of
    ``m`` whose open domains carry the inferred tokens.
    """
    m.validate()
    meta = m.copy()
    closed = [bool(a.domain) for a in m.attributes]
    errors: list[RowError] = []
    rows: list[list[Cell]] = []

    for line_no, raw in enumerate(text.split("\n"), start=1):
        line = raw.rstrip("\r")
        if not line.strip():
            continue
        cells_text = [c.strip() for c in line.split(meta.separator)]
        if len(cells_text) != meta.p:
            errors.append(
                RowError(line_no, f"cell count mismatch: expected {meta.p}, got {len(cells_text)}")
            )
            continue
        row: list[Cell] = []
        problem = None
        for attr, is_closed, token in zip(meta.attributes, closed, cells_text):
            if token == attr.missing_token(meta):
                row.append(MISSING)
                continue
            if attr.kind == CONTINUOUS:
                try:
                    row.append(_parse_number(token))
                except ValueError:
                    problem = f"attribute {attr.name!r}: unparseable number {token!r}"
                    break
            else:
                if token not in attr.domain:
                    if is_closed:
                        problem = f"attribute {attr.name!r}: token {token!r} not in domain"
                        break
                    attr.domain.append(token)
                row.append(token)
        if problem is not None:
            errors.append(RowError(line_no, problem))
            continue
        rows.append(row)

    dataset = Dataset(meta, rows, list(range(len(rows))))
    return dataset, errors


def write_data(d: Dataset) -> str:
    """Separator-joined lines, LF-terminated; MISSING renders as the
    missing-value token. Raises DataWriteError when a token would collide
    with the separator."""
    meta = d.metadata
    sep = meta.separator
    lines = []
    for rid, row in zip(d.row_ids, d.rows):
        cells = []
        for attr, cell in zip(meta.attributes, row):
            if cell is MISSING:
                token = attr.missing_token(meta)
            elif attr.kind == CONTINUOUS:
                token = format_number(cell)
            else:
                token = cell
            if sep in token:
                raise DataWriteError(
                    f"row {rid}, attribute {attr.name!r}: token {token!r} contains the separator"
                )
            cells.append(token)
        lines.append(sep.join(cells))
    return "\n".join(lines) + ("\n" if lines else "")
