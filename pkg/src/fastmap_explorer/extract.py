"""Typed extract building: conditions, smart linking, SQL text, evaluation.

Conditions are restricted to the operations that make sense for the
attribute's type, and operands are checked up front (a misspelled date
never reaches the query). The logical connective between two conditions on
the same attribute is chosen by heuristics that almost always match the
user's intent: an age range wants AND, two alternative diagnoses want OR.
Evaluation runs in memory against a Dataset; the SQL text exists for
interoperability with relational tools.
"""

from __future__ import annotations

import datetime
import html as html_mod
import warnings
from dataclasses import dataclass, field, replace

from .dataset import (
    CONTINUOUS,
    MISSING,
    Dataset,
    Metadata,
    format_number,
    serialize_names,
    write_data,
)

BOOLEAN = "boolean"
NUMERIC = "numeric"
STRING = "string"
DATE = "date"

EQ, NEQ, GT, LT, GE, LE = "eq", "neq", "gt", "lt", "ge", "le"
IS_NULL, IS_NOT_NULL = "is_null", "is_not_null"
STARTING, CONTAINING = "starting", "containing"

_NULL_OPS = frozenset({IS_NULL, IS_NOT_NULL})
_RANGE_OPS = frozenset({GT, LT, GE, LE})

_SQL_COMPARATORS = {EQ: "=", NEQ: "<>", GT: ">", LT: "<", GE: ">=", LE: "<="}


class ExtractError(Exception):
    pass


class ConditionError(ExtractError):
    pass


class LinkWarning(UserWarning):
    """A condition pair no heuristic rule covers; AND was used."""


def allowed_ops(kind: str) -> frozenset[str]:
    """Operations valid for a condition-attribute type."""
    if kind == BOOLEAN:
        return frozenset({EQ, NEQ}) | _NULL_OPS
    if kind in (NUMERIC, DATE):
        return frozenset({EQ, NEQ, GT, LT, GE, LE}) | _NULL_OPS
    if kind == STRING:
        return frozenset({EQ, NEQ, STARTING, CONTAINING}) | _NULL_OPS
    raise ConditionError(f"unknown attribute type {kind!r}")


@dataclass(frozen=True)
class Condition:
    attribute: str
    operation: str
    operand: object = None  # absent for null tests
    kind: str = STRING  # condition-attribute type, set when validated


@dataclass
class ConditionSchema:
    """Attribute name -> condition type for one source."""

    types: dict[str, str]

    @classmethod
    def from_metadata(cls, m: Metadata) -> "ConditionSchema":
        # Continuous columns compare as numbers; nominal ones as tokens.
        return cls({a.name: NUMERIC if a.kind == CONTINUOUS else STRING for a in m.attributes})

    def kind_of(self, attribute: str) -> str:
        try:
            return self.types[attribute]
        except KeyError:
            raise ConditionError(f"unknown attribute {attribute!r}") from None


def _coerce_operand(kind, operation, operand):
    if operation in _NULL_OPS:
        if operand is not None:
            raise ConditionError(f"{operation} takes no operand")
        return None
    if operand is None:
        raise ConditionError(f"{operation} needs an operand")
    if kind == NUMERIC:
        if isinstance(operand, bool) or not isinstance(operand, (int, float)):
            raise ConditionError(f"numeric operand expected, got {operand!r}")
        return float(operand)
    if kind == DATE:
        if isinstance(operand, datetime.date):
            return operand
        try:
            return datetime.date.fromisoformat(str(operand))
        except ValueError as exc:
            raise ConditionError(f"invalid calendar date {operand!r}: {exc}") from None
    if not isinstance(operand, str):
        raise ConditionError(f"{kind} operand must be text, got {operand!r}")
    return operand


def make_condition(schema: ConditionSchema, attribute, operation, operand=None) -> Condition:
    kind = schema.kind_of(attribute)
    if operation not in allowed_ops(kind):
        raise ConditionError(
            f"operation {operation!r} not allowed on {kind} attribute {attribute!r}"
        )
    return Condition(attribute, operation, _coerce_operand(kind, operation, operand), kind)


@dataclass
class ConditionSet:
    """Validated conditions in entry order.

    After every add the attribute gets a fresh unbound slot, mirroring the
    row-cloning behaviour a constructor UI shows: n bound conditions on an
    attribute mean n + 1 visible instances of it.
    """

    schema: ConditionSchema
    conditions: list[Condition] = field(default_factory=list)

    def add(self, attribute, operation, operand=None) -> "ConditionSet":
        cond = make_condition(self.schema, attribute, operation, operand)
        return ConditionSet(self.schema, self.conditions + [cond])

    def instances(self, attribute) -> int:
        bound = sum(1 for c in self.conditions if c.attribute == attribute)
        return bound + 1 if bound else 0


def add_condition(cset: ConditionSet, attribute, operation, operand=None) -> ConditionSet:
    return cset.add(attribute, operation, operand)


# --------------------------------------------------------------------------
# Smart linking
# --------------------------------------------------------------------------

@dataclass
class ConditionExpr:
    """n-ary AND/OR node over conditions and sub-expressions."""

    op: str  # "and" | "or"
    children: list = field(default_factory=list)


def _pair_connective(first: Condition, second: Condition) -> str | None:
    """Connective for two conditions on one attribute, or None when no rule
    applies. Rules are order-insensitive; the caller tries both orders."""
    op1, op2 = first.operation, second.operation
    a, b = first.operand, second.operand

    if op1 == EQ and op2 == EQ:
        return "or" if a != b else None
    if op1 in (GT, GE) and op2 in (LT, LE):
        return "and" if a <= b else "or"
    if op1 in _NULL_OPS and op2 == EQ:
        return "or"
    if op1 == NEQ and op2 == NEQ:
        return "and"
    if op1 == STARTING and op2 == STARTING:
        return "or" if a != b else None
    if op1 in (LT, LE) and op2 in (LT, LE):
        return "and"
    if op1 in (GT, GE) and op2 in (GT, GE):
        return "and"
    if op1 == CONTAINING and op2 == CONTAINING:
        return "or" if a != b else None
    return None


def link_pair(first: Condition, second: Condition) -> str:
    """Heuristic AND/OR for a same-attribute condition pair; unmatched
    pairs fall back to AND with a warning."""
    connective = _pair_connective(first, second)
    if connective is None:
        connective = _pair_connective(second, first)
    if connective is None:
        warnings.warn(
            f"no linking rule for {first.operation}/{second.operation} on "
            f"{first.attribute!r}; using AND",
            LinkWarning,
            stacklevel=2,
        )
        connective = "and"
    return connective


def smart_link(conditions, force: str | None = None) -> ConditionExpr | Condition | None:
    """Build the expression tree for a condition list.

    Conditions are grouped by attribute; inside a group consecutive pairs
    pick their connective by the heuristic rules, folding left in entry
    order. Groups are combined with AND. ``force`` overrides everything
    with a flat all-AND or all-OR expression (the advanced-mode escape
    hatch)."""
    conditions = list(conditions)
    if not conditions:
        return None
    if force is not None:
        if force not in ("and", "or"):
            raise ExtractError(f"force must be 'and' or 'or', got {force!r}")
        if len(conditions) == 1:
            return conditions[0]
        return ConditionExpr(force, conditions)

    groups: dict[str, list[Condition]] = {}
    for cond in conditions:
        groups.setdefault(cond.attribute, []).append(cond)

    group_exprs = []
    for attr_conditions in groups.values():
        expr = attr_conditions[0]
        for prev, nxt in zip(attr_conditions, attr_conditions[1:]):
            connective = link_pair(prev, nxt)
            if isinstance(expr, ConditionExpr) and expr.op == connective:
                expr.children.append(nxt)
            else:
                expr = ConditionExpr(connective, [expr, nxt])
        group_exprs.append(expr)

    if len(group_exprs) == 1:
        return group_exprs[0]
    return ConditionExpr("and", group_exprs)


# --------------------------------------------------------------------------
# Query and SQL emission
# --------------------------------------------------------------------------

@dataclass
class Query:
    source: str
    expr: ConditionExpr | Condition | None = None
    columns: list[str] = field(default_factory=list)  # empty means all
    sort: list[tuple[str, str]] = field(default_factory=list)  # (attr, "asc"|"desc")
    distinct: bool = False
    group_keys: list[str] = field(default_factory=list)

    def validate_against(self, m: Metadata):
        known = set(m.names)
        for name in list(self.columns) + [a for a, _ in self.sort] + list(self.group_keys):
            if name not in known:
                raise ExtractError(f"unknown attribute {name!r}")
        for _, direction in self.sort:
            if direction not in ("asc", "desc"):
                raise ExtractError(f"sort direction must be asc or desc, got {direction!r}")


def _sql_literal(cond: Condition) -> str:
    if cond.kind == NUMERIC:
        return format_number(cond.operand)
    if cond.kind == DATE:
        return f"'{cond.operand.isoformat()}'"
    escaped = str(cond.operand).replace("'", "''")
    return f"'{escaped}'"


def _condition_sql(cond: Condition) -> str:
    if cond.operation == IS_NULL:
        return f"{cond.attribute} IS NULL"
    if cond.operation == IS_NOT_NULL:
        return f"{cond.attribute} IS NOT NULL"
    if cond.operation == STARTING:
        return f"{cond.attribute} STARTING {_sql_literal(cond)}"
    if cond.operation == CONTAINING:
        escaped = str(cond.operand).replace("'", "''")
        return f"{cond.attribute} LIKE '%{escaped}%'"
    return f"{cond.attribute} {_SQL_COMPARATORS[cond.operation]} {_sql_literal(cond)}"


def _expr_sql(expr) -> str:
    if isinstance(expr, Condition):
        return _condition_sql(expr)
    joiner = f" {expr.op} "
    return joiner.join(f"({_expr_sql(child)})" for child in expr.children)


def emit_sql(q: Query) -> str:
    """select-from-where text. A lone condition stays bare; combined ones
    are parenthesized per leaf and group."""
    head = "select distinct" if q.distinct else "select"
    cols = ", ".join(q.columns) if q.columns else "*"
    parts = [f"{head} {cols} from {q.source}"]
    if q.expr is not None:
        parts.append(f"where {_expr_sql(q.expr)}")
    if q.sort:
        keys = ", ".join(f"{attr} {direction}" for attr, direction in q.sort)
        parts.append(f"order by {keys}")
    return " ".join(parts)


# --------------------------------------------------------------------------
# In-memory evaluation
# --------------------------------------------------------------------------

def _cell_matches(cond: Condition, cell) -> bool:
    if cond.operation == IS_NULL:
        return cell is MISSING
    if cond.operation == IS_NOT_NULL:
        return cell is not MISSING
    if cell is MISSING:
        return False  # comparisons never match an absent value

    if cond.kind == NUMERIC:
        try:
            value = float(cell)
        except (TypeError, ValueError):
            return False
    elif cond.kind == DATE:
        try:
            value = datetime.date.fromisoformat(str(cell))
        except ValueError:
            return False
    else:
        value = str(cell)

    op = cond.operation
    if op == EQ:
        return value == cond.operand
    if op == NEQ:
        return value != cond.operand
    if op == GT:
        return value > cond.operand
    if op == LT:
        return value < cond.operand
    if op == GE:
        return value >= cond.operand
    if op == LE:
        return value <= cond.operand
    if op == STARTING:
        return value.startswith(cond.operand)
    if op == CONTAINING:
        return cond.operand in value
    raise ConditionError(f"unknown operation {op!r}")


def _expr_matches(expr, row, attr_pos) -> bool:
    if isinstance(expr, Condition):
        return _cell_matches(expr, row[attr_pos[expr.attribute]])
    if expr.op == "and":
        return all(_expr_matches(c, row, attr_pos) for c in expr.children)
    return any(_expr_matches(c, row, attr_pos) for c in expr.children)


def _expr_attributes(expr):
    if expr is None:
        return []
    if isinstance(expr, Condition):
        return [expr.attribute]
    names = []
    for child in expr.children:
        names.extend(_expr_attributes(child))
    return names


def _sorted_rows(pairs, d: Dataset, sort_keys):
    # Last key first keeps earlier keys dominant under stable sorting;
    # missing cells go last for either direction.
    for attr, direction in reversed(sort_keys):
        pos = d.metadata.attr_index(attr)
        present = [p for p in pairs if p[1][pos] is not MISSING]
        absent = [p for p in pairs if p[1][pos] is MISSING]
        present.sort(key=lambda p: p[1][pos], reverse=direction == "desc")
        pairs = present + absent
    return pairs


def evaluate(q: Query, d: Dataset) -> Dataset:
    """Run the query in memory: filter, stable multi-key sort, column
    projection, duplicate removal. Row ids carry through untouched."""
    q.validate_against(d.metadata)
    known = set(d.metadata.names)
    for name in _expr_attributes(q.expr):
        if name not in known:
            raise ExtractError(f"unknown attribute {name!r}")

    attr_pos = {name: i for i, name in enumerate(d.metadata.names)}
    pairs = [
        (rid, row)
        for rid, row in zip(d.row_ids, d.rows)
        if q.expr is None or _expr_matches(q.expr, row, attr_pos)
    ]

    if q.sort:
        pairs = _sorted_rows(pairs, d, q.sort)

    meta = d.metadata
    if q.columns:
        keep = [meta.attr_index(name) for name in q.columns]
        new_attrs = [replace(meta.attributes[i], domain=list(meta.attributes[i].domain)) for i in keep]
        class_attr = meta.class_attribute if meta.class_attribute in q.columns else None
        meta = Metadata(
            attributes=new_attrs,
            separator=meta.separator,
            missing_value=meta.missing_value,
            description=meta.description,
            class_attribute=class_attr,
        )
        pairs = [(rid, [row[i] for i in keep]) for rid, row in pairs]

    if q.distinct:
        seen = set()
        unique = []
        for rid, row in pairs:
            key = tuple(row)
            if key not in seen:
                seen.add(key)
                unique.append((rid, row))
        pairs = unique

    return Dataset(meta, [row for _, row in pairs], [rid for rid, _ in pairs])


def group_counts(d: Dataset, keys) -> dict:
    """Hierarchical occurrence counts along ``keys``; leaf counts sum to
    the row count."""
    if not keys:
        raise ExtractError("need at least one group key")
    positions = [d.metadata.attr_index(k) for k in keys]

    def render(cell, attr):
        if cell is MISSING:
            return attr.missing_token(d.metadata)
        if attr.kind == CONTINUOUS:
            return format_number(cell)
        return cell

    root: dict = {}
    for row in d.rows:
        node = root
        for depth, pos in enumerate(positions):
            label = render(row[pos], d.metadata.attributes[pos])
            if depth == len(positions) - 1:
                node[label] = node.get(label, 0) + 1
            else:
                node = node.setdefault(label, {})
    return root


# --------------------------------------------------------------------------
# Export
# --------------------------------------------------------------------------

DATA_NAMES = "data_names"
PLAIN_TEXT = "plain_text"
HTML = "html"
DELIMITED = "delimited"

EXPORT_FORMATS = (DATA_NAMES, PLAIN_TEXT, HTML, DELIMITED)


def _cell_text(cell, attr, meta):
    if cell is MISSING:
        return attr.missing_token(meta)
    if attr.kind == CONTINUOUS:
        return format_number(cell)
    return cell


def _text_table(d: Dataset):
    header = d.metadata.names
    body = [
        [_cell_text(cell, attr, d.metadata) for attr, cell in zip(d.metadata.attributes, row)]
        for row in d.rows
    ]
    return header, body


def export_plain_text(d: Dataset) -> str:
    header, body = _text_table(d)
    widths = [len(h) for h in header]
    for row in body:
        widths = [max(w, len(c)) for w, c in zip(widths, row)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in [header] + body]
    return "\n".join(lines) + "\n"


def export_html(d: Dataset) -> str:
    header, body = _text_table(d)
    out = ["<!DOCTYPE html>", "<html><body><table>"]
    out.append("<tr>" + "".join(f"<th>{html_mod.escape(h)}</th>" for h in header) + "</tr>")
    for row in body:
        out.append("<tr>" + "".join(f"<td>{html_mod.escape(c)}</td>" for c in row) + "</tr>")
    out.append("</table></body></html>")
    return "\n".join(out) + "\n"


def export_delimited(d: Dataset) -> str:
    sep = d.metadata.separator
    header, body = _text_table(d)
    for name in header:
        if sep in name:
            raise ExtractError(f"attribute name {name!r} contains the separator")
    lines = [sep.join(header)] + [sep.join(row) for row in body]
    return "\n".join(lines) + "\n"


def export(d: Dataset, fmt: str) -> dict[str, str]:
    """Render ``d`` in an interchange format; returns suffix -> content."""
    if fmt == DATA_NAMES:
        return {".names": serialize_names(d.metadata), ".data": write_data(d)}
    if fmt == PLAIN_TEXT:
        return {".txt": export_plain_text(d)}
    if fmt == HTML:
        return {".html": export_html(d)}
    if fmt == DELIMITED:
        return {".txt": export_delimited(d)}
    raise ExtractError(f"unknown export format {fmt!r}")
