"""Shared RDF term model: IRIs, typed literals, and calendar arithmetic.

Used by the triple store, the SPARQL generator/evaluator, and the
grounding layer so that all of them agree on equality and ordering of
values.
"""

from __future__ import annotations

import calendar
import re
from dataclasses import dataclass
from datetime import datetime, timedelta
from decimal import Decimal

XSD = "http://www.w3.org/2001/XMLSchema#"

XSD_STRING = XSD + "string"
XSD_INTEGER = XSD + "integer"
XSD_DECIMAL = XSD + "decimal"
XSD_DATETIME = XSD + "dateTime"
XSD_DATE = XSD + "date"
XSD_DURATION = XSD + "duration"
XSD_BOOLEAN = XSD + "boolean"


@dataclass(frozen=True)
class Iri:
    value: str

    def __repr__(self):
        return f"Iri({self.value!r})"


@dataclass(frozen=True)
class Duration:
    """Calendar duration, year/month parts added with day clamping."""

    years: int = 0
    months: int = 0
    days: int = 0

    def lexical(self):
        out = "P"
        if self.years:
            out += f"{self.years}Y"
        if self.months:
            out += f"{self.months}M"
        if self.days:
            out += f"{self.days}D"
        if out == "P":
            out = "P0D"
        return out


_DURATION_RE = re.compile(
    r"^(-)?P(?:(\d+)Y)?(?:(\d+)M)?(?:(\d+)D)?(?:T.*)?$"
)


def parse_duration(text):
    m = _DURATION_RE.match(text)
    if not m or text in ("P", "-P"):
        raise ValueError(f"bad xsd:duration: {text!r}")
    sign = -1 if m.group(1) else 1
    years, months, days = (int(g) if g else 0 for g in m.groups()[1:])
    return Duration(sign * years, sign * months, sign * days)


def parse_datetime(text):
    """Parse xsd:dateTime or xsd:date lexical forms to a naive UTC instant."""
    t = text.strip()
    if t.endswith("Z"):
        t = t[:-1]
    if "T" not in t:
        t += "T00:00:00"
    return datetime.fromisoformat(t)


def format_datetime(dt):
    return dt.strftime("%Y-%m-%dT%H:%M:%SZ")


def add_duration(dt, dur):
    """dt + calendar duration; day-of-month is clamped (Feb 29 + 1Y -> Feb 28)."""
    total_months = (dt.year * 12 + dt.month - 1) + dur.years * 12 + dur.months
    year, month0 = divmod(total_months, 12)
    month = month0 + 1
    day = min(dt.day, calendar.monthrange(year, month)[1])
    out = dt.replace(year=year, month=month, day=day)
    return out + timedelta(days=dur.days)


@dataclass(frozen=True)
class Literal:
    value: object
    datatype: str = XSD_STRING

    def lexical(self):
        v = self.value
        if self.datatype in (XSD_DATETIME, XSD_DATE):
            return format_datetime(v)
        if self.datatype == XSD_DURATION:
            return v.lexical()
        if self.datatype == XSD_BOOLEAN:
            return "true" if v else "false"
        return str(v)

    def __repr__(self):
        return f"Literal({self.lexical()!r}, {self.datatype.rsplit('#', 1)[-1]})"


def typed_literal(lexical, datatype):
    """Build a Literal with the value parsed according to its datatype IRI."""
    if datatype in (XSD_DATETIME, XSD_DATE):
        return Literal(parse_datetime(lexical), XSD_DATETIME)
    if datatype == XSD_INTEGER:
        return Literal(int(lexical), XSD_INTEGER)
    if datatype == XSD_DECIMAL:
        return Literal(Decimal(lexical), XSD_DECIMAL)
    if datatype == XSD_DURATION:
        return Literal(parse_duration(lexical), XSD_DURATION)
    if datatype == XSD_BOOLEAN:
        if lexical not in ("true", "false", "0", "1"):
            raise ValueError(f"bad xsd:boolean: {lexical!r}")
        return Literal(lexical in ("true", "1"), XSD_BOOLEAN)
    return Literal(lexical, datatype)


def term_sort_key(term):
    """Total, deterministic order over terms; used only for tie-breaking."""
    if isinstance(term, Iri):
        return (0, term.value)
    return (1, term.datatype, term.lexical())


def compare_values(left, right):
    """SPARQL-style value comparison; returns -1/0/1 or raises TypeError."""
    if isinstance(left, Literal) and isinstance(right, Literal):
        lv, rv = left.value, right.value
        numeric = (int, Decimal)
        if isinstance(lv, datetime) and isinstance(rv, datetime):
            return (lv > rv) - (lv < rv)
        if isinstance(lv, numeric) and isinstance(rv, numeric):
            return (lv > rv) - (lv < rv)
        if isinstance(lv, str) and isinstance(rv, str):
            return (lv > rv) - (lv < rv)
    raise TypeError(f"incomparable terms: {left!r} vs {right!r}")
