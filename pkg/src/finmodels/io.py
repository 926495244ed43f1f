"""Text interchange formats: space files, metric CSVs, map corpora, isotopies.

Every parser reports failures as :class:`ParseError` with the offending line.
"""
from __future__ import annotations

import csv
import io
import re
from fractions import Fraction
from pathlib import Path

from .isotopy import FiniteIsotopy, MetricIsotopySample
from .metric import CIRCLE, INTERVAL, FiniteMetricSpace, MetricSpace, QuotientSpace
from .plmap import PLMap
from .posets import FinitePoset
from .regions import PointSet, Region


class ParseError(ValueError):
    def __init__(self, message, lineno=None, source="<text>"):
        self.lineno = lineno
        where = "%s:%d: " % (source, lineno) if lineno else "%s: " % source
        super().__init__(where + message)


def _lines(text):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line


def _number(tok, lineno, source):
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise ParseError("not a rational literal: %r" % tok, lineno, source) from None


# ---------------------------------------------------------------------------
# spaces


def read_metric_csv(text: str, source="<csv>") -> FiniteMetricSpace:
    rows = [r for r in csv.reader(io.StringIO(text)) if any(c.strip() for c in r)]
    if not rows:
        raise ParseError("empty metric file", None, source)
    labels = [c.strip() for c in rows[0]]
    matrix = []
    for lineno, row in enumerate(rows[1:], 2):
        if len(row) != len(labels):
            raise ParseError("expected %d entries, got %d" % (len(labels), len(row)), lineno, source)
        matrix.append([_number(c.strip(), lineno, source) for c in row])
    try:
        return FiniteMetricSpace(labels, matrix)
    except ValueError as exc:
        raise ParseError(str(exc), None, source) from None


def write_metric_csv(space: FiniteMetricSpace) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(space.labels)
    for row in space.matrix:
        w.writerow([str(v) for v in row])
    return out.getvalue()


def parse_space(text: str, base: Path | None = None, source="<space>") -> MetricSpace:
    """``kind = interval | circle | finite_metric`` plus ``csv = path`` for the last."""
    fields = {}
    for lineno, line in _lines(text):
        key, sep, value = line.partition("=")
        if not sep:
            raise ParseError("expected 'key = value'", lineno, source)
        fields[key.strip()] = (value.strip(), lineno)
    if "kind" not in fields:
        raise ParseError("missing 'kind'", None, source)
    kind, lineno = fields["kind"]
    if kind == "interval":
        return INTERVAL
    if kind == "circle":
        return CIRCLE
    if kind == "finite_metric":
        if "csv" not in fields:
            raise ParseError("finite_metric needs 'csv = path'", lineno, source)
        path = Path(fields["csv"][0])
        if base is not None and not path.is_absolute():
            path = base / path
        return read_metric_csv(path.read_text(), str(path))
    raise ParseError("unknown kind %r" % kind, lineno, source)


def load_space(spec: str) -> MetricSpace:
    """A space file path, or the shorthands ``interval`` and ``circle``."""
    if spec in ("interval", "circle"):
        return INTERVAL if spec == "interval" else CIRCLE
    path = Path(spec)
    if path.suffix == ".csv":
        return read_metric_csv(path.read_text(), str(path))
    return parse_space(path.read_text(), path.parent, str(path))


def parse_quotient(space: MetricSpace, n: int, text: str, source="<quotient>") -> QuotientSpace:
    classes = []
    for lineno, line in _lines(text):
        try:
            if line.startswith("points "):
                classes.append(PointSet(space.index(p) for p in line.split()[1:]))
            else:
                classes.append(Region.from_export(part.strip() for part in line.split(";")))
        except ValueError as exc:
            raise ParseError(str(exc), lineno, source) from None
    return QuotientSpace(space, n, tuple(classes))


# ---------------------------------------------------------------------------
# maps

_PAIR = re.compile(r"\(\s*([^,()\s]+)\s*,\s*([^,()\s]+)\s*\)")


def parse_map(line: str, X: MetricSpace, Y: MetricSpace, y0=None, lineno=None,
              source="<maps>") -> PLMap:
    head, _, rest = line.partition(":")
    head, rest = head.strip(), rest.strip()
    try:
        if head == "pl":
            pairs = _PAIR.findall(rest)
            if not pairs or _PAIR.sub("", rest).strip():
                raise ParseError("expected '(s,v)' pairs", lineno, source)
            return PLMap.pl(X, Y, [(Fraction(s), _value(Y, v)) for s, v in pairs])
        if head == "table":
            table = {}
            for tok in rest.split():
                a, sep, b = tok.replace("->", "→").partition("→")
                if not sep:
                    raise ParseError("expected 'a→p' entries", lineno, source)
                table[a] = _value(Y, b)
            return PLMap.from_table(X, Y, table)
        if head == "const":
            return PLMap.constant(X, Y, _value(Y, rest))
        if head == "basepoint":
            value = _value(Y, rest) if rest else y0
            if value is None:
                raise ParseError("basepoint map needs a value or --basepoint", lineno, source)
            return PLMap.constant(X, Y, value, basepoint=True)
    except ParseError:
        raise
    except (ValueError, KeyError, ZeroDivisionError) as exc:
        raise ParseError(str(exc), lineno, source) from None
    raise ParseError("unknown map kind %r" % head, lineno, source)


def _value(Y, tok):
    tok = tok.strip()
    return tok if isinstance(Y, FiniteMetricSpace) else Fraction(tok)


def parse_map_corpus(text: str, X, Y, y0=None, source="<maps>") -> list[PLMap]:
    return [parse_map(line, X, Y, y0, lineno, source) for lineno, line in _lines(text)]


def export_map_corpus(maps) -> str:
    return "".join(m.export() + "\n" for m in maps)


# ---------------------------------------------------------------------------
# isotopies


def parse_isotopy(text: str, poset: FinitePoset | None = None, base: Path | None = None,
                  source="<isotopy>") -> FiniteIsotopy:
    """Trace lines ``q: x_1 [0,a_1] ...``; an optional ``poset = file.json`` header."""
    body = []
    for lineno, line in _lines(text):
        key, sep, value = line.partition("=")
        if sep and key.strip() == "poset" and ":" not in key:
            path = Path(value.strip())
            if base is not None and not path.is_absolute():
                path = base / path
            poset = FinitePoset.from_json(path.read_text())
        else:
            body.append(line)
    if poset is None:
        raise ParseError("no poset given (header 'poset = file.json')", None, source)
    try:
        return FiniteIsotopy.parse(poset, "\n".join(body))
    except ValueError as exc:
        raise ParseError(str(exc), None, source) from None


def parse_metric_sample(text: str, space: MetricSpace, source="<sample>") -> MetricIsotopySample:
    """Lines ``t=p/q <map>``; an optional ``modulus = p/q`` header."""
    times, maps, modulus = [], [], None
    for lineno, line in _lines(text):
        if line.startswith("modulus"):
            modulus = _number(line.partition("=")[2].strip(), lineno, source)
            continue
        if not line.startswith("t="):
            raise ParseError("expected 't=p/q <map>'", lineno, source)
        stamp, _, rest = line[2:].partition(" ")
        times.append(_number(stamp, lineno, source))
        maps.append(parse_map(rest.strip(), space, space, None, lineno, source))
    return MetricIsotopySample(tuple(times), tuple(maps), modulus)
