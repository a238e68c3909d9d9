"""ARFF subset: numeric features followed by one nominal class attribute.

Writing renders floats with 17 significant digits, which makes the text
round trip exact for 64-bit values. Reading is case-insensitive on
keywords, skips ``%`` comments and blank lines, accepts CRLF and quoted
names/values. Sparse rows and string/date/relational attributes are
rejected. A ``?`` class value reads as an unlabeled row.
"""
from __future__ import annotations

import re
from pathlib import Path

import numpy as np

from ..errors import MalformedArff, MissingClassAttribute
from ..ml.dataset import UNLABELED, LabeledDataset

_NUMERIC = {"numeric", "real", "integer"}
_PLAIN = re.compile(r"^[A-Za-z0-9_.\-+]+$")


def _quote(token: str) -> str:
    if token and _PLAIN.match(token) and token != "?":
        return token
    return "'" + token.replace("\\", "\\\\").replace("'", "\\'") + "'"


def format_number(v: float) -> str:
    return format(float(v), ".17g")


def write_arff(ds: LabeledDataset, path, relation: str = "seeds") -> None:
    lines = [f"@RELATION {_quote(relation)}", ""]
    for name in ds.feature_names:
        lines.append(f"@ATTRIBUTE {_quote(name)} NUMERIC")
    lines.append("@ATTRIBUTE class {" + ",".join(_quote(c) for c in ds.class_names) + "}")
    lines += ["", "@DATA"]
    for row, label in zip(ds.X, ds.y):
        cls = "?" if label == UNLABELED else _quote(ds.class_names[label])
        lines.append(",".join(format_number(v) for v in row) + "," + cls)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def split_fields(text: str, line_no: int, sep: str = ",") -> list[str]:
    """Split on ``sep`` outside single/double quotes; quotes are removed
    and backslash escapes resolved inside them."""
    out, buf = [], []
    quote = None
    quoted = False
    i = 0
    while i < len(text):
        ch = text[i]
        if quote:
            if ch == "\\" and i + 1 < len(text):
                buf.append(text[i + 1])
                i += 2
                continue
            if ch == quote:
                quote = None
            else:
                buf.append(ch)
        elif ch in "'\"":
            if "".join(buf).strip():
                raise MalformedArff("quote inside unquoted value", line_no)
            buf = []
            quote, quoted = ch, True
        elif ch == sep:
            out.append("".join(buf) if quoted else "".join(buf).strip())
            buf, quoted = [], False
        else:
            if quoted and not ch.isspace():
                raise MalformedArff("text after closing quote", line_no)
            buf.append(ch)
        i += 1
    if quote:
        raise MalformedArff("unterminated quote", line_no)
    out.append("".join(buf) if quoted else "".join(buf).strip())
    return out


def _parse_name(rest: str, line_no: int) -> tuple[str, str]:
    rest = rest.strip()
    if not rest:
        raise MalformedArff("missing attribute name", line_no)
    if rest[0] in "'\"":
        q = rest[0]
        i, buf = 1, []
        while i < len(rest):
            if rest[i] == "\\" and i + 1 < len(rest):
                buf.append(rest[i + 1])
                i += 2
                continue
            if rest[i] == q:
                return "".join(buf), rest[i + 1:].strip()
            buf.append(rest[i])
            i += 1
        raise MalformedArff("unterminated quoted name", line_no)
    parts = rest.split(None, 1)
    return parts[0], (parts[1].strip() if len(parts) > 1 else "")


def read_arff(path) -> LabeledDataset:
    text = Path(path).read_text(encoding="utf-8")
    attributes: list[tuple[str, object]] = []
    rows: list[list[str]] = []
    row_lines: list[int] = []
    in_data = False
    seen_relation = False
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        if not in_data:
            low = line.lower()
            if low.startswith("@relation"):
                seen_relation = True
            elif low.startswith("@attribute"):
                name, kind = _parse_name(line[len("@attribute"):], line_no)
                if kind.startswith("{"):
                    if not kind.endswith("}"):
                        raise MalformedArff("unterminated nominal value list", line_no)
                    values = [v for v in split_fields(kind[1:-1], line_no)]
                    if any(v == "" for v in values):
                        raise MalformedArff("empty nominal value", line_no)
                    attributes.append((name, tuple(values)))
                elif kind.lower() in _NUMERIC:
                    attributes.append((name, "numeric"))
                else:
                    raise MalformedArff(f"unsupported attribute type {kind!r}", line_no)
            elif low.startswith("@data"):
                in_data = True
            else:
                raise MalformedArff(f"unexpected header line {line!r}", line_no)
            continue
        if line.startswith("{"):
            raise MalformedArff("sparse rows are not supported", line_no)
        rows.append(split_fields(line, line_no))
        row_lines.append(line_no)
    if not seen_relation:
        raise MalformedArff("missing @RELATION")
    if not in_data:
        raise MalformedArff("missing @DATA section")
    if not attributes or not isinstance(attributes[-1][1], tuple):
        raise MissingClassAttribute("last attribute must be the nominal class")
    features = attributes[:-1]
    for name, kind in features:
        if kind != "numeric":
            raise MalformedArff(f"feature {name!r} must be numeric")
    classes = attributes[-1][1]
    index = {c: i for i, c in enumerate(classes)}
    X = np.empty((len(rows), len(features)))
    y = np.empty(len(rows), dtype=np.int64)
    for r, (cells, line_no) in enumerate(zip(rows, row_lines)):
        if len(cells) != len(attributes):
            raise MalformedArff(f"expected {len(attributes)} values, found {len(cells)}", line_no)
        for c, cell in enumerate(cells[:-1]):
            try:
                X[r, c] = float(cell)
            except ValueError:
                raise MalformedArff(f"non-numeric value {cell!r}", line_no) from None
            if not np.isfinite(X[r, c]):
                raise MalformedArff(f"non-finite value {cell!r}", line_no)
        label = cells[-1]
        if label == "?":
            y[r] = UNLABELED
        elif label in index:
            y[r] = index[label]
        else:
            raise MalformedArff(f"class value {label!r} not declared", line_no)
    return LabeledDataset(tuple(n for n, _ in features), X, y, classes)
