"""Canonical JSON documents for buildings, twins and isometries.

Building::

    {"coxeter": [[1, 3], [3, 1]], "chambers": 21, "panels": {"0": [[0, 1, 2], ...], "1": [...]}}

Matrix entry 0 stands for infinity.  Twin::

    {"plus": <building>, "minus": <building>,
     "costar": {"rule": "spherical-double"}
            or {"plus_minus": [[word, ...], ...], "minus_plus": [[word, ...], ...]}}

where a word is a list of generator indices.  Isometry::

    {"pairs": [["+", 0, "+", 5], ["-", 3, "-", 3], ...]}

Encoding sorts keys, panels and pairs, so equal objects give equal bytes.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..building import BuildingSpace, validate_building
from ..coxeter import CoxeterMatrix
from ..errors import InvalidInput, ParseError, SchemaError
from ..isom import PartialIsometry, make_isometry
from ..twin import MINUS, PLUS, SPHERICAL_DOUBLE, TwinSpace, validate_twin

BUILDING_KEYS = {"coxeter", "chambers", "panels"}
TWIN_KEYS = {"plus", "minus", "costar"}


def canonical_dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def parse(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno) from None


def read_document(path_or_text) -> dict:
    if isinstance(path_or_text, Path) or (isinstance(path_or_text, str) and not path_or_text.lstrip().startswith("{")):
        try:
            text = Path(path_or_text).read_text()
        except OSError as e:
            raise InvalidInput(f"cannot read {path_or_text}: {e.strerror}") from None
    else:
        text = path_or_text
    doc = parse(text)
    if not isinstance(doc, dict):
        raise SchemaError("$", "top level must be an object")
    return doc


def write_document(path, doc) -> None:
    Path(path).write_text(canonical_dumps(doc))


# -- buildings ------------------------------------------------------------------


def _int(value, path):
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(path, "expected an integer")
    return value


def _list(value, path):
    if not isinstance(value, list):
        raise SchemaError(path, "expected a list")
    return value


def _require(doc: dict, keys: set, path: str):
    for k in sorted(keys):
        if k not in doc:
            raise SchemaError(f"{path}{k}", "missing")
    extra = sorted(set(doc) - keys)
    if extra:
        raise SchemaError(f"{path}{extra[0]}", "unexpected key")


def decode_building_parts(doc: dict, path: str = ""):
    """Schema-checked (matrix, n, panels) without running the axiom checks."""
    if not isinstance(doc, dict):
        raise SchemaError(path.rstrip(".") or "$", "expected an object")
    _require(doc, BUILDING_KEYS, path)
    rows = _list(doc["coxeter"], f"{path}coxeter")
    m = [[_int(v, f"{path}coxeter[{i}][{j}]") for j, v in enumerate(_list(r, f"{path}coxeter[{i}]"))] for i, r in enumerate(rows)]
    try:
        matrix = CoxeterMatrix(tuple(map(tuple, m)))
    except InvalidInput as e:
        raise SchemaError(f"{path}coxeter", str(e)) from None
    n = _int(doc["chambers"], f"{path}chambers")
    panels_doc = doc["panels"]
    if not isinstance(panels_doc, dict):
        raise SchemaError(f"{path}panels", "expected an object keyed by generator index")
    panels = []
    for s in range(matrix.rank):
        key = str(s)
        if key not in panels_doc:
            raise SchemaError(f"{path}panels.{key}", "missing")
        parts = _list(panels_doc[key], f"{path}panels.{key}")
        panels.append([[_int(x, f"{path}panels.{key}[{i}]") for x in _list(p, f"{path}panels.{key}[{i}]")] for i, p in enumerate(parts)])
    extra = sorted(set(panels_doc) - {str(s) for s in range(matrix.rank)})
    if extra:
        raise SchemaError(f"{path}panels.{extra[0]}", "no such generator")
    return matrix, n, panels


def decode_building(doc: dict, path: str = "") -> BuildingSpace:
    matrix, n, panels = decode_building_parts(doc, path)
    return validate_building(matrix, n, panels)


def encode_building(b: BuildingSpace) -> dict:
    return {
        "coxeter": [list(r) for r in b.group.matrix.m],
        "chambers": b.n,
        "panels": {str(s): [list(p) for p in parts] for s, parts in enumerate(b.panels)},
    }


# -- twins ------------------------------------------------------------------------


def _word_table(rows, group, path):
    out = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=np.int32)
    for i, row in enumerate(_list(rows, path)):
        row = _list(row, f"{path}[{i}]")
        if len(row) != out.shape[1]:
            raise SchemaError(f"{path}[{i}]", "rows have different lengths")
        for j, word in enumerate(row):
            word = _list(word, f"{path}[{i}][{j}]")
            for s in word:
                if _int(s, f"{path}[{i}][{j}]") not in range(group.rank):
                    raise SchemaError(f"{path}[{i}][{j}]", f"generator {s} out of range")
            out[i, j] = group.from_word(word)
    return out


def decode_twin_parts(doc: dict):
    """Validated halves plus the codistance argument for :func:`validate_twin`."""
    _require(doc, TWIN_KEYS, "")
    plus = decode_building(doc["plus"], "plus.")
    m2, n2, p2 = decode_building_parts(doc["minus"], "minus.")
    if m2 != plus.group.matrix:
        raise SchemaError("minus.coxeter", "differs from plus.coxeter")
    minus = validate_building(plus.group, n2, p2)
    cs = doc["costar"]
    if not isinstance(cs, dict):
        raise SchemaError("costar", "expected an object")
    if "rule" in cs:
        _require(cs, {"rule"}, "costar.")
        if cs["rule"] != SPHERICAL_DOUBLE:
            raise SchemaError("costar.rule", f"unknown rule {cs['rule']!r}")
        return plus, minus, SPHERICAL_DOUBLE
    _require(cs, {"plus_minus", "minus_plus"}, "costar.")
    pm = _word_table(cs["plus_minus"], plus.group, "costar.plus_minus")
    mp = _word_table(cs["minus_plus"], plus.group, "costar.minus_plus")
    if pm.shape != (plus.n, minus.n):
        raise SchemaError("costar.plus_minus", f"expected {plus.n} x {minus.n}")
    if mp.shape != (minus.n, plus.n):
        raise SchemaError("costar.minus_plus", f"expected {minus.n} x {plus.n}")
    return plus, minus, (pm, mp)


def decode_twin(doc: dict) -> TwinSpace:
    plus, minus, costar = decode_twin_parts(doc)
    try:
        return validate_twin(plus, minus, costar)
    except InvalidInput as e:
        raise SchemaError("costar", str(e)) from None


def encode_twin(t: TwinSpace, explicit: bool = False) -> dict:
    doc = {"plus": encode_building(t.plus), "minus": encode_building(t.minus)}
    if t.rule == SPHERICAL_DOUBLE and not explicit:
        doc["costar"] = {"rule": SPHERICAL_DOUBLE}
    else:
        words = t.group.words
        doc["costar"] = {
            "plus_minus": [[list(words[w]) for w in row] for row in t.pm.tolist()],
            "minus_plus": [[list(words[w]) for w in row] for row in t.mp.tolist()],
        }
    return doc


# -- isometries ----------------------------------------------------------------


def _signed(t: TwinSpace, sign: str, x, path) -> int:
    if sign not in ("+", "-"):
        raise SchemaError(path, "sign must be '+' or '-'")
    x = _int(x, path)
    n = t.n_plus if sign == "+" else t.n_minus
    if not 0 <= x < n:
        raise SchemaError(path, f"chamber {x} out of range")
    return t.glob(PLUS if sign == "+" else MINUS, x)


def decode_isometry(doc: dict, src: TwinSpace, tgt: TwinSpace) -> PartialIsometry:
    _require(doc, {"pairs"}, "")
    pairs = []
    for i, p in enumerate(_list(doc["pairs"], "pairs")):
        p = _list(p, f"pairs[{i}]")
        if len(p) != 4:
            raise SchemaError(f"pairs[{i}]", "expected [sign, id, sign', id']")
        pairs.append((_signed(src, p[0], p[1], f"pairs[{i}]"), _signed(tgt, p[2], p[3], f"pairs[{i}]")))
    return make_isometry(src, tgt, pairs)


def encode_isometry(phi: PartialIsometry) -> dict:
    src, tgt = phi.source, phi.target

    def signed(t, g):
        return ["+" if t.sign(g) == PLUS else "-", t.local(g)]

    rows = [signed(src, a) + signed(tgt, b) for a, b in phi.pairs()]
    rows.sort(key=lambda r: (r[0] != "+", r[1]))
    return {"pairs": rows}


def load(path_or_text, src: TwinSpace | None = None, tgt: TwinSpace | None = None):
    """Decode any of the three document kinds."""
    doc = read_document(path_or_text)
    if "pairs" in doc:
        if src is None:
            raise InvalidInput("decoding an isometry needs its source twin")
        return decode_isometry(doc, src, tgt or src)
    if "plus" in doc or "costar" in doc:
        return decode_twin(doc)
    return decode_building(doc)


def encode(obj) -> dict:
    if isinstance(obj, BuildingSpace):
        return encode_building(obj)
    if isinstance(obj, TwinSpace):
        return encode_twin(obj)
    if isinstance(obj, PartialIsometry):
        return encode_isometry(obj)
    raise TypeError(f"cannot encode {type(obj).__name__}")


def io_roundtrip(path_or_text, src: TwinSpace | None = None, tgt: TwinSpace | None = None):
    """Decode a document; encoding the result gives the canonical form of the input."""
    return load(path_or_text, src, tgt)
