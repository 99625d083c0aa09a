"""JSON import/export.  Rationals are "p/q" strings, floats use 17
significant digits, and every value carries a "kind" tag."""
from __future__ import annotations

import json
from fractions import Fraction

import numpy as np

from .cacti import Cactus, CactusError, from_arclist, to_arclist
from .configs import FramedConfig, make_config
from .intervals import OvElement, OvError
from .rational import RationalError, fmt_float, fmt_q, parse_q
from .trees import BwTree, TreeError

KINDS = ("tree", "cactus", "ov", "config", "rational")


class SchemaError(ValueError):
    """Malformed input; ``where`` is a JSON-pointer-like location."""

    def __init__(self, where: str, msg: str):
        super().__init__(f"{where}: {msg}")
        self.where = where


def _floats(x):
    if isinstance(x, np.ndarray):
        x = x.tolist()
    if isinstance(x, list):
        return [_floats(y) for y in x]
    if isinstance(x, dict):
        return {k: _floats(v) for k, v in x.items()}
    if isinstance(x, float):
        return float(fmt_float(x))
    return x


def to_data(value) -> dict:
    if isinstance(value, BwTree):
        return {"kind": "tree", **value.to_flat()}
    if isinstance(value, Cactus):
        return {
            "kind": "cactus",
            "tree": value.tree.to_flat(),
            "arcs": {str(lab): [fmt_q(x) for x in value.arcs[lab]] for lab in sorted(value.arcs)},
            "lobe_lengths": [fmt_q(x) for x in value.lengths],
            "arclist": [[lab, fmt_q(ln)] for lab, ln in to_arclist(value)],
        }
    if isinstance(value, OvElement):
        return {"kind": "ov", **value.to_json()}
    if isinstance(value, FramedConfig):
        return {"kind": "config", **_floats(value.to_json())}
    if isinstance(value, (Fraction, int)) and not isinstance(value, bool):
        return {"kind": "rational", "value": fmt_q(value)}
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _need(data, key, where):
    if not isinstance(data, dict) or key not in data:
        raise SchemaError(where, f"missing field {key!r}")
    return data[key]


def from_data(data, kind: str | None = None, where: str = "$"):
    if not isinstance(data, dict):
        raise SchemaError(where, "expected an object")
    kind = kind or data.get("kind")
    if kind not in KINDS:
        raise SchemaError(f"{where}.kind", f"unknown kind {kind!r}")
    try:
        if kind == "tree":
            return BwTree.from_flat(data)
        if kind == "cactus" and "tree" in data:
            return _cactus_from_cells(data, where)
        if kind == "cactus":
            arcs = _need(data, "arclist", where)
            out = []
            for k, item in enumerate(arcs):
                if not (isinstance(item, list) and len(item) == 2):
                    raise SchemaError(f"{where}.arclist[{k}]", "expected [label, length]")
                try:
                    out.append((int(item[0]), parse_q(item[1])))
                except RationalError as ex:
                    raise SchemaError(f"{where}.arclist[{k}][1]", str(ex)) from None
            return from_arclist(out)
        if kind == "ov":
            ivs = _need(data, "intervals", where)
            for k, iv in enumerate(ivs):
                if not (isinstance(iv, list) and len(iv) == 2):
                    raise SchemaError(f"{where}.intervals[{k}]", "expected [lo, hi]")
                for e, x in enumerate(iv):
                    try:
                        parse_q(x)
                    except RationalError as ex:
                        raise SchemaError(f"{where}.intervals[{k}][{e}]", str(ex)) from None
            return OvElement.from_json(data)
        if kind == "config":
            n = int(_need(data, "n", where))
            frames = np.asarray(_need(data, "frames", where), dtype=float)
            d = int(data.get("d", frames.shape[-1] if frames.size else 3))
            if frames.shape != (n, d, d):
                raise SchemaError(f"{where}.frames", f"expected shape {(n, d, d)}, got {frames.shape}")
            vs = {}
            for key, vec in _need(data, "v", where).items():
                try:
                    i, j = (int(x) for x in key.split(","))
                except ValueError:
                    raise SchemaError(f"{where}.v", f"bad pair key {key!r}") from None
                if not (1 <= i < j <= n) or len(vec) != d:
                    raise SchemaError(f"{where}.v[{key!r}]", "pair out of range or wrong length")
                vs[(i, j)] = vec
            if len(vs) != n * (n - 1) // 2:
                raise SchemaError(f"{where}.v", "need a direction for every pair i < j")
            return make_config(vs, frames if n else np.zeros((0, d, d)), d)
        if kind == "rational":
            try:
                return parse_q(_need(data, "value", where))
            except RationalError as ex:
                raise SchemaError(f"{where}.value", str(ex)) from None
    except SchemaError:
        raise
    except (TreeError, CactusError, OvError, RationalError, ValueError, TypeError, KeyError) as ex:
        raise SchemaError(where, str(ex)) from None


def _qlist(xs, where):
    if not isinstance(xs, list):
        raise SchemaError(where, "expected a list of rationals")
    out = []
    for k, x in enumerate(xs):
        try:
            out.append(parse_q(x))
        except RationalError as ex:
            raise SchemaError(f"{where}[{k}]", str(ex)) from None
    return out


def _cactus_from_cells(data, where):
    """The (tree, arcs, lobe_lengths) form of a cactus."""
    tree = BwTree.from_flat(_need(data, "tree", where))
    raw = _need(data, "arcs", where)
    if not isinstance(raw, dict):
        raise SchemaError(f"{where}.arcs", "expected an object keyed by white label")
    arcs = {int(lab): _qlist(v, f"{where}.arcs[{lab!r}]") for lab, v in raw.items()}
    lengths = _qlist(_need(data, "lobe_lengths", where), f"{where}.lobe_lengths")
    return Cactus(tree, arcs, tuple(lengths))


def dumps(value) -> str:
    return json.dumps(to_data(value), sort_keys=True)


def loads(text: str, kind: str | None = None):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as ex:
        raise SchemaError(f"line {ex.lineno} col {ex.colno}", ex.msg) from None
    return from_data(data, kind)


def load(path: str, kind: str | None = None):
    with open(path) as fh:
        return loads(fh.read(), kind)


def dump(value, path: str):
    with open(path, "w") as fh:
        fh.write(dumps(value) + "\n")
