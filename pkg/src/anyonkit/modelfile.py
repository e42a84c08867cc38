"""Reading and writing anyon models as JSON.

Schema::

    {
      "name":   "fibonacci",                      (optional)
      "labels": ["1", "tau"],                     vacuum first
      "fusion": [["tau", "tau", "1"], ...],       c in a x b (b x a and 1 x a implied)
      "dual":   {"tau": "tau"},                   (optional, derived otherwise)
      "F": [{"indices": [a, b, c, d, f, e], "re": x, "im": y}, ...],
      "R": [{"indices": [a, b, c], "re": x, "im": y}, ...],
      "twist": "-1/8"                             (optional extra exchange phase)
    }

``F`` entries give ``[F^{abc}_d]_{f,e}`` with ``f`` the left-grouped and ``e``
the right-grouped intermediate charge; ``"im"`` defaults to 0. Entries with a
vacuum among ``a, b, c`` (for F) or ``a, b`` (for R) may be omitted.
Models are located by :func:`resolve_model`: built-in names first, then file
paths, then ``<name>`` or ``<name>.json`` in the directories listed in
``ANYONKIT_MODEL_PATH``.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

from .fusion import FusionAlgebra
from .symbols import BUILTIN_NAMES, AnyonModel, SymbolError, builtin, parse_fraction

__all__ = ["ModelFileError", "loads_model", "load_model", "dumps_model", "resolve_model",
           "MODEL_PATH_ENV"]

MODEL_PATH_ENV = "ANYONKIT_MODEL_PATH"


class ModelFileError(ValueError):
    """A model file is malformed; the message names the offending line or field."""


def _require(obj, key, kind, where):
    if key not in obj:
        raise ModelFileError(f"{where}: missing field '{key}'")
    val = obj[key]
    if not isinstance(val, kind):
        raise ModelFileError(f"{where}.{key}: expected {kind.__name__}, got {type(val).__name__}")
    return val


def _number(entry, key, where, default=None):
    if key not in entry:
        if default is None:
            raise ModelFileError(f"{where}: missing field '{key}'")
        return default
    val = entry[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ModelFileError(f"{where}.{key}: expected a number, got {val!r}")
    return float(val)


def loads_model(text: str, source: str = "<string>") -> AnyonModel:
    """Parse a model from JSON text."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFileError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ModelFileError(f"{source}: top level must be a JSON object")
    labels = _require(data, "labels", list, source)
    if not labels or not all(isinstance(x, str) for x in labels):
        raise ModelFileError(f"{source}.labels: expected a non-empty list of strings")
    if labels[0] != "1":
        raise ModelFileError(f"{source}.labels[0]: the vacuum label '1' must come first")
    index = {name: i for i, name in enumerate(labels)}
    if len(index) != len(labels):
        raise ModelFileError(f"{source}.labels: duplicate label names")

    def resolve(name, where):
        if not isinstance(name, str) or name not in index:
            raise ModelFileError(f"{where}: unknown label {name!r}")
        return name

    fusion = _require(data, "fusion", list, source)
    rules = []
    for i, triple in enumerate(fusion):
        where = f"{source}.fusion[{i}]"
        if not isinstance(triple, list) or len(triple) != 3:
            raise ModelFileError(f"{where}: expected a triple [a, b, c]")
        rules.append(tuple(resolve(x, f"{where}[{j}]") for j, x in enumerate(triple)))
    dual = data.get("dual")
    if dual is not None:
        if not isinstance(dual, dict):
            raise ModelFileError(f"{source}.dual: expected an object")
        for k, v in dual.items():
            resolve(k, f"{source}.dual")
            resolve(v, f"{source}.dual.{k}")
        dual = {name: dual.get(name, name) for name in labels} if dual else None
    try:
        algebra = FusionAlgebra.from_rules(labels, rules, dual=dual)
    except ValueError as exc:
        raise ModelFileError(f"{source}.fusion: {exc}") from None

    def entries(key, width):
        table = {}
        raw = data.get(key, [])
        if not isinstance(raw, list):
            raise ModelFileError(f"{source}.{key}: expected a list")
        for i, entry in enumerate(raw):
            where = f"{source}.{key}[{i}]"
            if not isinstance(entry, dict):
                raise ModelFileError(f"{where}: expected an object")
            idx = _require(entry, "indices", list, where)
            if len(idx) != width:
                raise ModelFileError(f"{where}.indices: expected {width} labels, got {len(idx)}")
            k = tuple(index[resolve(x, f"{where}.indices[{j}]")] for j, x in enumerate(idx))
            if k in table:
                raise ModelFileError(f"{where}.indices: duplicate entry")
            table[k] = complex(_number(entry, "re", where), _number(entry, "im", where, 0.0))
        return table

    F = entries("F", 6)
    R = entries("R", 3)
    name = data.get("name", Path(source).stem if source != "<string>" else "model")
    try:
        twist = parse_fraction(data.get("twist", 0))
    except ValueError as exc:
        raise ModelFileError(f"{source}.twist: {exc}") from None
    try:
        return AnyonModel(algebra, F, R, str(name), twist)
    except SymbolError as exc:
        raise ModelFileError(f"{source}: {exc}") from None


def load_model(path) -> AnyonModel:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ModelFileError(f"{path}: {exc.strerror}") from None
    return loads_model(text, str(path))


def dumps_model(model: AnyonModel) -> str:
    """Serialize a model to JSON text accepted by :func:`loads_model`."""
    lab = model.labels
    alg = model.algebra
    fusion = [[lab[a], lab[b], lab[c]]
              for a in range(1, alg.size) for b in range(a, alg.size) for c in alg.products(a, b)]

    def num(z):
        return {"re": z.real, "im": z.imag}

    data = {
        "name": model.name,
        "labels": list(lab),
        "fusion": fusion,
        "F": [{"indices": [lab[i] for i in k], **num(v)} for k, v in sorted(model.F.items())
              if 0 not in k[:3]],
        "R": [{"indices": [lab[i] for i in k], **num(v)} for k, v in sorted(model.R.items())
              if 0 not in k[:2]],
    }
    if model.twist:
        data["twist"] = str(model.twist)
    return json.dumps(data, indent=1)


def resolve_model(spec: str) -> AnyonModel:
    """Find a model by built-in name, file path, or search-path lookup."""
    head = spec.strip().lower().split("(")[0].split(":")[0]
    if head in BUILTIN_NAMES:
        return builtin(spec)
    candidate = Path(spec)
    if candidate.is_file():
        return load_model(candidate)
    for directory in os.environ.get(MODEL_PATH_ENV, "").split(os.pathsep):
        if not directory:
            continue
        for name in (spec, spec + ".json"):
            path = Path(directory) / name
            if path.is_file():
                return load_model(path)
    raise ModelFileError(f"unknown model {spec!r}: not a built-in ({', '.join(BUILTIN_NAMES)}), "
                         f"not a file, and not found via {MODEL_PATH_ENV}")
