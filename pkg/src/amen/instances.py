"""Instance and request documents (JSON) and the bundled example instances."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields
from importlib import resources
from typing import Any, Optional

from . import structures as st
from .configuration import ConfigurationPair, WindowPolicy
from .errors import AmenError, SchemaError, SemanticError

COMMANDS = ("con", "solve", "paradox", "folner", "verify", "scan")
BUNDLED = ("f2_firstletter.json", "leftzero6.json", "rightzero6.json", "z6_parity.json")


@dataclass(frozen=True)
class Instance:
    structure: st.Structure
    maps: tuple
    partition: st.Partition
    # maps a decomposition may use; defaults to ``maps``
    family: Optional[tuple] = None

    def pair(self) -> ConfigurationPair:
        return ConfigurationPair(self.structure, self.maps, self.partition)

    def decomposition_family(self) -> tuple:
        return self.family if self.family is not None else self.maps


@dataclass(frozen=True)
class Options:
    radius: int = 1
    patience: int = 2
    max_radius: int = 8
    cap: int = 6
    size_cap: int = 12
    seed: Optional[int] = None
    count: int = 100

    def policy(self) -> WindowPolicy:
        return WindowPolicy(self.radius, self.patience, self.max_radius)


@dataclass(frozen=True)
class AnalysisRequest:
    command: str
    instance: Optional[Instance] = None
    options: Options = field(default_factory=Options)
    # raw sub-documents for "verify"/"paradox"/"folner": certificate, decomposition, query
    extras: tuple = ()

    def extra(self, key: str) -> Any:
        return dict(self.extras).get(key)


def _get(doc: Any, key: str, path: str, kind=None, required: bool = True):
    if not isinstance(doc, dict):
        raise SchemaError("expected an object", path)
    if key not in doc:
        if required:
            raise SchemaError("missing required field", f"{path}.{key}")
        return None
    value = doc[key]
    if kind is not None and not isinstance(value, kind) or isinstance(value, bool) and kind is int:
        raise SchemaError(f"expected {getattr(kind, '__name__', kind)}", f"{path}.{key}")
    return value


def _resolve(fn, path: str, *args):
    try:
        return fn(*args)
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"malformed description ({exc})", path) from None


def _structure(doc, path):
    desc = _get(doc, "structure", path, dict)
    spath = f"{path}.structure"
    kind = _get(desc, "kind", spath, str)
    if kind in ("finite", "left_zero", "right_zero"):
        _get(desc, "size", spath, int)
    if kind == "free_group":
        _get(desc, "rank", spath, int)
    if kind == "finite":
        _get(desc, "table", spath, list, required=False)
        _get(desc, "mode", spath, str, required=False)
    return _resolve(st.build_structure, spath, desc)


def _maps(s, docs, path):
    out = []
    for k, d in enumerate(docs):
        mpath = f"{path}[{k}]"
        kind = _get(d, "kind", mpath, str)
        if kind in ("left", "inner"):
            _get(d, "g", mpath)
        if kind == "table":
            _get(d, "images", mpath, list)
        out.append(_resolve(st.build_map, mpath, s, d))
    return tuple(out)


def parse_instance_doc(doc: dict, path: str = "$.instance") -> Instance:
    s = _structure(doc, path)
    map_docs = _get(doc, "maps", path, list)
    if not map_docs:
        raise SchemaError("at least one map is required", f"{path}.maps")
    maps = _maps(s, map_docs, f"{path}.maps")
    pdoc = _get(doc, "partition", path, dict)
    _get(pdoc, "kind", f"{path}.partition", str)
    partition = _resolve(st.build_partition, f"{path}.partition", s, pdoc)
    family_doc = _get(doc, "family", path, required=False)
    family = None
    if family_doc == "all_left":
        family = tuple(st.all_left_translations(s))
    elif family_doc is not None:
        if not isinstance(family_doc, list):
            raise SchemaError('expected a list of maps or "all_left"', f"{path}.family")
        family = _maps(s, family_doc, f"{path}.family")
    inst = Instance(s, maps, partition, family)
    inst.pair()  # group-mode bijectivity
    return inst


def parse_options(doc: Optional[dict], path: str = "$.options") -> Options:
    if doc is None:
        return Options()
    if not isinstance(doc, dict):
        raise SchemaError("expected an object", path)
    known = {f.name for f in fields(Options)}
    values = {}
    for key, value in doc.items():
        if key not in known:
            raise SchemaError("unknown option", f"{path}.{key}")
        if value is not None and (not isinstance(value, int) or isinstance(value, bool)):
            raise SchemaError("expected an integer", f"{path}.{key}")
        values[key] = value
    return Options(**values)


def parse_request(doc: dict, command: Optional[str] = None) -> AnalysisRequest:
    if not isinstance(doc, dict):
        raise SchemaError("expected an object", "$")
    command = command or _get(doc, "command", "$", str)
    if command not in COMMANDS:
        raise SchemaError(f"unknown command {command!r}", "$.command")
    options = parse_options(doc.get("options"))
    instance = None
    if command != "scan":
        instance = parse_instance_doc(_get(doc, "instance", "$", dict))
    elif options.seed is None:
        raise SchemaError("scan needs a seed", "$.options.seed")
    extras = tuple(sorted((k, doc[k]) for k in ("certificate", "decomposition", "query") if k in doc))
    if command == "verify" and not extras:
        raise SchemaError("verify needs a certificate or a decomposition", "$.certificate")
    return AnalysisRequest(command, instance, options, _freeze(extras))


def parse_instance(text: str, command: Optional[str] = None) -> AnalysisRequest:
    """Parse a JSON request document; errors carry a JSON path."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg}", "$") from None
    try:
        return parse_request(doc, command)
    except AmenError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise SemanticError(str(exc)) from None


class _Frozen(dict):
    """Hashable read-only dict so requests stay immutable and comparable."""

    def __hash__(self):
        return hash(json.dumps(self, sort_keys=True))


def _freeze(value):
    if isinstance(value, dict):
        return _Frozen({k: _freeze(v) for k, v in value.items()})
    if isinstance(value, list):
        return tuple(_freeze(v) for v in value)
    return value


def _thaw(value):
    if isinstance(value, dict):
        return {k: _thaw(v) for k, v in value.items()}
    if isinstance(value, tuple):
        return [_thaw(v) for v in value]
    return value


def instance_to_json(inst: Instance) -> dict:
    s = inst.structure
    doc = {
        "structure": st.structure_to_json(s),
        "maps": [st.map_to_json(s, f) for f in inst.maps],
        "partition": st.partition_to_json(s, inst.partition),
    }
    if inst.family is not None:
        doc["family"] = [st.map_to_json(s, f) for f in inst.family]
    return doc


def serialize_request(req: AnalysisRequest) -> dict:
    doc: dict = {"command": req.command, "options": {f.name: getattr(req.options, f.name) for f in fields(Options)}}
    if req.instance is not None:
        doc["instance"] = instance_to_json(req.instance)
    for key, value in req.extras:
        doc[key] = _thaw(value)
    return doc


def load_bundled(name: str) -> str:
    if name not in BUNDLED:
        raise SemanticError(f"no bundled instance named {name!r}")
    return resources.files("amen").joinpath("data", name).read_text()
