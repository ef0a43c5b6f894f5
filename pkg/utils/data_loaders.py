"""
Loaders for programs, jaegd files and instances, and instance rendering

Instance files are JSON objects mapping relation names to either a JSON
object (converted to its object description) or a list of pairs

    {"path": ["a", {"packed": ["b", "c"]}], "value": "1"}

with "value": null standing for the empty object. Numbers and booleans are
read as the text they were written with.
"""

import json
from pathlib import Path
from typing import Any, Dict, Iterable, List, Union

import structlog

from language.parser import parse, parse_jaegds
from models.errors import InstanceFormatError
from models.objects import od_decode, od_encode
from models.program import Jaegd, Program
from models.terms import EMPTY, Instance, Packed, Pair, format_key, sorted_pairs
from models.validation import OutputMode

logger = structlog.get_logger(__name__)


def load_program(program_path: Union[str, Path]) -> Program:
    with open(program_path, encoding="utf-8") as f:
        return parse(f.read())


def load_jaegds(jaegd_path: Union[str, Path]) -> List[Jaegd]:
    with open(jaegd_path, encoding="utf-8") as f:
        return parse_jaegds(f.read())


# ---------------------------------------------------------------------------
# Reading

def _no_duplicates(pairs):
    seen = {}
    for key, value in pairs:
        if key in seen:
            raise InstanceFormatError(f"Duplicate key {key!r} in JSON object")
        seen[key] = value
    return seen


def _literal(text: str) -> str:
    return text


def _json(text: str) -> Any:
    try:
        return json.loads(
            text,
            object_pairs_hook=_no_duplicates,
            parse_int=_literal,
            parse_float=_literal,
            parse_constant=_literal,
        )
    except json.JSONDecodeError as e:
        raise InstanceFormatError(f"Invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from e


def _atom(value: Any, where: str) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return value
    raise InstanceFormatError(f"Expected an atomic key in {where}, got {json.dumps(value)}")


def _tree(value: Any, where: str):
    if isinstance(value, dict):
        return {key: _tree(child, f"{where}.{key}") for key, child in value.items()}
    if isinstance(value, list):
        raise InstanceFormatError(f"JSON arrays are not supported ({where})")
    if value is None:
        raise InstanceFormatError(f"null is not an atomic value; use {{}} for the empty object ({where})")
    return _atom(value, where)


def _key(value: Any, where: str):
    if isinstance(value, dict):
        if set(value) != {"packed"}:
            raise InstanceFormatError(f"A structured key needs exactly the field 'packed' ({where})")
        return Packed(_path(value["packed"], where))
    return _atom(value, where)


def _path(keys: Any, where: str) -> tuple:
    if not isinstance(keys, list) or not keys:
        raise InstanceFormatError(f"A path is a nonempty list of keys ({where})")
    return tuple(_key(k, where) for k in keys)


def _pairs(entries: list, name: str) -> List[Pair]:
    pairs = []
    for index, entry in enumerate(entries):
        where = f"{name}[{index}]"
        if not isinstance(entry, dict) or "path" not in entry:
            raise InstanceFormatError(f"Expected {{\"path\": [...], \"value\": ...}} at {where}")
        value = entry.get("value")
        pairs.append((_path(entry["path"], where), EMPTY if value is None else _atom(value, where)))
    return pairs


def parse_instance(text: str) -> Instance:
    data = _json(text)
    if not isinstance(data, dict):
        raise InstanceFormatError("An instance is a JSON object mapping relation names to contents")
    relations: Dict[str, Iterable[Pair]] = {}
    for name, content in data.items():
        if isinstance(content, dict):
            relations[name] = od_encode(_tree(content, name))
        elif isinstance(content, list):
            relations[name] = _pairs(content, name)
        else:
            raise InstanceFormatError(f"Relation {name} must be a JSON object or a list of pairs")
    instance = Instance(relations)
    logger.debug("instance_loaded", relations=len(relations), facts=len(instance))
    return instance


def load_instance(instance_path: Union[str, Path]) -> Instance:
    with open(instance_path, encoding="utf-8") as f:
        return parse_instance(f.read())


# ---------------------------------------------------------------------------
# Writing

def _dump_key(key):
    if isinstance(key, Packed):
        return {"packed": [_dump_key(k) for k in key.path]}
    return key


def _tree_keys(tree):
    """JSON object keys must be strings: packed keys are written as <...>"""
    out = {}
    for key, value in tree.items():
        name = key if isinstance(key, str) else format_key(key)
        out[name] = _tree_keys(value) if isinstance(value, dict) else value
    return out


def freshen(instance: Instance, prefix: str = "k") -> Instance:
    """
    Replace every packed key by a fresh atomic key prefix1, prefix2, ... in
    order of first occurrence over the canonically sorted facts. Keys already
    used atomically are skipped.
    """
    used = set()
    for fact in instance.facts():
        used.update(k for k in fact.path if isinstance(k, str))
        if isinstance(fact.value, str):
            used.add(fact.value)

    names: Dict[Packed, str] = {}
    counter = 0
    relations: Dict[str, set] = {}
    for fact in instance.sorted_facts():
        path = []
        for key in fact.path:
            if isinstance(key, Packed):
                if key not in names:
                    counter += 1
                    while f"{prefix}{counter}" in used:
                        counter += 1
                    names[key] = f"{prefix}{counter}"
                key = names[key]
            path.append(key)
        relations.setdefault(fact.relation, set()).add((tuple(path), fact.value))
    for name in instance.names:
        relations.setdefault(name, set())
    return Instance(relations)


def instance_to_json(instance: Instance, mode: OutputMode = OutputMode.PAIRS, prefix: str = "k") -> Dict[str, Any]:
    mode = OutputMode(mode)
    if mode == OutputMode.FRESHENED:
        instance = freshen(instance, prefix)
    data: Dict[str, Any] = {}
    for name in sorted(instance.names):
        pairs = instance.pairs(name)
        if mode == OutputMode.PAIRS:
            data[name] = [
                {"path": [_dump_key(k) for k in path], "value": None if value is EMPTY else value}
                for path, value in sorted_pairs(pairs)
            ]
        else:
            data[name] = _tree_keys(od_decode(pairs))
    return data


def dump_instance(instance: Instance, mode: OutputMode = OutputMode.PAIRS, prefix: str = "k", indent: int = 2) -> str:
    """JSON text; tree and freshened modes raise ImproperDescription for improper relations"""
    data = instance_to_json(instance, mode, prefix)
    sort = OutputMode(mode) != OutputMode.PAIRS
    return json.dumps(data, indent=indent, ensure_ascii=False, sort_keys=sort)
