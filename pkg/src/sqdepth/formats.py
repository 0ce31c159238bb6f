"""Instance files, partition files, result-log records and text reports."""

from __future__ import annotations

import hashlib
import json
from typing import Any, Iterable

from .monomials import FieldSpec, Instance, MonomialIdeal, SqMonomial, mask_of
from .stanley import IntervalPartition, partition_from_lists, partition_intervals_as_lists

FORMAT_VERSION = 1
INSTANCE_FIELDS = ("n", "I", "J", "char")


class FormatError(ValueError):
    """Malformed input; ``where`` locates the problem."""

    def __init__(self, message: str, where: str = ""):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where


def _load_json(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None


def _monomial(raw: Any, n: int, where: str) -> int:
    if not isinstance(raw, list) or not all(type(t) is int for t in raw):
        raise FormatError("monomial must be a list of integers", where)
    if any(b <= a for a, b in zip(raw, raw[1:])):
        raise FormatError("variable indices must be strictly increasing", where)
    if raw and (raw[0] < 1 or raw[-1] > n):
        raise FormatError(f"variable index outside [1, {n}]", where)
    return mask_of(raw)


def _ideal(raw: Any, n: int, name: str) -> MonomialIdeal:
    if not isinstance(raw, list):
        raise FormatError("expected a list of monomials", name)
    masks = [_monomial(m, n, f"{name}[{k}]") for k, m in enumerate(raw)]
    return MonomialIdeal.from_masks(n, masks)


def instance_from_dict(data: Any) -> Instance:
    if not isinstance(data, dict):
        raise FormatError("instance must be an object")
    unknown = sorted(set(data) - set(INSTANCE_FIELDS) - {"format"})
    if unknown:
        raise FormatError(f"unknown field(s) {', '.join(unknown)}")
    missing = [k for k in INSTANCE_FIELDS if k not in data]
    if missing:
        raise FormatError(f"missing field(s) {', '.join(missing)}")
    if data.get("format", FORMAT_VERSION) != FORMAT_VERSION:
        raise FormatError(f"unsupported format {data['format']!r}", "format")
    n, char = data["n"], data["char"]
    if type(n) is not int or n < 0:
        raise FormatError("n must be a non-negative integer", "n")
    if type(char) is not int:
        raise FormatError("char must be an integer", "char")
    I = _ideal(data["I"], n, "I")
    J = _ideal(data["J"], n, "J")
    return Instance(n, I, J, FieldSpec(char))


def parse_instance(text: str) -> Instance:
    """Parse and validate an instance; raises FormatError or InstanceError."""
    return instance_from_dict(_load_json(text))


def instance_to_dict(inst: Instance) -> dict:
    return {
        "format": FORMAT_VERSION,
        "n": inst.n,
        "I": [list(g.support) for g in inst.I.gens],
        "J": [list(g.support) for g in inst.J.gens],
        "char": inst.field.characteristic,
    }


def dump_instance(inst: Instance) -> str:
    return json.dumps(instance_to_dict(inst))


def instance_digest(inst: Instance) -> str:
    return hashlib.sha256(dump_instance(inst).encode()).hexdigest()[:16]


def parse_partition(text: str) -> IntervalPartition:
    data = _load_json(text)
    if not isinstance(data, dict) or "intervals" not in data:
        raise FormatError("partition must be an object with an 'intervals' list")
    unknown = sorted(set(data) - {"intervals", "format"})
    if unknown:
        raise FormatError(f"unknown field(s) {', '.join(unknown)}")
    raw = data["intervals"]
    if not isinstance(raw, list):
        raise FormatError("'intervals' must be a list", "intervals")
    for k, iv in enumerate(raw):
        if not (isinstance(iv, list) and len(iv) == 2):
            raise FormatError("interval must be a pair [u, v]", f"intervals[{k}]")
        for side, m in zip("uv", iv):
            _monomial(m, 63, f"intervals[{k}].{side}")
    return partition_from_lists(raw)


def dump_partition(part: IntervalPartition) -> str:
    return json.dumps({"format": FORMAT_VERSION, "intervals": partition_intervals_as_lists(part)})


def dump_record(record: dict) -> str:
    return json.dumps(record, separators=(",", ":"))


# ---------------------------------------------------------------------------
# text reports: one ``key=value`` line per field, in insertion order


def fmt_value(value: Any) -> str:
    if isinstance(value, SqMonomial):
        return str(value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(fmt_value(v) for v in value) + "]"
    if isinstance(value, (set, frozenset)):
        return "{" + ", ".join(fmt_value(v) for v in sorted(value)) + "}"
    if value is None:
        return "none"
    return str(value)


def emit_report(fields: Iterable[tuple[str, Any]]) -> str:
    return "".join(f"{key}={fmt_value(value)}\n" for key, value in fields)
