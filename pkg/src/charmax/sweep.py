"""Deterministic maximal-character-sum sweeps with stable exports.

A sweep walks a conductor range, computes M(chi) for every primitive
character passing the filters, and emits one record per character with
the classical and refined normalizations.  Exports are byte-stable:
records are sorted by construction, floats are serialized at 17
significant digits, and the header carries a hash of the generating
config so partial files and reruns can be told apart.
"""

from __future__ import annotations

import hashlib
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields

from .charsum import max_char_sum
from .dirichlet import SWEEP_LIMIT, build_group, count_primitive_with_order
from .errors import CapacityError, ConfigError
from .pretentious import saving_constant

__all__ = [
    "SweepConfig",
    "SweepRecord",
    "run_sweep",
    "export_records",
    "make_header",
    "render_lines",
    "write_records",
    "load_records",
    "config_hash",
]

SCHEMA_VERSION = "1"

_EXPORT_FIELDS = (
    "q",
    "char_index",
    "order",
    "parity",
    "m_chi",
    "argmax_t",
    "ratio_classical",
    "ratio_refined",
    "ratio_iterated",
)
_INT_FIELDS = frozenset({"q", "char_index", "order", "parity", "argmax_t"})


@dataclass(frozen=True)
class SweepConfig:
    q_min: int
    q_max: int
    order: int | None = None
    threads: int = 1
    seed: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.q_min, int) or self.q_min < 1:
            raise ConfigError("q_min must be a positive integer")
        if not isinstance(self.q_max, int) or self.q_max < self.q_min:
            raise ConfigError("q_max must be an integer >= q_min")
        if self.q_max > SWEEP_LIMIT:
            raise CapacityError(f"q_max exceeds the supported limit {SWEEP_LIMIT}")
        if self.order is not None and (not isinstance(self.order, int) or self.order < 2):
            raise ConfigError("order must be an integer >= 2 when given")
        if not isinstance(self.threads, int) or self.threads < 1:
            raise ConfigError("threads must be a positive integer")
        if not isinstance(self.seed, int):
            raise ConfigError("seed must be an integer")

    def to_dict(self) -> dict:
        return {
            "q_min": self.q_min,
            "q_max": self.q_max,
            "order": self.order,
            "threads": self.threads,
            "seed": self.seed,
        }


def config_hash(config: SweepConfig) -> str:
    blob = json.dumps(config.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


@dataclass(frozen=True)
class SweepRecord:
    """One primitive character's maximal sum and its normalizations.

    char_index is the character's position in the filtered lexicographic
    enumeration for its modulus.  The refined and iterated ratios divide
    out the odd-order main terms and are None when the order is even or
    the iterated logarithm is not yet positive.  elapsed is wall time and
    never exported.
    """

    q: int
    char_index: int
    order: int
    parity: int
    m_chi: float
    argmax_t: int
    ratio_classical: float
    ratio_refined: float | None
    ratio_iterated: float | None
    elapsed: float | None = field(default=None, compare=False)


def _ratios(q: int, order: int, m: float) -> tuple[float, float | None, float | None]:
    sq = math.sqrt(q)
    lq = math.log(q)
    classical = m / (sq * lq)
    if order < 3 or order % 2 == 0:
        return classical, None, None
    delta = saving_constant(order)
    llq = math.log(lq)
    refined = m * llq**0.25 / (sq * lq ** (1.0 - delta))
    if llq <= 1.0:
        return classical, refined, None
    lllq = math.log(llq)
    iterated = m * lllq**0.25 / (sq * llq ** (1.0 - delta))
    return classical, refined, iterated


def _records_for_modulus(q: int, order: int | None) -> list[SweepRecord]:
    group = build_group(q)
    out: list[SweepRecord] = []
    for idx, chi in enumerate(group.characters(order_equals=order, primitive_only=True)):
        if chi.is_principal:
            continue
        start = time.perf_counter()
        res = max_char_sum(chi)
        classical, refined, iterated = _ratios(q, chi.order, res.value)
        out.append(
            SweepRecord(
                q=q,
                char_index=idx,
                order=chi.order,
                parity=chi.parity,
                m_chi=res.value,
                argmax_t=res.argmax_t,
                ratio_classical=classical,
                ratio_refined=refined,
                ratio_iterated=iterated,
                elapsed=time.perf_counter() - start,
            )
        )
    return out


def run_sweep(config: SweepConfig) -> list[SweepRecord]:
    """All records for the configured range, in (q, char_index) order."""
    qs = []
    for q in range(max(config.q_min, 3), config.q_max + 1):
        if q % 4 == 2:
            continue  # 2 || q forbids a primitive character
        if config.order is not None and count_primitive_with_order(q, config.order) == 0:
            continue
        qs.append(q)
    if config.threads == 1:
        batches = [_records_for_modulus(q, config.order) for q in qs]
    else:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            batches = list(pool.map(lambda q: _records_for_modulus(q, config.order), qs))
    return [rec for batch in batches for rec in batch]


def _format_value(name: str, value) -> str:
    if value is None:
        return "null"
    if name in _INT_FIELDS:
        return str(int(value))
    return format(float(value), ".17g")


def _record_json(rec: SweepRecord) -> str:
    parts = [f'"{name}": {_format_value(name, getattr(rec, name))}' for name in _EXPORT_FIELDS]
    return "{" + ", ".join(parts) + "}"


def make_header(config: SweepConfig) -> dict:
    from . import __version__

    return {
        "build": __version__,
        "config_hash": config_hash(config),
        "schema_version": SCHEMA_VERSION,
        "seed": config.seed,
    }


def export_records(
    records: list[SweepRecord],
    path: str,
    config: SweepConfig,
    *,
    fmt: str = "jsonl",
) -> None:
    """Write records with a provenance header; byte-stable for a fixed config."""
    write_records(records, path, make_header(config), fmt=fmt)


def render_lines(records: list[SweepRecord], header_obj: dict, *, fmt: str = "jsonl") -> list[str]:
    """Header plus one line per record, byte-stable for fixed inputs."""
    header = json.dumps(header_obj, sort_keys=True, separators=(", ", ": "))
    lines: list[str] = []
    if fmt == "jsonl":
        lines.append(header)
        lines.extend(_record_json(rec) for rec in records)
    elif fmt == "csv":
        lines.append("# " + header)
        lines.append(",".join(_EXPORT_FIELDS))
        for rec in records:
            cells = [
                "" if getattr(rec, name) is None else _format_value(name, getattr(rec, name))
                for name in _EXPORT_FIELDS
            ]
            lines.append(",".join(cells))
    else:
        raise ConfigError(f"unknown export format {fmt!r}")
    return lines


def write_records(
    records: list[SweepRecord],
    path: str,
    header_obj: dict,
    *,
    fmt: str = "jsonl",
) -> None:
    """Low-level writer taking an explicit header (format conversion keeps it)."""
    lines = render_lines(records, header_obj, fmt=fmt)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _coerce(name: str, raw) -> int | float | None:
    if raw is None or raw == "":
        return None
    if name in _INT_FIELDS:
        return int(raw)
    return float(raw)


_HEADER_FIELDS = ("build", "config_hash", "schema_version", "seed")


def load_records(path: str) -> tuple[dict, list[SweepRecord]]:
    """Parse an export in either format back into records (elapsed is dropped)."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [line.rstrip("\n") for line in fh if line.strip()]
    if not lines:
        raise ConfigError(f"{path} is empty")
    records: list[SweepRecord] = []
    try:
        if lines[0].startswith("# "):
            header = json.loads(lines[0][2:])
            names = lines[1].split(",")
            if tuple(names) != _EXPORT_FIELDS:
                raise ConfigError(f"unexpected csv columns in {path}")
            body = [dict(zip(names, line.split(","))) for line in lines[2:]]
        else:
            header = json.loads(lines[0])
            body = [json.loads(line) for line in lines[1:]]
        for obj in body:
            kwargs = {name: _coerce(name, obj.get(name)) for name in _EXPORT_FIELDS}
            records.append(SweepRecord(**kwargs))
    except ConfigError:
        raise
    except (json.JSONDecodeError, ValueError, TypeError) as exc:
        raise ConfigError(f"{path} is not a valid export: {exc}") from exc
    if not isinstance(header, dict) or any(k not in header for k in _HEADER_FIELDS):
        raise ConfigError(f"{path} has no export header line")
    return header, records


# keep the dataclass field list and the export schema in sync
assert tuple(f.name for f in fields(SweepRecord))[:-1] == _EXPORT_FIELDS
