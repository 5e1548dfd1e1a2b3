"""File formats: instance JSON, contract sidecars, graph edge lists,
label-cover JSON and CSV reports.

Rationals are written as ``str(Fraction)``: lowest terms, ``"p/q"`` or a
bare integer.  Reading accepts ``"p/q"``, decimal literals and JSON numbers.
"""

from __future__ import annotations

import csv
import io as _io
import json
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .exceptions import ContractError, InvalidInstanceError
from .generators import Graph, LabelCoverInstance, Labeling
from .model import Contract, Instance, as_rational, validate_instance

__all__ = [
    "SCHEMA_VERSION",
    "FormatError",
    "instance_to_dict",
    "instance_from_dict",
    "dumps_instance",
    "save_instance",
    "load_instance",
    "dumps_contract",
    "save_contract",
    "load_contract",
    "parse_edge_list",
    "load_graph",
    "label_cover_from_dict",
    "load_label_cover",
    "ReportRow",
    "REPORT_COLUMNS",
    "format_decimal",
    "render_report",
    "write_report",
]

SCHEMA_VERSION = "1"


class FormatError(ContractError):
    """Raised when a file cannot be parsed into the expected structure."""


def _fmt(x: Fraction) -> str:
    return str(x)


def _parse(value, where: str) -> Fraction:
    try:
        return as_rational(value)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{where}: {exc}") from exc


# -- instances ----------------------------------------------------------------


def instance_to_dict(inst: Instance) -> dict:
    out = {
        "schema_version": SCHEMA_VERSION,
        "rewards": [_fmt(x) for x in inst.r],
        "types": [
            {
                "prob": _fmt(inst.mu[t]),
                "costs": [_fmt(x) for x in inst.c[t]],
                "dists": [[_fmt(x) for x in row] for row in inst.F[t]],
            }
            for t in range(inst.num_types)
        ],
    }
    if inst.labels:
        out["labels"] = {k: list(inst.labels[k]) for k in sorted(inst.labels)}
    return out


def instance_from_dict(data) -> Instance:
    """Build an Instance from the JSON structure; does not validate the model."""
    if not isinstance(data, dict):
        raise FormatError("instance file must contain a JSON object")
    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        raise FormatError(f"unsupported schema_version {version!r}")
    for key in ("rewards", "types"):
        if not isinstance(data.get(key), list):
            raise FormatError(f"missing or malformed field {key!r}")
    r = [_parse(x, f"rewards[{w}]") for w, x in enumerate(data["rewards"])]
    mu, F, c = [], [], []
    for t, entry in enumerate(data["types"]):
        if not isinstance(entry, dict) or not {"prob", "costs", "dists"} <= entry.keys():
            raise FormatError(f"types[{t}] needs 'prob', 'costs' and 'dists'")
        mu.append(_parse(entry["prob"], f"types[{t}].prob"))
        c.append([_parse(x, f"types[{t}].costs[{a}]") for a, x in enumerate(entry["costs"])])
        F.append(
            [
                [_parse(x, f"types[{t}].dists[{a}][{w}]") for w, x in enumerate(row)]
                for a, row in enumerate(entry["dists"])
            ]
        )
    labels = data.get("labels")
    if labels is not None and not isinstance(labels, dict):
        raise FormatError("'labels' must be an object")
    return Instance(mu, F, c, r, labels)


def dumps_instance(inst: Instance) -> str:
    return json.dumps(instance_to_dict(inst), indent=2) + "\n"


def save_instance(inst: Instance, path) -> None:
    """Write the canonical serialization; equal instances give identical bytes."""
    report = validate_instance(inst)
    if not report.ok:
        raise InvalidInstanceError(report)
    Path(path).write_text(dumps_instance(inst), encoding="utf-8")


def _read_json(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from exc


def load_instance(path) -> Instance:
    """Parse and validate an instance file.

    Raises :class:`FormatError` on malformed input and
    :class:`InvalidInstanceError` (carrying the full report) when the data
    violate the model constraints.
    """
    inst = instance_from_dict(_read_json(path))
    report = validate_instance(inst)
    if not report.ok:
        raise InvalidInstanceError(report, f"{path} is not a valid instance:\n{report.render()}")
    return inst


# -- contracts ----------------------------------------------------------------


def dumps_contract(contract: Contract, extra: Optional[dict] = None) -> str:
    out = {
        "schema_version": SCHEMA_VERSION,
        "payments": {str(w): _fmt(p) for w, p in enumerate(contract.p)},
    }
    if extra:
        out.update(extra)
    return json.dumps(out, indent=2) + "\n"


def save_contract(contract: Contract, path, extra: Optional[dict] = None) -> None:
    Path(path).write_text(dumps_contract(contract, extra), encoding="utf-8")


def load_contract(path, num_outcomes: Optional[int] = None) -> Contract:
    """Read a sidecar; outcomes missing from ``payments`` are paid 0."""
    data = _read_json(path)
    payments = data.get("payments") if isinstance(data, dict) else None
    if not isinstance(payments, dict):
        raise FormatError(f"{path}: missing 'payments' object")
    try:
        keyed = {int(k): _parse(v, f"payments[{k}]") for k, v in payments.items()}
    except ValueError as exc:
        raise FormatError(f"{path}: payment keys must be outcome indices") from exc
    m = num_outcomes if num_outcomes is not None else max(keyed, default=-1) + 1
    if any(not 0 <= w < m for w in keyed):
        raise FormatError(f"{path}: payment key outside [0, {m})")
    try:
        return Contract([keyed.get(w, Fraction(0)) for w in range(m)])
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from exc


# -- graphs and label cover ---------------------------------------------------


def parse_edge_list(text: str, num_vertices: Optional[int] = None) -> Graph:
    """One ``u v`` pair per line, 0-indexed; ``#`` starts a comment.

    The vertex count is ``num_vertices`` if given, else one more than the
    largest index mentioned.
    """
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"line {lineno}: expected 'u v', got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise FormatError(f"line {lineno}: vertex indices must be integers") from exc
        pairs.append((u, v))
    largest = max((max(p) for p in pairs), default=-1) + 1
    n = largest if num_vertices is None else num_vertices
    try:
        return Graph.from_edges(n, pairs)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def load_graph(path, num_vertices: Optional[int] = None) -> Graph:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror or exc}") from exc
    return parse_edge_list(text, num_vertices)


def label_cover_from_dict(data) -> tuple:
    """``(LabelCoverInstance, Labeling or None)`` from the label-cover JSON.

    Fields: ``edges`` (list of ``[u, v]``), ``labels`` (alphabet size),
    ``constraints`` (per edge, a table mapping left label to right label),
    optional ``left``/``right`` vertex counts and an optional ``labeling``
    object with ``left`` and ``right`` label lists.
    """
    if not isinstance(data, dict):
        raise FormatError("label-cover file must contain a JSON object")
    try:
        edges = [(int(u), int(v)) for u, v in data["edges"]]
        k = int(data["labels"])
        constraints = [[int(s) for s in table] for table in data["constraints"]]
        left = int(data.get("left", max((u for u, _ in edges), default=-1) + 1))
        right = int(data.get("right", max((v for _, v in edges), default=-1) + 1))
        lc = LabelCoverInstance(left, right, tuple(edges), k, tuple(constraints))
        labeling = None
        if data.get("labeling") is not None:
            labeling = Labeling(data["labeling"]["left"], data["labeling"]["right"])
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed label-cover data: {exc}") from exc
    return lc, labeling


def load_label_cover(path) -> tuple:
    return label_cover_from_dict(_read_json(path))


# -- reports ------------------------------------------------------------------

REPORT_COLUMNS = (
    "instance_id",
    "method",
    "utility_exact",
    "utility_decimal",
    "alpha_or_contract",
    "wall_time",
)


@dataclass(frozen=True)
class ReportRow:
    instance_id: str
    method: str
    utility: Optional[Fraction]
    detail: str
    wall_time: Optional[float] = None


def format_decimal(x: Optional[Fraction], digits: int = 12) -> str:
    """``x`` rounded to ``digits`` significant digits, in positional notation."""
    if x is None:
        return ""
    with localcontext() as ctx:
        ctx.prec = digits
        d = Decimal(x.numerator) / Decimal(x.denominator)
    return format(d.normalize(), "f") if d else "0"


def render_report(rows, timing: bool = True) -> str:
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REPORT_COLUMNS)
    for row in rows:
        wall = f"{row.wall_time:.6f}" if timing and row.wall_time is not None else ""
        writer.writerow(
            [
                row.instance_id,
                row.method,
                "" if row.utility is None else _fmt(row.utility),
                format_decimal(row.utility),
                row.detail,
                wall,
            ]
        )
    return buf.getvalue()


def write_report(rows, path, timing: bool = True) -> None:
    Path(path).write_text(render_report(rows, timing), encoding="utf-8")
