"""JSON run configuration and CSV rendering of equilibrium reports."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import IO, Any

from .equilibrium import EquilibriumReport
from .model import (
    EfficiencyCurve,
    ModelParams,
    PolicyRegime,
    get_family,
    family_names,
    validate_params,
)
from .statics import SweepTable

CSV_COLUMNS = (
    "eta", "gamma", "tau_f", "tau_w", "theta_star", "p_star", "q_star", "u_star",
    "v_star", "wage", "wage_net", "J_F", "bellman_residual_F", "free_entry_residual",
    "rate_overflow",
)


class ConfigParseError(ValueError):
    """Document is unreadable, not JSON, or structurally wrong."""


class ConfigValidationError(ValueError):
    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems))
        self.problems = problems


@dataclass(frozen=True)
class RunConfig:
    model: ModelParams = field(default_factory=ModelParams)
    efficiency: EfficiencyCurve = field(default_factory=EfficiencyCurve)
    policy: PolicyRegime = field(default_factory=PolicyRegime)
    eta: float | None = None


def _number(section: str, key: str, value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigParseError(f"{section}.{key} must be a number, got {value!r}")
    return float(value)


def _section(doc: dict, name: str, cls: type, strings: tuple[str, ...] = ()) -> dict:
    raw = doc.get(name, {})
    if not isinstance(raw, dict):
        raise ConfigParseError(f"section {name!r} must be an object")
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(raw) - known)
    if unknown:
        raise ConfigParseError(f"unknown key(s) in {name}: {', '.join(unknown)}")
    out = {}
    for k, v in raw.items():
        if k in strings:
            if not isinstance(v, str):
                raise ConfigParseError(f"{name}.{k} must be a string, got {v!r}")
            out[k] = v
        else:
            out[k] = _number(name, k, v)
    return out


def load_document(source: str | Path | dict | None) -> dict:
    """Accept a dict, an inline JSON string, or a path to a JSON file."""
    if source is None:
        return {}
    if isinstance(source, dict):
        return source
    text = str(source)
    if not text.lstrip().startswith("{"):
        try:
            text = Path(text).read_text()
        except OSError as exc:
            raise ConfigParseError(f"cannot read config {source}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigParseError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigParseError("config must be a JSON object")
    return doc


def parse_config(source: str | Path | dict | None) -> RunConfig:
    doc = load_document(source)
    unknown = sorted(set(doc) - {"model", "efficiency", "policy", "eta"})
    if unknown:
        raise ConfigParseError(f"unknown top-level key(s): {', '.join(unknown)}")

    model = ModelParams(**_section(doc, "model", ModelParams))
    eff = _section(doc, "efficiency", EfficiencyCurve, strings=("kind",))
    kind = eff.get("kind", "quadratic")
    if kind not in family_names():
        raise ConfigValidationError([f"efficiency.kind must be one of {family_names()} (got {kind!r})"])
    eff.setdefault("domain_max", min(model.y, get_family(kind).max_domain))
    curve = EfficiencyCurve(**eff)
    policy = PolicyRegime(**_section(doc, "policy", PolicyRegime))
    eta = doc.get("eta")
    if eta is not None:
        eta = _number("config", "eta", eta)

    cfg = RunConfig(model, curve, policy, eta)
    problems = config_problems(cfg)
    if problems:
        raise ConfigValidationError(problems)
    return cfg


def config_problems(cfg: RunConfig, eta: float | None = None) -> list[str]:
    problems = validate_params(cfg.model, cfg.efficiency, cfg.policy).messages()
    eta = cfg.eta if eta is None else eta
    if eta is not None:
        if not eta < cfg.model.y:
            problems.append(f"eta < y violated (got eta={eta}, y={cfg.model.y})")
        if not 0.0 <= eta <= cfg.efficiency.domain_max:
            problems.append(
                f"0 <= eta <= domain_max violated (got eta={eta}, domain_max={cfg.efficiency.domain_max})"
            )
    return problems


def serialize_config(cfg: RunConfig) -> dict:
    doc = {
        "model": asdict(cfg.model),
        "efficiency": asdict(cfg.efficiency),
        "policy": asdict(cfg.policy),
    }
    if cfg.eta is not None:
        doc["eta"] = cfg.eta
    return doc


def format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return ""
        return f"{value:.12g}"
    return str(value)


def report_row(report: EquilibriumReport) -> list[str]:
    return [format_cell(getattr(report, col)) for col in CSV_COLUMNS]


def _failed_row(table: SweepTable, x: float) -> list[str]:
    policy = table.fixed["policy"]
    known = {
        "eta": x if table.variable == "eta" else table.fixed["eta"],
        "gamma": x if table.variable == "gamma" else policy.gamma,
        "tau_f": x if table.variable == "tau_f" else policy.tau_f,
        "tau_w": policy.tau_w,
    }
    return [format_cell(known.get(col)) for col in CSV_COLUMNS]


def write_csv(data: SweepTable | EquilibriumReport, sink: IO[str]) -> None:
    """Header plus one row per report; absent values are empty fields."""
    w = csv.writer(sink, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    if isinstance(data, EquilibriumReport):
        w.writerow(report_row(data))
        return
    for x, row in zip(data.grid, data.rows):
        w.writerow(report_row(row) if row is not None else _failed_row(data, x))


def to_json(obj: Any) -> str:
    return json.dumps(obj, indent=2, allow_nan=False)
