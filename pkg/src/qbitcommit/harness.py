"""Experiment configs, table generation and text summaries.

Each experiment produces one row per trial (or sweep point) followed by a
summary row holding column means. Rows carry the master seed and the
package version so a results file identifies the run that produced it.
Trials draw from independent child streams of the master seed, so output is
byte-identical across reruns.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field, fields
from typing import Any

import numpy as np

from . import __version__, attacks, streams
from .protocols import bcjl, script

EXPERIMENTS = ("bcjl-honest", "bcjl-attack", "script-attack", "fidelity-sweep", "two-party")
FORMATS = ("csv", "jsonl")


class ConfigError(ValueError):
    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field_name = field_name


@dataclass
class ExperimentConfig:
    experiment: str
    n: int = 6
    k: int = 3
    epsilon: float = 0.0
    trials: int = 10
    grid: list[float] = field(default_factory=lambda: [i / 10 for i in range(11)])
    domain: int = 8
    function: str = "equality"
    seed: int = 0
    out: str | None = None
    format: str = "csv"

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.experiment not in EXPERIMENTS:
            raise ConfigError("experiment", f"must be one of {', '.join(EXPERIMENTS)}")
        for name in ("n", "k", "trials", "domain", "seed"):
            val = getattr(self, name)
            if isinstance(val, bool) or not isinstance(val, int):
                raise ConfigError(name, f"must be an integer, got {val!r}")
        if self.trials < 1:
            raise ConfigError("trials", "must be >= 1")
        if not 1 <= self.k <= self.n:
            raise ConfigError("k", f"need 1 <= k <= n, got n={self.n}, k={self.k}")
        if not isinstance(self.epsilon, (int, float)) or not 0 <= self.epsilon < 0.5:
            raise ConfigError("epsilon", f"must lie in [0, 0.5), got {self.epsilon!r}")
        if not self.grid or any(not isinstance(s, (int, float)) or not 0 <= s <= 1
                                for s in self.grid):
            raise ConfigError("grid", "must be a nonempty list of numbers in [0, 1]")
        if not 1 <= self.domain <= 8:
            raise ConfigError("domain", "must lie in 1..8")
        if self.function not in ("equality", "random", "constant"):
            raise ConfigError("function", "must be 'equality', 'random' or 'constant'")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed", "must be a 64-bit unsigned integer")
        if self.format not in FORMATS:
            raise ConfigError("format", f"must be one of {', '.join(FORMATS)}")

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        for key in data:
            if key not in known:
                raise ConfigError(key, "unknown config field")
        if "experiment" not in data:
            raise ConfigError("experiment", "missing")
        return cls(**data)

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError("config", str(exc)) from exc
        if not isinstance(data, dict):
            raise ConfigError("config", "top level must be a JSON object")
        return cls.from_dict(data)


def _report_columns(rep: attacks.AttackReport) -> dict:
    return {
        "fidelity": rep.fidelity,
        "delta": rep.delta,
        "achieved_overlap": rep.achieved_overlap,
        "acceptance_probability": rep.acceptance_probability,
        "detection_probability": rep.detection_probability,
        "u_dim": rep.u_dim,
    }


def _bcjl_honest(cfg, rngs):
    params = bcjl.BCJLParams(cfg.n, cfg.k, cfg.epsilon)
    for i, rng in enumerate(rngs):
        bit = int(rng.integers(0, 2))
        _, v = bcjl.bcjl_run(params, bit, rng)
        yield {"trial": i, "n": cfg.n, "k": cfg.k, "epsilon": cfg.epsilon,
               "d": v.code_distance, "committed_bit": bit, "matched": v.matched,
               "errors": v.errors, "codeword_ok": int(v.codeword_ok),
               "error_ok": int(v.error_ok), "parity_ok": int(v.parity_ok),
               "accepted": int(v.accepted), "acceptance_probability": float(v.accepted)}


def _bcjl_attack(cfg, rngs):
    params = bcjl.BCJLParams(cfg.n, cfg.k, 0.0)
    if cfg.epsilon != 0:
        raise ConfigError("epsilon", "bcjl-attack simulates a noiseless channel; set epsilon to 0")
    for i, rng in enumerate(rngs):
        res = attacks.bcjl_epr_attack_states(params, rng)
        rep = res.report
        yield {"trial": i, "n": cfg.n, "k": cfg.k, "d": res.code.min_distance,
               "r": "".join(map(str, res.r)), **_report_columns(rep),
               "open0_three_test_acceptance": rep.extra["open0_three_test_acceptance"],
               "open1_three_test_acceptance": rep.extra["open1_three_test_acceptance"],
               "both_open_acceptance": min(1.0, rep.acceptance_probability)}


def _script_attack(cfg, rngs):
    for i, rng in enumerate(rngs):
        rep = attacks.run_commitment_attack(script.random_three_qubit_script(rng))
        yield {"trial": i, **_report_columns(rep)}


def _fidelity_sweep(cfg, rngs):
    for i, s in enumerate(cfg.grid):
        rep = attacks.run_commitment_attack(script.interpolating_script(float(s)))
        yield {"trial": i, "s": float(s), **_report_columns(rep)}


def _two_party(cfg, rngs):
    m = cfg.domain
    for i, rng in enumerate(rngs):
        if cfg.function == "equality":
            table = np.eye(m, dtype=int)
        elif cfg.function == "constant":
            table = np.zeros((m, m), dtype=int)
        else:
            table = rng.integers(0, 2, size=(m, m))
        x = int(rng.integers(0, m))
        y0 = int(rng.integers(0, m))
        got = attacks.two_party_attack(table, x, y0)
        row = "".join(str(v) for _, v in got)
        yield {"trial": i, "x": x, "y_start": y0, "recovered_row": row,
               "true_row": "".join(str(int(v)) for v in table[x]),
               "correct": int(row == "".join(str(int(v)) for v in table[x]))}


_RUNNERS = {
    "bcjl-honest": _bcjl_honest,
    "bcjl-attack": _bcjl_attack,
    "script-attack": _script_attack,
    "fidelity-sweep": _fidelity_sweep,
    "two-party": _two_party,
}


def run(cfg: ExperimentConfig) -> list[dict]:
    """Rows for every trial plus a trailing summary row."""
    cfg.validate()
    rngs = streams.trial_streams(cfg.seed, cfg.trials)
    rows = []
    for row in _RUNNERS[cfg.experiment](cfg, rngs):
        rows.append({"experiment": cfg.experiment, "seed": cfg.seed,
                     "build": __version__, **row})
    rows.append(summary_row(rows))
    return rows


def summary_row(rows: list[dict]) -> dict:
    out = {key: "" for key in rows[0]}
    out.update(experiment=rows[0]["experiment"], seed=rows[0]["seed"],
               build=rows[0]["build"], trial="summary")
    for key in rows[0]:
        if key in ("trial", "seed"):
            continue
        vals = [r[key] for r in rows]
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in vals):
            out[key] = float(np.mean(vals))
    return out


def _cell(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def format_rows(rows: list[dict], fmt: str = "csv") -> str:
    if fmt == "jsonl":
        return "".join(json.dumps(r) + "\n" for r in rows)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(rows[0]))
    for r in rows:
        writer.writerow([_cell(r.get(k, "")) for k in rows[0]])
    return buf.getvalue()


def read_table(path) -> list[dict]:
    with open(path, newline="") as fh:
        text = fh.read()
    if not text.strip():
        return []
    if text.lstrip().startswith("{"):
        return [json.loads(line) for line in text.splitlines() if line.strip()]
    return list(csv.DictReader(io.StringIO(text)))


def _num(v):
    try:
        return float(v)
    except (TypeError, ValueError):
        return None


def report(rows: list[dict]) -> str:
    """Aligned text summary of a results table (summary rows are skipped)."""
    rows = [r for r in rows if str(r.get("trial")) != "summary"]
    if not rows:
        raise ValueError("empty table: nothing to report")
    lines = []
    if len(rows) == 1:
        width = max(len(k) for k in rows[0])
        lines.append("single row:")
        lines.extend(f"  {k:<{width}}  {v}" for k, v in rows[0].items())
        return "\n".join(lines) + "\n"

    lines.append(f"experiment: {rows[0].get('experiment', '?')}   rows: {len(rows)}")
    stats_cols = [c for c in ("fidelity", "acceptance_probability", "detection_probability",
                              "both_open_acceptance", "open1_three_test_acceptance", "correct")
                  if c in rows[0]]
    if stats_cols:
        width = max(len(c) for c in stats_cols)
        lines.append(f"  {'column':<{width}}  {'mean':>10}  {'min':>10}  {'max':>10}")
        for col in stats_cols:
            vals = np.array([_num(r[col]) for r in rows], dtype=float)
            lines.append(f"  {col:<{width}}  {vals.mean():>10.6f}  "
                         f"{vals.min():>10.6f}  {vals.max():>10.6f}")
    if "delta" in rows[0] and "detection_probability" in rows[0]:
        curve = sorted(((_num(r["delta"]), _num(r["detection_probability"])) for r in rows))
        lines.append("  delta-detection curve (sorted by delta):")
        lines.append(f"  {'delta':>12}  {'detection':>12}")
        lines.extend(f"  {d:>12.6f}  {p:>12.6f}" for d, p in curve)
    return "\n".join(lines) + "\n"
