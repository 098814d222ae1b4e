"""Desk-scale experiment runners producing CSV tables.

Each runner returns ``(rows, summary, ok)``: per-instance rows, aggregated
rows and whether every invariant assertion made along the way held.  Every
non-timing column is a function of the configuration and seed alone.
"""

from __future__ import annotations

import csv
import logging
import math
import os
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable, Iterable, Optional

import numpy as np

from .dynamic import (
    DELETE,
    DynamicEvent,
    DynamicState,
    apply_delete,
    check_state,
    initial_state,
    load_state,
    random_deletion,
    read_event_log,
    replay,
    rerun_baseline,
    save_state,
    write_event_log,
)
from .errors import ParameterError
from .graph import generate_ba, line_graph
from .hub import bfs_baseline_hub, cds_certify, connect_matching
from .matching import max_matching
from .measurements import build_plan, gen_signal, measure
from .recovery import ISTA_L1, OMP, judge, recover

log = logging.getLogger(__name__)

OUTPUT_ROOT_ENV = "HUBTOMO_OUTPUT_ROOT"
SELECTORS = ("matching", "bfs_baseline")

RECOVERY_COLUMNS = [
    "seed", "n", "d", "r", "N_over_m", "solver", "success", "rel_error", "iterations", "wall_time_ms",
    "selector", "status", "m", "N", "hub_size", "n_random", "hub_ms", "plan_ms", "solve_ms",
]
TIMING_COLUMNS = {"wall_time_ms", "hub_ms", "plan_ms", "solve_ms", "matching_ms", "baseline_ms",
                  "dynamic_ms", "rerun_ms", "mean_matching_ms", "median_matching_ms",
                  "mean_baseline_ms", "median_baseline_ms", "mean_dynamic_ms", "median_dynamic_ms",
                  "mean_rerun_ms", "median_rerun_ms", "median_speedup"}


def _tuple_of(kind):
    def parse(value):
        if isinstance(value, str):
            return tuple(kind(v) for v in value.replace(",", " ").split())
        if isinstance(value, (list, tuple)):
            return tuple(kind(v) for v in value)
        return (kind(value),)
    return parse


@dataclass
class ExperimentConfig:
    n: tuple = (100,)
    d: tuple = (10,)
    ratios: tuple = (0.3, 0.4, 0.5)
    sparsity_start: float = 0.05
    sparsity_step: float = 0.05
    sparsity_stop: float = 0.35
    trials: int = 20
    seed: int = 0
    solver: str = OMP
    selector: str = "matching"
    noise: float = 0.0
    output_dir: str = ""
    events: int = 20
    timeout: float = 600.0
    workers: int = 1

    def validate(self) -> "ExperimentConfig":
        if not self.n or not self.d:
            raise ParameterError("n and d need at least one value each")
        if self.sparsity_step <= 0:
            raise ParameterError("sparsity_step must be positive")
        if self.sparsity_start > self.sparsity_stop:
            raise ParameterError("sparsity_start must not exceed sparsity_stop")
        if self.trials < 1:
            raise ParameterError("trials must be >= 1")
        if any(not 0 < r <= 1 for r in self.ratios):
            raise ParameterError("measurement ratios must lie in (0, 1]")
        if self.selector not in ("matching", "bfs_baseline", "both"):
            raise ParameterError(f"unknown selector {self.selector!r}")
        if self.solver not in (OMP, ISTA_L1):
            raise ParameterError(f"unknown solver {self.solver!r}")
        if self.noise < 0 or self.events < 1 or self.workers < 1 or self.timeout <= 0:
            raise ParameterError("noise >= 0, events >= 1, workers >= 1 and timeout > 0 required")
        return self

    def sparsity_rates(self) -> list[float]:
        count = int(math.floor((self.sparsity_stop - self.sparsity_start) / self.sparsity_step + 1e-9)) + 1
        return [round(self.sparsity_start + i * self.sparsity_step, 10) for i in range(count)]

    def selectors(self) -> tuple[str, ...]:
        return SELECTORS if self.selector == "both" else (self.selector,)

    def seeds(self) -> list[int]:
        return [self.seed + t for t in range(self.trials)]

    def cells(self) -> list[tuple[int, int]]:
        return [(n, d) for n in self.n for d in self.d]

    def with_overrides(self, overrides: dict[str, Any]) -> "ExperimentConfig":
        values = asdict(self)
        for key, raw in overrides.items():
            if key not in _PARSERS:
                raise ParameterError(f"unknown config key {key!r}")
            values[key] = _PARSERS[key](raw)
        return ExperimentConfig(**values).validate()

    def to_text(self) -> str:
        lines = []
        for key in _PARSERS:
            value = getattr(self, key)
            if isinstance(value, tuple):
                value = ",".join(str(v) for v in value)
            lines.append(f"{key}={value}")
        return "\n".join(lines) + "\n"


_PARSERS: dict[str, Callable[[Any], Any]] = {
    "n": _tuple_of(int),
    "d": _tuple_of(int),
    "ratios": _tuple_of(float),
    "sparsity_start": float,
    "sparsity_step": float,
    "sparsity_stop": float,
    "trials": int,
    "seed": int,
    "solver": str,
    "selector": str,
    "noise": float,
    "output_dir": str,
    "events": int,
    "timeout": float,
    "workers": int,
}


def parse_config_text(text: str) -> dict[str, str]:
    """Flat ``key=value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ParameterError(f"config line {lineno}: expected key=value, got {raw!r}")
        out[key.strip()] = value.strip()
    return out


def load_config(path=None, overrides: Optional[dict[str, Any]] = None) -> ExperimentConfig:
    values: dict[str, Any] = {}
    if path is not None:
        values.update(parse_config_text(Path(path).read_text(encoding="utf-8")))
    values.update(overrides or {})
    return ExperimentConfig().with_overrides(values)


def output_root(config: ExperimentConfig) -> Path:
    return Path(config.output_dir or os.environ.get(OUTPUT_ROOT_ENV) or "runs")


def run_directory(config: ExperimentConfig, experiment: str) -> Path:
    stamp = datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%S%fZ")
    path = output_root(config) / experiment / stamp
    path.mkdir(parents=True, exist_ok=False)
    (path / "config.txt").write_text(config.to_text(), encoding="utf-8")
    return path


def fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def write_csv(rows: list[dict], path, columns: Optional[list[str]] = None) -> None:
    """RFC-4180 CSV with a single header line."""
    if columns is None:
        columns = list(rows[0]) if rows else []
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(columns)
        for row in rows:
            w.writerow([fmt(row.get(c, "")) for c in columns])


def strip_timing(rows: Iterable[dict]) -> list[dict]:
    return [{k: v for k, v in row.items() if k not in TIMING_COLUMNS} for row in rows]


def _map(fn, items, workers):
    if workers <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _ms(t0: float) -> float:
    return (time.perf_counter() - t0) * 1000.0


# -- hub selection timing ---------------------------------------------------

def _bench_hub_unit(args) -> dict:
    config, n, d, seed = args
    g = generate_ba(n, d, seed)
    row: dict[str, Any] = {"seed": seed, "n": n, "d": d, "m": g.m}
    t0 = time.perf_counter()
    hub = connect_matching(g, max_matching(g))
    row["matching_ms"] = _ms(t0)
    row["matching_hub_size"] = len(hub)
    lg = line_graph(g)
    row["matching_cds_ok"] = bool(cds_certify(hub, lg))
    if "bfs_baseline" in config.selectors():
        t0 = time.perf_counter()
        try:
            base = bfs_baseline_hub(line_graph(g), deadline=time.monotonic() + config.timeout)
        except TimeoutError:
            row["baseline_status"] = "timeout"
            row["baseline_ms"] = "timeout"
        else:
            row["baseline_ms"] = _ms(t0)
            row["baseline_status"] = "ok"
            row["baseline_hub_size"] = len(base)
            row["baseline_cds_ok"] = bool(cds_certify(base, lg))
    return row


HUB_COLUMNS = ["seed", "n", "d", "m", "matching_ms", "matching_hub_size", "matching_cds_ok",
               "baseline_status", "baseline_ms", "baseline_hub_size", "baseline_cds_ok"]


def bench_hub(config: ExperimentConfig):
    """Hub-selection time and size per network, both selectors optional."""
    units = [(config, n, d, s) for n, d in config.cells() for s in config.seeds()]
    rows = _map(_bench_hub_unit, units, config.workers)
    ok = all(r["matching_cds_ok"] and r.get("baseline_cds_ok", True) for r in rows)
    summary = []
    for n, d in config.cells():
        cell = [r for r in rows if r["n"] == n and r["d"] == d]
        mt = [r["matching_ms"] for r in cell]
        out = {
            "n": n, "d": d, "trials": len(cell),
            "mean_matching_ms": statistics.fmean(mt), "median_matching_ms": statistics.median(mt),
            "mean_matching_hub_size": statistics.fmean(r["matching_hub_size"] for r in cell),
        }
        bt = [r["baseline_ms"] for r in cell if r.get("baseline_status") == "ok"]
        if any("baseline_status" in r for r in cell):
            out["baseline_timeouts"] = sum(r.get("baseline_status") == "timeout" for r in cell)
            if bt:
                out["mean_baseline_ms"] = statistics.fmean(bt)
                out["median_baseline_ms"] = statistics.median(bt)
                out["mean_baseline_hub_size"] = statistics.fmean(
                    r["baseline_hub_size"] for r in cell if r.get("baseline_status") == "ok")
        summary.append(out)
    return rows, summary, ok


# -- dynamic maintenance timing ---------------------------------------------

DYNAMIC_COLUMNS = ["seed", "n", "d", "event", "i", "j", "branch", "cardinality", "hub_size",
                   "oracle_ok", "dynamic_ms", "rerun_ms"]


def run_deletions(g, events: int, seed: int, record: Optional[list] = None):
    """Apply ``events`` random connectivity-preserving deletions.

    Yields one row per event with the dynamic and from-scratch timings and the
    oracle verdict.  Skipped events are logged.
    """
    state = initial_state(g)
    rng = np.random.default_rng([seed, 3])
    rows = []
    for e in range(events):
        pick = random_deletion(state, rng)
        if pick is None:
            log.warning("seed %s event %s: no deletable edge keeps the network connected; skipped", seed, e)
            continue
        i, j = pick
        t0 = time.perf_counter()
        nxt = apply_delete(state, i, j)
        dyn = _ms(t0)
        t0 = time.perf_counter()
        fresh = rerun_baseline(DynamicState(state.g.without_edge(i, j), state.m, state.hub, state.epoch))
        rerun = _ms(t0)
        ok = nxt.m.cardinality == fresh.m.cardinality and bool(cds_certify(nxt.hub, line_graph(nxt.g)))
        rows.append({"event": nxt.epoch, "i": i, "j": j, "branch": nxt.branch,
                     "cardinality": nxt.m.cardinality, "hub_size": len(nxt.hub), "oracle_ok": ok,
                     "dynamic_ms": dyn, "rerun_ms": rerun})
        if record is not None:
            record.append(DynamicEvent(DELETE, i, j, nxt.epoch))
        state = nxt
    return rows, state


def _bench_dynamic_unit(args):
    config, n, d, seed = args
    g = generate_ba(n, d, seed)
    events: list = []
    rows, final = run_deletions(g, config.events, seed, record=events)
    for r in rows:
        r.update(seed=seed, n=n, d=d)
    return rows, events, final.hub.sha256()


def bench_dynamic(config: ExperimentConfig, run_dir: Optional[Path] = None):
    """Dynamic update versus from-scratch rerun under random deletions."""
    units = [(config, n, d, s) for n, d in config.cells() for s in config.seeds()]
    results = _map(_bench_dynamic_unit, units, config.workers)
    rows = [r for unit_rows, _, _ in results for r in unit_rows]
    if run_dir is not None:
        for (cfg, n, d, s), (_, events, digest) in zip(units, results):
            sub = Path(run_dir) / f"state_n{n}_d{d}_seed{s}"
            save_state(initial_state(generate_ba(n, d, s)), sub)
            write_event_log(events, sub / "events.log")
            (sub / "final_hub.sha256").write_text(digest + "\n", encoding="utf-8")
    summary = []
    for n, d in config.cells():
        cell = [r for r in rows if r["n"] == n and r["d"] == d]
        if not cell:
            continue
        dt = [r["dynamic_ms"] for r in cell]
        rt = [r["rerun_ms"] for r in cell]
        summary.append({
            "n": n, "d": d, "events": len(cell),
            "mean_dynamic_ms": statistics.fmean(dt), "median_dynamic_ms": statistics.median(dt),
            "mean_rerun_ms": statistics.fmean(rt), "median_rerun_ms": statistics.median(rt),
            "median_speedup": statistics.median(rt) / max(statistics.median(dt), 1e-9),
            "oracle_ok_events": sum(r["oracle_ok"] for r in cell),
        })
    return rows, summary, all(r["oracle_ok"] for r in rows)


# -- recovery sweep ---------------------------------------------------------

def measurement_budget(m: int, ratio: float) -> int:
    """Total probe count ``N = round(ratio * m)``, halves rounded up."""
    return int(math.floor(ratio * m + 0.5))


def _recovery_unit(args) -> tuple[list[dict], bool]:
    config, n, d, seed = args
    g = generate_ba(n, d, seed)
    lg = line_graph(g)
    hubs = {}
    ok = True
    for sel in config.selectors():
        t0 = time.perf_counter()
        hub = connect_matching(g, max_matching(g)) if sel == "matching" else bfs_baseline_hub(lg)
        hubs[sel] = (hub, _ms(t0))
        ok &= bool(cds_certify(hub, lg))
    rows = []
    rates = config.sparsity_rates()
    signals = {r: gen_signal(g.m, r, [seed, 2, n, d, round(r * 1000)]) for r in rates}
    for sel, (hub, hub_ms) in hubs.items():
        for ratio in config.ratios:
            N = measurement_budget(g.m, ratio)
            n_random = N - len(hub) - 1
            plan = None
            plan_ms = 0.0
            if n_random > 0:
                t0 = time.perf_counter()
                plan = build_plan(g, lg, hub, n_random, [seed, 1, n, d, round(ratio * 1000)])
                plan_ms = _ms(t0)
            for r in rates:
                row = {"seed": seed, "n": n, "d": d, "r": r, "N_over_m": ratio, "solver": config.solver,
                       "selector": sel, "m": g.m, "N": N, "hub_size": len(hub), "n_random": n_random,
                       "hub_ms": hub_ms, "plan_ms": plan_ms}
                if plan is None:
                    row.update(status="infeasible", success=False, rel_error="", iterations=0,
                               solve_ms=0.0, wall_time_ms=hub_ms)
                    rows.append(row)
                    continue
                sig = signals[r]
                t0 = time.perf_counter()
                y = measure(plan, sig, noise_eps=config.noise, seed=[seed, 4, n, d, round(r * 1000)])
                x_hat, res = recover(plan, y, sig.sparsity_k, solver=config.solver)
                solve_ms = _ms(t0)
                verdict = judge(x_hat, sig, config.solver, res.iterations, rank_deficient=res.rank_deficient)
                row.update(status="ok", success=verdict.success, rel_error=verdict.rel_error,
                           iterations=verdict.iterations, solve_ms=solve_ms,
                           wall_time_ms=hub_ms + plan_ms + solve_ms)
                rows.append(row)
    return rows, ok


SUMMARY_COLUMNS = ["selector", "n", "d", "N_over_m", "r", "trials", "infeasible", "successes", "success_rate"]


def summarize_recovery(rows: list[dict]) -> list[dict]:
    cells: dict[tuple, list[dict]] = {}
    for row in rows:
        key = (row["selector"], row["n"], row["d"], row["N_over_m"], row["r"])
        cells.setdefault(key, []).append(row)
    out = []
    for key in sorted(cells):
        cell = cells[key]
        feasible = [r for r in cell if r["status"] == "ok"]
        succ = sum(bool(r["success"]) for r in feasible)
        out.append({
            "selector": key[0], "n": key[1], "d": key[2], "N_over_m": key[3], "r": key[4],
            "trials": len(cell), "infeasible": len(cell) - len(feasible), "successes": succ,
            "success_rate": succ / len(cell),
        })
    return out


def recover_sweep(config: ExperimentConfig):
    """Success rate per (selector, network, N/m, r) cell."""
    units = [(config, n, d, s) for n, d in config.cells() for s in config.seeds()]
    results = _map(_recovery_unit, units, config.workers)
    rows = [r for unit_rows, _ in results for r in unit_rows]
    ok = all(unit_ok for _, unit_ok in results)
    ok &= not any(r["status"] == "infeasible" and r["success"] for r in rows)
    return rows, summarize_recovery(rows), ok


def success_curve(summary: list[dict], selector: str, n: int, d: int, ratio: float) -> dict[float, float]:
    return {row["r"]: row["success_rate"] for row in summary
            if row["selector"] == selector and row["n"] == n and row["d"] == d and row["N_over_m"] == ratio}


# -- replay -----------------------------------------------------------------

def replay_state(state_dir, event_log=None) -> dict:
    """Replay a logged event sequence from a saved state directory.

    ``event_log`` defaults to ``<state_dir>/events.log``.  When
    ``<state_dir>/final_hub.sha256`` exists the replayed hub must match it.
    """
    d = Path(state_dir)
    state = load_state(d)
    events = read_event_log(event_log if event_log is not None else d / "events.log")
    final = replay(state, events)
    digest = final.hub.sha256()
    expected_file = d / "final_hub.sha256"
    expected = expected_file.read_text().strip() if expected_file.exists() else None
    problems = check_state(final)
    return {
        "epoch": final.epoch,
        "n": final.g.n,
        "m": final.g.m,
        "cardinality": final.m.cardinality,
        "hub_size": len(final.hub),
        "hub_sha256": digest,
        "expected_sha256": expected or "",
        "hash_ok": expected is None or expected == digest,
        "invariants_ok": not problems,
        "state": final,
    }

