"""Delay signals, hub-subtraction measurement plans and simulated probes.

Every probe sums the delays of a set of links that is connected in the line
graph.  A random probe measures ``S | C`` where ``C`` is the hub and ``S`` a
Bernoulli(1/2) subset of the non-hub links ``T``; subtracting the separately
measured hub sum leaves a random 0/1 row over ``T``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from .errors import InvalidHubError, ParameterError, StructureError
from .graph import LineGraph, Network, is_connected
from .hub import HubSet, cds_certify

SUPPORT_HIGH = 5.0
NOISE_SCALE = 0.001


@dataclass(frozen=True, eq=False)
class DelaySignal:
    """Per-link delays indexed by edge id; ``support`` holds the large entries."""

    x: np.ndarray
    support: np.ndarray
    rate: float

    @property
    def sparsity_k(self) -> int:
        return int(self.support.size)

    @property
    def m(self) -> int:
        return int(self.x.size)


def sparsity_count(m: int, r: float) -> int:
    """``round(r * m)`` with halves rounded up."""
    return int(math.floor(r * m + 0.5))


def gen_signal(m: int, r: float, seed) -> DelaySignal:
    """Random k-sparse delay vector with ``k = round(r m)``.

    Support values are Uniform[5(1-r), 5]; all other entries are
    Uniform[0, 0.001(1-r)].
    """
    if not 0.0 < r < 1.0:
        raise ParameterError(f"sparsity rate must lie in (0, 1), got {r}")
    if m < 0:
        raise ParameterError(f"edge count must be non-negative, got {m}")
    rng = np.random.default_rng(seed)
    k = sparsity_count(m, r)
    support = np.sort(rng.choice(m, size=k, replace=False)) if k else np.zeros(0, dtype=np.int64)
    x = rng.uniform(0.0, NOISE_SCALE * (1.0 - r), size=m)
    x[support] = rng.uniform(SUPPORT_HIGH * (1.0 - r), SUPPORT_HIGH, size=k)
    return DelaySignal(x=x, support=support.astype(np.int64), rate=float(r))


@dataclass(frozen=True, eq=False)
class MeasurementPlan:
    """Probe design for one network and hub.

    ``rows[i]`` is the indicator of ``S_i`` over the columns ``t_edges``; the
    probe itself measures ``S_i | C``.
    """

    hub: HubSet
    m: int
    hub_edges: np.ndarray
    t_edges: np.ndarray
    rows: np.ndarray

    @property
    def n_random(self) -> int:
        return int(self.rows.shape[0])

    @property
    def hub_row(self) -> np.ndarray:
        row = np.zeros(self.m, dtype=np.uint8)
        row[self.hub_edges] = 1
        return row

    @property
    def direct_rows(self) -> list[tuple[int]]:
        return [(int(c),) for c in self.hub_edges]

    @property
    def total_measurements(self) -> int:
        """Random probes, one hub-sum probe and one direct read per hub link."""
        return self.n_random + 1 + int(self.hub_edges.size)

    def measured_set(self, i: int) -> set[int]:
        return set(self.t_edges[self.rows[i].astype(bool)].tolist()) | set(self.hub_edges.tolist())

    def full_matrix(self) -> np.ndarray:
        """Raw 0/1 matrix over all m links: random probes, hub sum, direct reads."""
        a = np.zeros((self.total_measurements, self.m), dtype=np.uint8)
        k = self.n_random
        a[:k, self.t_edges] = self.rows
        a[:k + 1, self.hub_edges] = 1
        a[np.arange(k + 1, a.shape[0]), self.hub_edges] = 1
        return a


@dataclass(frozen=True, eq=False)
class MeasurementVector:
    y_hub: float
    y_random: np.ndarray
    y_direct: np.ndarray
    noise_model: str = "noiseless"


def build_plan(g: Network, lg: LineGraph, hub: HubSet, n_random: int, seed) -> MeasurementPlan:
    """Draw ``n_random`` probes, each non-hub link included with probability 1/2.

    The hub must certify as a connected dominating set of ``lg``: then ``C`` is
    connected and every non-hub link touches ``C``, so each measured set
    ``S | C`` is connected.  :func:`h1_violations` re-checks that directly.
    """
    if n_random < 1:
        raise ParameterError(f"n_random must be >= 1, got {n_random}")
    if lg.num_vertices != g.m:
        raise StructureError(f"line graph has {lg.num_vertices} vertices for {g.m} links")
    cert = cds_certify(hub, lg)
    if not cert:
        raise InvalidHubError(f"hub is not a connected dominating set: {cert.reason}")
    hub_edges = np.array(sorted(hub.hub_edges), dtype=np.int64)
    mask = np.ones(g.m, dtype=bool)
    mask[hub_edges] = False
    t_edges = np.flatnonzero(mask).astype(np.int64)
    rng = np.random.default_rng(seed)
    rows = (rng.random((n_random, t_edges.size)) < 0.5).astype(np.uint8)
    return MeasurementPlan(hub=hub, m=g.m, hub_edges=hub_edges, t_edges=t_edges, rows=rows)


def h1_violations(plan: MeasurementPlan, lg: LineGraph) -> list[str]:
    """Every measured set whose induced line-graph subgraph is disconnected.

    Checks the hub-sum probe, each random probe and each direct read by an
    explicit traversal; an empty list means all probes are realisable.
    """
    bad = []
    hub = plan.hub_edges.tolist()
    if hub and not is_connected(lg, restrict_to=hub):
        bad.append("hub")
    for i in range(plan.n_random):
        members = plan.measured_set(i)
        if members and not is_connected(lg, restrict_to=members):
            bad.append(f"random[{i}]")
    for c in hub:
        if not is_connected(lg, restrict_to=[c]):
            bad.append(f"direct[{c}]")
    return bad


def measure(
    plan: MeasurementPlan,
    x: Union[DelaySignal, np.ndarray],
    noise_eps: float = 0.0,
    seed=None,
) -> MeasurementVector:
    """Simulate every probe of ``plan`` against delays ``x``.

    With ``noise_eps > 0`` each measurement gets independent additive
    Uniform[0, noise_eps] noise drawn from ``seed``.
    """
    xv = x.x if isinstance(x, DelaySignal) else np.asarray(x, dtype=float)
    if xv.shape != (plan.m,):
        raise StructureError(f"signal has shape {xv.shape}, plan covers {plan.m} links")
    if noise_eps < 0:
        raise ParameterError(f"noise_eps must be >= 0, got {noise_eps}")
    x_c = xv[plan.hub_edges]
    y_hub = float(x_c.sum())
    y_random = plan.rows @ xv[plan.t_edges] + y_hub
    y_direct = x_c.copy()
    model = "noiseless"
    if noise_eps > 0:
        rng = np.random.default_rng(seed)
        y_hub += float(rng.uniform(0.0, noise_eps))
        y_random = y_random + rng.uniform(0.0, noise_eps, size=y_random.size)
        y_direct = y_direct + rng.uniform(0.0, noise_eps, size=y_direct.size)
        model = f"additive-uniform({noise_eps:g})"
    return MeasurementVector(y_hub=y_hub, y_random=np.asarray(y_random, dtype=float), y_direct=y_direct, noise_model=model)


def effective_system(plan: MeasurementPlan, y: MeasurementVector) -> tuple[np.ndarray, np.ndarray]:
    """Hub-subtracted system ``(rows, y_random - y_hub)`` over the links in T."""
    if y.y_random.size != plan.n_random or y.y_direct.size != plan.hub_edges.size:
        raise StructureError("measurement vector does not match the plan")
    return plan.rows.astype(float), y.y_random - y.y_hub


def write_plan_csv(plan: MeasurementPlan, path) -> None:
    """CSV with one header line; random rows are 0/1 strings over sorted T."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["kind", "value"])
        w.writerow(["m", plan.m])
        w.writerow(["origin", plan.hub.origin])
        w.writerow(["hub", " ".join(map(str, plan.hub_edges.tolist()))])
        w.writerow(["connectors", " ".join(map(str, sorted(plan.hub.connector_edges)))])
        w.writerow(["t", " ".join(map(str, plan.t_edges.tolist()))])
        for row in plan.rows:
            w.writerow(["row", "".join("1" if b else "0" for b in row)])


def read_plan_csv(path) -> MeasurementPlan:
    fields: dict[str, str] = {}
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        next(reader)
        for kind, value in reader:
            if kind == "row":
                rows.append([1 if ch == "1" else 0 for ch in value])
            else:
                fields[kind] = value
    ids = lambda s: np.array([int(t) for t in s.split()], dtype=np.int64)  # noqa: E731
    hub_edges, t_edges = ids(fields["hub"]), ids(fields["t"])
    hub = HubSet(frozenset(hub_edges.tolist()), frozenset(ids(fields["connectors"]).tolist()), fields["origin"])
    mat = np.array(rows, dtype=np.uint8).reshape(len(rows), t_edges.size)
    return MeasurementPlan(hub=hub, m=int(fields["m"]), hub_edges=hub_edges, t_edges=t_edges, rows=mat)


def write_vector(values, path) -> None:
    """One float per line, 12 significant digits."""
    Path(path).write_text("".join(f"{float(v):.12g}\n" for v in values), encoding="utf-8")


def read_vector(path) -> np.ndarray:
    text = Path(path).read_text(encoding="utf-8").split()
    return np.array([float(t) for t in text], dtype=float)
