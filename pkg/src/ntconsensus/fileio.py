"""JSON / CSV readers and writers for graphs, schedules, and trajectories."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Dict, Tuple, Union

import numpy as np

from .errors import FileFormatError
from .graph import SignedGraph
from .simulate import SwitchingSchedule, Trajectory

PathLike = Union[str, Path]


def load_graph(path: PathLike) -> SignedGraph:
    """Graph file format: {"d", "n", "directed", "edges": [{"from", "to",
    "weight"}]}; "from"/"to" are 1-based, weight is a row-major d x d array
    stored as A[to, from]."""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise FileFormatError(f"cannot read graph file {path}: {exc}") from exc
    try:
        n = int(data["n"])
        d = int(data["d"])
        directed = bool(data["directed"])
        edges: Dict[Tuple[int, int], np.ndarray] = {}
        for e in data["edges"]:
            key = (int(e["to"]), int(e["from"]))
            edges[key] = np.array(e["weight"], dtype=float)
            if edges[key].shape != (d, d):
                raise FileFormatError(
                    f"edge {e['from']}->{e['to']} weight is not {d}x{d}"
                )
    except (KeyError, TypeError, ValueError) as exc:
        raise FileFormatError(f"malformed graph file {path}: {exc}") from exc
    return SignedGraph.from_edges(n, d, directed, edges)


def save_graph(g: SignedGraph, path: PathLike) -> None:
    seen = set()
    edges = []
    for (i, j), w in sorted(g.weights.items()):
        if not g.directed:
            if frozenset((i, j)) in seen:
                continue
            seen.add(frozenset((i, j)))
        edges.append({"from": j, "to": i, "weight": w.entries.tolist()})
    payload = {"d": g.d, "n": g.n, "directed": g.directed, "edges": edges}
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")


def load_schedule(path: PathLike) -> SwitchingSchedule:
    """Schedule file format: {"alpha", "pattern", "dt": float or [floats],
    "repeat"}."""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise FileFormatError(f"cannot read schedule file {path}: {exc}") from exc
    try:
        alpha = float(data["alpha"])
        pattern = [int(x) for x in data["pattern"]]
        repeat = bool(data.get("repeat", False))
        dt = data.get("dt", alpha)
        if isinstance(dt, (int, float)):
            times = tuple(k * float(dt) for k in range(len(pattern)))
        else:
            dts = [float(x) for x in dt]
            if len(dts) != len(pattern):
                raise FileFormatError("dt list must match the pattern length")
            times = tuple(float(t) for t in np.concatenate([[0.0], np.cumsum(dts[:-1])]))
    except (KeyError, TypeError, ValueError) as exc:
        raise FileFormatError(f"malformed schedule file {path}: {exc}") from exc
    return SwitchingSchedule(
        switch_times=times, graph_ids=tuple(pattern), alpha=alpha, repeat=repeat
    )


def write_trajectory_csv(traj: Trajectory, path: PathLike) -> None:
    """Header t,x1_1,...,xN_d,errnorm; full double precision."""
    cols = [f"x{i}_{k}" for i in range(1, traj.n + 1) for k in range(1, traj.d + 1)]
    header = ",".join(["t"] + cols + ["errnorm"])
    body = np.column_stack([traj.times, traj.states, traj.error_norm])
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row in body:
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


def read_trajectory_csv(path: PathLike) -> np.ndarray:
    try:
        return np.loadtxt(path, delimiter=",", skiprows=1)
    except (OSError, ValueError) as exc:
        raise FileFormatError(f"cannot read trajectory {path}: {exc}") from exc
