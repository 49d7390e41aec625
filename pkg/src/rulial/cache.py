"""Run parameters and a content-addressed file cache for built graphs."""

from __future__ import annotations

import dataclasses
import hashlib
import json
import os
import warnings
from dataclasses import dataclass, field
from pathlib import Path

from .machine import MachineSpec, parse_config
from .multiway import DEFAULT_MAX_NODES, MultiwayGraph

CACHE_ENV = "RULIAL_CACHE_DIR"
CACHE_VERSION = 1


@dataclass(frozen=True)
class ExperimentSpec:
    """Everything needed to reproduce one CLI run."""

    command: str
    s: int = 1
    k: int = 2
    moves: tuple[int, ...] = (-1, 1)
    tape: str = "unbounded"
    n: int | None = None
    steps: int | None = None
    init: str | None = None
    rules: tuple[int, ...] | None = None
    mode: str | None = None
    fmt: str | None = None
    output: str | None = None
    cache_dir: str | None = None
    max_nodes: int = DEFAULT_MAX_NODES
    workers: int = 1
    extra: tuple[tuple[str, str], ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.max_nodes < 1:
            raise ValueError("max_nodes must be >= 1")
        if self.steps is not None and self.steps < 0:
            raise ValueError("steps must be >= 0")
        self.machine()  # validates s, k, moves and tape

    def machine(self) -> MachineSpec:
        return MachineSpec(self.s, self.k, tuple(self.moves), self.tape, self.n)

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> ExperimentSpec:
        d = json.loads(text)
        d["moves"] = tuple(d["moves"])
        if d.get("rules") is not None:
            d["rules"] = tuple(d["rules"])
        d["extra"] = tuple(tuple(x) for x in d.get("extra", ()))
        return cls(**d)

    def cache_key(self, truncated: bool = False) -> str:
        """Digest of the fields that determine a built graph.

        Output paths, formats and worker counts do not change the graph; the
        node cap only matters when it cut the build short.
        """
        payload = {
            "version": CACHE_VERSION,
            "command": self.command,
            "machine": [self.s, self.k, list(self.moves), self.tape, self.n],
            "steps": self.steps,
            "init": self.init,
        }
        if truncated:
            payload["max_nodes"] = self.max_nodes
        blob = json.dumps(payload, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


def graph_to_payload(g: MultiwayGraph) -> dict:
    return {
        "version": CACHE_VERSION,
        "spec": [g.spec.s, g.spec.k, list(g.spec.moves), g.spec.tape, g.spec.n],
        "root": g.key(g.root),
        "depth": g.depth,
        "saturated": g.saturated,
        "truncated": g.truncated,
        "nodes": [[g.key(c), g.layer[c]] for c in g.layer],
        "edges": [[g.key(a), g.key(b), m] for a, b, m in g.edges],
    }


def graph_from_payload(d: dict) -> MultiwayGraph:
    if d.get("version") != CACHE_VERSION:
        raise ValueError("unsupported cache version")
    s, k, moves, tape, n = d["spec"]
    spec = MachineSpec(s, k, tuple(moves), tape, n)
    configs = {}
    layer = {}
    for key, depth in d["nodes"]:
        c = configs[key] = parse_config(key)
        layer[c] = depth
    edges = [(configs[a], configs[b], m) for a, b, m in d["edges"]]
    return MultiwayGraph(spec, configs[d["root"]], layer, edges, d["depth"],
                         d["saturated"], d["truncated"])


class GraphCache:
    def __init__(self, directory: str | os.PathLike | None = None):
        if directory is None:
            directory = os.environ.get(CACHE_ENV) or Path.home() / ".cache" / "rulial"
        self.directory = Path(directory)

    def _path(self, key: str) -> Path:
        return self.directory / f"{key}.json"

    def get(self, exp: ExperimentSpec) -> MultiwayGraph | None:
        for truncated in (False, True):
            path = self._path(exp.cache_key(truncated))
            if not path.exists():
                continue
            try:
                g = graph_from_payload(json.loads(path.read_text(encoding="utf-8")))
            except (ValueError, KeyError, TypeError) as err:
                warnings.warn(f"ignoring unreadable cache entry {path.name}: {err}")
                continue
            # a complete graph larger than this run's cap must not be served
            if not truncated and len(g) > exp.max_nodes:
                continue
            return g
        return None

    def put(self, exp: ExperimentSpec, g: MultiwayGraph) -> Path:
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self._path(exp.cache_key(g.truncated))
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(graph_to_payload(g), sort_keys=True), encoding="utf-8")
        tmp.replace(path)
        return path
