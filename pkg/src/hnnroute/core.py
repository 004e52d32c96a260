"""Shared domain types and the path conflict (disjointness) matrix."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np


class InvalidInput(ValueError):
    """Raised when an argument violates an operation's precondition."""


class StalePathError(InvalidInput):
    """A path uses a link that is absent from the snapshot."""


class NoRouteError(InvalidInput):
    """No candidate path is available."""


class InstanceFormatError(InvalidInput):
    """A path-set instance file could not be parsed."""


class DisjointnessMode(str, enum.Enum):
    NODE = "node"
    LINK = "link"

    @classmethod
    def parse(cls, value) -> "DisjointnessMode":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        aliases = {"node": cls.NODE, "nd": cls.NODE, "nodedisjoint": cls.NODE,
                   "node-disjoint": cls.NODE, "link": cls.LINK, "ld": cls.LINK,
                   "linkdisjoint": cls.LINK, "link-disjoint": cls.LINK}
        try:
            return aliases[key]
        except KeyError:
            raise InvalidInput(f"unknown disjointness mode {value!r}") from None


@dataclass(frozen=True)
class Path:
    """Simple source-to-destination node sequence with its reliability."""

    nodes: tuple[int, ...]
    reliability: float = 1.0

    def __post_init__(self):
        nodes = tuple(int(v) for v in self.nodes)
        object.__setattr__(self, "nodes", nodes)
        if len(nodes) < 2:
            raise InvalidInput(f"path needs at least 2 nodes, got {nodes}")
        if any(v < 0 for v in nodes):
            raise InvalidInput(f"node ids must be non-negative: {nodes}")
        seen = set()
        for v in nodes:
            if v in seen:
                raise InvalidInput(f"path {nodes} is not simple: node {v} repeats")
            seen.add(v)
        rel = float(self.reliability)
        if not 0.0 <= rel <= 1.0:
            raise InvalidInput(f"path reliability {rel} outside [0, 1]")
        object.__setattr__(self, "reliability", rel)

    @property
    def source(self) -> int:
        return self.nodes[0]

    @property
    def destination(self) -> int:
        return self.nodes[-1]

    @property
    def hops(self) -> int:
        return len(self.nodes) - 1

    def intermediates(self) -> frozenset[int]:
        return frozenset(self.nodes[1:-1])

    def links(self) -> frozenset[tuple[int, int]]:
        """Undirected links as sorted endpoint pairs."""
        return frozenset(
            (min(a, b), max(a, b)) for a, b in zip(self.nodes[:-1], self.nodes[1:])
        )


def _as_node_seq(p) -> tuple[int, ...]:
    return p.nodes if isinstance(p, Path) else tuple(int(v) for v in p)


def build_conflict_matrix(paths: Sequence, mode) -> np.ndarray:
    """Binary symmetric matrix with 1 where two paths are not disjoint.

    Node-disjointness only looks at intermediate nodes; links are compared
    as unordered endpoint pairs.
    """
    mode = DisjointnessMode.parse(mode)
    paths = [p if isinstance(p, Path) else Path(tuple(p)) for p in paths]
    n = len(paths)
    if n:
        ends = {(p.source, p.destination) for p in paths}
        if len(ends) != 1:
            raise InvalidInput(f"paths do not share endpoints: {sorted(ends)}")
    if mode is DisjointnessMode.NODE:
        keys = [p.intermediates() for p in paths]
    else:
        keys = [p.links() for p in paths]
    rho = np.zeros((n, n), dtype=np.int8)
    for j, k in combinations(range(n), 2):
        if keys[j] & keys[k]:
            rho[j, k] = rho[k, j] = 1
    return rho


def is_disjoint_set(selection: Iterable[int], conflict: np.ndarray) -> bool:
    sel = [int(i) for i in selection]
    n = conflict.shape[0]
    for i in sel:
        if not 0 <= i < n:
            raise InvalidInput(f"path index {i} out of range [0, {n})")
    return not any(conflict[j, k] for j, k in combinations(sel, 2))


@dataclass
class PathSetInstance:
    """Candidate paths for one source/destination pair plus their conflicts."""

    paths: list[Path]
    mode: DisjointnessMode = DisjointnessMode.LINK
    conflict: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        self.mode = DisjointnessMode.parse(self.mode)
        self.paths = [p if isinstance(p, Path) else Path(tuple(p)) for p in self.paths]
        if self.conflict is None:
            self.conflict = build_conflict_matrix(self.paths, self.mode)
        self.conflict = np.asarray(self.conflict, dtype=np.int8)
        n = len(self.paths)
        if self.conflict.shape != (n, n):
            raise InvalidInput(
                f"conflict matrix shape {self.conflict.shape} != ({n}, {n})")

    @property
    def n(self) -> int:
        return len(self.paths)

    @property
    def reliabilities(self) -> np.ndarray:
        return np.array([p.reliability for p in self.paths], dtype=float)

    @classmethod
    def from_lists(cls, paths, reliabilities, mode=DisjointnessMode.LINK):
        if len(paths) != len(reliabilities):
            raise InvalidInput(
                f"{len(paths)} paths but {len(reliabilities)} reliabilities")
        return cls([Path(tuple(p), r) for p, r in zip(paths, reliabilities)], mode)

    @classmethod
    def from_conflict(cls, reliabilities, conflict, mode=DisjointnessMode.LINK):
        """Abstract instance with placeholder two-hop paths and a given conflict matrix.

        Used for solver experiments where only reliabilities and conflicts
        matter; the placeholder paths are not consistent with the matrix.
        """
        rel = np.asarray(reliabilities, dtype=float)
        paths = [Path((0, i + 2, 1), float(r)) for i, r in enumerate(rel)]
        conflict = np.asarray(conflict, dtype=np.int8)
        if conflict.shape != (len(rel), len(rel)):
            raise InvalidInput("conflict matrix does not match reliabilities")
        if not np.array_equal(conflict, conflict.T) or np.any(np.diag(conflict)):
            raise InvalidInput("conflict matrix must be symmetric with zero diagonal")
        return cls(paths, mode, conflict)

    def to_dict(self) -> dict:
        src = self.paths[0].source if self.paths else None
        dst = self.paths[0].destination if self.paths else None
        return {
            "source": src,
            "destination": dst,
            "paths": [list(p.nodes) for p in self.paths],
            "path_reliabilities": [p.reliability for p in self.paths],
        }


def _instance_error(msg: str) -> InstanceFormatError:
    return InstanceFormatError(msg)


def parse_instance(text: str, mode=DisjointnessMode.LINK) -> PathSetInstance:
    """Parse the JSON path-set instance format.

    ``{"source", "destination", "paths": [[ids]], "path_reliabilities": [p]}``
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise _instance_error(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise _instance_error("top level must be an object")
    for key in ("source", "destination", "paths", "path_reliabilities"):
        if key not in data:
            raise _instance_error(f"missing field {key!r}")
    raw_paths = data["paths"]
    rels = data["path_reliabilities"]
    if not isinstance(raw_paths, list) or not isinstance(rels, list):
        raise _instance_error("fields 'paths' and 'path_reliabilities' must be lists")
    if len(raw_paths) != len(rels):
        raise _instance_error(
            f"field 'path_reliabilities' has {len(rels)} entries, 'paths' has {len(raw_paths)}")
    src, dst = data["source"], data["destination"]
    paths = []
    for i, (nodes, rel) in enumerate(zip(raw_paths, rels)):
        try:
            p = Path(tuple(nodes), rel)
        except (InvalidInput, TypeError, ValueError) as exc:
            raise _instance_error(f"paths[{i}]: {exc}") from None
        if p.source != src or p.destination != dst:
            raise _instance_error(
                f"paths[{i}]: endpoints ({p.source}, {p.destination}) "
                f"do not match source/destination ({src}, {dst})")
        paths.append(p)
    return PathSetInstance(paths, mode)


def load_instance(path, mode=DisjointnessMode.LINK) -> PathSetInstance:
    with open(path) as fh:
        return parse_instance(fh.read(), mode)


def dump_instance(instance: PathSetInstance, path=None, *, source=None, destination=None) -> str:
    data = instance.to_dict()
    if source is not None:
        data["source"] = source
    if destination is not None:
        data["destination"] = destination
    text = json.dumps(data, indent=2)
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    return text
