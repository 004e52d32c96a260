"""TTL-bounded route request flooding over a link snapshot."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .core import InvalidInput, Path, PathSetInstance, StalePathError, dump_instance
from .links import LinkSnapshot

DEFAULT_CAP = 64


@dataclass
class Rreq:
    record: tuple[int, ...]
    prob: float
    ttl: int


@dataclass
class RouteCache:
    source: int
    destination: int
    paths: list[Path] = field(default_factory=list)
    truncated: bool = False
    found: int = 0   # paths received before capping

    def __len__(self):
        return len(self.paths)

    def to_instance(self, mode) -> PathSetInstance:
        return PathSetInstance(list(self.paths), mode)

    def to_json(self) -> str:
        inst = PathSetInstance(list(self.paths))
        return dump_instance(inst, source=self.source, destination=self.destination)


def discover_paths(snapshot: LinkSnapshot, source: int, destination: int,
                   ttl: int = 3, cap: int = DEFAULT_CAP) -> RouteCache:
    """Flood a route request from ``source`` and collect what reaches ``destination``.

    A receiving node decrements the TTL, then: the destination records the
    request and stops; a zero TTL drops it; a node already on the record drops
    it; anyone else appends itself and rebroadcasts.
    """
    if source == destination:
        raise InvalidInput("source and destination must differ")
    if ttl < 1:
        raise InvalidInput("ttl must be at least 1")
    if cap < 1:
        raise InvalidInput("cap must be at least 1")
    adj = snapshot.neighbors()
    received: list[tuple[tuple[int, ...], float]] = []
    queue = deque()
    for v in adj.get(source, []):
        queue.append((source, v, Rreq((source,), 1.0, ttl)))
    while queue:
        sender, node, pkt = queue.popleft()
        ttl_left = pkt.ttl - 1
        prob = pkt.prob * snapshot.prob(sender, node)
        if node == destination:
            received.append((pkt.record + (node,), prob))
            continue
        if ttl_left == 0:
            continue
        if node in pkt.record:
            continue
        fwd = Rreq(pkt.record + (node,), prob, ttl_left)
        for nxt in adj[node]:
            queue.append((node, nxt, fwd))

    truncated = len(received) > cap
    if truncated:
        order = sorted(range(len(received)),
                       key=lambda k: (-received[k][1], len(received[k][0]), received[k][0]))
        keep = sorted(order[:cap])
        received = [received[k] for k in keep]
    paths = [Path(rec, min(max(p, 0.0), 1.0)) for rec, p in received]
    return RouteCache(source, destination, paths, truncated, len(received) if not truncated else len(order))


def path_reliability(path, snapshot: LinkSnapshot) -> float:
    nodes = path.nodes if isinstance(path, Path) else tuple(path)
    rel = 1.0
    for a, b in zip(nodes[:-1], nodes[1:]):
        if not snapshot.has_link(a, b):
            raise StalePathError(f"link {a}-{b} is not in the snapshot")
        rel *= snapshot.prob(a, b)
    return rel
