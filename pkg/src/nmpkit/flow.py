"""Dinic max flow on integer capacities, with min-cut extraction."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class FlowNetwork:
    """Directed flow network; capacities are nonnegative integers.

    Arcs are stored as parallel lists (tails, heads, caps). The source must
    have no in-arcs and the sink no out-arcs.
    """

    node_count: int
    source: int
    sink: int
    tails: list[int] = field(default_factory=list)
    heads: list[int] = field(default_factory=list)
    caps: list[int] = field(default_factory=list)

    def add_arc(self, tail: int, head: int, cap: int) -> int:
        if cap < 0:
            raise ValueError("capacity must be nonnegative")
        if head == self.source:
            raise ValueError("source cannot have in-arcs")
        if tail == self.sink:
            raise ValueError("sink cannot have out-arcs")
        self.tails.append(tail)
        self.heads.append(head)
        self.caps.append(cap)
        return len(self.caps) - 1

    @property
    def arc_count(self) -> int:
        return len(self.caps)


@dataclass
class MaxFlowResult:
    value: int
    arc_flow: list[int]           # flow per FlowNetwork arc, in add order
    source_side: list[bool]       # residual reachability from source (min cut)


def max_flow(net: FlowNetwork) -> MaxFlowResult:
    """Dinic's algorithm (blocking flows). Flows are integral."""
    nnodes = net.node_count
    s, t = net.source, net.sink
    narcs = net.arc_count

    # Residual arcs: 2*i forward, 2*i+1 backward.
    to = [0] * (2 * narcs)
    cap = [0] * (2 * narcs)
    graph: list[list[int]] = [[] for _ in range(nnodes)]
    for i in range(narcs):
        to[2 * i] = net.heads[i]
        cap[2 * i] = net.caps[i]
        to[2 * i + 1] = net.tails[i]
        graph[net.tails[i]].append(2 * i)
        graph[net.heads[i]].append(2 * i + 1)

    level = [-1] * nnodes
    total = 0

    def bfs() -> bool:
        for i in range(nnodes):
            level[i] = -1
        level[s] = 0
        queue = [s]
        qi = 0
        while qi < len(queue):
            v = queue[qi]
            qi += 1
            for a in graph[v]:
                w = to[a]
                if cap[a] > 0 and level[w] < 0:
                    level[w] = level[v] + 1
                    queue.append(w)
        return level[t] >= 0

    while bfs():
        it = [0] * nnodes
        while True:
            # Advance/retreat walk from the source along level-increasing
            # residual arcs; augment whenever the sink is reached.
            path: list[int] = []
            v = s
            aug = 0
            while True:
                if v == t:
                    aug = min(cap[a] for a in path)
                    for a in path:
                        cap[a] -= aug
                        cap[a ^ 1] += aug
                    break
                advanced = False
                arcs = graph[v]
                i = it[v]
                while i < len(arcs):
                    a = arcs[i]
                    if cap[a] > 0 and level[to[a]] == level[v] + 1:
                        advanced = True
                        break
                    i += 1
                it[v] = i
                if advanced:
                    path.append(arcs[i])
                    v = to[arcs[i]]
                else:
                    if v == s:
                        break
                    level[v] = -1  # dead end this phase
                    back = path.pop()
                    v = to[back ^ 1]
                    it[v] += 1
            if aug == 0:
                break
            total += aug

    flows = [net.caps[i] - cap[2 * i] for i in range(narcs)]

    # Min cut: residual reachability from the source.
    reach = [False] * nnodes
    reach[s] = True
    stack = [s]
    while stack:
        v = stack.pop()
        for a in graph[v]:
            w = to[a]
            if cap[a] > 0 and not reach[w]:
                reach[w] = True
                stack.append(w)
    return MaxFlowResult(value=total, arc_flow=flows, source_side=reach)
