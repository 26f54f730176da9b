"""Cusp complexes: depth-layered weighted graphs over a Cayley ball.

A cusp complex stacks scaled copies of the base graph: the copy at depth
i has horizontal edges of length psi^-i and is tied to the next copy by
vertical edges of length omega*ln(psi).  All logs are natural: the
closed-form geodesic length comes from differentiating psi^-D, whose
derivative carries ln(psi), so no other base is consistent.

Area weights (for the pushdown accounting): a horizontal cell at depth i
weighs psi^-i, a vertical cell below depth i weighs omega*psi^-i.
"""

from __future__ import annotations

import math
import random
from collections import namedtuple
from dataclasses import dataclass
from heapq import heappop, heappush

from .cayley import GroupBall
from .electric import RelativePresentation, coset_table


@dataclass(frozen=True)
class CuspParams:
    psi: float
    omega: float | None = None  # defaults to 1/psi
    rho_max: int = 4
    depth_cap: int = 4
    strict_log: bool = False

    def __post_init__(self):
        if not self.psi > 1:
            raise ValueError("psi must exceed 1")
        if self.omega is None:
            object.__setattr__(self, "omega", 1.0 / self.psi)
        if not self.omega > 0:
            raise ValueError("omega must be positive")
        if self.rho_max < 1 or self.depth_cap < 0:
            raise ValueError("rho_max >= 1 and depth_cap >= 0 required")
        if self.strict_log and not math.log(self.psi) > 1:
            raise ValueError("strict mode needs ln(psi) > 1")

    def horizontal_length(self, depth: int) -> float:
        return self.psi ** (-depth)

    def vertical_length(self) -> float:
        return self.omega * math.log(self.psi)

    def horizontal_cell_area(self, depth: int) -> float:
        return self.psi ** (-depth)

    def vertical_cell_area(self, depth: int) -> float:
        return self.omega * self.psi ** (-depth)


class CuspComplex:
    """Weighted graph with one depth per vertex and a shadow map onto the
    depth-0 layer.  Vertices are numbered in insertion order; builders
    insert base-vertex-major so the numbering is reproducible."""

    def __init__(self, params: CuspParams):
        self.params = params
        self.ids: dict = {}
        self.keys: list = []
        self.depth: list = []
        self.shadow: list = []
        self.adj: list = []
        self._edge_len: dict = {}

    def __len__(self):
        return len(self.keys)

    def add_vertex(self, key, depth: int, shadow: int) -> int:
        if key in self.ids:
            raise ValueError(f"duplicate vertex {key}")
        vid = len(self.keys)
        self.ids[key] = vid
        self.keys.append(key)
        self.depth.append(depth)
        self.shadow.append(shadow)
        self.adj.append([])
        return vid

    def add_edge(self, u: int, v: int, length: float):
        if u == v:
            return  # self-loops never matter for the metric
        self.adj[u].append((v, length))
        self.adj[v].append((u, length))
        self._edge_len[u, v] = length
        self._edge_len[v, u] = length

    def edge_length(self, u: int, v: int):
        return self._edge_len.get((u, v))

    def n_edges(self) -> int:
        return len(self._edge_len) // 2


def _base_edges(ball: GroupBall):
    seen = set()
    for u in range(len(ball)):
        for _, v in ball.neighbours(u):
            if (min(u, v), max(u, v)) not in seen and u != v:
                seen.add((min(u, v), max(u, v)))
    return sorted(seen)


def build_cusp_complex(h_ball: GroupBall, params: CuspParams) -> CuspComplex:
    """Full cusp complex over the subgroup's own Cayley ball: every layer
    repeats all base edges, scaled by depth."""
    cx = CuspComplex(params)
    n_levels = params.depth_cap + 1
    for b in range(len(h_ball)):
        for i in range(n_levels):
            cx.add_vertex((b, i), i, b)
    for u, v in _base_edges(h_ball):
        for i in range(n_levels):
            cx.add_edge(cx.ids[u, i], cx.ids[v, i], params.horizontal_length(i))
    for b in range(len(h_ball)):
        for i in range(params.depth_cap):
            cx.add_edge(cx.ids[b, i], cx.ids[b, i + 1], params.vertical_length())
    return cx


def build_cusped_cayley(g_ball: GroupBall, rp: RelativePresentation,
                        params: CuspParams) -> CuspComplex:
    """Cayley ball of the whole group with a cusp hanging below every
    parabolic coset: depth 0 keeps all edges at length 1; deeper layers
    only repeat the coset's own parabolic edges, scaled; vertical edges
    join consecutive copies of each coset vertex."""
    cx = CuspComplex(params)
    for b in range(len(g_ball)):
        cx.add_vertex(("g", b), 0, b)
    for u, v in _base_edges(g_ball):
        cx.add_edge(cx.ids["g", u], cx.ids["g", v], 1.0)
    tables = coset_table(g_ball, rp)
    for fi, fam in enumerate(rp.families):
        syms = fam.symbols()
        for b in range(len(g_ball)):
            for i in range(1, params.depth_cap + 1):
                cx.add_vertex((fi, b, i), i, b)
        for b in range(len(g_ball)):
            below = cx.ids["g", b]
            for i in range(1, params.depth_cap + 1):
                here = cx.ids[fi, b, i]
                cx.add_edge(below, here, params.vertical_length())
                below = here
        seen = set()
        for u in range(len(g_ball)):
            for sym in syms:
                v = g_ball.edges[u][sym]
                if v is None or v == u or (min(u, v), max(u, v)) in seen:
                    continue
                seen.add((min(u, v), max(u, v)))
                if tables[fi][u] != tables[fi][v]:
                    raise AssertionError("parabolic edge crosses cosets")
                for i in range(1, params.depth_cap + 1):
                    cx.add_edge(cx.ids[fi, u, i], cx.ids[fi, v, i],
                                params.horizontal_length(i))
    return cx


def path_length(cx: CuspComplex, path) -> float:
    total = 0.0
    for u, v in zip(path, path[1:]):
        w = cx.edge_length(u, v)
        if w is None:
            raise ValueError(f"vertices {u} and {v} are not adjacent")
        total += w
    return total


def dijkstra_distance(cx: CuspComplex, u: int, v: int) -> float:
    dist = _dijkstra(cx.adj, u, stop_at=v)
    if dist[v] is None:
        raise ValueError("vertices are not connected")
    return dist[v]


def _dijkstra(adj, src, stop_at=None):
    dist = [None] * len(adj)
    heap = [(0.0, src)]
    while heap:
        d, x = heappop(heap)
        if dist[x] is not None:
            continue
        dist[x] = d
        if x == stop_at:
            break
        for y, w in adj[x]:
            if dist[y] is None:
                heappush(heap, (d + w, y))
    return dist


def _geodesic_path(adj, dist, src, dst):
    """Walk back from dst along tight edges, smallest vertex id first."""
    path = [dst]
    cur = dst
    while cur != src:
        best = None
        for y, w in adj[cur]:
            if dist[y] is not None and abs(dist[y] + w - dist[cur]) < 1e-9:
                if best is None or y < best:
                    best = y
        if best is None:
            raise ValueError("no tight predecessor; disconnected?")
        path.append(best)
        cur = best
    path.reverse()
    return path


def optimal_depth(shadow_length: float, params: CuspParams) -> float:
    if shadow_length <= 0:
        raise ValueError("shadow length must be positive")
    return math.log(shadow_length / (2 * params.omega)) / math.log(params.psi)


def geodesic_length_closed_form(shadow_length, i, k, params: CuspParams):
    """Length of the best descend-level-ascend path and its level depth.

    Minimizes omega*ln(psi)*(2D - i - k) + psi^-D * L over integers D in
    [max(i,k), depth_cap]; the continuous minimizer is log_psi(L/(2 omega))
    and the integer minimizer lies within 1 of its clamp, so only the
    clamp's neighbors and the interval ends need scanning.  Ties resolve
    to the smaller depth.
    """
    if i < 0 or k < 0 or max(i, k) > params.depth_cap:
        raise ValueError("depths must sit inside [0, depth_cap]")
    if shadow_length < 0:
        raise ValueError("shadow length must be nonnegative")
    lo, hi = max(i, k), params.depth_cap
    cands = {lo, hi}
    if shadow_length > 0:
        opt = optimal_depth(shadow_length, params)
        for d in (math.floor(opt), math.ceil(opt)):
            cands.add(min(max(int(d), lo), hi))
    w = params.omega * math.log(params.psi)
    best = None
    for d in sorted(cands):
        val = w * (2 * d - i - k) + params.psi ** (-d) * shadow_length
        if best is None or val < best[0] - 1e-15:
            best = (val, d)
    return best


Decomposition = namedtuple("Decomposition", "descending level ascending")


class _NotDecomposable:
    def __bool__(self):
        return False

    def __repr__(self):
        return "NotDecomposable"


NOT_DECOMPOSABLE = _NotDecomposable()


def decompose_geodesic(depths):
    """Split a depth sequence into strictly-descending, level, strictly-
    ascending step counts; NOT_DECOMPOSABLE when the pattern is violated.
    Depth changes other than -1, 0, +1 are malformed input."""
    deltas = []
    for a, b in zip(depths, list(depths)[1:]):
        step = b - a
        if step not in (-1, 0, 1):
            raise ValueError(f"depth jump {step} between {a} and {b}")
        deltas.append(step)
    down = 0
    while down < len(deltas) and deltas[down] == 1:
        down += 1
    level = down
    while level < len(deltas) and deltas[level] == 0:
        level += 1
    up = level
    while up < len(deltas) and deltas[up] == -1:
        up += 1
    if up != len(deltas):
        return NOT_DECOMPOSABLE
    return Decomposition(down, level - down, len(deltas) - level)


def level_bound(params: CuspParams) -> float:
    return 2 * params.omega * params.psi


def delta_constant(params: CuspParams) -> float:
    log_psi_2 = math.log(2) / math.log(params.psi)
    return 4 * params.omega * params.psi + \
        (log_psi_2 + 2) * params.omega * math.log(params.psi)


def measure_thinness(adj, samples: int, seed: int) -> float:
    """Empirical triangle thinness of a weighted graph.

    For sampled vertex triples, takes the three tie-broken geodesics and
    measures the one-sided Hausdorff distance from each side to the union
    of the other two; returns the worst value seen.  When the triple count
    is at most ``samples`` the scan is exhaustive, otherwise it draws
    distinct random triples.  Always a lower bound on the true constant.
    """
    n = len(adj)
    rng = random.Random(seed)
    total = n * (n - 1) * (n - 2) // 6
    if total <= samples:
        triples = [(a, b, c) for a in range(n) for b in range(a + 1, n)
                   for c in range(b + 1, n)]
    else:
        chosen = set()
        while len(chosen) < samples:
            t = tuple(sorted(rng.sample(range(n), 3)))
            chosen.add(t)
        triples = sorted(chosen)
    dist_cache: dict = {}

    def dist_from(v):
        if v not in dist_cache:
            dist_cache[v] = _dijkstra(adj, v)
        return dist_cache[v]

    worst = 0.0
    for a, b, c in triples:
        paths = []
        for src, dst in ((a, b), (b, c), (a, c)):
            d = dist_from(src)
            paths.append(_geodesic_path(adj, d, src, dst))
        for side in range(3):
            other = set(paths[(side + 1) % 3]) | set(paths[(side + 2) % 3])
            for u in paths[side]:
                du = dist_from(u)
                gap = min(du[v] for v in other)
                worst = max(worst, gap)
    return worst


def clip(cx: CuspComplex, n: int) -> CuspComplex:
    """Subcomplex of everything at depth <= n."""
    out = CuspComplex(cx.params)
    keep = [v for v in range(len(cx)) if cx.depth[v] <= n]
    remap = {}
    for v in keep:
        remap[v] = out.add_vertex(cx.keys[v], cx.depth[v], cx.shadow[v])
    for v in keep:
        for u, w in cx.adj[v]:
            if u in remap and v < u:
                out.add_edge(remap[v], remap[u], w)
    return out


def deepen_replace(cx: CuspComplex, beta, n: int):
    """Replace each maximal depth-n stretch of a clipped path with the
    geodesic of the full complex between the stretch's endpoints.

    beta uses full-complex vertex ids but must stay at depth <= n.
    """
    for v in beta:
        if cx.depth[v] > n:
            raise ValueError("path leaves the clipped complex")
    gamma = []
    idx = 0
    while idx < len(beta):
        if cx.depth[beta[idx]] < n:
            gamma.append(beta[idx])
            idx += 1
            continue
        j = idx
        while j < len(beta) and cx.depth[beta[j]] == n:
            j += 1
        first, last = beta[idx], beta[j - 1]
        dist = _dijkstra(cx.adj, first)
        seg = _geodesic_path(cx.adj, dist, first, last)
        gamma.extend(seg if not gamma or gamma[-1] != seg[0] else seg[1:])
        idx = j
    return gamma


def path_hausdorff(cx: CuspComplex, path_a, path_b) -> float:
    """Symmetric Hausdorff distance between two vertex paths."""
    worst = 0.0
    for one, two in ((path_a, path_b), (path_b, path_a)):
        targets = set(two)
        for u in one:
            d = _dijkstra(cx.adj, u)
            worst = max(worst, min(d[v] for v in targets))
    return worst


def pushdown_delta(depth: int, params: CuspParams) -> float:
    """Guaranteed area saving from pushing one horizontal cell down to
    this depth: the cell sheds (psi - 1) of scaled area and pays at most
    rho_max vertical cells."""
    if depth < 1:
        raise ValueError("pushdown target depth starts at 1")
    return (params.psi - 1 - params.rho_max * params.omega * params.psi) \
        * params.psi ** (-depth)


def pushdown_valid(params: CuspParams) -> bool:
    if params.rho_max * params.omega >= 1:
        return False
    return params.omega < 1 / params.rho_max and \
        params.psi > 1 / (1 - params.rho_max * params.omega)


def pushdown_total(params: CuspParams) -> float:
    """Series total of pushdown savings over all depths from 1."""
    return (params.psi - 1 - params.rho_max * params.omega * params.psi) \
        / (params.psi - 1)


def complex_to_json(cx: CuspComplex) -> dict:
    edges = sorted((min(u, v), max(u, v), w)
                   for (u, v), w in cx._edge_len.items())
    dedup = []
    for e in edges:
        if not dedup or dedup[-1][:2] != e[:2]:
            dedup.append(e)
    return {
        "psi": cx.params.psi,
        "omega": cx.params.omega,
        "depth_cap": cx.params.depth_cap,
        "vertices": [{"key": list(k) if isinstance(k, tuple) else k,
                      "depth": cx.depth[v], "shadow": cx.shadow[v]}
                     for v, k in enumerate(cx.keys)],
        "edges": [{"u": u, "v": v, "length": w} for u, v, w in dedup],
    }
