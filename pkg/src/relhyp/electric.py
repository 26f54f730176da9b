"""Electric geometry of a group relative to parabolic subgroups.

Parabolic letters are free: the electric length of a word counts only the
letters outside every parabolic family, parabolic edges have weight zero
for electric geodesics, and the electric area of a loop counts only the
non-parabolic relator insertions needed to contract it.

Cosets are tracked per family.  Inside a ball the cosets of a family are
the connected components of the subgraph of edges labelled by that
family's symbols; this is valid whenever in-ball coset intersections are
connected, which holds for the shipped example groups.  The coset id is
the smallest member vertex, i.e. the shortlex-least coset representative.
"""

from __future__ import annotations

import random
from collections import deque, namedtuple
from dataclasses import dataclass
from heapq import heappop, heappush

from .cayley import (
    OUT_OF_BALL, GroupBall, WordProblemOracle, build_ball, distance,
)
from .words import Presentation, Word, free_reduce, relator_forms, word_inverse


@dataclass(frozen=True)
class ParabolicFamily:
    name: str
    generators: tuple  # generator symbol indices (even) into the alphabet
    relators: tuple = ()

    def symbols(self):
        out = set()
        for g in self.generators:
            out.add(g)
            out.add(g ^ 1)
        return out


@dataclass(frozen=True)
class RelativePresentation:
    base: Presentation
    families: tuple = ()

    def __post_init__(self):
        gen_idx = set(self.base.alphabet.generator_indices())
        seen = set()
        for fam in self.families:
            if not fam.generators:
                raise ValueError(f"family {fam.name!r} has no generators")
            for g in fam.generators:
                if g not in gen_idx:
                    raise ValueError(f"family {fam.name!r}: {g} is not a generator index")
                if g in seen:
                    raise ValueError(f"generator {g} in two parabolic families")
                seen.add(g)
            syms = fam.symbols()
            for r in fam.relators:
                if r not in self.base.relators:
                    raise ValueError(f"family relator {r} missing from the presentation")
                if not set(r) <= syms:
                    raise ValueError(f"family relator {r} uses outside letters")

    def family_of_symbol(self, sym: int):
        gen = sym & ~1
        for i, fam in enumerate(self.families):
            if gen in fam.generators:
                return i
        return None

    def parabolic_relators(self):
        out = set()
        for fam in self.families:
            out |= set(fam.relators)
        return out

    def nonparabolic_relators(self):
        par = self.parabolic_relators()
        return tuple(r for r in self.base.relators if r not in par)


def electric_length(rp: RelativePresentation, word: Word) -> int:
    return sum(1 for sym in word if rp.family_of_symbol(sym) is None)


def coset_table(ball: GroupBall, rp: RelativePresentation):
    """Per family, the coset id of every ball vertex."""
    tables = []
    for fam in rp.families:
        syms = fam.symbols()
        comp = [None] * len(ball)
        for v in range(len(ball)):
            if comp[v] is not None:
                continue
            comp[v] = v
            q = deque([v])
            while q:
                u = q.popleft()
                for sym in syms:
                    t = ball.edges[u][sym]
                    if t is not None and comp[t] is None:
                        comp[t] = v
                        q.append(t)
        tables.append(comp)
    return tables


Penetration = namedtuple("Penetration", "family coset enter leave")


def _prefix_vertices(ball: GroupBall, word: Word):
    verts = [0]
    v = 0
    for sym in word:
        v = ball.edges[v][sym]
        if v is None:
            raise ValueError("word leaves the ball; grow the radius")
        verts.append(v)
    return verts


def penetrations(ball: GroupBall, rp: RelativePresentation, word: Word,
                 table=None) -> list:
    """Maximal coset visits along the prefix path, per family, in time order.

    Every prefix time sits in exactly one coset of each family, so the
    visits of a family are the runs of its coset sequence; the trivial
    coset at t=0 always contributes.
    """
    if table is None:
        table = coset_table(ball, rp)
    verts = _prefix_vertices(ball, word)
    out = []
    for fi in range(len(rp.families)):
        runs = []
        for t, v in enumerate(verts):
            c = table[fi][v]
            if runs and runs[-1][1] == c:
                runs[-1][3] = t
            else:
                runs.append([fi, c, t, t])
        out.extend(runs)
    out.sort(key=lambda r: (r[2], r[0]))
    return [Penetration(*r) for r in out]


def backtracks(ball: GroupBall, rp: RelativePresentation, word: Word,
               table=None) -> list:
    """Cosets visited more than once: list of (family, coset, visit times)."""
    pens = penetrations(ball, rp, word, table)
    seen = {}
    for p in pens:
        seen.setdefault((p.family, p.coset), []).append((p.enter, p.leave))
    return [(fam, coset, visits) for (fam, coset), visits in seen.items()
            if len(visits) > 1]


def _family_ball(rp: RelativePresentation, fi: int, radius: int) -> GroupBall:
    fam = rp.families[fi]
    pres = Presentation(rp.base.alphabet, fam.relators)
    return build_ball(pres, radius, generators=fam.generators)


def _parabolic_runs(rp: RelativePresentation, word: Word):
    """(family, start, stop) for maximal single-family runs."""
    runs = []
    i = 0
    while i < len(word):
        fi = rp.family_of_symbol(word[i])
        if fi is None:
            i += 1
            continue
        j = i
        while j < len(word) and rp.family_of_symbol(word[j]) == fi:
            j += 1
        runs.append((fi, i, j))
        i = j
    return runs


def coset_reduce(ball, rp: RelativePresentation, word: Word,
                 _family_balls=None) -> Word:
    """Replace every maximal parabolic run by its shortlex parabolic geodesic.

    Preserves the evaluation, the electric length and the electric area;
    non-parabolic letters are never touched (in particular no free
    reduction happens across run boundaries).
    """
    cache = _family_balls if _family_balls is not None else {}
    out = []
    last = 0
    for fi, i, j in _parabolic_runs(rp, word):
        out.extend(word[last:i])
        seg = tuple(word[i:j])
        need = len(seg)
        fb = cache.get(fi)
        if fb is None or fb.radius < need:
            fb = _family_ball(rp, fi, need)
            cache[fi] = fb
        v = fb.evaluate(seg)
        assert v is not OUT_OF_BALL
        out.extend(fb.words[v])
        last = j
    out.extend(word[last:])
    return tuple(out)


def _edge_weight(rp: RelativePresentation, sym: int) -> int:
    return 0 if rp.family_of_symbol(sym) is not None else 1


def electric_distances_from(ball: GroupBall, rp: RelativePresentation,
                            source: int):
    """0/1 BFS electric distances from one vertex to the whole ball."""
    dist = [None] * len(ball)
    dist[source] = 0
    q = deque([source])
    while q:
        v = q.popleft()
        for sym, t in ball.neighbours(v):
            w = dist[v] + _edge_weight(rp, sym)
            if dist[t] is None or w < dist[t]:
                dist[t] = w
                if _edge_weight(rp, sym):
                    q.append(t)
                else:
                    q.appendleft(t)
    return dist


def electric_geodesic_tree(ball: GroupBall, rp: RelativePresentation,
                           source: int = 0):
    """Canonical electric geodesic words from a source to every vertex.

    Dijkstra keyed on (electric length, shortlex of the word), so each
    vertex settles with the unique minimum: least electric length, then
    shortest, then lexicographically first.
    """
    words: list = [None] * len(ball)
    heap = [(0, 0, (), source)]
    while heap:
        edist, _, word, v = heappop(heap)
        if words[v] is not None:
            continue
        words[v] = (edist, word)
        for sym, t in ball.neighbours(v):
            if words[t] is None:
                nw = word + (sym,)
                heappush(heap, (edist + _edge_weight(rp, sym), len(nw), nw, t))
    return words


def electric_geodesic(ball, rp: RelativePresentation, target: int,
                      source: int = 0) -> Word:
    tree = electric_geodesic_tree(ball, rp, source)
    if tree[target] is None:
        raise ValueError("target not reachable inside the ball")
    return tree[target][1]


def is_k_local_electric_geodesic(ball, rp: RelativePresentation, word: Word,
                                 k: int) -> bool:
    """Every subword of electric length <= k realizes the electric distance
    between its endpoint vertices (distances measured inside the ball)."""
    verts = _prefix_vertices(ball, word)
    n = len(word)
    for i in range(n):
        dist = None
        run_el = 0
        for j in range(i + 1, n + 1):
            run_el += _edge_weight(rp, word[j - 1])
            if run_el > k:
                break
            if dist is None:
                dist = electric_distances_from(ball, rp, verts[i])
            if dist[verts[j]] != run_el:
                return False
    return True


def _first_nongeodesic_segment(ball, rp, word, k):
    """Smallest window (then leftmost) with el <= k that fails to be an
    electric geodesic; None when the word is k-locally geodesic."""
    verts = _prefix_vertices(ball, word)
    n = len(word)
    dist_cache = {}
    for width in range(1, n + 1):
        for i in range(0, n - width + 1):
            j = i + width
            el = electric_length(rp, word[i:j])
            if el > k:
                continue
            if verts[i] not in dist_cache:
                dist_cache[verts[i]] = electric_distances_from(ball, rp, verts[i])
            if dist_cache[verts[i]][verts[j]] < el:
                return i, j
    return None


# ---------------------------------------------------------------------------
# electric area

def _canonicalize(rp: RelativePresentation, word: Word, cache) -> Word:
    """Normal form in the free product of the parabolics with the remaining
    free letters: free reduction alternated with parabolic run reduction."""
    cur = free_reduce(tuple(word))
    while True:
        nxt = []
        last = 0
        changed = False
        for fi, i, j in _parabolic_runs(rp, cur):
            nxt.extend(cur[last:i])
            seg = tuple(cur[i:j])
            fb = cache.get(fi)
            if fb is None or fb.radius < len(seg):
                fb = _family_ball(rp, fi, len(seg))
                cache[fi] = fb
            rep = fb.words[fb.evaluate(seg)]
            if rep != seg:
                changed = True
            nxt.extend(rep)
            last = j
        nxt.extend(cur[last:])
        nxt = free_reduce(tuple(nxt))
        if nxt == cur and not changed:
            return cur
        cur = nxt


def electric_area_exact(rp: RelativePresentation, word: Word, n_max: int,
                        length_cap: int | None = None,
                        node_budget: int = 500_000):
    """Least number of non-parabolic relator insertions contracting the loop.

    Parabolic relator moves and free reductions cost nothing and happen
    inside the canonicalization step.  Inserting a relator form is an
    undirected move (the forms are closed under inversion), so the search
    runs bidirectionally, from the loop and from the empty word, meeting in
    the middle.  Intermediate words are capped at ``length_cap`` (default
    len(w) + 2 * max non-parabolic relator length), which is the honest
    approximation boundary: derivations needing longer intermediates are
    not found.  Returns the area, or None when nothing is found within
    n_max insertions and the node budget.
    """
    forms = relator_forms(rp.nonparabolic_relators())
    if not forms:
        raise ValueError("no non-parabolic relators to insert")
    cache: dict = {}
    start = _canonicalize(rp, word, cache)
    if not start:
        return 0
    if length_cap is None:
        length_cap = len(start) + 2 * max(len(f) for f in forms)
    dist = [{start: 0}, {(): 0}]
    frontier = [[start], [()]]
    depth = [0, 0]
    best = None
    nodes = 0
    while True:
        if best is not None and depth[0] + depth[1] >= best:
            return best
        if depth[0] + depth[1] >= n_max:
            return best if best is not None and best <= n_max else None
        side = 0 if len(frontier[0]) <= len(frontier[1]) else 1
        if not frontier[side]:
            side = 1 - side
        if not frontier[side]:
            return best
        other = 1 - side
        depth[side] += 1
        nxt = []
        for cur in frontier[side]:
            for pos in range(len(cur) + 1):
                for form in forms:
                    nodes += 1
                    if nodes > node_budget:
                        return best
                    cand = _canonicalize(rp, cur[:pos] + form + cur[pos:], cache)
                    if len(cand) > length_cap or cand in dist[side]:
                        continue
                    dist[side][cand] = depth[side]
                    nxt.append(cand)
                    if cand in dist[other]:
                        total = depth[side] + dist[other][cand]
                        if best is None or total < best:
                            best = total
        frontier[side] = nxt


def electric_area_upper(ball, rp: RelativePresentation, word: Word, k: int,
                        loop_n_max: int = 16):
    """Certified upper bound for the electric area of a loop.

    Alternates coset reduction with electric length reduction: the minimal
    non-geodesic segment beta (el <= k) is replaced by an electric geodesic
    xi, paying the exact area of the inserted loop beta xi^-1 (el < 2k);
    the terminal k-local geodesic loop pays its exact area.  Returns
    (bound, moves) where the move list replays to the bound; None when one
    of the small exact searches gives up.
    """
    v_end = ball.evaluate(word)
    if v_end is OUT_OF_BALL:
        raise ValueError("word leaves the ball; grow the radius")
    if v_end != 0:
        raise ValueError("electric area needs a loop")
    cache: dict = {}
    cur = tuple(word)
    moves = []
    total = 0
    while True:
        reduced = []
        last = 0
        for fi, i, j in _parabolic_runs(rp, cur):
            seg = tuple(cur[i:j])
            fb = cache.get(fi)
            if fb is None or fb.radius < len(seg):
                fb = _family_ball(rp, fi, len(seg))
                cache[fi] = fb
            rep = fb.words[fb.evaluate(seg)]
            if rep != seg:
                moves.append({"op": "coset-reduce", "start": i, "stop": j,
                              "replacement": rep})
            reduced.append((i, j, rep))
            last = j
        if reduced:
            out = []
            pos = 0
            for i, j, rep in reduced:
                out.extend(cur[pos:i])
                out.extend(rep)
                pos = j
            out.extend(cur[pos:])
            cur = tuple(out)
        if not cur:
            break
        seg = _first_nongeodesic_segment(ball, rp, cur, k)
        if seg is None:
            cost = electric_area_exact(rp, cur, loop_n_max)
            if cost is None:
                return None
            total += cost
            moves.append({"op": "terminal-loop", "word": cur, "cost": cost})
            break
        i, j = seg
        verts = _prefix_vertices(ball, cur)
        tree = electric_geodesic_tree(ball, rp, verts[i])
        xi = tree[verts[j]][1]
        loop = free_reduce(tuple(cur[i:j]) + word_inverse(xi))
        cost = electric_area_exact(rp, loop, loop_n_max)
        if cost is None:
            return None
        total += cost
        moves.append({"op": "length-reduce", "start": i, "stop": j,
                      "replacement": xi, "loop": loop, "cost": cost})
        cur = cur[:i] + xi + cur[j:]
    return total, moves


def bcp_scan(ball, rp: RelativePresentation, samples: int, seed: int,
             lam: float = 1.0, eps: float = 0.0, max_radius: int | None = None,
             identical: bool = False):
    """Empirical bounded-coset-penetration constants.

    Samples pairs of electric geodesic words (which are (lam, eps)
    electric quasi-geodesics for any lam >= 1, eps >= 0) whose endpoints
    are at distance <= 1, and reports the worst gap between first-entry
    vertices and last-exit vertices over shared cosets, and the worst
    in-coset travel over cosets only one of the two penetrates.  With
    ``identical`` the second word of each pair is the first (control row).
    """
    del lam, eps  # interface parameters; sampling stays on true geodesics
    rng = random.Random(seed)
    if max_radius is None:
        max_radius = max(0, ball.radius - 2)
    table = coset_table(ball, rp)
    tree = electric_geodesic_tree(ball, rp, 0)
    pool = [v for v in range(len(ball)) if ball.length_of(v) <= max_radius]
    entry_gap = exit_gap = travel = 0
    skipped = 0
    pairs = 0
    for _ in range(samples):
        g = rng.choice(pool)
        if identical:
            h = g
        else:
            nbrs = [t for _, t in ball.neighbours(g)
                    if ball.length_of(t) <= max_radius]
            h = rng.choice(nbrs + [g])
        w1, w2 = tree[g][1], tree[h][1]
        pens1 = penetrations(ball, rp, w1, table)
        pens2 = penetrations(ball, rp, w2, table)
        verts1 = _prefix_vertices(ball, w1)
        verts2 = _prefix_vertices(ball, w2)
        by1 = {}
        for p in pens1:
            by1.setdefault((p.family, p.coset), []).append(p)
        by2 = {}
        for p in pens2:
            by2.setdefault((p.family, p.coset), []).append(p)
        ok = True
        for key in set(by1) | set(by2):
            if key in by1 and key in by2:
                a_in = verts1[min(p.enter for p in by1[key])]
                b_in = verts2[min(p.enter for p in by2[key])]
                a_out = verts1[max(p.leave for p in by1[key])]
                b_out = verts2[max(p.leave for p in by2[key])]
                d_in = distance(ball, a_in, b_in)
                d_out = distance(ball, a_out, b_out)
                if d_in is OUT_OF_BALL or d_out is OUT_OF_BALL:
                    ok = False
                    break
                entry_gap = max(entry_gap, d_in)
                exit_gap = max(exit_gap, d_out)
            else:
                pens = by1.get(key, by2.get(key))
                verts = verts1 if key in by1 else verts2
                for p in pens:
                    d = distance(ball, verts[p.enter], verts[p.leave])
                    if d is OUT_OF_BALL:
                        ok = False
                        break
                    travel = max(travel, d)
                if not ok:
                    break
        if ok:
            pairs += 1
        else:
            skipped += 1
    return {
        "pairs": pairs,
        "skipped": skipped,
        "max_entry_gap": entry_gap,
        "max_exit_gap": exit_gap,
        "max_unilateral_travel": travel,
    }
