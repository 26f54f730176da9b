"""Height functions and the finite acceptor of their maximizing words.

A height assigns an integer to every word; a word is maximizing when no
other word for the same group element scores higher.  When non-maximizing
words are always beaten by a fellow traveller, the per-prefix deficits
against nearby competitors form a finite state, and the maximizing words
are exactly the language of a DFA built from a transition kernel over the
delta-ball, with a single absorbing fail state.

The deficit state of a prefix u assigns to each g in the delta-ball the
worst value of H(u) - H(v z_g) over competitors v for u g^-1; the prefix
stays alive while every coordinate is nonnegative, and coordinates are
clamped at 2*K*delta (bounded difference keeps anything larger from ever
mattering).
"""

from __future__ import annotations

import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from heapq import heappop, heappush

from .automata import Dfa
from .cayley import OUT_OF_BALL, GroupBall, distance
from .words import Word, word_inverse


@dataclass
class HeightFunction:
    """Integer-valued word score with the structural flags the acceptor
    construction relies on.

    letter_values drives the fast kernel path for additive heights;
    element_function marks a score that only depends on the evaluated
    group element (every word is then maximizing).  K is a strict bound
    on |H(w) - H(wx)|.
    """
    evaluator: object
    K: int
    additive: bool = False
    right_order_preserving: bool = False
    left_order_preserving: bool = False
    strongly_translation_invariant: bool = False
    element_function: bool = False
    letter_values: dict | None = None

    def __call__(self, word: Word) -> int:
        return self.evaluator(word)


def neg_length_height(alphabet) -> HeightFunction:
    """H(w) = -len(w): maximizing words are the geodesic words."""
    return HeightFunction(
        evaluator=lambda w: -len(w),
        K=2,
        additive=True,
        right_order_preserving=True,
        left_order_preserving=True,
        strongly_translation_invariant=True,
        letter_values={s: -1 for s in range(len(alphabet.symbols))},
    )


def neg_electric_height(rp, scale: int = 1) -> HeightFunction:
    """H(w) = -scale * (letters outside the parabolic families)."""
    values = {}
    for s in range(len(rp.base.alphabet.symbols)):
        values[s] = 0 if rp.family_of_symbol(s) is not None else -scale
    return HeightFunction(
        evaluator=lambda w: sum(values[s] for s in w),
        K=scale + 1,
        additive=True,
        right_order_preserving=True,
        left_order_preserving=True,
        strongly_translation_invariant=True,
        letter_values=values,
    )


def spot_check_height(h: HeightFunction, alphabet, rng, samples: int = 200):
    """Sample the declared invariants; raises on a violation."""
    n = len(alphabet.symbols)
    for _ in range(samples):
        w = tuple(rng.randrange(n) for _ in range(rng.randrange(8)))
        x = rng.randrange(n)
        if abs(h(w) - h(w + (x,))) >= h.K:
            raise ValueError(f"bounded difference fails at {w} + {x}")
        if h.additive:
            cut = rng.randrange(len(w) + 1)
            if h(w) != h(w[:cut]) + h(w[cut:]):
                raise ValueError(f"additivity fails at {w} split {cut}")


def ball_b_delta(ball: GroupBall, delta: int) -> dict:
    """Vertices of the delta-ball with their chosen representative words.

    The representative of g is its shortlex geodesic, whose prefixes never
    leave the delta-ball (verified).  The identity gets the empty word.
    """
    if delta > ball.radius:
        raise ValueError("delta exceeds the ball radius")
    out = {}
    for v in range(len(ball)):
        if ball.length_of(v) > delta:
            continue
        z = ball.words[v]
        for t in range(len(z) + 1):
            u = ball.evaluate(z[:t])
            if ball.length_of(u) > delta:
                raise ValueError(f"representative of vertex {v} leaves the ball")
        out[v] = z
    return out


def _ball_around(ball: GroupBall, center: int, delta: int):
    """Vertices within delta of the center, by in-ball BFS.

    Correct as long as center is within ball.radius - delta of the
    identity: the witnessing geodesics then stay inside the ball.
    """
    dist = {center: 0}
    q = deque([center])
    while q:
        v = q.popleft()
        if dist[v] == delta:
            continue
        for _, t in ball.neighbours(v):
            if t not in dist:
                dist[t] = dist[v] + 1
                q.append(t)
    return set(dist)


def _sup_additive(ball, allowed, weights, src, dst):
    """Best (greatest) additive height of a path src -> dst inside
    ``allowed``.  Letter heights must be nonpositive: any cycle then only
    lowers the total, so the optimum over arbitrary words equals the
    optimum over simple paths and Dijkstra with weights -value applies.
    Returns None when dst is unreachable."""
    best = {src: 0}
    heap = [(0, src)]
    while heap:
        d, v = heappop(heap)
        if d > best.get(v, math.inf):
            continue
        if v == dst:
            return -d
        for sym, t in ball.neighbours(v):
            if t not in allowed:
                continue
            nd = d + (-weights[sym])
            if nd < best.get(t, math.inf):
                best[t] = nd
                heappush(heap, (nd, t))
    return -best[dst] if dst in best else None


def _inf_simple_paths(ball, allowed, src, dst, score, step_cap):
    """Exact inf of ``score(word)`` over injective paths src -> dst in
    ``allowed``.  Exponential; meant for small delta-balls only."""
    best = None
    steps = 0
    stack = [(src, (), {src})]
    while stack:
        v, word, seen = stack.pop()
        steps += 1
        if steps > step_cap:
            raise RuntimeError(
                f"simple-path enumeration exceeded {step_cap} steps")
        if v == dst:
            val = score(word)
            if best is None or val < best:
                best = val
        for sym, t in ball.neighbours(v):
            if t in allowed and t not in seen:
                stack.append((t, word + (sym,), seen | {t}))
    return best


def transition_kernel(ball: GroupBall, delta: int, h: HeightFunction,
                      threads: int = 1) -> dict:
    """Per-letter table T[x][g][h] of best competitor continuations.

    T[x][g][h] is the least value of H(x) - H(z_g^-1 w z_h) + H(z_g z_g^-1)
    over injective connecting paths w from g^-1 to x.h^-1 inside the union
    of the delta-balls at 1 and at x; +inf (math.inf) when no path exists.
    Indices follow sorted(delta-ball vertices).
    """
    if not h.strongly_translation_invariant:
        raise ValueError("kernel needs a strongly translation invariant height")
    if delta < 1:
        raise ValueError("delta must be at least 1")
    if ball.radius < delta + 1:
        raise ValueError("need ball radius >= delta + 1")
    bdelta = sorted(ball_b_delta(ball, delta))
    zwords = {v: ball.words[v] for v in bdelta}
    inv_vertex = {v: ball.evaluate(word_inverse(zwords[v])) for v in bdelta}
    n = len(bdelta)
    symbols = range(len(ball.presentation.alphabet.symbols))

    fast = (h.additive and h.letter_values is not None
            and all(val <= 0 for val in h.letter_values.values()))

    def column(x):
        xv = ball.edges[0][x]
        allowed = _ball_around(ball, 0, delta) | _ball_around(ball, xv, delta)
        table = [[math.inf] * n for _ in range(n)]
        for gi, g in enumerate(bdelta):
            src = inv_vertex[g]
            zg = zwords[g]
            for hi, hv in enumerate(bdelta):
                zh = zwords[hv]
                dst = ball.evaluate((x,) + word_inverse(zh))
                if fast:
                    sup = _sup_additive(ball, allowed, h.letter_values, src, dst)
                    if sup is None:
                        continue
                    table[gi][hi] = (h((x,)) + h(zg) - h(zh) - sup)
                elif h.element_function:
                    if _sup_additive(ball, allowed,
                                     {s: 0 for s in symbols}, src, dst) is None:
                        continue
                    table[gi][hi] = h(())
                else:
                    pre = word_inverse(zg)
                    post = zh
                    val = _inf_simple_paths(
                        ball, allowed, src, dst,
                        lambda w: h((x,)) - h(pre + w + post) + h(zg + pre),
                        step_cap=(2 * delta + 1) * max(1, n) * 4000)
                    if val is not None:
                        table[gi][hi] = val
        return x, table

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = dict(pool.map(column, symbols))
    else:
        results = dict(column(x) for x in symbols)
    return {"order": bdelta, "table": results}


def _initial_state(ball, delta, h, bdelta, zwords, inv_vertex):
    """Deficit vector of the empty word: competitors are the words that
    stay inside the delta-ball."""
    allowed = _ball_around(ball, 0, delta)
    state = []
    for g in bdelta:
        dst = inv_vertex[g]
        if h.additive and h.letter_values is not None \
                and all(val <= 0 for val in h.letter_values.values()):
            sup = _sup_additive(ball, allowed, h.letter_values, 0, dst)
            val = None if sup is None else h(()) - sup - h(zwords[g])
        elif h.element_function:
            val = 0
        else:
            val = _inf_simple_paths(
                ball, allowed, 0, dst,
                lambda w: h(()) - h(w + zwords[g]),
                step_cap=len(allowed) * 4000)
        state.append(val)
    return state


def build_fftp_automaton(ball: GroupBall, delta: int, h: HeightFunction,
                         state_cap: int = 20000, threads: int = 1) -> Dfa:
    """DFA accepting exactly the maximizing words of the height.

    States are clamped deficit vectors over the delta-ball plus one
    absorbing fail state; a vector coordinate dropping below zero means a
    strictly better fellow traveller exists for some extension, which
    right order-preservation turns into permanent non-maximality.  The
    accepted language is prefix-closed.
    """
    if not h.right_order_preserving:
        raise ValueError("acceptor construction needs right order-preservation")
    kern = transition_kernel(ball, delta, h, threads=threads)
    bdelta = kern["order"]
    table = kern["table"]
    zwords = {v: ball.words[v] for v in bdelta}
    inv_vertex = {v: ball.evaluate(word_inverse(zwords[v])) for v in bdelta}
    top = 2 * h.K * delta
    n = len(bdelta)
    symbols = range(len(ball.presentation.alphabet.symbols))

    raw = _initial_state(ball, delta, h, bdelta, zwords, inv_vertex)
    init = tuple(top if v is None else min(v, top) for v in raw)
    if any(v < 0 for v in init):
        raise ValueError("the empty word is not maximizing for this height")

    states = {init: 0}
    order = [init]
    rows = []
    fail_row_of = {}
    q = deque([init])
    while q:
        cur = q.popleft()
        row = []
        for x in symbols:
            t = table[x]
            nxt = []
            dead = False
            for hi in range(n):
                best = math.inf
                for gi in range(n):
                    v = cur[gi] + t[gi][hi]
                    if v < best:
                        best = v
                if best < 0:
                    dead = True
                    break
                nxt.append(top if best is math.inf else min(int(best), top))
            if dead:
                row.append(-1)  # patched to the fail state below
                continue
            key = tuple(nxt)
            if key not in states:
                if len(states) >= state_cap:
                    raise RuntimeError(
                        f"state cap {state_cap} hit after {len(states)} states")
                states[key] = len(order)
                order.append(key)
                q.append(key)
            row.append(states[key])
        rows.append(row)
    fail = len(rows)
    rows = [[fail if s == -1 else s for s in row] for row in rows]
    rows.append([fail] * len(ball.presentation.alphabet.symbols))
    accept = frozenset(range(fail))
    dfa = Dfa(rows, accept, ball.presentation.alphabet.symbols)
    dfa.state_vectors = tuple(order) + ("fail",)
    dfa.bdelta_order = tuple(bdelta)
    return dfa


def maximizing_words_bruteforce(ball: GroupBall, h: HeightFunction, g: int,
                                len_cap: int) -> set:
    """All words up to len_cap for vertex g with the best height.

    The reference oracle for the acceptor: plain enumeration, nothing
    shared with the automaton path.  Words that wander outside the ball
    are not candidates, so choose len_cap at most the radius when the
    answer must be complete.
    """
    if not 0 <= g < len(ball):
        raise ValueError("vertex outside the ball")
    best = None
    out = set()
    frontier = [((), 0)]
    for _ in range(len_cap + 1):
        nxt = []
        for word, v in frontier:
            if v == g:
                val = h(word)
                if best is None or val > best:
                    best = val
                    out = {word}
                elif val == best:
                    out.add(word)
            if len(word) < len_cap:
                for sym, t in ball.neighbours(v):
                    nxt.append((word + (sym,), t))
        frontier = nxt
        if not frontier:
            break
    return out


def _pair_distances(ball, verts1, verts2):
    table = {}
    for a in set(verts1):
        for b in set(verts2):
            if (a, b) not in table:
                d = distance(ball, a, b)
                if d is OUT_OF_BALL:
                    raise ValueError(
                        "prefix distance not certified inside this ball")
                table[a, b] = d
    return table


def fellow_travel_check(ball: GroupBall, w1: Word, w2: Word,
                        mode: str = "sync") -> int:
    """Least fellow-traveling constant for the two words.

    sync: the shorter word idles at its endpoint and the result is the
    worst prefix distance.  async: the result is the least over monotone
    reparameterizations (starting at 0, covering both words) of the worst
    matched-prefix distance, by bottleneck dynamic programming on the
    prefix grid.
    """
    verts1 = [0]
    for s in w1:
        v = ball.edges[verts1[-1]][s]
        if v is None:
            raise ValueError("first word leaves the ball")
        verts1.append(v)
    verts2 = [0]
    for s in w2:
        v = ball.edges[verts2[-1]][s]
        if v is None:
            raise ValueError("second word leaves the ball")
        verts2.append(v)
    dtab = _pair_distances(ball, verts1, verts2)
    if mode == "sync":
        worst = 0
        for t in range(max(len(verts1), len(verts2))):
            a = verts1[min(t, len(verts1) - 1)]
            b = verts2[min(t, len(verts2) - 1)]
            worst = max(worst, dtab[a, b])
        return worst
    if mode != "async":
        raise ValueError(f"unknown mode {mode!r}")
    n, m = len(verts1), len(verts2)
    dp = [[None] * m for _ in range(n)]
    dp[0][0] = dtab[verts1[0], verts2[0]]
    for i in range(n):
        for j in range(m):
            if i == j == 0:
                continue
            prev = [dp[pi][pj]
                    for pi, pj in ((i - 1, j), (i, j - 1), (i - 1, j - 1))
                    if pi >= 0 and pj >= 0]
            dp[i][j] = max(min(prev), dtab[verts1[i], verts2[j]])
    return dp[n - 1][m - 1]
