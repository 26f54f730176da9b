"""Central integer extensions in trivialized coordinates.

An extension of the ball's group by the integers is modeled as pairs
(g, m) multiplying by (g,m)(h,n) = (gh, m+n+sigma(g,h)); no abstract
extension group is ever constructed.  A cocycle sigma is any callable
on pairs of ball vertices returning an integer, or None where a product
falls outside the ball.

The maximizing-section height rewards parabolic travel: letters of a
parabolic family cost nothing, every other letter costs the fixed rate,
and the cocycle contributions of the lifted word are added on top.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cayley import GroupBall
from .electric import RelativePresentation, backtracks
from .words import relator_forms


def mul(ball: GroupBall, g: int, h: int):
    """Product of two ball vertices, or None when it leaves the ball."""
    v = g
    for s in ball.word_of(h):
        v = ball.edges[v][s]
        if v is None:
            return None
    return v


class CocycleTable:
    """Cocycle backed by a dict on vertex pairs; missing pairs are
    undefined (None)."""

    def __init__(self, table: dict, coverage: float = 1.0):
        self.table = dict(table)
        self.coverage = coverage

    def __call__(self, g, h):
        return self.table.get((g, h))


def cocycle_check(sigma, ball: GroupBall):
    """Exhaustive cocycle identity scan: returns (True, None) or
    (False, first failing (g, h, k) triple)."""
    n = len(ball)
    prod = {}

    def p(a, b):
        if (a, b) not in prod:
            prod[a, b] = mul(ball, a, b)
        return prod[a, b]

    for g in range(n):
        for h in range(n):
            gh = p(g, h)
            if gh is None:
                continue
            s_gh = sigma(g, h)
            if s_gh is None:
                continue
            for k in range(n):
                hk = p(h, k)
                if hk is None or p(gh, k) is None:
                    continue
                left = sigma(gh, k)
                right1 = sigma(g, hk)
                right2 = sigma(h, k)
                if left is None or right1 is None or right2 is None:
                    continue
                if s_gh + left != right1 + right2:
                    return (False, (g, h, k))
    return (True, None)


def section_to_cocycle(rho, ball: GroupBall) -> CocycleTable:
    """Coboundary of a section: sigma(g,h) = rho(g) + rho(h) - rho(gh),
    tabulated wherever gh stays in the ball.  rho maps vertices to
    integers with rho(identity) = 0."""
    if rho(0) != 0:
        raise ValueError("section must vanish at the identity")
    n = len(ball)
    table = {}
    total = 0
    for g in range(n):
        for h in range(n):
            total += 1
            gh = mul(ball, g, h)
            if gh is None:
                continue
            table[g, h] = rho(g) + rho(h) - rho(gh)
    return CocycleTable(table, coverage=len(table) / total)


def canonical_section(sigma, ball: GroupBall):
    """Section from lifting each vertex's canonical word: the second
    coordinate of (letter, 0) products taken along word_of(v)."""
    letter = {s: ball.evaluate((s,)) for s in ball.symbol_moves()}
    vals = {}
    for v in range(len(ball)):
        m = 0
        cur = 0
        for s in ball.word_of(v):
            contrib = sigma(cur, letter[s])
            if contrib is None:
                raise ValueError(f"cocycle undefined along word of {v}")
            m += contrib
            cur = ball.edges[cur][s]
        vals[v] = m
    return vals.__getitem__


def is_coboundary_table(tau, ball: GroupBall):
    """Decide whether tau(g,h) = f(g) + f(h) - f(gh) is solvable on the
    ball; returns (True, f table) or (False, None).

    One exact linear system over the rationals, one unknown per vertex;
    inconsistency anywhere refutes solvability on this ball.
    """
    from .homology import _rref
    n = len(ball)
    eqs = []
    for g in range(n):
        for h in range(n):
            gh = mul(ball, g, h)
            if gh is None:
                continue
            t = tau(g, h)
            if t is None:
                continue
            row = [Fraction(0)] * (n + 1)
            row[g] += 1
            row[h] += 1
            row[gh] -= 1
            row[n] = Fraction(t)
            eqs.append(row)
    if not eqs:
        return (True, {v: Fraction(0) for v in range(n)})
    reduced, pivots = _rref(eqs)
    if n in pivots:  # a row reduced to 0 = nonzero
        return (False, None)
    f = [Fraction(0)] * n
    for prow, pcol in enumerate(pivots):
        f[pcol] = reduced[prow][n]
    return (True, {v: f[v] for v in range(n)})


@dataclass
class SpreadReport:
    right: dict     # symbol -> max |sigma(g, x)|
    left: dict      # symbol -> max |sigma(x, g)|
    constant: int   # overall max
    declared_c: object = None
    within_declared: bool = None


def weakly_bounded_report(sigma, ball: GroupBall,
                          declared_c=None) -> SpreadReport:
    """Per-generator spread of a cocycle over the ball: for each letter
    x, the largest |sigma(g,x)| and |sigma(x,g)| seen.  With a declared
    constant, also reports whether every spread stays within it."""
    letter = {s: ball.evaluate((s,)) for s in ball.symbol_moves()}
    right = {}
    left = {}
    for s, lv in letter.items():
        r_best = 0
        l_best = 0
        for g in range(len(ball)):
            val = sigma(g, lv)
            if val is not None and mul(ball, g, lv) is not None:
                r_best = max(r_best, abs(val))
            val = sigma(lv, g)
            if val is not None and mul(ball, lv, g) is not None:
                l_best = max(l_best, abs(val))
        right[s] = r_best
        left[s] = l_best
    constant = max(list(right.values()) + list(left.values()) + [0])
    within = None if declared_c is None else constant <= declared_c
    return SpreadReport(right, left, constant, declared_c, within)


def spread_trend(reports):
    """Compare spread constants across nested balls: strictly growing
    constants flag an unbounded trend."""
    consts = [r.constant for r in reports]
    growing = all(a < b for a, b in zip(consts, consts[1:]))
    return {"constants": consts, "unbounded_trend": growing}


def relator_twist_bound(rp: RelativePresentation, sigma,
                        ball: GroupBall) -> int:
    """Largest |cocycle charge| picked up around a non-parabolic relator
    loop, maximized over all rotated and inverted forms."""
    letter = {s: ball.evaluate((s,)) for s in ball.symbol_moves()}
    best = 0
    for form in relator_forms(rp.nonparabolic_relators()):
        m = 0
        cur = 0
        ok = True
        for s in form:
            contrib = sigma(cur, letter[s])
            nxt = ball.edges[cur][s]
            if contrib is None or nxt is None:
                ok = False
                break
            m += contrib
            cur = nxt
        if ok:
            best = max(best, abs(m))
    return best


def isoperimetric_estimate(rp: RelativePresentation) -> Fraction:
    """Cheap lower-scale estimate of the electric isoperimetric constant:
    each relator cell has area one and kills its own boundary length."""
    from .electric import electric_length
    best = Fraction(0)
    for r in rp.nonparabolic_relators():
        el = electric_length(rp, r)
        if el > 0:
            best = max(best, Fraction(1, el))
    return best


def lambda_bound(c, t, k):
    """Distortion bound (c + t*k) / (c - t*k); needs c > t*k."""
    if not c > t * k:
        raise ValueError("need c > t*k")
    return (c + t * k) / (c - t * k)


@dataclass
class MaximizingSection:
    values: dict         # vertex -> best height
    witnesses: dict      # vertex -> word attaining it
    stable: bool         # unchanged when the cap grows by 2
    c: object
    cap: int
    twist_bound: int
    k_estimate: object
    precondition_ok: bool


def maximizing_section(ball: GroupBall, rp: RelativePresentation,
                       sigma, c, cap: int,
                       k_estimate=None) -> MaximizingSection:
    """Maximize (lifted cocycle charge) - c * (non-parabolic letter
    count) over in-ball words for every reachable vertex.

    Dynamic program over word length; ties prefer the shorter and then
    the lexicographically smaller witness.  Values are re-run at cap+2
    to report stability.
    """
    twist = relator_twist_bound(rp, sigma, ball)
    k_est = isoperimetric_estimate(rp) if k_estimate is None else k_estimate
    precondition_ok = c > twist * k_est

    parabolic = set()
    for fam in rp.families:
        parabolic |= fam.symbols()
    letter = {s: ball.evaluate((s,)) for s in ball.symbol_moves()}

    def run(limit):
        best = {0: (0, ())}
        frontier = {0: (0, ())}
        for _ in range(limit):
            nxt = {}
            for v, (val, word) in frontier.items():
                for s, lv in letter.items():
                    v2 = ball.edges[v][s]
                    if v2 is None:
                        continue
                    contrib = sigma(v, lv)
                    if contrib is None:
                        continue
                    val2 = val + contrib - (0 if s in parabolic else c)
                    cand = (val2, word + (s,))
                    cur = nxt.get(v2)
                    if cur is None or _better(cand, cur):
                        nxt[v2] = cand
            for v, cand in nxt.items():
                cur = best.get(v)
                if cur is None or _better(cand, cur):
                    best[v] = cand
            frontier = nxt
            if not frontier:
                break
        return best

    base = run(cap)
    grown = run(cap + 2)
    stable = all(grown.get(v, (None,))[0] == val
                 for v, (val, _) in base.items()) \
        and set(grown) == set(base)
    return MaximizingSection(
        values={v: val for v, (val, _) in base.items()},
        witnesses={v: word for v, (_, word) in base.items()},
        stable=stable, c=c, cap=cap, twist_bound=twist,
        k_estimate=k_est, precondition_ok=precondition_ok)


def _better(cand, cur):
    """Higher value wins; then shorter witness; then lexicographic."""
    if cand[0] != cur[0]:
        return cand[0] > cur[0]
    if len(cand[1]) != len(cur[1]):
        return len(cand[1]) < len(cur[1])
    return cand[1] < cur[1]


def maximizing_words_nonbacktracking_check(ball: GroupBall,
                                           rp: RelativePresentation,
                                           section: MaximizingSection) -> bool:
    """True when no witness word backtracks into a parabolic coset it
    already left."""
    for word in section.witnesses.values():
        if backtracks(ball, rp, word):
            return False
    return True
