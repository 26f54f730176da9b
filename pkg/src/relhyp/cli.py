"""Command line front end.

One process per command.  Machine-readable JSON goes to stdout, a one
line human summary (with wall-clock time) to stderr.  Exit codes: 0 on
success, 1 on computational errors, 2 on usage errors.  The stdout
report is byte-identical across runs given the same inputs and seed,
which is why timing lives only in the stderr summary.

Presentation files look like

    [generators] a b
    [relators] abAB
    [parabolic P] b

with the uppercase-letter-is-inverse convention.  Section content may
continue on following lines; '#' starts a comment.  Parse failures
carry a line and column.
"""

import argparse
import json
import math
import random
import sys
import time
from fractions import Fraction

from . import __version__
from .words import Alphabet, Presentation, free_reduce
from .cayley import OracleBudgetError, OUT_OF_BALL, build_ball, geodesic_words
from .electric import (
    ParabolicFamily, RelativePresentation, bcp_scan, electric_area_exact,
    electric_area_upper, electric_distances_from, electric_geodesic,
    electric_length,
)
from .automata import live_states, minimize, prefix_closed
from .fftp import build_fftp_automaton, neg_electric_height, neg_length_height
from .cusp import (
    CuspParams, _dijkstra, _geodesic_path, build_cusp_complex,
    build_cusped_cayley, clip, deepen_replace, delta_constant,
    geodesic_length_closed_form, level_bound, measure_thinness, optimal_depth,
    path_hausdorff,
)
from .hyp2 import (
    ideal_isosceles_angle, ideal_midpoint_check, right_triangle_gap,
    tangent_projection_diameter,
)
from .homology import (
    Filling, LinkingMatrix, filling_matrix, filling_nullity_certificate,
    h1_presentation, kernel_rank_report,
)
from .extension import (
    CocycleTable, cocycle_check, is_coboundary_table, weakly_bounded_report,
)


class UsageError(Exception):
    """Bad input from the user: malformed file, impossible flag combo."""


class PresentationParseError(UsageError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line = line
        self.col = col


# ---------------------------------------------------------------- files

def parse_presentation(text: str) -> RelativePresentation:
    """Parse the sectioned presentation format; symbol order = file order."""
    gens: list = []
    gen_pos: dict = {}
    relator_tokens: list = []        # (token, line, col)
    families: list = []              # (name, [tokens], line, col)
    section = None

    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        rest = line
        if line.lstrip().startswith("["):
            open_col = line.index("[") + 1
            close = line.find("]")
            if close < 0:
                raise PresentationParseError("unterminated section header",
                                             ln, open_col)
            header = line[open_col:close].split()
            rest = line[close + 1:]
            if header == ["generators"]:
                if section == "generators" or gens:
                    raise PresentationParseError("duplicate [generators] section",
                                                 ln, open_col)
                section = "generators"
            elif header == ["relators"]:
                section = "relators"
            elif len(header) == 2 and header[0] == "parabolic":
                name = header[1]
                if any(f[0] == name for f in families):
                    raise PresentationParseError(
                        f"duplicate parabolic family {name!r}", ln, open_col)
                families.append((name, [], ln, open_col))
                section = "parabolic"
            else:
                raise PresentationParseError(
                    f"unknown section [{' '.join(header)}]", ln, open_col)
        elif section is None:
            col = len(line) - len(line.lstrip()) + 1
            raise PresentationParseError("content before any section header",
                                         ln, col)
        # tokenize the remainder with column positions
        pos = len(line) - len(rest)
        for tok in rest.split():
            col = line.index(tok, pos) + 1
            pos = col - 1 + len(tok)
            if section == "generators":
                if not (tok.isalpha() and tok.islower() and len(tok) == 1):
                    raise PresentationParseError(
                        f"generator must be a single lowercase letter: {tok!r}",
                        ln, col)
                if tok in gen_pos:
                    raise PresentationParseError(
                        f"duplicate generator {tok!r}", ln, col)
                gen_pos[tok] = (ln, col)
                gens.append(tok)
            elif section == "relators":
                relator_tokens.append((tok, ln, col))
            else:
                families[-1][1].append((tok, ln, col))

    if not gens:
        raise PresentationParseError("no [generators] section", 1, 1)
    alphabet = Alphabet(gens)

    relators = []
    for tok, ln, col in relator_tokens:
        word = []
        for off, ch in enumerate(tok):
            try:
                word.append(alphabet.index(ch))
            except ValueError:
                raise PresentationParseError(
                    f"unknown symbol {ch!r} in relator", ln, col + off) from None
        reduced = free_reduce(tuple(word))
        if not reduced:
            raise PresentationParseError(
                f"relator {tok!r} reduces to nothing", ln, col)
        relators.append(reduced)

    fams = []
    claimed: dict = {}
    for name, toks, hln, hcol in families:
        if not toks:
            raise PresentationParseError(
                f"parabolic family {name!r} has no generators", hln, hcol)
        idx = []
        for tok, ln, col in toks:
            if tok not in gen_pos:
                raise PresentationParseError(
                    f"parabolic symbol {tok!r} is not a generator", ln, col)
            if tok in claimed:
                raise PresentationParseError(
                    f"generator {tok!r} already in family {claimed[tok]!r}",
                    ln, col)
            claimed[tok] = name
            idx.append(alphabet.index(tok))
        syms = set()
        for g in idx:
            syms |= {g, g ^ 1}
        # a relator living entirely on the family's letters belongs to it
        fam_rels = tuple(r for r in relators if set(r) <= syms)
        fams.append(ParabolicFamily(name, tuple(idx), fam_rels))

    base = Presentation(alphabet, tuple(relators))
    return RelativePresentation(base, tuple(fams))


def serialize_presentation(rp: RelativePresentation) -> str:
    ab = rp.base.alphabet
    lines = ["[generators] " + " ".join(ab.generators)]
    if rp.base.relators:
        lines.append("[relators] " + " ".join(ab.to_str(r)
                                              for r in rp.base.relators))
    for fam in rp.families:
        lines.append(f"[parabolic {fam.name}] "
                     + " ".join(ab.symbols[g] for g in fam.generators))
    return "\n".join(lines) + "\n"


def parse_matrix_file(text: str):
    """Plain text matrix: first line "rows cols", then entry rows.
    Entries are integers or p/q rationals."""
    lines = text.splitlines()
    header = None
    body_at = 0
    for ln, raw in enumerate(lines, start=1):
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            header = (stripped, ln)
            body_at = ln
            break
    if header is None:
        raise UsageError("empty matrix file")
    parts = header[0].split()
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise UsageError(
            f'line {header[1]}: matrix header must be "rows cols"')
    nrows, ncols = int(parts[0]), int(parts[1])
    rows = []
    for ln in range(body_at, len(lines)):
        line = lines[ln].split("#", 1)[0]
        if not line.strip():
            continue
        row = []
        pos = 0
        for tok in line.split():
            col = line.index(tok, pos) + 1
            pos = col - 1 + len(tok)
            row.append(_parse_entry(tok, ln + 1, col))
        if len(row) != ncols:
            raise UsageError(
                f"line {ln + 1}: expected {ncols} entries, got {len(row)}")
        rows.append(tuple(row))
    if len(rows) != nrows:
        raise UsageError(f"expected {nrows} rows, got {len(rows)}")
    return rows


def _parse_entry(tok: str, line: int, col: int):
    try:
        if "/" in tok:
            p, q = tok.split("/", 1)
            return Fraction(int(p), int(q))
        return int(tok)
    except (ValueError, ZeroDivisionError):
        raise UsageError(
            f"line {line}, column {col}: bad matrix entry {tok!r}") from None


def parse_slopes(text: str):
    """Dehn filling slopes, one per line: "u/v", "u" (v=1), or "*"
    for an unfilled component.  (p,q) with p*v + q*u = 1 is derived."""
    out = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        tok = raw.split("#", 1)[0].strip()
        if not tok:
            continue
        if tok == "*":
            out.append(None)
            continue
        u_s, _, v_s = tok.partition("/")
        try:
            u = int(u_s)
            v = int(v_s) if v_s else 1
        except ValueError:
            raise UsageError(f"line {ln}: bad slope {tok!r}") from None
        try:
            p, q = _pq_pair(u, v)
            out.append(Filling(u, v, p, q))
        except (ValueError, ZeroDivisionError) as e:
            raise UsageError(f"line {ln}: slope {tok!r}: {e}") from None
    return out


def _pq_pair(u: int, v: int):
    """Some (p, q) with p*v + q*u = 1, via the extended Euclid run."""
    old_r, r = u, v
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        quo = old_r // r
        old_r, r = r, old_r - quo * r
        old_s, s = s, old_s - quo * s
        old_t, t = t, old_t - quo * t
    if old_r == -1:
        old_r, old_s, old_t = 1, -old_s, -old_t
    if old_r != 1:
        raise ValueError(f"slope {u}/{v} is not primitive (gcd {abs(old_r)})")
    return old_t, old_s   # p*v + q*u = old_t*v + old_s*u = 1


def parse_cocycle_file(text: str, rp: RelativePresentation, ball):
    """Triples "g-word h-word value", one per line; "1" is the identity."""
    ab = rp.base.alphabet
    table = {}
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = line.split()
        if not toks:
            continue
        if len(toks) != 3:
            raise UsageError(
                f"line {ln}: expected 'g-word h-word value', got {len(toks)} fields")
        verts = []
        for tok in toks[:2]:
            col = line.index(tok) + 1
            if tok == "1":
                verts.append(0)
                continue
            try:
                word = ab.parse(tok)
            except ValueError as e:
                raise PresentationParseError(str(e), ln, col) from None
            v = ball.evaluate(word)
            if v is OUT_OF_BALL:
                raise UsageError(
                    f"line {ln}: word {tok!r} leaves the radius-{ball.radius} "
                    f"ball; raise --radius")
            verts.append(v)
        try:
            value = int(toks[2])
        except ValueError:
            raise UsageError(f"line {ln}: bad value {toks[2]!r}") from None
        key = (verts[0], verts[1])
        if key in table and table[key] != value:
            raise UsageError(
                f"line {ln}: conflicting values for pair {toks[0]} {toks[1]}")
        table[key] = value
    return table


# ------------------------------------------------------------- commands

def _load(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror or e}") from None


def _rp_from_args(args) -> RelativePresentation:
    return parse_presentation(_load(args.presentation))


def _parse_word(rp: RelativePresentation, text: str):
    if text == "1":
        return ()
    try:
        return rp.base.alphabet.parse(text)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _cusp_params(args, need_cap=None) -> CuspParams:
    cap = args.depth_cap
    if cap is None:
        cap = 4 if need_cap is None else need_cap
    return CuspParams(args.psi, args.omega, depth_cap=cap)


def _build_complex(rp: RelativePresentation, radius: int, params: CuspParams):
    ball = build_ball(rp.base, radius)
    if rp.families:
        return ball, build_cusped_cayley(ball, rp, params)
    return ball, build_cusp_complex(ball, params)


def _params_echo(params: CuspParams) -> dict:
    return {"psi": params.psi, "omega": params.omega,
            "depth_cap": params.depth_cap}


def cmd_ball(args):
    rp = _rp_from_args(args)
    ball = build_ball(rp.base, args.radius)
    ab = rp.base.alphabet
    sphere = [0] * (ball.radius + 1)
    for v in range(len(ball)):
        sphere[ball.length_of(v)] += 1
    results = {
        "vertices": len(ball),
        "sphere_sizes": sphere,
        "edge_count": sum(1 for v in range(len(ball))
                          for t in ball.edges[v] if t is not None) // 2,
        "words": [ab.to_str(ball.words[v]) for v in range(len(ball))],
    }
    inputs = {"presentation": serialize_presentation(rp),
              "radius": args.radius}
    return results, inputs, (f"ball: {len(ball)} vertices at radius "
                             f"{args.radius}")


def cmd_geodesics(args):
    rp = _rp_from_args(args)
    word = _parse_word(rp, args.word)
    radius = args.radius if args.radius is not None else len(word)
    ball = build_ball(rp.base, radius)
    v = ball.evaluate(word)
    if v is OUT_OF_BALL:
        raise ValueError(f"word leaves the radius-{radius} ball; "
                         f"raise --radius")
    ab = rp.base.alphabet
    words = geodesic_words(ball, v)
    shown = words if len(words) <= args.budget else words[:args.budget]
    results = {
        "word": args.word,
        "length": ball.length_of(v),
        "count": len(words),
        "geodesics": [ab.to_str(w) for w in shown],
        "truncated": len(words) > args.budget,
    }
    if rp.families:
        results["electric_length"] = electric_length(rp, word)
        results["electric_distance"] = electric_distances_from(ball, rp, 0)[v]
        results["electric_geodesic"] = ab.to_str(electric_geodesic(ball, rp, v))
    inputs = {"presentation": serialize_presentation(rp), "word": args.word,
              "radius": radius, "budget": args.budget}
    return results, inputs, (f"geodesics: {len(words)} words of length "
                             f"{ball.length_of(v)} for {args.word!r}")


def cmd_fftp_automaton(args):
    rp = _rp_from_args(args)
    radius = args.radius if args.radius is not None else args.delta + 1
    ball = build_ball(rp.base, radius)
    h = neg_electric_height(rp) if rp.families else neg_length_height(
        rp.base.alphabet)
    dfa = build_fftp_automaton(ball, args.delta, h, threads=args.threads)
    small = minimize(dfa)
    live = live_states(small)
    results = {
        "delta": args.delta,
        "height": "neg-electric" if rp.families else "neg-length",
        "states": dfa.n,
        "minimized_states": small.n,
        "live_states": len(live),
        "prefix_closed": prefix_closed(small),
        "symbols": list(small.symbols),
        "initial": small.initial,
        "accept": sorted(small.accept),
        "transitions": [list(row) for row in small.transitions],
    }
    inputs = {"presentation": serialize_presentation(rp),
              "delta": args.delta, "radius": radius}
    return results, inputs, (f"fftp-automaton: {small.n} states minimized "
                             f"({len(live)} live), delta={args.delta}")


def cmd_electric_area(args):
    rp = _rp_from_args(args)
    if not rp.families:
        raise UsageError("electric-area needs at least one parabolic family")
    word = _parse_word(rp, args.word)
    radius = args.radius if args.radius is not None else max(len(word), 4)
    ball = build_ball(rp.base, radius)
    exact = electric_area_exact(rp, word, args.budget)
    upper = electric_area_upper(ball, rp, word, k=2)
    bound, moves = (upper if upper is not None else (None, None))
    results = {
        "word": args.word,
        "electric_length": electric_length(rp, word),
        "area_exact": exact,
        "area_upper": bound,
        "upper_moves": len(moves) if moves is not None else None,
        "insertion_budget": args.budget,
    }
    inputs = {"presentation": serialize_presentation(rp), "word": args.word,
              "radius": radius, "budget": args.budget}
    return results, inputs, (f"electric-area: exact={exact} upper={bound} "
                             f"for {args.word!r}")


def cmd_bcp_scan(args):
    rp = _rp_from_args(args)
    if not rp.families:
        raise UsageError("bcp-scan needs at least one parabolic family")
    ball = build_ball(rp.base, args.radius)
    scan = bcp_scan(ball, rp, args.budget, args.seed,
                    identical=args.identical)
    constant = max(scan["max_entry_gap"], scan["max_exit_gap"],
                   scan["max_unilateral_travel"])
    results = dict(scan)
    results["constant"] = constant
    results["identical_control"] = args.identical
    inputs = {"presentation": serialize_presentation(rp),
              "radius": args.radius, "samples": args.budget}
    return results, inputs, (f"bcp-scan: constant {constant} over "
                             f"{scan['pairs']} pairs ({scan['skipped']} skipped)")


def cmd_cusp_distance(args):
    if args.shadow_length < 0:
        raise UsageError("shadow length must be >= 0")
    if args.depth_i < 0 or args.depth_k < 0:
        raise UsageError("depths must be >= 0")
    cap = args.depth_cap
    if cap is None:
        cap = max(args.depth_i, args.depth_k)
        if args.shadow_length > 0:
            probe = CuspParams(args.psi, args.omega, depth_cap=cap)
            cap = max(cap, math.ceil(optimal_depth(args.shadow_length,
                                                   probe)) + 1)
    params = CuspParams(args.psi, args.omega, depth_cap=cap)
    length, depth = geodesic_length_closed_form(
        args.shadow_length, args.depth_i, args.depth_k, params)
    results = {
        "length": length,
        "depth": depth,
        "optimal_depth": (optimal_depth(args.shadow_length, params)
                          if args.shadow_length > 0 else None),
        "level_bound": level_bound(params),
        "delta_constant": delta_constant(params),
    }
    inputs = {"shadow_length": args.shadow_length, "depth_i": args.depth_i,
              "depth_k": args.depth_k, **_params_echo(params)}
    return results, inputs, (f"cusp-distance: {length:.9g} at depth {depth}")


def cmd_thinness(args):
    rp = _rp_from_args(args)
    params = _cusp_params(args)
    ball, cx = _build_complex(rp, args.radius, params)
    delta_hat = measure_thinness(cx.adj, args.budget, args.seed)
    bound = delta_constant(params)
    results = {
        "delta_hat": delta_hat,
        "delta_bound": bound,
        "within_bound": delta_hat <= bound + 2.0,
        "vertices": len(cx),
        "edges": cx.n_edges(),
        "samples": args.budget,
        "cusped_cayley": bool(rp.families),
    }
    inputs = {"presentation": serialize_presentation(rp),
              "radius": args.radius, "samples": args.budget,
              **_params_echo(params)}
    return results, inputs, (f"thinness: delta-hat {delta_hat:.4g} vs bound "
                             f"{bound:.4g} over {args.budget} triples")


def cmd_clip_track(args):
    rp = _rp_from_args(args)
    params = _cusp_params(args)
    n = args.clip_depth
    if n < 0 or n > params.depth_cap:
        raise UsageError(f"clip depth must lie in [0, {params.depth_cap}]")
    ball, cx = _build_complex(rp, args.radius, params)
    gn = clip(cx, n)
    back = {v: cx.ids[gn.keys[v]] for v in range(len(gn))}
    rng = random.Random(args.seed)
    worst = 0.0
    total = 0.0
    pairs = 0
    for _ in range(args.budget):
        a, b = rng.sample(range(len(gn)), 2)
        dist_n = _dijkstra(gn.adj, a)
        if dist_n[b] is None:
            continue
        beta = [back[v] for v in _geodesic_path(gn.adj, dist_n, a, b)]
        gamma = deepen_replace(cx, beta, n)
        dist_full = _dijkstra(cx.adj, back[a])
        alpha = _geodesic_path(cx.adj, dist_full, back[a], back[b])
        h = path_hausdorff(cx, gamma, alpha)
        worst = max(worst, h)
        total += h
        pairs += 1
    results = {
        "clip_depth": n,
        "pairs": pairs,
        "max_hausdorff": worst,
        "mean_hausdorff": (total / pairs) if pairs else None,
        "clipped_vertices": len(gn),
        "full_vertices": len(cx),
    }
    inputs = {"presentation": serialize_presentation(rp),
              "radius": args.radius, "clip_depth": n, "pairs": args.budget,
              **_params_echo(params)}
    return results, inputs, (f"clip-track: max Hausdorff {worst:.4g} over "
                             f"{pairs} pairs at clip depth {n}")


def cmd_hyp2_check(args):
    del args
    worst_mid = math.inf
    mid_cases = 0
    for big_c in (0.5, 1.0, 2.0):
        start = 2.0 * big_c + math.log(16.0)
        for j in range(101):
            ell = start + 0.1 * j
            if not ideal_midpoint_check(ell, big_c):
                raise ValueError(f"midpoint sweep fails at C={big_c} l={ell}")
            worst_mid = min(worst_mid, math.log(math.cosh(ell / 2.0)) - big_c)
            mid_cases += 1
    worst_tri = math.inf
    tri_cases = 0
    for ui in range(1, 46):
        u = 1.0 + 0.2 * ui
        for ti in range(1, 16):
            theta = math.pi / 2.0 * ti / 16.0
            t, ok = right_triangle_gap(u, theta)
            if not ok:
                raise ValueError(f"triangle sweep fails at u={u} theta={theta}")
            worst_tri = min(worst_tri,
                            (t - u) - math.log(1.0 / (2.0 * math.sin(theta))))
            tri_cases += 1
    worst_iso = math.inf
    iso_cases = 0
    for j in range(1, 201):
        ell = 0.1 * j
        _, ok = ideal_isosceles_angle(ell)
        if not ok:
            raise ValueError(f"isosceles sweep fails at l={ell}")
        s2 = 2.0 / (math.cosh(ell) + 1.0)
        worst_iso = min(worst_iso, 4.0 * math.exp(-ell) - s2)
        iso_cases += 1
    diameter = tangent_projection_diameter(1.0, -1.0, 1.0)
    if abs(diameter - 2.0) > 1e-6:
        raise ValueError(f"tangent projection diameter {diameter} != 2")
    results = {
        "passed": True,
        "ideal_midpoint": {"cases": mid_cases, "worst_margin": worst_mid},
        "right_triangle": {"cases": tri_cases, "worst_margin": worst_tri},
        "ideal_isosceles": {"cases": iso_cases, "worst_margin": worst_iso},
        "tangent_diameter": diameter,
    }
    return results, {}, "hyp2-check: all sweeps pass"


def cmd_dehn_fill(args):
    rows = parse_matrix_file(_load(args.linking_matrix))
    if any(isinstance(x, Fraction) for row in rows for x in row):
        raise UsageError("linking matrix entries must be integers")
    if not rows or len(rows) != len(rows[0]):
        raise UsageError("linking matrix must be square")
    try:
        k = LinkingMatrix(len(rows), tuple(rows))
    except ValueError as e:
        raise UsageError(str(e)) from None
    fillings = parse_slopes(_load(args.slopes))
    if len(fillings) != k.n:
        raise UsageError(f"{k.n} components need {k.n} slope lines "
                         f"(use * for unfilled), got {len(fillings)}")
    fm = filling_matrix(k, fillings)
    nullity, basis = filling_nullity_certificate(fm)
    filled = [f for f in fillings if f is not None]
    trailing_unfilled = all(f is not None for f in fillings[:len(filled)])
    h1 = None
    if trailing_unfilled:
        pres, rank_bound, torsion = h1_presentation(k, filled)
        h1 = {
            "rank_lower_bound": rank_bound,
            "torsion": list(torsion),
            "kernel_rank": kernel_rank_report(k, filled),
            "presentation_shape": [pres.rows, pres.cols],
        }
    results = {
        "components": k.n,
        "filled": list(fm.filled),
        "unreduced": list(fm.unreduced),
        "slopes": [None if f is None else f"{f.u}/{f.v}" for f in fillings],
        "filling_matrix": [[str(x) for x in row] for row in fm.rows],
        "nullity": nullity,
        "kernel_basis": [list(v) for v in basis],
        "h1": h1,
    }
    inputs = {"linking_matrix": [list(r) for r in rows],
              "slopes": [None if f is None else [f.u, f.v] for f in fillings]}
    note = "" if h1 is not None else " (h1 skipped: fill a prefix of components)"
    return results, inputs, f"dehn-fill: nullity {nullity}{note}"


def cmd_cocycle_check(args):
    rp = _rp_from_args(args)
    ball = build_ball(rp.base, args.radius)
    table = parse_cocycle_file(_load(args.cocycle), rp, ball)
    n = len(ball)
    sigma = CocycleTable(table, coverage=len(table) / (n * n) if n else 0.0)
    ok, witness = cocycle_check(sigma, ball)
    coboundary, _ = is_coboundary_table(sigma, ball)
    spread = weakly_bounded_report(sigma, ball)
    ab = rp.base.alphabet
    results = {
        "cocycle_identity": ok,
        "violation": (None if witness is None else
                      [ab.to_str(ball.words[v]) or "1" for v in witness]),
        "coverage": sigma.coverage,
        "coboundary": coboundary,
        "spread_constant": spread.constant,
        "spread_right": {ab.symbols[s]: m for s, m in sorted(spread.right.items())},
        "spread_left": {ab.symbols[s]: m for s, m in sorted(spread.left.items())},
    }
    inputs = {"presentation": serialize_presentation(rp),
              "radius": args.radius, "pairs": len(table)}
    verdict = "identity holds" if ok else "identity FAILS"
    cb = "coboundary" if coboundary else "not a coboundary"
    return results, inputs, (f"cocycle-check: {verdict}, {cb}, "
                             f"spread {spread.constant}")


# ----------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="relhyp",
        description="Discrete machinery for relatively hyperbolic groups.")
    top.add_argument("--version", action="version", version=__version__)
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, seed=False, budget=None):
        p.add_argument("--seed", type=int, default=0 if seed else None,
                       help="RNG seed; same seed, same bytes out")
        if budget is not None:
            p.add_argument("--budget", type=int, default=budget,
                           help=f"work cap (default {budget})")
        p.add_argument("--threads", type=int, default=1,
                       help="worker cap (current computations are serial)")

    def cusp_flags(p):
        p.add_argument("--psi", type=float, default=3.0,
                       help="horizontal shrink factor per depth (default 3)")
        p.add_argument("--omega", type=float, default=None,
                       help="vertical scale (default 1/psi)")
        p.add_argument("--depth-cap", type=int, default=None,
                       help="maximum depth of the complex")

    p = sub.add_parser("ball", help="enumerate a Cayley ball")
    p.add_argument("presentation", help="presentation file (format in README)")
    p.add_argument("--radius", type=int, default=3,
                   help="ball radius (default 3)")
    common(p)
    p.set_defaults(func=cmd_ball)

    p = sub.add_parser("geodesics", help="all geodesic words of an element")
    p.add_argument("presentation", help="presentation file (format in README)")
    p.add_argument("word", help="word in the generators, or 1 for the identity")
    p.add_argument("--radius", type=int, default=None,
                   help="ball radius (default: word length)")
    common(p, budget=1000)
    p.set_defaults(func=cmd_geodesics)

    p = sub.add_parser("fftp-automaton",
                       help="build the fellow-traveler word acceptor")
    p.add_argument("presentation", help="presentation file (format in README)")
    p.add_argument("--delta", type=int, default=2,
                   help="fellow-traveler distance bound (default 2)")
    p.add_argument("--radius", type=int, default=None,
                   help="ball radius (default: delta + 1)")
    common(p)
    p.set_defaults(func=cmd_fftp_automaton)

    p = sub.add_parser("electric-area",
                       help="exact and certified-upper electric area of a loop")
    p.add_argument("presentation", help="presentation file (format in README)")
    p.add_argument("word", help="word in the generators, or 1 for the identity")
    p.add_argument("--radius", type=int, default=None,
                   help="ball radius (default: word length)")
    common(p, budget=8)
    p.set_defaults(func=cmd_electric_area)

    p = sub.add_parser("bcp-scan",
                       help="empirical bounded-coset-penetration constants")
    p.add_argument("presentation", help="presentation file (format in README)")
    p.add_argument("--radius", type=int, default=6,
                   help="ball radius (default 6)")
    p.add_argument("--identical", action="store_true",
                   help="control run: compare each geodesic with itself")
    common(p, seed=True, budget=200)
    p.set_defaults(func=cmd_bcp_scan)

    p = sub.add_parser("cusp-distance",
                       help="closed-form cusp geodesic length")
    p.add_argument("shadow_length", type=float,
                   help="horizontal separation measured at depth 0")
    p.add_argument("depth_i", type=int, help="depth of the first endpoint")
    p.add_argument("depth_k", type=int, help="depth of the second endpoint")
    cusp_flags(p)
    common(p)
    p.set_defaults(func=cmd_cusp_distance)

    p = sub.add_parser("thinness",
                       help="measure thin-triangle delta on a cusp complex")
    p.add_argument("presentation", help="presentation file (format in README)")
    p.add_argument("--radius", type=int, default=6,
                   help="ball radius (default 6)")
    cusp_flags(p)
    common(p, seed=True, budget=300)
    p.set_defaults(func=cmd_thinness)

    p = sub.add_parser("clip-track",
                       help="clipped-geodesic tracking against full geodesics")
    p.add_argument("presentation", help="presentation file (format in README)")
    p.add_argument("clip_depth", type=int,
                   help="keep vertices at depth <= this")
    p.add_argument("--radius", type=int, default=6,
                   help="ball radius (default 6)")
    cusp_flags(p)
    common(p, seed=True, budget=20)
    p.set_defaults(func=cmd_clip_track)

    p = sub.add_parser("hyp2-check",
                       help="run the half-plane inequality sweeps")
    common(p)
    p.set_defaults(func=cmd_hyp2_check)

    p = sub.add_parser("dehn-fill",
                       help="filling matrix, nullity certificate, H1 bounds")
    p.add_argument("linking_matrix", help='matrix file: "rows cols" header')
    p.add_argument("slopes", help='slope file: "u/v", "u" or "*" per line')
    common(p)
    p.set_defaults(func=cmd_dehn_fill)

    p = sub.add_parser("cocycle-check",
                       help="cocycle identity, coboundary test, spread report")
    p.add_argument("presentation", help="presentation file (format in README)")
    p.add_argument("cocycle", help='triples file: "g-word h-word value"')
    p.add_argument("--radius", type=int, default=4,
                   help="ball radius (default 4)")
    common(p)
    p.set_defaults(func=cmd_cocycle_check)

    return top


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    t0 = time.perf_counter()
    try:
        results, inputs, summary = args.func(args)
    except UsageError as e:
        print(f"relhyp: error: {e}", file=sys.stderr)
        return 2
    except (ValueError, OracleBudgetError, RuntimeError) as e:
        print(f"relhyp: error: {e}", file=sys.stderr)
        return 1
    inputs["threads"] = args.threads
    report = {
        "command": args.command,
        "version": __version__,
        "seed": getattr(args, "seed", None),
        "inputs": inputs,
        "results": results,
    }
    print(json.dumps(report, indent=2, sort_keys=True))
    dt = time.perf_counter() - t0
    print(f"{summary} ({dt:.2f}s)", file=sys.stderr)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
