"""Deterministic and nondeterministic finite automata.

Conventions: states are 0..n-1, symbols are 0..k-1 with display names kept
alongside for export.  DFA transitions are total; partial machines get an
explicit dead state during construction.  NFA initial data is a set of
states and the subset extension of the transition function is used
throughout, so f(A u B) = f(A) u f(B) by construction.
"""

from __future__ import annotations

from collections import deque


class Dfa:
    def __init__(self, transitions, accept, symbols, initial=0):
        self.transitions = [list(row) for row in transitions]
        self.n = len(self.transitions)
        self.symbols = tuple(symbols)
        self.accept = frozenset(accept)
        self.initial = initial
        if self.n == 0:
            raise ValueError("a DFA needs at least one state")
        if not 0 <= initial < self.n:
            raise ValueError("initial state out of range")
        for row in self.transitions:
            if len(row) != len(self.symbols):
                raise ValueError("transition row length != symbol count")
            for s in row:
                if not 0 <= s < self.n:
                    raise ValueError("transition target out of range")
        for s in self.accept:
            if not 0 <= s < self.n:
                raise ValueError("accept state out of range")

    def step(self, state, sym):
        return self.transitions[state][sym]


class Nfa:
    def __init__(self, n, transitions, accept, symbols, initial):
        self.n = n
        self.symbols = tuple(symbols)
        # dict (state, sym) -> frozenset of targets; missing means empty
        self.transitions = {k: frozenset(v) for k, v in transitions.items()}
        self.accept = frozenset(accept)
        self.initial = frozenset(initial)
        for (q, s), tgts in self.transitions.items():
            if not (0 <= q < n and 0 <= s < len(self.symbols)):
                raise ValueError("transition key out of range")
            if any(not 0 <= t < n for t in tgts):
                raise ValueError("transition target out of range")
        if any(not 0 <= q < n for q in self.initial | self.accept):
            raise ValueError("state out of range")

    def step_set(self, states, sym):
        out = set()
        for q in states:
            out |= self.transitions.get((q, sym), frozenset())
        return frozenset(out)


def dfa_run(dfa: Dfa, word) -> bool:
    state = dfa.initial
    for sym in word:
        state = dfa.transitions[state][sym]
    return state in dfa.accept


def nfa_run(nfa: Nfa, word) -> bool:
    current = nfa.initial
    for sym in word:
        current = nfa.step_set(current, sym)
        if not current:
            break
    return bool(current & nfa.accept)


def determinize(nfa: Nfa) -> Dfa:
    """Subset construction.  Only accessible subsets are materialized; the
    empty subset is the explicit dead state when reachable.  The resulting
    DFA carries the subset behind each state in ``subset_labels``.
    """
    k = len(nfa.symbols)
    start = tuple(sorted(nfa.initial))
    index = {start: 0}
    order = [start]
    rows = []
    q = deque([start])
    while q:
        sub = q.popleft()
        row = []
        for sym in range(k):
            tgt = tuple(sorted(nfa.step_set(sub, sym)))
            if tgt not in index:
                index[tgt] = len(order)
                order.append(tgt)
                q.append(tgt)
            row.append(index[tgt])
        rows.append(row)
    accept = {i for i, sub in enumerate(order) if set(sub) & nfa.accept}
    dfa = Dfa(rows, accept, nfa.symbols, initial=0)
    dfa.subset_labels = order
    return dfa


def accessible_states(dfa: Dfa):
    seen = {dfa.initial}
    q = deque([dfa.initial])
    while q:
        s = q.popleft()
        for t in dfa.transitions[s]:
            if t not in seen:
                seen.add(t)
                q.append(t)
    return seen


def coaccessible_states(dfa: Dfa):
    back = [[] for _ in range(dfa.n)]
    for s, row in enumerate(dfa.transitions):
        for t in row:
            back[t].append(s)
    seen = set(dfa.accept)
    q = deque(seen)
    while q:
        s = q.popleft()
        for p in back[s]:
            if p not in seen:
                seen.add(p)
                q.append(p)
    return seen


def live_states(dfa: Dfa):
    return accessible_states(dfa) & coaccessible_states(dfa)


def prune_inaccessible(dfa: Dfa) -> Dfa:
    keep = sorted(accessible_states(dfa))
    remap = {old: new for new, old in enumerate(keep)}
    rows = [[remap[dfa.transitions[old][sym]] for sym in range(len(dfa.symbols))]
            for old in keep]
    accept = {remap[s] for s in dfa.accept if s in remap}
    return Dfa(rows, accept, dfa.symbols, initial=remap[dfa.initial])


def minimize(dfa: Dfa) -> Dfa:
    """Hopcroft partition refinement on the accessible part."""
    dfa = prune_inaccessible(dfa)
    k = len(dfa.symbols)
    back = [[set() for _ in range(k)] for _ in range(dfa.n)]
    for s, row in enumerate(dfa.transitions):
        for sym, t in enumerate(row):
            back[t][sym].add(s)

    acc = set(dfa.accept)
    rej = set(range(dfa.n)) - acc
    partition = [blk for blk in (acc, rej) if blk]
    block_of = {}
    for i, blk in enumerate(partition):
        for s in blk:
            block_of[s] = i
    # seed the worklist with the smaller half (that's the Hopcroft trick)
    work = deque()
    if len(partition) == 2:
        work.append(min(range(2), key=lambda i: len(partition[i])))
    else:
        work.append(0)
    queued = {w for w in work}

    while work:
        splitter = work.popleft()
        queued.discard(splitter)
        splitter_states = set(partition[splitter])
        for sym in range(k):
            pre = set()
            for t in splitter_states:
                pre |= back[t][sym]
            touched = {}
            for s in pre:
                touched.setdefault(block_of[s], set()).add(s)
            for bi, inside in touched.items():
                blk = partition[bi]
                if len(inside) == len(blk):
                    continue
                rest = blk - inside
                partition[bi] = inside
                partition.append(rest)
                ni = len(partition) - 1
                for s in rest:
                    block_of[s] = ni
                if bi in queued:
                    work.append(ni)
                    queued.add(ni)
                else:
                    smaller = bi if len(inside) <= len(rest) else ni
                    work.append(smaller)
                    queued.add(smaller)

    order = sorted(range(len(partition)), key=lambda i: min(partition[i]))
    newindex = {old: new for new, old in enumerate(order)}
    rep = {newindex[old]: min(partition[old]) for old in order}
    rows = []
    for i in range(len(order)):
        s = rep[i]
        rows.append([newindex[block_of[dfa.transitions[s][sym]]] for sym in range(k)])
    accept = {newindex[i] for i, blk in enumerate(partition) if next(iter(blk)) in dfa.accept}
    return Dfa(rows, accept, dfa.symbols, initial=newindex[block_of[dfa.initial]])


def language_equal(d1: Dfa, d2: Dfa):
    """(True, None) when the languages agree, else (False, shortest word on
    which they differ); ties in length break toward smaller symbols because
    the product BFS explores symbols in order.
    """
    if d1.symbols != d2.symbols:
        raise ValueError("symbol sets differ")
    k = len(d1.symbols)
    start = (d1.initial, d2.initial)
    parent = {start: None}
    q = deque([start])
    while q:
        s1, s2 = q.popleft()
        if (s1 in d1.accept) != (s2 in d2.accept):
            word = []
            node = (s1, s2)
            while parent[node] is not None:
                node, sym = parent[node]
                word.append(sym)
            return False, tuple(reversed(word))
        for sym in range(k):
            nxt = (d1.transitions[s1][sym], d2.transitions[s2][sym])
            if nxt not in parent:
                parent[nxt] = ((s1, s2), sym)
                q.append(nxt)
    return True, None


def prefix_closed(dfa: Dfa) -> bool:
    """Every accessible state on a path to acceptance must itself accept."""
    return live_states(dfa) <= dfa.accept


def to_dot(machine) -> str:
    lines = ["digraph fsm {", "  rankdir=LR;", '  hidden [shape=none label=""];']
    if isinstance(machine, Dfa):
        for s in range(machine.n):
            shape = "doublecircle" if s in machine.accept else "circle"
            lines.append(f"  q{s} [shape={shape}];")
        lines.append(f"  hidden -> q{machine.initial};")
        for s, row in enumerate(machine.transitions):
            by_target = {}
            for sym, t in enumerate(row):
                by_target.setdefault(t, []).append(machine.symbols[sym])
            for t, syms in sorted(by_target.items()):
                lines.append(f'  q{s} -> q{t} [label="{",".join(syms)}"];')
    elif isinstance(machine, Nfa):
        for s in range(machine.n):
            shape = "doublecircle" if s in machine.accept else "circle"
            lines.append(f"  q{s} [shape={shape}];")
        for s in sorted(machine.initial):
            lines.append(f"  hidden -> q{s};")
        for (s, sym), tgts in sorted(machine.transitions.items()):
            for t in sorted(tgts):
                lines.append(f'  q{s} -> q{t} [label="{machine.symbols[sym]}"];')
    else:
        raise TypeError("expected Dfa or Nfa")
    lines.append("}")
    return "\n".join(lines)
