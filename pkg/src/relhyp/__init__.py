"""Discrete machinery for relatively hyperbolic groups.

Submodules:
    words      paired-inverse alphabets, free reduction, presentations
    automata   DFA/NFA toolkit (determinize, minimize, language equality)
    cayley     Cayley balls with a word-problem oracle
    electric   electric (parabolic-weighted) lengths, areas, penetrations
    fftp       falsification-by-fellow-traveler automata for height functions
    cusp       combinatorial horoball complexes and cusped-off Cayley graphs
    hyp2       upper half-plane formulas used for the metric estimates
    homology   exact integer homology of Dehn fillings of link complements
    extension  central extensions from weakly bounded cocycles
    cli        command line front end
"""

__version__ = "0.1.0"
