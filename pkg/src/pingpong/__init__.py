"""Exact computational toolkit for ping-pong partitions of virtually free
groups acting on the circle.

Modules:
    circle        exact rational circle arithmetic (points, arcs, PL maps)
    presentation  graphs of cyclic groups, normal forms, word problem
    tree          finite balls of the Bass-Serre tree, arboreal families
    checker       interactive-family / ping-pong partition verification
    refine        partition refinement, equivalences, semi-conjugacy
    realize       explicit PL realizations of free-by-cyclic groups
    dkn           empirical contraction-set estimation
    cli           command-line front end
"""

__version__ = "0.1.0"
