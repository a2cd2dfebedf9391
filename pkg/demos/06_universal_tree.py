"""
Isometric copies in a universal tree
====================================

Build a finite leveled tree with enough branching at every value of Q,
color its leaves any way you like, and an exact copy of a target
ultrametric space still turns up in one color.
"""
import random

from ramseyspace import (
    IsometricCopy,
    auto_multiplicity,
    build_universal_tree,
    find_mono_isometric_copy,
    match_subtree,
    validate_metric,
    validate_ultrametric,
)
from ramseyspace.universal import region_colorings, required_height

X = validate_ultrametric(validate_metric([[0, 1, 2], [1, 0, 2], [2, 2, 0]], ["a", "b", "c"]))
Q = [1, 2]
mult = auto_multiplicity(X, 2)
M = build_universal_tree(Q, required_height(X, Q), mult)
print(f"multiplicity {mult}, height {M.height}, {len(M.tree)} nodes")

sub = match_subtree(M, X.distance_set())
hits = sum(isinstance(find_mono_isometric_copy(M, chi, X), IsometricCopy) for chi in region_colorings(sub, 2))
print(f"copies found for {hits} of {2 ** len(sub.leaves)} colorings of the relevant leaves")

chi = {v: random.Random(0).randrange(2) for v in M.leaves}
found = find_mono_isometric_copy(M, chi, X)
print("color", found.color, "embedding", dict(found.embedding))

# with one branch too few the search can come back empty
M2 = build_universal_tree(Q, 3, 2)
sub2 = match_subtree(M2, X.distance_set())
chi = {v: int(i in (0, 3)) for i, v in enumerate(sub2.leaves)}
print(find_mono_isometric_copy(M2, chi, X))
