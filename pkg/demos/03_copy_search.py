"""
Looking for a monochromatic scaled copy
=======================================

Color a space, pick a small target K, and search for a copy of K scaled
by one factor inside a single color class.  The greedy search follows a
fixed stage schedule; the oracle backtracks over everything.
"""
from ramseyspace import FoundCopy, greedy_find_copy, oracle_find_copy, scale_space, validate_metric
from ramseyspace.generators import random_coloring, random_metric

K = validate_metric([[0, 1, 2], [1, 0, 2], [2, 2, 0]], ["u", "v", "w"])

# a doubled copy of K sits inside a single color
X = scale_space(K, 2)
found = oracle_find_copy(X, {p: 0 for p in X.points}, K)
print("oracle:", found.color, dict(found.cert.embedding), "scale", found.cert.factor)

# random instances: greedy either succeeds or leaves a checkable obstruction
for seed in range(5):
    X = random_metric(seed, 9, values=(1, 2, 4))
    chi = random_coloring(seed, X.points, 2)
    greedy = greedy_find_copy(X, chi, K)
    oracle = oracle_find_copy(X, chi, K)
    if isinstance(greedy, FoundCopy):
        print(seed, "greedy found color", greedy.color, "at scale", greedy.cert.factor)
    else:
        greedy.check(X, chi, K)
        print(seed, "greedy stuck after", len(greedy.stages), "stages; profile", {p: str(v) for p, v in greedy.values.items()})
    print("   oracle:", "none" if oracle is None else f"color {oracle.color} scale {oracle.cert.factor}")
