"""
Ultrametric spaces by hand
==========================

Build a few small spaces, check the axioms, and look at why every
triangle in an ultrametric space is isosceles with a short base.
"""
from itertools import combinations

from ramseyspace import InvalidSpace, NotUltrametric, isosceles_witness, validate_metric, validate_ultrametric
from ramseyspace.treespace import below_order

# distances are exact rationals; strings like "3/2" work too
X = validate_metric([[0, 1, 2, 2], [1, 0, 2, 2], [2, 2, 0, "3/2"], [2, 2, "3/2", 0]], ["a", "b", "c", "d"])
X = validate_ultrametric(X)
print("points:", X.points, "diameter:", X.diameter, "distances:", [str(q) for q in X.distance_set()])

for t in combinations(X.points, 3):
    (u, v), apex = isosceles_witness(X, t)
    print(f"  {t}: base {u}{v} = {X.d(u, v)}, legs to {apex} = {X.d(u, apex)}")

# a plain metric that is not ultrametric: 3 > max(1, 2)
try:
    validate_ultrametric(validate_metric([[0, 1, 3], [1, 0, 2], [3, 2, 0]], ["x", "y", "z"]))
except NotUltrametric as exc:
    print("rejected:", exc.violation.message)

# and a matrix that is not even a metric
try:
    validate_metric([[0, 1, 3], [1, 0, 1], [3, 1, 0]])
except InvalidSpace as exc:
    print("rejected:", exc.violation.axiom, exc.violation.message)

# x <=_0 y says y is one of x's nearest neighbours
for x in X.points:
    above = [y for y in X.points if y != x and below_order(X, x, y)]
    print(f"  {x} <=_0 {above}  (nearest distance {min(X.d(x, y) for y in X.points if y != x)})")
