"""
Adding points with prescribed distances
=======================================

A profile f on some points can be realized by a new point exactly when
f(x) + f(y) >= d(x, y) and |f(x) - f(y)| <= d(x, y).
"""
from ramseyspace import (
    KatetovViolation,
    extend_one_point,
    is_ultrametric_profile,
    saturate,
    validate_katetov,
    validate_metric,
    validate_ultrametric,
)

X = validate_metric([[0, 2, 1], [2, 0, 1], [1, 1, 0]], ["a", "b", "z"])

# far away from both a and b: the distance to z is forced to 1 + 2
f = validate_katetov(X, ["a", "b"], {"a": 2, "b": 2})
Y = extend_one_point(f, "p")
print({q: str(Y.d("p", q)) for q in X.points})

# the midpoint profile is already realized by z
g = validate_katetov(X, ["a", "b"], {"a": 1, "b": 1})
print("reuse:", extend_one_point(g, "m", reuse_existing=True) is X)
print("fresh:", extend_one_point(g, "m").points)

try:
    validate_katetov(X, ["a", "b"], {"a": 1, "b": 4})
except KatetovViolation as exc:
    print("inadmissible:", exc.inequality, exc)

# several requests in a row; the repeated one adds nothing
S = saturate(X, [(["a"], {"a": 5}), (["a"], {"a": 5}), (["z"], {"z": "1/2"})], ["q1", "q2", "q3"])
print("after saturation:", S.points)

# an ultrametric base stays ultrametric when the profile is ultrametric too
U = validate_ultrametric(validate_metric([[0, 1, 2], [1, 0, 2], [2, 2, 0]], ["a", "b", "c"]))
h = validate_katetov(U, U.points, {"a": 2, "b": 2, "c": 1})
print("ultrametric profile:", is_ultrametric_profile(h), type(extend_one_point(h, "n")).__name__)
