"""Independent sympy oracle for the frozen values in crates/core/tests/acceptance.rs.

Run with `python3 oracles/inner_products.py`; every line it prints is asserted
verbatim (as integers or rationals) somewhere in the Rust suite.
"""
import sympy as sp
from math import gcd
from sympy.matrices.normalforms import smith_normal_form

G = sp.Matrix([[3, 7, 49], [7, 0, 0], [49, 0, 49]])
N = sp.Matrix([[0, 0, 49], [0, 49, 7], [49, 7, 3]])
V = [(0, 7, -1), (-7, -11, 2), (0, 0, 1), (-42, -24, 5), (-98, 14, 1), (-140, -31, 9),
     (-168, -12, 7), (-21, -61, 14), (-42, -94, 19), (-329, 22, 7), (-42, -108, 23),
     (-252, -74, 19), (-273, -37, 14), (-28, -86, 21), (-56, -151, 33), (-49, -154, 39)]
V = [sp.Matrix(v) for v in V]


def ip(a, b):
    return (a.T * G * b)[0]


def is_root(v):
    n = ip(v, v)
    return n > 0 and gcd(*[int(x) for x in v]) == 1 and all((2 * x) % n == 0 for x in G * v)


assert all(is_root(v) for v in V)
assert all(ip(V[i], V[j]) <= 0 for i in range(16) for j in range(i + 1, 16))
print("norms", [ip(v, v) for v in V])

for i in range(4):
    e = V[i]
    r = sp.eye(3) - 2 * e * (e.T * G) / ip(e, e)
    print(f"r{i + 1}", r.tolist())

for i in range(4):
    for j in range(i + 1, 4):
        a = ip(V[i], V[j])
        g2 = sp.Rational(a * a, ip(V[i], V[i]) * ip(V[j], V[j]))
        print(f"pair {i + 1},{j + 1} inner {a} g^2 {g2} |g| {sp.sqrt(g2)}")

print("smith N", [smith_normal_form(N, domain=sp.ZZ)[i, i] for i in range(3)])

U = sp.Matrix([[-13, -63, -420], [-36, -175, -1164], [8, 39, 259]])
assert U.T * G * U == G
assert U * V[4] == V[13] and U * V[9] == V[15]
print("symmetry eigenvalues", [sp.N(x, 8) for x in U.eigenvals()])
