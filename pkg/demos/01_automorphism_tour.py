# A walk through the one-variable automorphism criteria.
# Run: python demos/01_automorphism_tour.py

from fractions import Fraction

from formalauto import (
    check_thm1,
    check_thm2,
    char_poly_1d,
    index,
    parse_operator,
    polygon_1d,
)
from formalauto.cli import render_ascii

# an irregular operator: the z^3 Dz^2 term sits above the lower ordinate
P = parse_operator("1 + z*Dz + z^3*Dz^2")
N = polygon_1d(P)
print(render_ascii(N))

# the points at the lowest height give the characteristic polynomial
print("W(n) =", char_poly_1d(P).format())

report = check_thm1(P)
print("formal series:", report.verdict)

# Gevrey spaces need the first slope to be at least 1/s
for s in (0, Fraction(1, 2), 1, 2):
    print(f"  s = {s}:", check_thm2(P, s).verdict)

# drop the constant and the kernel picks up the constants
Q = parse_operator("z*Dz + z^3*Dz^2")
print("\nwithout the constant:", check_thm1(Q).verdict)

# raising the lower ordinate costs a cokernel dimension
R = parse_operator("z + z^2*Dz + z^5*Dz^2")
r = check_thm1(R)
print("shifted up by one:", r.verdict, "ker", r.ker_dim, "coker", r.coker_dim, "index", index(R))

# a Fuchsian operator keeps convergent series convergent
F = parse_operator("2 + 3*z*Dz")
print("\nFuchsian, convergent space:", check_thm2(F, 0).verdict)
