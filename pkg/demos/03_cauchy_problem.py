# Cauchy problems in two variables: reduce to a family of ODEs in z, then cascade in t.
# Run: python demos/03_cauchy_problem.py

from formalauto import check_thm3, parse_expression, parse_operator, reduce_to_family, solve_cauchy_2d
from formalauto.spectral import char_poly_2d

P = parse_operator("Dt + t*Dt^2 + z*t*Dt^2*Dz")
fam = reduce_to_family(P)
print("m =", fam.m)
for n in range(4):
    print(f"  n = {n}:", fam.at(n))

print("W(n, k) =", char_poly_2d(P, fam.m, 0).format())
report = check_thm3(P)
print("verdict:", report.verdict, "via", report.condition_b.certificate)

sol = solve_cauchy_2d(P, 1, parse_expression("1 + z", dim=2), [parse_expression("z^2")], 4, 4)
print("\nu =", sol.u)

# the wave equation with d'Alembert's answer
W = parse_operator("Dt^2 - Dz^2")
wave = solve_cauchy_2d(W, 2, parse_expression("0", dim=2), [parse_expression("z^3"), parse_expression("0")], 5, 5)
print("wave:", wave.u)
