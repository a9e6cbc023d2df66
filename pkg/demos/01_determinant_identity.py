# Dodgson/Muir on a small integer matrix, then on the Laplacian of the
# complete digraph where both sides become sums over forests.
from rhp.linalg import SquareMatrix, det_exact, dodgson_muir_sides, gendodgson_sides, minor

M = SquareMatrix([[3, 7, 0, 0], [8, 1, 0, 0], [0, 0, 4, 0], [0, 0, 0, 2]])
print("det M =", det_exact(M))
print("det M[4,4] =", det_exact(minor(M, [4], [4])))

sides = dodgson_muir_sides(M, 3)
print("lhs", sides.lhs, "rhs", sides.rhs)
for sigma, term in sides.per_sigma:
    if term:
        print("  sigma", sigma, "contributes", term)

# same identity, symbolic edge weights a_ij
g = gendodgson_sides(3, 3)
print(len(g.lhs), "monomials on each side; equal:", g.holds)
print(g.rhs)
