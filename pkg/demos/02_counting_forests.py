# Counting the tuples on each side of the forest identity at n = k = 3.
from rhp.enumeration import PermutationK, enumerate_R_sigma, enumerate_set, forbidden_breakdown, signed_rhs_sum

s0 = list(enumerate_set(3, 3, "S0"))
s3 = list(enumerate_set(3, 3, "S3"))
print(len(s0), "tuples in S0,", len(s3), "in S3")
print("first S0 tuple:", s0[0])

everything = enumerate_R_sigma(3, 3, PermutationK.identity(3))
print(len(everything), "tuples before removing forbidden ones")

per = forbidden_breakdown(3, 3)
for sigma, count in per.items():
    print("  R^" + sigma, count)
print(sum(per.values()), "forbidden")

# the signed sum over all sigma leaves each surviving tuple exactly once
p = signed_rhs_sum(3, 3)
print(len(p), "monomials, coefficients", set(p.terms.values()))
