"""Pairwise comparison matrices: weights and consistency.

Build a small preference matrix, derive priority weights with the two
classical methods, and measure how inconsistent the judgments are.
"""

import numpy as np

from pcmscale import (
    Pcm,
    consistency_report,
    is_consistent,
    llsm_weights,
    make_consistent_pcm,
    principal_eigen,
)

###############################################################################
# A perfectly consistent matrix reproduces its generating weights.

weights = np.array([0.5, 1 / 3, 1 / 6])
consistent = make_consistent_pcm(weights)
print("consistent matrix:")
print(consistent.entries)

lam, w_em = principal_eigen(consistent)
print(f"\nprincipal eigenvalue: {lam:.12f}  (equals n = 3 exactly)")
print("eigenvector weights: ", np.round(w_em, 6))
print("log-least-squares:   ", np.round(llsm_weights(consistent), 6))

###############################################################################
# Real judgments are rarely consistent. Here the decision maker says
# A is 1.5x B, B is 1.7x C -- transitivity would demand A = 2.55x C,
# but they only admit 2.0x.

judged = Pcm([[1, 1.5, 2.0], [1 / 1.5, 1, 1.7], [0.5, 1 / 1.7, 1]])
print("\nis_consistent at 1e-9:", is_consistent(judged, tol=1e-9))

lam, w_em = principal_eigen(judged)
w_ll = llsm_weights(judged)
print(f"lambda_max = {lam:.6f} (> 3: the excess measures inconsistency)")
print("EM weights:  ", np.round(w_em, 6))
print("LLSM weights:", np.round(w_ll, 6))

###############################################################################
# The consistency ratio normalizes the spectral excess by the expected
# excess of a random matrix (the Random Index). 1.249 is the classical
# value for 6x6 matrices on the 1..9 scale; see demo 03 to re-derive it.

report = consistency_report(judged, ri=0.5245)  # RI for n=3, fundamental scale
print(f"\nCI = {report.ci:.6f}, CR = {report.cr:.6f}")
print("(the classical 10% rule would accept this matrix)")
