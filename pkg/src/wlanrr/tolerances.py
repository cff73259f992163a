"""Library-wide numeric tolerances.

Single source of truth: tests and the CLI import these rather than
re-declaring literals.
"""

# Bisection target for |h(x)-1| when solving for a boundary point.
BOUNDARY_SOLVE_TOL = 1e-12

# Residual |h(x*)-1| guaranteed for every returned boundary point.
BOUNDARY_RESIDUAL_TOL = 1e-10

# Band used by operations that require an *input* point to lie on the
# boundary (looser than the solver target so round-tripped points pass).
ON_BOUNDARY_TOL = 1e-8

# Half-width of the |lambda - 1| band classified as "boundary" by the
# rate-region membership test.
MEMBERSHIP_TOL = 1e-8

# Maximum bisection iterations for boundary solves.
MAX_BISECT_ITER = 200
