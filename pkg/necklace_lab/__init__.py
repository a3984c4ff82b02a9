"""
necklace_lab
------------
Exact distributions, generating functions, counting and simulation for the
random two-colour necklace process: start from one white and one black bead,
insert a bead into a uniformly chosen gap, colour it white only when both
neighbours are black.

Modules:
- core         necklace state and the insertion rule
- series       exact polynomials and truncated power series
- exactdist    law of the white-bead count, PGFs, PDE, closed form
- counting     number of distinct necklaces and brute-force oracles
- montecarlo   seeded simulation and goodness of fit
- exports      CSV / JSON emission through pandas
- verify       acceptance checks
- cli          `necklace` command line
"""

__version__ = "1.0.0"
