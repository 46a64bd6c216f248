"""modfol: exact verification of a modular-foliation construction.

Subpackages/modules:

- ``scalars``: exact real quadratic/biquadratic number arithmetic.
- ``expr``: rational functions over Q and exterior calculus (forms, wedge, d).
- ``datafiles``: loader for the shipped formula/geometry/group data files.
- ``riccati``: Riccati triples from Painlevé VI, flatness, gauge equivalence.
- ``plane``: plane foliations, singular points, invariant curves, blow-ups.
- ``lattice``: divisor classes on the blown-up surface, index formulas,
  candidate search and the Zariski-dimension computation.
- ``groups``: the monodromy matrices, traces, braid/mapping-class orbits and
  relation checks.
- ``cli``: the ``modfol`` command-line entry point.
"""

__version__ = "1.0.0"
