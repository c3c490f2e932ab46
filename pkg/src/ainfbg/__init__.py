"""A-infinity minimal models for the modular cohomology of Z/p^n semidirect Z/q.

Builds an endomorphism-complex model of the cochains of the classifying
space, transfers the multiplication to a minimal A-infinity structure on
cohomology, computes Massey powers, classifies the bidegrees where higher
operations can live, and runs the same machinery on the Koszul-dual side
(loop-space homology via the cobar construction).
"""

__version__ = "0.1.0"
