"""Exact classification, construction, and verification of free resolutions
over diagonal hypersurface rings k[x,y,z]/(x^n + y^n + z^n).

Subpackages are organized by role:

* :mod:`diagres.numeric` -- integer arithmetic: binomials, valuations, digits
* :mod:`diagres.classifier` -- finite/infinite projective-dimension verdicts
* :mod:`diagres.polyring` -- sparse exact polynomials and the closed-form families
* :mod:`diagres.pfaffian` -- alternating matrices, Pfaffians, check-adjoints
* :mod:`diagres.resolver` -- infinite-case resolutions, colon generators, socle
* :mod:`diagres.finitepd` -- finite-case Hilbert-Burch constructions
* :mod:`diagres.frobenius` -- Frobenius powers, periodicity, two-variable analogue
* :mod:`diagres.oracle` -- independent graded linear-algebra referee
* :mod:`diagres.cli` -- command line interface
"""

__version__ = "0.1.0"
