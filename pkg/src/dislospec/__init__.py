"""dislospec: spectral and topological invariants of 1D dislocated Schrödinger operators.

Submodules
----------
potential      trig-polynomial potentials and the phase-shift family W_t
bloch          Floquet-Bloch eigenproblems, dispersion, parity blocks
dirac          Dirac points (pi, E*) and the gauge-fixed eigenbasis
coupling       the coupling curve theta(t) and its winding number
bulk           eigenframes on the (xi, t) torus, Berry curvature, Chern number
tight_binding  2x2 effective families, closed-form curvature, enclosures
dirac_line     effective Dirac operators on the line and their spectral flow
edge           dislocated Schrödinger operators on the line and Sf
scenarios      example potential pairs with predicted invariants; full pipeline
cli            command-line front end
"""

__version__ = "0.1.0"
