"""vjp: a symbolic-numeric workbench for locally variational field equations.

Core layers: exact expressions over jet coordinates (expr), jet-calculus
operators (jetgeo), the variational-sequence operators and Noether currents
(varcalc), atlas gluing and obstruction classes by periods (cech), the
independent numeric oracle (oracle), and the problem-file pipeline exposed
through a FastAPI service and a thin CLI.
"""

__version__ = "0.1.0"
