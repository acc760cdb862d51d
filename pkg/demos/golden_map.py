"""Build the 2-adic map with golden-mean entropy and check it three ways.

Run: python3 demos/golden_map.py
"""

from nadyn.markov import analyze
from nadyn.realizer import choose_M, realize
from nadyn.valued import FieldContext

a = [[1, 1], [1, 0]]
r = realize(a, ctx=FieldContext(2), seeds="paper", M=14)
print("pieces:")
for disk, (alpha, beta) in zip(r.arrangement.terminal_disks, r.arrangement.maps):
    print(f"  {disk!r}: z -> {alpha}*z + {beta}")
print("map:", r.expr)
print("all certificates pass:", r.report.ok)
print("smallest M the escape bounds allow:", choose_M(r.arrangement))

# Analyze the piecewise system from scratch, without reusing the matrix.
rep = analyze(r.arrangement.system())
print("recovered adjacency:", rep.adjacency)
print("zeta:", rep.zeta)
e = rep.entropy
print(f"entropy: {e.decimal:.12f} in [{e.lo:.12f}, {e.hi:.12f}]")
