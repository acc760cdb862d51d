"""A single split that repairs two cover disks at once.

Both small disks map into the same spot of the big disk, so splitting the
big disk there fixes both orbits and the total index falls by two.

Run: python3 demos/index_drop.py
"""

from fractions import Fraction

from nadyn.disks import Disk
from nadyn.markov import AffinePiece, CoverDisk, PiecewiseSystem, adjacency, m_index, refine_to_markov
from nadyn.valued import FieldContext

ctx = FieldContext(2)
system = PiecewiseSystem(
    ctx,
    (
        AffinePiece(Disk.closed(0, 3), Fraction(1, 2), 3),
        AffinePiece(Disk.closed(2, 3), Fraction(1, 2), 2),
        AffinePiece(Disk.closed(1, 1), Fraction(1, 2), Fraction(-1, 2)),
    ),
)
cover = [CoverDisk(pc.domain, k) for k, pc in enumerate(system.pieces)]
print("steps to cover something:", [m_index(c, cover, system) for c in cover])

state = refine_to_markov(system)
for ev in state.splits:
    print(f"split {ev.target!r} via {ev.via!r}: index {ev.index_before} -> {ev.index_after}")
print("final cover:", state.disks)
print("adjacency:", adjacency(state.cover, system))
