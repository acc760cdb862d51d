"""Zeta functions of the two bundled cubic-polynomial partitions.

The Markov matrices carry extra periodic cycles that do not come from the
dynamics; dividing them out leaves a quotient with a cyclotomic numerator.

Run: python3 demos/cubic_zeta.py
"""

from nadyn import zeta
from nadyn.fixtures import load

for name in ("tame", "wild"):
    payload = load(name)["payload"]
    a = zeta.matrix_from_json(payload["matrix"])
    excluded = payload["excluded"]
    q = zeta.zeta_quotient(a, excluded)
    cert, ent = zeta.entropy_of(a)
    print(f"{name}: {len(a)} symbols")
    print(f"  det(I - tA) = {zeta.det_I_minus_tA(a)}")
    print(f"  excluding cycle lengths {excluded}: zeta = {q.zeta}, cyclotomic numerator: {q.numerator_cyclotomic}")
    print(f"  leading root in [{float(cert.lo):.13f}, {float(cert.hi):.13f}], entropy {ent.decimal:.9f}")
