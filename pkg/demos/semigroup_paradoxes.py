"""Tarski numbers of small semigroups.

A left-zero semigroup (x*y = x) splits into two pieces whose preimages
under translation are the whole carrier, so its Tarski number is 2.  A
right-zero semigroup never decomposes, and finite groups never do either.
"""

import time

from amen import structures as st
from amen.configuration import assemble, enumerate_configurations
from amen.linsolve import normalized_solution
from amen.paradox import equidecomposable, induced_pair, tarski_number

for name, s in [("left-zero(6)", st.LeftZero(6)), ("right-zero(6)", st.RightZero(6)), ("Z6", st.cyclic_group(6))]:
    t = time.perf_counter()
    result = tarski_number(s, st.all_left_translations(s), 6)
    shown = result.value if result.value is not None else f"> {result.cap}"
    print(f"{name}: Tarski number {shown}  ({time.perf_counter() - t:.2f}s)")
    if result.witness is not None:
        for label, pieces in (("A", result.witness.a_pieces), ("B", result.witness.b_pieces)):
            for p in pieces:
                print(f"   {label}: {sorted(p.region.elements)} via {st.map_label(s, p.map)}")
        pair = induced_pair(s, result.witness)
        system = assemble(enumerate_configurations(pair), pair.n, pair.m)
        print("   induced system has a normalized solution:", normalized_solution(system) is not None)

z6 = st.cyclic_group(6)
print("{0,1} ~ {1,2} in Z6 by translation:", equidecomposable({0, 1}, {1, 2}, [st.LeftTranslation(1)], z6))
