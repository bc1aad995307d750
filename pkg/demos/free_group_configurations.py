"""Configurations of the free group F(a, b) under left translation by a and b.

The partition splits reduced words by first letter: words starting with a,
words starting with b, and everything else.  The configuration system has
a non-zero solution but no non-negative normalized one, so the two
verdicts part ways on this instance.
"""

from amen import structures as st
from amen.configuration import ConfigurationPair, assemble, cells, enumerate_configurations
from amen.linsolve import decide, rank, verify
from amen.paradox import classical_free_group_decomposition, verify_decomposition
from amen.words import format_word

f2 = st.FreeGroup(2)
pair = ConfigurationPair(f2, (st.LeftTranslation((1,)), st.LeftTranslation((2,))), st.FirstLetter(2))
conset = enumerate_configurations(pair)
print(f"{len(conset)} configurations, grade {conset.exactness.value} (certified radius {conset.radius})")
for c in cells(pair, conset, st.window(f2, 2)):
    print(" ", c.config, "witnesses in ball(2):", ", ".join(format_word(w) for w in c.members))

system = assemble(conset, pair.n, pair.m)
print(f"system {system.shape[0]}x{system.shape[1]}, rank {rank(system)}")
print(system.dense())

v = decide(system)
print("non-zero solution:", [str(x) for x in v.nonzero.values], verify(system, v.nonzero))
print("normalized solution: none; Farkas dual y =", [str(x) for x in v.normalized.y], verify(system, v.normalized))

rep = verify_decomposition(f2, classical_free_group_decomposition(), st.window(f2, 6))
print("classical four-piece decomposition valid on", rep.scope, "->", rep.valid)
