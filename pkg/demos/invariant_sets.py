"""Finite invariant sets and the normalized solutions they induce.

For maps phi_i and sets A_i an invariant set X satisfies
|phi_i^-1(A_i) & X| = |A_i & X| for every i.  Pairing every map with every
block of a partition and normalizing the cell counts of X gives a
normalized solution of the configuration system.
"""

from amen import structures as st
from amen.configuration import ConfigurationPair, enumerate_configurations
from amen.folner import InvariantSetQuery, intersect_refine, replicate_sets, search_invariant_set, solution_from_invariant_set

z6 = st.cyclic_group(6)
pair = ConfigurationPair(z6, (st.LeftTranslation(1), st.LeftTranslation(2)), st.Residue(2))
query = replicate_sets(pair.maps, pair.partition, st.window(z6, 0), 12)
w = search_invariant_set(z6, query)
print("Z6 parity: smallest invariant set", w.X, "counts", w.counts)
cert = solution_from_invariant_set(w, pair, enumerate_configurations(pair))
print("   normalized solution", [str(x) for x in cert.values])

rz = st.RightZero(6)
q = InvariantSetQuery((st.LeftTranslation(2), st.LeftTranslation(5)), ({0, 1}, {3, 4, 5}), st.window(rz, 0), 12)
print("right-zero(6): witness", search_invariant_set(rz, q).X)

lz = st.LeftZero(6)
q = InvariantSetQuery((st.LeftTranslation(0), st.LeftTranslation(1)), ({0, 2, 4}, {1, 3, 5}), st.window(lz, 0), 12)
print("left-zero(6) paradoxical pieces: witness", search_invariant_set(lz, q))

print("atoms of {0,1,2} and {2,3}:", [sorted(b) for b in intersect_refine([{0, 1, 2}, {2, 3}], st.window(z6, 0)).blocks])
