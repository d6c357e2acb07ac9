"""The descending-sequence constructions
=========================================

Four fixed-point constructions of theory sequences, their declared classes,
slice dumps at real axiom codes, the index extraction, and the left shift.
"""

from conseq import classify, encode
from conseq.coding import machine_index
from conseq.sequences import (
    index_of,
    index_sequence,
    pi_slice_sequence,
    shift,
    sigma_slice_sequence,
    slice_contains,
    visser_sequence,
)
from conseq.syntax import parse_formula
from conseq.theories import (
    machine_stream,
    ncon_of_slice,
    rfn_instance_for_ref,
    standard_theory,
    toy_inconsistent_theory,
)
from conseq import refs

b1 = standard_theory("BSigma1")

# Visser-style sequence: every slice holds the base; while no culprit proof
# of the falsum exists, it also holds reflection-instance codes
v = visser_sequence(b1)
print("visser declared:", v.declared_class)
inst = rfn_instance_for_ref(refs.SlipExt(b1.ref, encode(v.tau), 1), parse_formula("0=0"))
print("slice 0 holds a reflection instance:", slice_contains(v, 0, encode(inst), 10**4))

# an inconsistent culprit collapses the slices to the base
toy, proof = toy_inconsistent_theory()
vt = visser_sequence(b1, toy)
inst_t = rfn_instance_for_ref(refs.SlipExt(b1.ref, encode(vt.tau), 3), parse_formula("0=0"))
print("collapsed slice rejects it:   ", slice_contains(vt, 2, encode(inst_t), 10**4))

# the Sigma-m and Pi-(m-1) slice sequences
s2 = sigma_slice_sequence(2, standard_theory("EA"))
print("sigma-slice:", s2.declared_class, "| syntactic:", classify(s2.tau))
print("  conditional axiom present:", slice_contains(s2, 0, encode(ncon_of_slice(2, s2.tau, 1)), 400))
p2 = pi_slice_sequence(2, standard_theory("BSigma2"))
print("pi-slice:   ", p2.declared_class, "| syntactic:", classify(p2.tau))

# the index sequence: stage 0's index is the least machine code satisfying
# the soundness guard
i2 = index_sequence(2, standard_theory("BSigma2"))
print("index:      ", i2.declared_class, "| syntactic:", classify(i2.tau))
y = index_of(i2, 0, 10**4)
print("  index bits:", y.bit_length(), "| == machine_index(0,0,tau,2):", y == machine_index(0, 0, encode(i2.tau), 2))
stream = machine_stream(y)
print("  stream starts with BSigma2:", all(stream(i) == standard_theory("BSigma2").enumerator(i) for i in range(3)))

# the left shift sigma*(x, y) = sigma(x+1, y)
vs = shift(v)
code = encode(b1.enumerator(0))
print("shift aligns slices:", slice_contains(vs, 0, code, 400) == slice_contains(v, 1, code, 400))
