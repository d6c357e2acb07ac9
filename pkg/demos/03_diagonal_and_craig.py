"""Self-reference and padding
=============================

fixed_point produces tau with tau equivalent to psi at tau's own code; the
equivalence is checked semantically under budgeted evaluation.  Craig padding
turns any enumerated stream into an elementary presentation with explicit
equivalence certificates.
"""

from conseq import classify, encode, eval_formula, fixed_point, print_formula, verify_fixed_point
from conseq.craig import craig_presentation, equivalence_certificates, pad_conjunction
from conseq.hierarchy import is_elementary
from conseq.semantics import check_proof
from conseq.syntax import And, DAtom, EqAtom, Imp, Var, parse_formula
from conseq.theories import standard_theory

# a sentence asserting its own code is of some Sigma-2-or-lower formula
psi = And(DAtom("InSigma", (2,), (Var(7),)), EqAtom(Var(9), Var(9)))
r = fixed_point(psi, 7)
print("psi class:", classify(psi), "  tau class:", classify(r.tau), "  tau nodes:", r.tau.size)

rep = verify_fixed_point(r, samples=25, budget=128)
print("unfolding:", rep.decided_pairs, "decided,", len(rep.disagreements), "disagreements")

# evaluating tau really routes through its own code
left = eval_formula(r.tau, 128, {9: 0})
right = eval_formula(psi, 128, {7: encode(r.tau), 9: 0})
print("tau =", left, " psi(code tau) =", right)

# Craig's trick
b1 = standard_theory("BSigma1")
cp = craig_presentation(b1)
print("padded presentation elementary:", is_elementary(cp.axiom_formula))
phi = b1.enumerator(2)
pad = pad_conjunction(phi, 3)
fwd, bwd = equivalence_certificates(b1, 2)
print("pad -> source proof checks:", check_proof(b1, fwd, Imp(pad, phi)))
print("source -> pad proof checks:", check_proof(b1, bwd, Imp(phi, pad)))
