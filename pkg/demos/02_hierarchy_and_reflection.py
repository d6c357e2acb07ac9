"""Classification and reflection principles
============================================

The classifier computes minimal syntactic classes (declared atom classes
included); the theory layer builds consistency and reflection formulas whose
classes match the standard counts.
"""

from conseq import Pi, Sigma, classify, parse_formula, prenex, print_formula
from conseq.hierarchy import collection_rewrite
from conseq.syntax import All, And, BAll, EqAtom, Ex, Add, Not, Var
from conseq.theories import con_formula, iter_ncon, ncon_formula, rfn_gamma_formula, standard_theory

print("0=0            ->", classify(parse_formula("0=0")))
print("E x0. x0=0     ->", classify(parse_formula("E x0. x0=0")))

ea = standard_theory("EA")
print("Con(EA)        ->", classify(con_formula(ea)))
for n in range(4):
    print(f"{n}-consistency  ->", classify(ncon_formula(n, ea)))
print("RFN_Sigma2(EA) ->", classify(rfn_gamma_formula(Sigma(2), ea)))
print("2Con^3(EA)     ->", classify(iter_ncon(2, 3, ea)))

# prenexing merges independent blocks up to renaming
f = And(All(0, EqAtom(Var(0), Var(0))), All(1, EqAtom(Var(1), Var(1))))
print("prenex:        ", print_formula(prenex(f)))

# the collection rewrite pulls a witness sequence out of a bounded-universal
# block and certifies the class modulo the collection base
pat = BAll(0, Var(2), Ex(1, All(5, Not(EqAtom(Add(Var(5), Var(1)), Var(0))))))
out, cls = collection_rewrite(pat, "BSigma2")
print("rewrite class: ", cls)
print("rewrite:       ", print_formula(out))
