"""DS sentences and the evaluation contract
============================================

The three DS variants package the existence of a descending sequence into a
single sentence; they differ exactly at the documented theta positions.
Evaluation is three-valued and budget-monotone.
"""

from conseq import classify, eval_sentence, parse_formula
from conseq.sequences import ds_components, ds_sentence
from conseq.syntax import And, print_formula

for variant in ("slice-uniform", "index-uniform", "index-nonuniform"):
    th = ds_components(variant, 2, shift_by=1)
    conj = And(th["theta2"], And(th["theta3"], th["theta4"]))
    print(f"{variant:17s} theta2^theta3^theta4:", classify(conj), "| theta1:", classify(th["theta1"]))

u4 = ds_components("index-uniform", 2)["theta4"]
n4 = ds_components("index-nonuniform", 2)["theta4"]
print("\nuniform theta4:    ", print_formula(u4)[:100], "...")
print("non-uniform theta4:", print_formula(n4)[:100], "...")

ds = ds_sentence("index-nonuniform", 2)
print("\nDS sentence class:", classify(ds))

# three-valued budgeted truth: verdicts never flip as the budget grows
probes = ["0=0", "0=S(0)", "E x0. S(x0)=0", "A x0. x0<=S(x0)", "E x0. x0=S(S(S(0)))"]
print(f"\n{'sentence':28s} b=10    b=100   b=1000")
for text in probes:
    f = parse_formula(text)
    vs = [str(eval_sentence(f, b)) for b in (10, 100, 1000)]
    print(f"{text:28s} {vs[0]:7s} {vs[1]:7s} {vs[2]}")
