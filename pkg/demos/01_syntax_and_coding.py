"""Formulas, parsing, and Goedel numbering
==========================================

The language is elementary arithmetic: 0, S, +, *, exp, =, <=, with bounded
quantifiers as primitives.  Everything round-trips through canonical text and
through arbitrary-precision codes.
"""

from conseq import decode, encode, numeral, parse_formula, print_formula
from conseq.coding import seq_at, seq_encode, subst_code
from conseq.syntax import code_literal, term_value

# parse the canonical grammar
f = parse_formula("A x0. E x1<=x0. x1=x0")
print("parsed:     ", print_formula(f))

# numerals are unary towers; code literals are the compact form used where
# actual code values must appear inside formulas
print("numeral 3:  ", print_formula(parse_formula("S(S(S(0)))=S(S(S(0)))")))
big = 2**100 + 17
lit = code_literal(big)
print("literal size", lit.size, "denotes", term_value(lit) == big)

# Goedel coding: injective, deterministic, partial inverse
c = encode(f)
print("code digits:", len(str(c)))
print("roundtrip:  ", decode(c) == f)

# finite sequences and the code-level substitution function
s = seq_encode([4, 9, 25])
print("seq at 2:   ", seq_at(s, 2))
g = parse_formula("x0=x1")
print("subst_code: ", print_formula(decode(subst_code(encode(g), 2))))
