"""The selfcheck suite: deterministic invariant checks runnable from the CLI.

Each check prints one PASS/FAIL line; the runner returns nonzero when any
check fails.  The pytest suite covers the same ground (and more); this is the
scriptable entry point.
"""

from __future__ import annotations

import random

from . import coding, craig, gen, sequences, theories
from .diagonal import fixed_point, verify_fixed_point
from .hierarchy import Pi, classify
from .semantics import check_proof, eval_formula, eval_sentence
from .syntax import Imp, parse_formula, print_formula


def _check(out, name: str, ok: bool) -> bool:
    out.write(f"{'PASS' if ok else 'FAIL'} {name}\n")
    return ok


def run(out, seed: int = 0) -> int:
    rng = random.Random(seed)
    ok = True

    # coding roundtrip
    good = True
    for i in range(300):
        f = gen.random_formula(rng, 5, [0, 1])
        if coding.decode(coding.encode(f)) != f:
            good = False
            break
    ok &= _check(out, "coding-roundtrip", good)

    # print/parse roundtrip
    good = True
    for i in range(300):
        f = gen.random_formula(rng, 5, [0, 1])
        if parse_formula(print_formula(f)) != f:
            good = False
            break
    ok &= _check(out, "print-parse-roundtrip", good)

    # classification pins
    ea = theories.standard_theory("EA")
    good = all(
        classify(theories.ncon_formula(n, ea)) == Pi(n + 1) for n in range(6)
    )
    ok &= _check(out, "ncon-classification", good)

    # diagonal suite (small)
    good = True
    for kind in ("Sigma", "Pi"):
        for level in (1, 2):
            for i in range(3):
                psi = gen.hole_formula(kind, level, i)
                r = fixed_point(psi, gen.HOLE_VAR)
                if classify(r.tau) != classify(psi):
                    good = False
                rep = verify_fixed_point(r, 10, 128, seed=seed)
                if rep.disagreements:
                    good = False
    ok &= _check(out, "diagonal-suite", good)

    # craig certificates
    b1 = theories.standard_theory("BSigma1")
    good = True
    for i in range(4):
        phi = b1.enumerator(i)
        pad = craig.pad_conjunction(phi, i + 1)
        p1, p2 = craig.equivalence_certificates(b1, i)
        good &= check_proof(b1, p1, Imp(pad, phi)) and check_proof(b1, p2, Imp(phi, pad))
    ok &= _check(out, "craig-certificates", good)

    # budget monotonicity
    good = True
    for i in range(100):
        f = gen.random_decidable_sentence(rng)
        prev = None
        for b in (10, 100):
            v = eval_sentence(f, b)
            if prev is not None and prev.is_decided() and v != prev:
                good = False
            prev = v
    ok &= _check(out, "budget-monotonicity", good)

    # shift law on the visser construction
    v = sequences.visser_sequence(b1)
    vs = sequences.shift(v)
    a, b = v.tau_vars()
    good = True
    for x in range(3):
        for y in range(4):
            l = eval_formula(vs.tau, 100, {a: x, b: y})
            r = eval_formula(v.tau, 100, {a: x + 1, b: y})
            if l.is_decided() and r.is_decided() and l != r:
                good = False
    ok &= _check(out, "shift-law", good)

    return 0 if ok else 1
