import pytest

from conseq import coding
from conseq.craig import (
    CraigError,
    craig_member,
    craig_presentation,
    equivalence_certificates,
    pad_conjunction,
    pad_decompositions,
)
from conseq.hierarchy import is_elementary
from conseq.semantics import check_proof, eval_formula, eval_sentence
from conseq.syntax import And, Imp, parse_formula
from conseq.theories import extend, standard_theory


def test_pad_basics():
    phi = parse_formula("0=0")
    assert pad_conjunction(phi, 1) == phi
    assert pad_conjunction(phi, 3) == And(phi, And(phi, phi))
    with pytest.raises(CraigError):
        pad_conjunction(phi, 0)
    with pytest.raises(CraigError):
        pad_conjunction(parse_formula("x0=0"), 2)


def test_pad_preserves_evaluation():
    sentences = [parse_formula("0=0"), parse_formula("0=S(0)"), parse_formula("0<=S(0)")]
    for phi in sentences:
        want = eval_sentence(phi, 32)
        for s in range(1, 21):
            assert eval_sentence(pad_conjunction(phi, s), 32) == want


def test_decompositions_handle_ambiguity():
    a = parse_formula("0=0")
    f = pad_conjunction(And(a, a), 1)  # equals pad_conjunction(a, 2)
    ds = pad_decompositions(f)
    assert (And(a, a), 1) in ds
    assert (a, 2) in ds


def test_presentation_elementary_and_member():
    b1 = standard_theory("BSigma1")
    cp = craig_presentation(b1)
    assert is_elementary(cp.axiom_formula)
    for i in range(6):
        padded = cp.enumerator(i)
        assert craig_member(b1, padded)
        assert eval_formula(cp.axiom_formula, 64, {0: coding.encode(padded)}).is_true()
    # wrong multiplicity is not a member
    assert not craig_member(b1, pad_conjunction(b1.enumerator(3), 5))


def test_constant_stream_members_all_equivalent_to_constant():
    q = standard_theory("Q")
    const = extend(q, parse_formula("0=0"))

    class ConstStream:
        pass

    # a constant stream: reuse a presentation whose enumerator is constant
    from conseq.theories import TheoryPresentation
    import conseq.refs as refs

    phi = parse_formula("0<=S(0)")
    pres = TheoryPresentation(
        "const", refs.Ext(q.ref, coding.encode(phi)), q.axiom_formula, lambda i: phi, q.machine_code
    )
    cp = craig_presentation(pres)
    for i in range(5):
        padded = cp.enumerator(i)
        decs = pad_decompositions(padded)
        assert (phi, i + 1) in decs


def test_certificates_check():
    b1 = standard_theory("BSigma1")
    for i in range(10):
        phi = b1.enumerator(i)
        pad = pad_conjunction(phi, i + 1)
        fwd, bwd = equivalence_certificates(b1, i)
        assert check_proof(b1, fwd, Imp(pad, phi))
        assert check_proof(b1, bwd, Imp(phi, pad))
        # certificates are pure logic: they also check over Q
        q = standard_theory("Q")
        assert check_proof(q, fwd, Imp(pad, phi))
        assert check_proof(q, bwd, Imp(phi, pad))
