import pytest

from conseq import coding
from conseq.diagonal import DiagonalError, FixedPointResult, diag_value, fixed_point, verify_fixed_point
from conseq.gen import HOLE_VAR, SAMPLE_VAR, hole_formula
from conseq.hierarchy import Sigma, classify
from conseq.semantics import eval_formula
from conseq.syntax import (
    And,
    DAtom,
    EqAtom,
    Ex,
    Var,
    ZERO,
    code_literal,
    free_vars,
    print_formula,
)


def test_hole_must_be_free():
    with pytest.raises(DiagonalError):
        fixed_point(EqAtom(ZERO, ZERO), 0)


def test_free_vars_of_tau():
    psi = hole_formula("Sigma", 2, 0)
    r = fixed_point(psi, HOLE_VAR)
    assert free_vars(r.tau) == free_vars(psi) - {HOLE_VAR}


def test_unfolding_identity_self_code():
    # psi: the hole equals itself -- the simplest self-referential truth
    psi = And(EqAtom(Var(HOLE_VAR), Var(HOLE_VAR)), EqAtom(Var(SAMPLE_VAR), Var(SAMPLE_VAR)))
    r = fixed_point(psi, HOLE_VAR)
    code = coding.encode(r.tau)
    left = eval_formula(r.tau, 64, {SAMPLE_VAR: 0})
    right = eval_formula(psi, 64, {HOLE_VAR: code, SAMPLE_VAR: 0})
    assert left == right and left.is_true()


def test_certificate_denotes_beta_code():
    psi = hole_formula("Pi", 1, 2)
    r = fixed_point(psi, HOLE_VAR)
    c = r.certificate_value
    beta = coding.decode(c)
    # diagonalizing beta's code at the fresh variable gives exactly tau's code
    fresh = sorted(free_vars(beta) - free_vars(r.tau))[0]
    assert diag_value(c, fresh) == coding.encode(r.tau)


def test_class_preservation_all_levels():
    for kind in ("Sigma", "Pi"):
        for level in (1, 2, 3):
            for i in range(6):
                psi = hole_formula(kind, level, i)
                r = fixed_point(psi, HOLE_VAR)
                assert classify(r.tau) == classify(psi)


def test_delta0_promotes_to_sigma1():
    psi = EqAtom(Var(HOLE_VAR), Var(HOLE_VAR))
    r = fixed_point(psi, HOLE_VAR)
    assert classify(r.tau) == Sigma(1)


def test_determinism():
    psi = hole_formula("Sigma", 2, 5)
    r1 = fixed_point(psi, HOLE_VAR)
    r2 = fixed_point(psi, HOLE_VAR)
    assert r1.tau == r2.tau
    assert print_formula(r1.tau) == print_formula(r2.tau)


def test_verify_reports_zero_disagreements():
    psi = hole_formula("Pi", 2, 1)
    r = fixed_point(psi, HOLE_VAR)
    rep = verify_fixed_point(r, 50, 128)
    assert rep.all_agree
    assert rep.decided_pairs == 50  # the corpus decides under every assignment


def test_verify_deterministic_for_fixed_seed():
    psi = hole_formula("Sigma", 1, 4)
    r = fixed_point(psi, HOLE_VAR)
    a = verify_fixed_point(r, 20, 100, seed=3)
    b = verify_fixed_point(r, 20, 100, seed=3)
    assert a == b


def test_corrupted_tau_fails_verification():
    # a hole-sensitive psi: tau says its code is of something above Pi-0;
    # redirecting the Diag literal at the code of 0=0 flips that verdict
    from conseq.syntax import Not, parse_formula

    psi = And(
        Not(DAtom("InPi", (0,), (Var(HOLE_VAR),))),
        EqAtom(Var(SAMPLE_VAR), Var(SAMPLE_VAR)),
    )
    r = fixed_point(psi, HOLE_VAR)
    good = verify_fixed_point(r, 10, 128)
    assert good.all_agree and good.decided_pairs == 10

    # mutate one node: redirect the certificate literal at a different code
    tau = r.tau
    assert isinstance(tau, Ex)
    body = tau.body
    assert isinstance(body, And)
    diag = body.left
    decoy = coding.encode(parse_formula("0=0"))
    bad_diag = DAtom("Diag", (), (code_literal(decoy), diag.args[1], diag.args[2]))
    corrupted = Ex(tau.var, And(bad_diag, body.right))
    bad = FixedPointResult(tau=corrupted, psi=psi, hole=HOLE_VAR, certificate=r.certificate)
    rep = verify_fixed_point(bad, 10, 128)
    assert not rep.all_agree
