import pytest

from conseq import coding, refs, theories
from conseq.diagonal import verify_fixed_point
from conseq.hierarchy import Pi, Sigma, classify
from conseq.semantics import eval_formula
from conseq.sequences import (
    SequenceError,
    ds_components,
    ds_sentence,
    index_of,
    index_sequence,
    pi_slice_sequence,
    shift,
    sigma_slice_sequence,
    slice_axioms,
    slice_contains,
    spec_from_json,
    spec_to_json,
    visser_sequence,
)
from conseq.syntax import (
    All,
    And,
    BAll,
    DAtom,
    Ex,
    Not,
    Succ,
    Var,
    free_vars,
    parse_formula,
    substitute,
)
from conseq.theories import rfn_instance_for_ref, standard_theory, toy_inconsistent_theory


BUDGET = 2000


def _rfn_candidate(spec, n, phi):
    z = coding.encode(spec.tau)
    ref = refs.SlipExt(spec.base.ref, z, n + 1)
    return coding.encode(rfn_instance_for_ref(ref, phi))


# ---------------------------------------------------------------------------
# Visser


def test_visser_trigger_matches_display_shape():
    b1 = standard_theory("BSigma1")
    v = visser_sequence(b1)
    psi = v.fixed_point_result.psi
    # disjunction: base membership or (bounded-universal no-proof trigger /\ instance membership)
    from conseq.syntax import Or

    assert isinstance(psi, Or)
    trigger = psi.right.left
    assert isinstance(trigger, BAll)
    assert isinstance(trigger.body, Not)
    atom = trigger.body.arg
    assert atom.name == "PrfIdx"
    assert atom.params == ("ZFstub",)


def test_visser_slice0_contains_base_and_rfn_instances():
    b1 = standard_theory("BSigma1")
    v = visser_sequence(b1)
    for i in range(3):
        code = coding.encode(b1.enumerator(i))
        assert slice_contains(v, 0, code, BUDGET).is_true()
    for phi in (parse_formula("0=0"), parse_formula("x0<=S(x0)")):
        assert slice_contains(v, 0, _rfn_candidate(v, 0, phi), BUDGET).is_true()
    # junk stays out
    assert slice_contains(v, 0, 12345, BUDGET).is_false()


def test_visser_toy_culprit_collapses():
    b1 = standard_theory("BSigma1")
    toy, proof = toy_inconsistent_theory()
    from conseq.semantics import check_proof
    from conseq.syntax import falsum

    assert len(proof.steps) == 2
    assert check_proof(toy, proof, falsum())
    vt = visser_sequence(b1, toy)
    for n in (2, 3):
        # reflection-instance codes are rejected
        cand = _rfn_candidate(vt, n, parse_formula("0=0"))
        assert slice_contains(vt, n, cand, BUDGET).is_false()
        # base axioms stay
        assert slice_contains(vt, n, coding.encode(b1.enumerator(0)), BUDGET).is_true()
        # nothing else in the scanned range
        for k, verdict in slice_axioms(vt, n, 60, BUDGET):
            assert verdict.is_false()


def test_slice_axioms_ordering_and_monotonicity():
    b1 = standard_theory("BSigma1")
    v = visser_sequence(b1)
    rows1 = slice_axioms(v, 0, 40, 200)
    rows2 = slice_axioms(v, 0, 40, 400)
    assert [k for k, _ in rows1] == list(range(41))
    for (k1, t1), (k2, t2) in zip(rows1, rows2):
        assert k1 == k2
        if t1.is_decided():
            assert t1 == t2


def test_slice_axioms_candidates_kwarg():
    b1 = standard_theory("BSigma1")
    v = visser_sequence(b1)
    code = coding.encode(b1.enumerator(0))
    rows = slice_axioms(v, 0, 0, BUDGET, candidates=[code, 5])
    assert rows[0][0] == 5 and rows[0][1].is_false()
    assert rows[1][0] == code and rows[1][1].is_true()


def test_slice_axioms_wrong_encoding():
    i2 = index_sequence(2, standard_theory("BSigma2"))
    with pytest.raises(SequenceError):
        slice_axioms(i2, 0, 10, 100)
    v = visser_sequence(standard_theory("BSigma1"))
    with pytest.raises(SequenceError):
        index_of(v, 0, 100)


# ---------------------------------------------------------------------------
# Sigma and Pi slice constructions


def test_sigma_slice_classes():
    for m in (1, 2, 3):
        s = sigma_slice_sequence(m, standard_theory("EA"))
        assert s.declared_class == Sigma(m)
        assert classify(s.tau) == Sigma(m)
        assert s.ppi_documented  # bookkeeping flag only; provability unchecked


def test_sigma_slice_contains_base_axioms():
    s = sigma_slice_sequence(2, standard_theory("EA"))
    ea = standard_theory("EA")
    for i in range(3):
        assert slice_contains(s, 0, coding.encode(ea.enumerator(i)), 500).is_true()


def test_sigma_slice_guard_vacuous_at_zero():
    s = sigma_slice_sequence(2, standard_theory("EA"))
    psi = s.fixed_point_result.psi
    two_a = psi.right.left
    assert isinstance(two_a, Ex)
    # at n = 0 the guard block is vacuously true (antecedents fail below 1)
    v = eval_formula(two_a, 100, {0: 0, 1: 0, 2: 0})
    assert v.is_true()


def test_sigma_slice_conditional_axiom_is_next_slice_reflection():
    s = sigma_slice_sequence(2, standard_theory("EA"))
    target = coding.encode(theories.ncon_of_slice(2, s.tau, 1))
    assert slice_contains(s, 0, target, 400).is_true()
    # the reflection sentence for the wrong slice is rejected
    wrong = coding.encode(theories.ncon_of_slice(2, s.tau, 2))
    assert slice_contains(s, 0, wrong, 400).is_false()
    # and slice 1 accepts its own
    target1 = coding.encode(theories.ncon_of_slice(2, s.tau, 2))
    assert slice_contains(s, 1, target1, 400).is_true()


def test_pi_slice_classes_and_padding():
    for m in (2, 3):
        p = pi_slice_sequence(m, standard_theory(f"BSigma{m}"))
        assert p.declared_class == Pi(m - 1, modulo=f"BSigma{m}")
        assert classify(p.tau) == Sigma(m)  # collection-eligible syntactic form
    p2 = pi_slice_sequence(2, standard_theory("BSigma2"))
    from conseq.craig import pad_conjunction

    mcon = theories.ncon_of_slice(2, p2.tau, 1)
    padded3 = coding.encode(pad_conjunction(mcon, 3))
    assert slice_contains(p2, 0, padded3, 400).is_true()
    # base axioms shared with the sigma construction's slice 0
    b2 = standard_theory("BSigma2")
    s2 = sigma_slice_sequence(2, b2)
    for i in range(3):
        code = coding.encode(b2.enumerator(i))
        assert slice_contains(p2, 0, code, 400).is_true()
        assert slice_contains(s2, 0, code, 400).is_true()


def test_pi_slice_requires_m_at_least_2():
    with pytest.raises(SequenceError):
        pi_slice_sequence(1, standard_theory("BSigma1"))


# ---------------------------------------------------------------------------
# Index construction


def test_index_m1_class():
    i1 = index_sequence(1, standard_theory("BSigma1"))
    assert i1.declared_class == Pi(1, modulo="BSigma1")
    assert classify(i1.tau) == Pi(1)


def test_index_classes_and_theta_shape():
    i2 = index_sequence(2, standard_theory("BSigma2"))
    assert i2.declared_class == Pi(2, modulo="BSigma2")
    psi = i2.fixed_point_result.psi
    # theta: bounded-universal block guarded by class membership and
    # existential-closure provability, concluding sequence-witness truth
    theta = psi.right.left.body  # fallback disjunct: All(s, Not(theta))
    atoms = {a.name for a in _atoms(psi)}
    assert {"MachIdx", "PrfEx", "InPi", "TrueSeqAt"} <= atoms


def _atoms(f):
    from conseq.syntax import Formula

    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, DAtom):
            yield g
        stack.extend(c for c in g._children() if isinstance(c, Formula))


def test_index_of_returns_machine_code():
    i2 = index_sequence(2, standard_theory("BSigma2"))
    y = index_of(i2, 0, 10_000)
    assert y is not None
    z = coding.encode(i2.tau)
    assert y == coding.machine_index(0, 0, z, 2)
    stream = theories.machine_stream(y)
    b2 = standard_theory("BSigma2")
    assert all(stream(i) == b2.enumerator(i) for i in range(3))
    # stability under budget doubling
    assert index_of(i2, 0, 20_000) == y


def test_index_of_budget_zero_unknown():
    i2 = index_sequence(2, standard_theory("BSigma2"))
    assert index_of(i2, 0, 0) is None


def test_index_small_values_decidedly_false():
    i2 = index_sequence(2, standard_theory("BSigma2"))
    a, b = i2.tau_vars()
    for y in range(4):
        assert eval_formula(i2.tau, 16, {a: 0, b: y}).is_false()


# ---------------------------------------------------------------------------
# Shift


@pytest.mark.parametrize("maker", ["visser", "sigma", "pi", "index"])
def test_shift_law(maker):
    if maker == "visser":
        spec = visser_sequence(standard_theory("BSigma1"))
    elif maker == "sigma":
        spec = sigma_slice_sequence(2, standard_theory("EA"))
    elif maker == "pi":
        spec = pi_slice_sequence(2, standard_theory("BSigma2"))
    else:
        spec = index_sequence(2, standard_theory("BSigma2"))
    st = shift(spec)
    a, b = spec.tau_vars()
    for x in range(3):
        for y in range(4):
            l = eval_formula(st.tau, 60, {a: x, b: y})
            r = eval_formula(spec.tau, 60, {a: x + 1, b: y})
            if l.is_decided() and r.is_decided():
                assert l == r


def test_double_shift_is_offset_two():
    spec = visser_sequence(standard_theory("BSigma1"))
    a, _ = spec.tau_vars()
    twice = shift(shift(spec))
    direct = substitute(spec.tau, a, Succ(Succ(Var(a))))
    assert twice.tau == direct


def test_shift_slice_alignment():
    spec = visser_sequence(standard_theory("BSigma1"))
    st = shift(spec)
    b1 = standard_theory("BSigma1")
    code = coding.encode(b1.enumerator(1))
    assert slice_contains(st, 0, code, 500) == slice_contains(spec, 1, code, 500)


# ---------------------------------------------------------------------------
# Fixed-point and declared-class conformance across constructions


def test_all_constructions_pass_unfolding():
    specs = [
        visser_sequence(standard_theory("BSigma1")),
        sigma_slice_sequence(2, standard_theory("EA")),
        pi_slice_sequence(2, standard_theory("BSigma2")),
        index_sequence(2, standard_theory("BSigma2")),
    ]
    for spec in specs:
        rep = verify_fixed_point(spec.fixed_point_result, 50, 64)
        assert rep.all_agree, spec.construction


# ---------------------------------------------------------------------------
# DS sentences


def test_ds_requires_m_at_least_2():
    with pytest.raises(SequenceError):
        ds_sentence("index-uniform", 1)


def test_ds_variants_differ_exactly_at_documented_positions():
    for m in (2, 3):
        u = ds_components("index-uniform", m)
        n = ds_components("index-nonuniform", m)
        assert u["theta1"] == n["theta1"]
        assert u["theta2"] == n["theta2"]
        assert u["theta3"] == n["theta3"]
        assert u["theta4"] != n["theta4"]
        s = ds_components("slice-uniform", m)
        assert s["theta1"] != u["theta1"]


def test_ds_theta4_scope_placement():
    u = ds_components("index-uniform", 2)
    n = ds_components("index-nonuniform", 2)
    # uniform: the guarded universal sits inside the provability atom
    u4 = u["theta4"]
    inner_u = u4.body.body.right  # A x A y (TrueClAt -> E p PrfGoal(refl))
    assert isinstance(inner_u, Ex)
    assert inner_u.body.name == "PrfGoal" and inner_u.body.params[0] == "refl"
    # non-uniform: the universal is outside, only the reflection of the next
    # index is proved
    n4 = n["theta4"]
    inner_n = n4.body.body.right
    assert isinstance(inner_n, All)
    prf = inner_n.body.right.body
    assert prf.name == "PrfGoal" and prf.params[0] == "connum"


def test_ds_block_classes():
    for variant in ("slice-uniform", "index-uniform", "index-nonuniform"):
        for m in (2, 3):
            th = ds_components(variant, m, shift_by=1)
            conj = And(th["theta2"], And(th["theta3"], th["theta4"]))
            assert classify(conj) == Pi(m), (variant, m)


def test_ds_sentence_structure():
    f = ds_sentence("index-uniform", 2)
    assert isinstance(f, Ex)
    assert free_vars(f) == frozenset()
    guard = f.body.left
    assert guard.name == "InSigma" and guard.params == (2,)


def test_ds_shift_by_builds_bumped_arguments():
    th0 = ds_components("index-uniform", 2, shift_by=0)
    th1 = ds_components("index-uniform", 2, shift_by=1)
    assert th0["theta2"] != th1["theta2"]


# ---------------------------------------------------------------------------
# Serialization


def test_spec_json_roundtrip():
    for spec in (
        visser_sequence(standard_theory("BSigma1")),
        sigma_slice_sequence(2, standard_theory("EA")),
        index_sequence(2, standard_theory("BSigma2")),
    ):
        text = spec_to_json(spec)
        back = spec_from_json(text)
        assert back.tau == spec.tau
        assert back.declared_class == spec.declared_class
        assert back.construction == spec.construction
        assert spec_to_json(back) == text
