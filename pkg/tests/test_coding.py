import random

import pytest

from conseq.coding import (
    ArityMismatch,
    NotACode,
    decode,
    encode,
    machine_index,
    machine_parts,
    seq_at,
    seq_decode,
    seq_encode,
    subst_code,
)
from conseq.gen import random_formula
from conseq.syntax import EqAtom, Var, ZERO, numeral, parse_formula, substitute


def test_zero_constant():
    # sentinel byte 0x5A followed by the zero tag 0x01
    assert encode(ZERO) == 0x5A01


def test_roundtrip_corpus():
    rng = random.Random(23)
    seen = set()
    for _ in range(2000):
        f = random_formula(rng, 6, [0, 1, 2])
        c = encode(f)
        assert decode(c) == f
        seen.add(c)
    # injectivity: distinct formulas got distinct codes across the corpus
    assert len(seen) >= 1500


def test_collision_search():
    rng = random.Random(29)
    pairs = 0
    while pairs < 2000:
        f = random_formula(rng, 4, [0, 1])
        g = random_formula(rng, 4, [0, 1])
        if f == g:
            continue
        assert encode(f) != encode(g)
        pairs += 1


def test_decode_junk_small_values():
    failures = 0
    for n in range(0, 300):
        try:
            decode(n)
        except NotACode:
            failures += 1
    assert failures >= 299  # 0x5A01 (= 23041) is far above this range


def test_decode_is_partial_not_junk_tolerant():
    c = encode(parse_formula("0=0"))
    with pytest.raises(NotACode):
        decode(c + 1)


def test_seq_roundtrip():
    assert seq_decode(seq_encode([])) == []
    s = seq_encode([7, 7, 7])
    assert seq_at(s, 2) == 7
    rng = random.Random(31)
    for _ in range(100):
        items = [rng.randrange(0, 1 << rng.randrange(1, 64)) for _ in range(rng.randrange(0, 64))]
        s = seq_encode(items)
        assert seq_decode(s) == items
        for k, v in enumerate(items):
            assert seq_at(s, k) == v


def test_seq_component_below_code():
    rng = random.Random(37)
    for _ in range(50):
        items = [rng.randrange(0, 1 << 40) for _ in range(rng.randrange(1, 8))]
        s = seq_encode(items)
        assert all(v < s for v in items)


def test_seq_out_of_range():
    with pytest.raises(IndexError):
        seq_at(seq_encode([1, 2]), 2)


def test_subst_code_basic():
    z = encode(EqAtom(Var(0), Var(1)))
    expect = encode(EqAtom(numeral(1), Var(1)))
    assert subst_code(z, 0) == expect


def test_subst_code_closed_unchanged():
    z = encode(parse_formula("0=0"))
    for n in (0, 3, 17):
        assert subst_code(z, n) == z


def test_subst_code_matches_decode_substitute_encode():
    rng = random.Random(41)
    checked = 0
    while checked < 300:
        f = random_formula(rng, 4, [0, 1])
        from conseq.syntax import free_vars

        fv = sorted(free_vars(f))
        if len(fv) > 2:
            continue
        n = rng.randrange(0, 5)
        z = encode(f)
        want = encode(substitute(f, fv[0], numeral(n + 1))) if fv else z
        assert subst_code(z, n) == want
        checked += 1


def test_subst_code_errors():
    with pytest.raises(NotACode):
        subst_code(5, 0)
    f = parse_formula("((x0=x1\\/x1=x2)\\/x2=x3)")
    with pytest.raises(ArityMismatch):
        subst_code(encode(f), 0)


def test_machine_index_monotone_and_same_enumeration():
    z = encode(EqAtom(Var(0), Var(1)))
    prev = None
    for w in range(101):
        c = machine_index(0, w, z, 2)
        assert machine_parts(c) == (2, 0, z)
        if prev is not None:
            assert c > prev
        prev = c


def test_machine_index_distinct_codes_same_description():
    z = encode(EqAtom(Var(0), Var(1)))
    c0 = machine_index(1, 0, z, 2)
    c1 = machine_index(1, 1, z, 2)
    assert c0 != c1
    assert machine_parts(c0) == machine_parts(c1)


def test_machine_index_rejects_non_code():
    with pytest.raises(NotACode):
        machine_index(0, 0, 6, 2)
