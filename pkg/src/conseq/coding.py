"""Canonical injective coding of terms, formulas, proofs, and sequences.

The scheme (normative description in docs/coding.md): every object serializes
to a self-delimiting byte string of tag bytes and minimal varints; the code is
the integer value of the sentinel byte 0x5A followed by that string.  Decoding
is exact and partial: integers outside the image raise NotACode.

Codes are astronomically large for any real formula, which is the honest
situation this toolkit works in: slice dumps over small ranges see only
non-codes, and membership of real formulas is tested at their actual codes.
"""

from __future__ import annotations

from typing import Union

from . import refs
from .syntax import (
    Add,
    All,
    And,
    BAll,
    BEx,
    DAtom,
    EqAtom,
    Ex,
    Exp,
    Formula,
    Imp,
    LeAtom,
    Mul,
    Not,
    Or,
    Succ,
    Term,
    Var,
    Zero,
    ZERO,
    numeral,
    substitute,
    free_vars,
)

SENTINEL = 0x5A

T_ZERO = 0x01
T_VAR = 0x02
T_SUCC = 0x03
T_ADD = 0x04
T_MUL = 0x05
T_EXP = 0x06

F_EQ = 0x10
F_LE = 0x11
F_ATOM = 0x12
F_NOT = 0x13
F_AND = 0x14
F_OR = 0x15
F_IMP = 0x16
F_ALL = 0x17
F_EX = 0x18
F_BALL = 0x19
F_BEX = 0x1A

P_NAT = 0x20
P_STR = 0x21
P_REF = 0x22
P_FORMULA = 0x23
P_TERM = 0x24

R_NAMED = 0x01
R_EXT = 0x02
R_SLIPEXT = 0x03
R_MOMEGA = 0x04
R_MACH = 0x05
R_CRAIG = 0x06

PR_PROOF = 0x30
J_AXIOM = 0x31
J_LOGICAL = 0x32
J_MP = 0x33
J_GEN = 0x34

S_SEQ = 0x40

MACHINE_DESC_TAG = 7  # first item of a machine description sequence


class NotACode(ValueError):
    pass


class ArityMismatch(ValueError):
    pass


def _varint(n: int) -> bytes:
    if n < 0:
        raise ValueError("varint of negative")
    out = bytearray()
    while True:
        b = n & 0x7F
        n >>= 7
        if n:
            out.append(b | 0x80)
        else:
            out.append(b)
            return bytes(out)


def _nat_bytes(n: int) -> bytes:
    if n == 0:
        return _varint(0)
    raw = n.to_bytes((n.bit_length() + 7) // 8, "big")
    return _varint(len(raw)) + raw


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.i = 0

    def byte(self) -> int:
        if self.i >= len(self.data):
            raise NotACode("truncated")
        b = self.data[self.i]
        self.i += 1
        return b

    def varint(self) -> int:
        shift = 0
        val = 0
        while True:
            b = self.byte()
            val |= (b & 0x7F) << shift
            if not (b & 0x80):
                if b == 0 and shift != 0:
                    raise NotACode("non-minimal varint")
                return val
            shift += 7
            if shift > 64 * 7:
                raise NotACode("varint too long")

    def nat(self) -> int:
        ln = self.varint()
        if ln == 0:
            return 0
        if self.i + ln > len(self.data):
            raise NotACode("truncated nat")
        raw = self.data[self.i : self.i + ln]
        self.i += ln
        if raw[0] == 0:
            raise NotACode("non-minimal nat")
        return int.from_bytes(raw, "big")

    def take(self, ln: int) -> bytes:
        if self.i + ln > len(self.data):
            raise NotACode("truncated bytes")
        raw = self.data[self.i : self.i + ln]
        self.i += ln
        return raw

    def done(self) -> bool:
        return self.i == len(self.data)


# ---------------------------------------------------------------------------
# Serialization (iterative over the tree)


def _ser_ref(r, out: bytearray) -> None:
    if isinstance(r, str):
        r = refs.Named(r)
    if isinstance(r, refs.Named):
        raw = r.name.encode("utf-8")
        out.append(R_NAMED)
        out += _varint(len(raw))
        out += raw
    elif isinstance(r, refs.Ext):
        out.append(R_EXT)
        _ser_ref(r.base, out)
        out += _nat_bytes(r.code)
    elif isinstance(r, refs.SlipExt):
        out.append(R_SLIPEXT)
        _ser_ref(r.base, out)
        out += _nat_bytes(r.z)
        out += _nat_bytes(r.n)
    elif isinstance(r, refs.MOmega):
        out.append(R_MOMEGA)
        out += _nat_bytes(r.m)
        _ser_ref(r.base, out)
    elif isinstance(r, refs.Mach):
        out.append(R_MACH)
        out += _nat_bytes(r.code)
    elif isinstance(r, refs.CraigRef):
        out.append(R_CRAIG)
        _ser_ref(r.base, out)
    else:
        raise TypeError(f"not a theory reference: {r!r}")


def _ser_param(p, out: bytearray) -> None:
    if isinstance(p, bool):
        raise TypeError("bool is not a parameter")
    if isinstance(p, int):
        out.append(P_NAT)
        out += _nat_bytes(p)
    elif isinstance(p, str):
        raw = p.encode("utf-8")
        out.append(P_STR)
        out += _varint(len(raw))
        out += raw
    elif isinstance(p, Formula):
        out.append(P_FORMULA)
        _ser_node(p, out)
    elif isinstance(p, Term):
        out.append(P_TERM)
        _ser_node(p, out)
    else:
        out.append(P_REF)
        _ser_ref(p, out)


def _ser_node(node, out: bytearray) -> None:
    stack = [node]
    while stack:
        x = stack.pop()
        if isinstance(x, tuple):  # deferred raw bytes
            out += x[0]
            continue
        if isinstance(x, Zero):
            out.append(T_ZERO)
        elif isinstance(x, Var):
            out.append(T_VAR)
            out += _varint(x.index)
        elif isinstance(x, Succ):
            out.append(T_SUCC)
            stack.append(x.arg)
        elif isinstance(x, Add):
            out.append(T_ADD)
            stack.append(x.right)
            stack.append(x.left)
        elif isinstance(x, Mul):
            out.append(T_MUL)
            stack.append(x.right)
            stack.append(x.left)
        elif isinstance(x, Exp):
            out.append(T_EXP)
            stack.append(x.power)
            stack.append(x.base)
        elif isinstance(x, EqAtom):
            out.append(F_EQ)
            stack.append(x.right)
            stack.append(x.left)
        elif isinstance(x, LeAtom):
            out.append(F_LE)
            stack.append(x.right)
            stack.append(x.left)
        elif isinstance(x, DAtom):
            out.append(F_ATOM)
            raw = x.name.encode("utf-8")
            out += _varint(len(raw))
            out += raw
            out += _varint(len(x.params))
            for p in x.params:
                _ser_param(p, out)
            out += _varint(len(x.args))
            for a in reversed(x.args):
                stack.append(a)
        elif isinstance(x, Not):
            out.append(F_NOT)
            stack.append(x.arg)
        elif isinstance(x, And):
            out.append(F_AND)
            stack.append(x.right)
            stack.append(x.left)
        elif isinstance(x, Or):
            out.append(F_OR)
            stack.append(x.right)
            stack.append(x.left)
        elif isinstance(x, Imp):
            out.append(F_IMP)
            stack.append(x.right)
            stack.append(x.left)
        elif isinstance(x, All):
            out.append(F_ALL)
            out += _varint(x.var)
            stack.append(x.body)
        elif isinstance(x, Ex):
            out.append(F_EX)
            out += _varint(x.var)
            stack.append(x.body)
        elif isinstance(x, BAll):
            out.append(F_BALL)
            out += _varint(x.var)
            stack.append(x.body)
            stack.append(x.bound)
        elif isinstance(x, BEx):
            out.append(F_BEX)
            out += _varint(x.var)
            stack.append(x.body)
            stack.append(x.bound)
        else:
            raise TypeError(f"not encodable: {x!r}")


def serialize(node) -> bytes:
    out = bytearray()
    _ser_node(node, out)
    return bytes(out)


# ---------------------------------------------------------------------------
# Deserialization (iterative with reduction frames)

_TERM_ARITY = {T_ZERO: 0, T_VAR: 0, T_SUCC: 1, T_ADD: 2, T_MUL: 2, T_EXP: 2}


def _read_ref(r: _Reader):
    kind = r.byte()
    if kind == R_NAMED:
        ln = r.varint()
        name = r.take(ln).decode("utf-8", errors="strict")
        return refs.Named(name)
    if kind == R_EXT:
        base = _read_ref(r)
        return refs.Ext(base, r.nat())
    if kind == R_SLIPEXT:
        base = _read_ref(r)
        z = r.nat()
        n = r.nat()
        return refs.SlipExt(base, z, n)
    if kind == R_MOMEGA:
        m = r.nat()
        return refs.MOmega(m, _read_ref(r))
    if kind == R_MACH:
        return refs.Mach(r.nat())
    if kind == R_CRAIG:
        return refs.CraigRef(_read_ref(r))
    raise NotACode(f"bad ref kind {kind}")


def _read_param(r: _Reader):
    kind = r.byte()
    if kind == P_NAT:
        return r.nat()
    if kind == P_STR:
        ln = r.varint()
        return r.take(ln).decode("utf-8", errors="strict")
    if kind == P_REF:
        ref = _read_ref(r)
        # Bare named references normalize to plain strings (parse-stable form).
        return ref.name if isinstance(ref, refs.Named) else ref
    if kind == P_FORMULA:
        return _read_node(r)
    if kind == P_TERM:
        return _read_node(r)
    raise NotACode(f"bad param kind {kind}")


def _read_node(r: _Reader):
    # frames: (builder-tag, static-data, want, got-list)
    frames: list[list] = []
    result = None
    while True:
        if result is None:
            tag = r.byte()
            if tag == T_ZERO:
                result = ZERO
            elif tag == T_VAR:
                result = Var(r.varint())
            elif tag == T_SUCC:
                frames.append(["succ", None, 1, []])
                continue
            elif tag in (T_ADD, T_MUL, T_EXP):
                frames.append([{T_ADD: "add", T_MUL: "mul", T_EXP: "exp"}[tag], None, 2, []])
                continue
            elif tag == F_EQ:
                frames.append(["eq", None, 2, []])
                continue
            elif tag == F_LE:
                frames.append(["le", None, 2, []])
                continue
            elif tag == F_ATOM:
                ln = r.varint()
                name = r.take(ln).decode("utf-8", errors="strict")
                nparams = r.varint()
                if nparams > 64:
                    raise NotACode("too many params")
                params = tuple(_read_param(r) for _ in range(nparams))
                nargs = r.varint()
                if nargs > 64:
                    raise NotACode("too many args")
                if nargs == 0:
                    result = DAtom(name, params, ())
                else:
                    frames.append(["atom", (name, params), nargs, []])
                    continue
            elif tag == F_NOT:
                frames.append(["not", None, 1, []])
                continue
            elif tag in (F_AND, F_OR, F_IMP):
                frames.append([{F_AND: "and", F_OR: "or", F_IMP: "imp"}[tag], None, 2, []])
                continue
            elif tag in (F_ALL, F_EX):
                v = r.varint()
                frames.append(["all" if tag == F_ALL else "ex", v, 1, []])
                continue
            elif tag in (F_BALL, F_BEX):
                v = r.varint()
                frames.append(["ball" if tag == F_BALL else "bex", v, 2, []])
                continue
            else:
                raise NotACode(f"bad tag {tag}")
        # reduce
        if not frames:
            return result
        fr = frames[-1]
        fr[3].append(result)
        result = None
        if len(fr[3]) < fr[2]:
            continue
        frames.pop()
        kind, data, _, got = fr
        try:
            if kind == "succ":
                result = Succ(got[0])
            elif kind == "add":
                result = Add(got[0], got[1])
            elif kind == "mul":
                result = Mul(got[0], got[1])
            elif kind == "exp":
                result = Exp(got[0], got[1])
            elif kind == "eq":
                result = EqAtom(got[0], got[1])
            elif kind == "le":
                result = LeAtom(got[0], got[1])
            elif kind == "atom":
                name, params = data
                result = DAtom(name, params, tuple(got))
            elif kind == "not":
                result = Not(got[0])
            elif kind == "and":
                result = And(got[0], got[1])
            elif kind == "or":
                result = Or(got[0], got[1])
            elif kind == "imp":
                result = Imp(got[0], got[1])
            elif kind == "all":
                result = All(data, got[0])
            elif kind == "ex":
                result = Ex(data, got[0])
            elif kind == "ball":
                result = BAll(data, got[0], got[1])
            elif kind == "bex":
                result = BEx(data, got[0], got[1])
            else:  # pragma: no cover
                raise AssertionError(kind)
        except (TypeError, ValueError) as e:
            raise NotACode(str(e))


# ---------------------------------------------------------------------------
# Public interface


def encode(obj: Union[Formula, Term]) -> int:
    """Goedel code of a term or formula: injective, deterministic."""
    body = serialize(obj)
    return int.from_bytes(bytes([SENTINEL]) + body, "big")


def _body(n: int) -> _Reader:
    if n <= 0:
        raise NotACode("not a code")
    raw = n.to_bytes((n.bit_length() + 7) // 8, "big")
    if raw[0] != SENTINEL:
        raise NotACode("missing sentinel")
    return _Reader(raw[1:])


def decode(n: int) -> Union[Formula, Term]:
    """Inverse of encode on its image; raises NotACode elsewhere."""
    r = _body(n)
    node = _read_node(r)
    if not r.done():
        raise NotACode("trailing bytes")
    return node


def decode_formula(n: int) -> Formula:
    node = decode(n)
    if not isinstance(node, Formula):
        raise NotACode("code of a term, not a formula")
    return node


def try_decode_formula(n: int):
    try:
        return decode_formula(n)
    except NotACode:
        return None


def encode_ref(r) -> int:
    out = bytearray()
    _ser_ref(r, out)
    return int.from_bytes(bytes([SENTINEL, P_REF]) + bytes(out), "big")


def decode_ref(n: int):
    r = _body(n)
    if r.byte() != P_REF:
        raise NotACode("not a reference code")
    ref = _read_ref(r)
    if not r.done():
        raise NotACode("trailing bytes")
    return ref


# ---------------------------------------------------------------------------
# Finite sequences of naturals


def seq_encode(items: list[int]) -> int:
    out = bytearray([S_SEQ])
    out += _varint(len(items))
    for x in items:
        if x < 0:
            raise ValueError("sequence items must be naturals")
        out += _nat_bytes(x)
    return int.from_bytes(bytes([SENTINEL]) + bytes(out), "big")


def seq_decode(s: int) -> list[int]:
    r = _body(s)
    if r.byte() != S_SEQ:
        raise NotACode("not a sequence code")
    n = r.varint()
    if n > 1_000_000:
        raise NotACode("sequence too long")
    items = [r.nat() for _ in range(n)]
    if not r.done():
        raise NotACode("trailing bytes")
    return items


def seq_length(s: int) -> int:
    return len(seq_decode(s))


def seq_at(s: int, k: int) -> int:
    items = seq_decode(s)
    if not (0 <= k < len(items)):
        raise IndexError(f"sequence index {k} out of range {len(items)}")
    return items[k]


# ---------------------------------------------------------------------------
# Code-level functions used by the constructions


def subst_code(z: int, n: int) -> int:
    """Code-level substitution: decode z, replace its first (least) free
    variable by numeral(n+1), return the code.  Codes of closed formulas pass
    through unchanged."""
    f = decode(z)
    if not isinstance(f, Formula):
        raise NotACode("not the code of a formula")
    fv = sorted(free_vars(f))
    if len(fv) > 2:
        raise ArityMismatch("formula has more than two free variables")
    if not fv:
        return z
    g = substitute(f, fv[0], numeral(n + 1))
    return encode(g)


def machine_index(x: int, w: int, z: int, level: int) -> int:
    """The w-th machine code enumerating BSigma(level) together with the
    m-reflection sentence for BSigma(level) + the theory numerated by the
    formula coded subst_code(z, x).

    The w-th code is the canonical description padded with w no-op entries,
    so codes are strictly increasing in w while all describe the same
    enumerator.
    """
    if x < 0 or w < 0 or level < 0:
        raise ValueError("arguments must be naturals")
    decode(z)  # validates; raises NotACode otherwise
    items = [MACHINE_DESC_TAG, level, x, z] + [0] * w
    return seq_encode(items)


def machine_parts(code: int):
    """Inverse view of machine_index output: (level, x, z) or None."""
    try:
        items = seq_decode(code)
    except NotACode:
        return None
    if len(items) < 4 or items[0] != MACHINE_DESC_TAG:
        return None
    if any(p != 0 for p in items[4:]):
        return None
    return items[1], items[2], items[3]
