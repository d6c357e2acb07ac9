"""Budgeted three-valued evaluation, the Hilbert proof checker, and the
meta-evaluators behind every designated atom.

Budget policy: one scalar bounds quantifier search ranges and meta-evaluator
recursion (each re-entry into evaluation from inside an atom runs at
budget-1, which is what terminates self-referential codes).  Verdicts are
monotone in the budget: true/false never flip, unknown may resolve.

Exact shortcuts: a quantifier guarded by a functional-graph atom (Diag,
SeqAt, MachIdx, ConSliceAt) contracts to its unique witness, and witness
suggestions let bounded searches find astronomically large witnesses (codes)
that no scan could reach.  Both shortcuts compute exactly what an unbounded
scan would, so monotonicity and determinism are preserved.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Union

from . import coding, craig, refs, registry, theories
from .hierarchy import ComplexityClass, class_leq, classify
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
    code_literal,
    free_vars,
    numeral,
    substitute,
    term_vars,
)
from .theories import TheoryPresentation


class EvalError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Three-valued verdicts


class TV3:
    __slots__ = ("val",)
    TRUE_V, FALSE_V, UNKNOWN_V = 1, 0, 2

    def __init__(self, val: int):
        self.val = val

    def is_true(self) -> bool:
        return self.val == TV3.TRUE_V

    def is_false(self) -> bool:
        return self.val == TV3.FALSE_V

    def is_unknown(self) -> bool:
        return self.val == TV3.UNKNOWN_V

    def is_decided(self) -> bool:
        return self.val != TV3.UNKNOWN_V

    def __eq__(self, other):
        return isinstance(other, TV3) and self.val == other.val

    def __hash__(self):
        return self.val

    def negate(self) -> "TV3":
        if self.is_unknown():
            return UNKNOWN
        return FALSE if self.is_true() else TRUE

    def __repr__(self):
        return f"TV3({self})"

    def __str__(self):
        return "true" if self.is_true() else "false" if self.is_false() else "unknown"


TRUE = TV3(TV3.TRUE_V)
FALSE = TV3(TV3.FALSE_V)
UNKNOWN = TV3(TV3.UNKNOWN_V)


def from_bool(b: bool) -> TV3:
    return TRUE if b else FALSE


def kleene_and(a: TV3, b: TV3) -> TV3:
    if a.is_false() or b.is_false():
        return FALSE
    if a.is_true() and b.is_true():
        return TRUE
    return UNKNOWN


def kleene_or(a: TV3, b: TV3) -> TV3:
    if a.is_true() or b.is_true():
        return TRUE
    if a.is_false() and b.is_false():
        return FALSE
    return UNKNOWN


# ---------------------------------------------------------------------------
# Proof objects


@dataclass(frozen=True)
class Step:
    formula: Formula
    # ("axiom",) | ("logical", scheme) | ("mp", i, j) | ("gen", i)
    just: tuple


@dataclass(frozen=True)
class Proof:
    steps: tuple

    @property
    def conclusion(self) -> Formula:
        return self.steps[-1].formula


SCHEMES = (
    "K",
    "S",
    "CONTRA",
    "AND-E1",
    "AND-E2",
    "AND-I",
    "OR-I1",
    "OR-I2",
    "OR-E",
    "ALL-E",
    "ALL-DIST",
    "EQ-REFL",
)


def _infer_witness(body: Formula, v: int, instance: Formula) -> Optional[Term]:
    """Find t with instance == substitute(body, v, t), if any."""
    if v not in free_vars(body):
        return ZERO if instance == body else None
    # locate one free occurrence of v and read off the aligned term
    candidate: list[Optional[Term]] = [None]

    def walk(b, inst, bound):
        if candidate[0] is not None:
            return
        if isinstance(b, Var) and b.index == v and v not in bound:
            candidate[0] = inst if isinstance(inst, Term) else None
            return
        if type(b) is not type(inst):
            return
        bc, ic = b._children(), inst._children()
        if len(bc) != len(ic):
            return
        nb = bound
        if isinstance(b, (All, Ex, BAll, BEx)):
            nb = bound | {b.var}
        for x, y in zip(bc, ic):
            walk(x, y, nb)

    walk(body, instance, frozenset())
    t = candidate[0]
    if t is None:
        return None
    try:
        if substitute(body, v, t) == instance:
            return t
    except ValueError:
        return None
    return None


def match_scheme(scheme: str, f: Formula) -> bool:
    """Deterministic per-scheme verification."""
    if scheme == "K":
        return (
            isinstance(f, Imp)
            and isinstance(f.right, Imp)
            and f.right.right == f.left
        )
    if scheme == "S":
        if not (isinstance(f, Imp) and isinstance(f.left, Imp) and isinstance(f.left.right, Imp)):
            return False
        a, b, c = f.left.left, f.left.right.left, f.left.right.right
        r = f.right
        return (
            isinstance(r, Imp)
            and r.left == Imp(a, b)
            and r.right == Imp(a, c)
        )
    if scheme == "CONTRA":
        return (
            isinstance(f, Imp)
            and isinstance(f.left, Imp)
            and isinstance(f.left.left, Not)
            and isinstance(f.left.right, Not)
            and f.right == Imp(f.left.right.arg, f.left.left.arg)
        )
    if scheme == "AND-E1":
        return isinstance(f, Imp) and isinstance(f.left, And) and f.left.left == f.right
    if scheme == "AND-E2":
        return isinstance(f, Imp) and isinstance(f.left, And) and f.left.right == f.right
    if scheme == "AND-I":
        return (
            isinstance(f, Imp)
            and isinstance(f.right, Imp)
            and f.right.right == And(f.left, f.right.left)
        )
    if scheme == "OR-I1":
        return isinstance(f, Imp) and isinstance(f.right, Or) and f.right.left == f.left
    if scheme == "OR-I2":
        return isinstance(f, Imp) and isinstance(f.right, Or) and f.right.right == f.left
    if scheme == "OR-E":
        if not (isinstance(f, Imp) and isinstance(f.left, Imp)):
            return False
        a, c = f.left.left, f.left.right
        r = f.right
        return (
            isinstance(r, Imp)
            and isinstance(r.left, Imp)
            and r.left.right == c
            and r.right == Imp(Or(a, r.left.left), c)
        )
    if scheme == "ALL-E":
        if not (isinstance(f, Imp) and isinstance(f.left, All)):
            return False
        return _infer_witness(f.left.body, f.left.var, f.right) is not None
    if scheme == "ALL-DIST":
        if not (
            isinstance(f, Imp)
            and isinstance(f.left, All)
            and isinstance(f.left.body, Imp)
            and isinstance(f.right, Imp)
            and isinstance(f.right.right, All)
        ):
            return False
        v = f.left.var
        return (
            f.right.right.var == v
            and f.left.body.left == f.right.left
            and f.left.body.right == f.right.right.body
            and v not in free_vars(f.right.left)
        )
    if scheme == "EQ-REFL":
        return isinstance(f, EqAtom) and f.left == f.right
    return False


def is_logical_axiom(f: Formula) -> Optional[str]:
    for s in SCHEMES:
        if match_scheme(s, f):
            return s
    return None


AxiomTest = Callable[[Formula], TV3]


def check_proof_steps(axiom_test: AxiomTest, proof: Proof, goal: Formula) -> bool:
    """Two-valued: undecided axiom membership rejects the step."""
    if not proof.steps:
        return False
    for i, st in enumerate(proof.steps):
        j = st.just
        if not isinstance(j, tuple) or not j:
            return False
        if j[0] == "axiom" and len(j) == 1:
            if not axiom_test(st.formula).is_true():
                return False
        elif j[0] == "logical" and len(j) == 2:
            if j[1] not in SCHEMES or not match_scheme(j[1], st.formula):
                return False
        elif j[0] == "mp" and len(j) == 3:
            a, b = j[1], j[2]
            if not (0 <= a < i and 0 <= b < i):
                return False
            imp = proof.steps[a].formula
            if not (isinstance(imp, Imp) and imp.left == proof.steps[b].formula and imp.right == st.formula):
                return False
        elif j[0] == "gen" and len(j) == 2:
            a = j[1]
            if not (0 <= a < i):
                return False
            if not (isinstance(st.formula, All) and st.formula.body == proof.steps[a].formula):
                return False
        else:
            return False
    return proof.conclusion == goal


def axiom_membership(ref, f: Formula, budget: int) -> TV3:
    """Membership of f in the axiom set named by ref."""
    if isinstance(ref, str):
        ref = refs.Named(ref)
    if isinstance(ref, refs.Named):
        try:
            return from_bool(theories.member_of_named(ref.name, f))
        except theories.TheoryError:
            return FALSE
    if isinstance(ref, refs.Ext):
        if coding.encode(f) == ref.code:
            return TRUE
        return axiom_membership(ref.base, f, budget)
    if isinstance(ref, refs.MOmega):
        if f == theories.m_omega_sentence(ref.m, theories.resolve_ref(ref.base)):
            return TRUE
        return axiom_membership(refs.Named(f"ISigma{ref.m}"), f, budget)
    if isinstance(ref, refs.SlipExt):
        base = axiom_membership(ref.base, f, budget)
        if base.is_true():
            return TRUE
        try:
            g = coding.decode_formula(ref.z)
        except coding.NotACode:
            return base
        try:
            unary = theories.slice_unary(g, ref.n)
        except theories.TheoryError:
            return base
        fv = sorted(free_vars(unary))
        verdict = eval_formula(unary, max(budget - 1, 0), {fv[0]: coding.encode(f)})
        return kleene_or(base, verdict)
    if isinstance(ref, refs.Mach):
        parts = coding.machine_parts(ref.code)
        if parts is None:
            return FALSE
        level = parts[0]
        if axiom_membership(refs.Named(f"BSigma{level}"), f, budget).is_true():
            return TRUE
        try:
            stream = theories.machine_stream(ref.code)
        except theories.TheoryError:
            return FALSE
        return from_bool(f == stream(3))
    if isinstance(ref, refs.CraigRef):
        try:
            base = theories.resolve_ref(ref.base)
        except theories.TheoryError:
            return FALSE
        return from_bool(craig.craig_member(base, f))
    return FALSE


def _axiom_test_for(ref, budget: int) -> AxiomTest:
    def test(f: Formula) -> TV3:
        return axiom_membership(ref, f, budget)

    return test


def check_proof(T: Union[TheoryPresentation, refs.TheoryRef, str], proof: Proof, goal: Formula, budget: int = 64) -> bool:
    """True iff every step is justified over T and the last step is goal."""
    ref = T.ref if isinstance(T, TheoryPresentation) else T
    return check_proof_steps(_axiom_test_for(ref, budget), proof, goal)


# ---------------------------------------------------------------------------
# Proof coding


def encode_proof(p: Proof) -> int:
    out = bytearray([coding.PR_PROOF])
    out += coding._varint(len(p.steps))
    for st in p.steps:
        coding._ser_node(st.formula, out)
        j = st.just
        if j[0] == "axiom":
            out.append(coding.J_AXIOM)
        elif j[0] == "logical":
            out.append(coding.J_LOGICAL)
            out += coding._varint(SCHEMES.index(j[1]))
        elif j[0] == "mp":
            out.append(coding.J_MP)
            out += coding._varint(j[1])
            out += coding._varint(j[2])
        elif j[0] == "gen":
            out.append(coding.J_GEN)
            out += coding._varint(j[1])
        else:
            raise ValueError(f"bad justification {j!r}")
    return int.from_bytes(bytes([coding.SENTINEL]) + bytes(out), "big")


def decode_proof(n: int) -> Proof:
    r = coding._body(n)
    if r.byte() != coding.PR_PROOF:
        raise coding.NotACode("not a proof code")
    count = r.varint()
    if count > 100_000:
        raise coding.NotACode("proof too long")
    steps = []
    for _ in range(count):
        f = coding._read_node(r)
        if not isinstance(f, Formula):
            raise coding.NotACode("proof step is not a formula")
        tag = r.byte()
        if tag == coding.J_AXIOM:
            just: tuple = ("axiom",)
        elif tag == coding.J_LOGICAL:
            idx = r.varint()
            if idx >= len(SCHEMES):
                raise coding.NotACode("bad scheme index")
            just = ("logical", SCHEMES[idx])
        elif tag == coding.J_MP:
            just = ("mp", r.varint(), r.varint())
        elif tag == coding.J_GEN:
            just = ("gen", r.varint())
        else:
            raise coding.NotACode("bad justification tag")
        steps.append(Step(f, just))
    if not r.done():
        raise coding.NotACode("trailing bytes")
    return Proof(tuple(steps))


def proof_to_text(p: Proof) -> str:
    """Line-oriented proof format: `step <i>: <formula> ; <justification>`."""
    lines = []
    for i, st in enumerate(p.steps):
        j = st.just
        if j[0] == "axiom":
            jt = "axiom"
        elif j[0] == "logical":
            jt = f"logical {j[1]}"
        elif j[0] == "mp":
            jt = f"mp {j[1]} {j[2]}"
        else:
            jt = f"gen {j[1]}"
        from .syntax import print_formula

        lines.append(f"step {i}: {print_formula(st.formula)} ; {jt}")
    return "\n".join(lines)


def proof_from_text(text: str) -> Proof:
    from .syntax import parse_formula

    steps = []
    for lineno, raw in enumerate(text.splitlines()):
        line = raw.strip()
        if not line:
            continue
        head, _, rest = line.partition(":")
        if not head.startswith("step"):
            raise ValueError(f"line {lineno}: expected 'step <i>:'")
        body, sep, jtext = rest.rpartition(";")
        if not sep:
            raise ValueError(f"line {lineno}: missing justification")
        f = parse_formula(body.strip())
        parts = jtext.split()
        if parts == ["axiom"]:
            just: tuple = ("axiom",)
        elif len(parts) == 2 and parts[0] == "logical":
            just = ("logical", parts[1])
        elif len(parts) == 3 and parts[0] == "mp":
            just = ("mp", int(parts[1]), int(parts[2]))
        elif len(parts) == 2 and parts[0] == "gen":
            just = ("gen", int(parts[1]))
        else:
            raise ValueError(f"line {lineno}: bad justification {jtext.strip()!r}")
        steps.append(Step(f, just))
    return Proof(tuple(steps))


# ---------------------------------------------------------------------------
# Canonical proof stream (PrfIdx) and bounded search


def logical_instance(i: int) -> tuple[Formula, str]:
    shape = i % 4
    k = i // 4
    a = EqAtom(numeral(k % 3), numeral(k % 3))
    b = LeAtom(ZERO, numeral(k % 5))
    if shape == 0:
        return EqAtom(numeral(k), numeral(k)), "EQ-REFL"
    if shape == 1:
        return Imp(a, Imp(b, a)), "K"
    if shape == 2:
        return Imp(And(a, b), a), "AND-E1"
    return Imp(a, Or(a, b)), "OR-I1"


def canonical_proof(ref, k: int) -> Proof:
    """The k-th proof in the canonical proof stream of the theory: single-step
    proofs, theory axioms at even positions, logical instances at odd ones."""
    if k % 2 == 0:
        idx = k // 2
        try:
            pres = theories.resolve_ref(ref if not isinstance(ref, str) else refs.Named(ref))
            if pres.finite_size is None or idx < pres.finite_size:
                return Proof((Step(pres.enumerator(idx), ("axiom",)),))
        except (theories.TheoryError, IndexError):
            pass
        f, s = logical_instance(idx)
        return Proof((Step(f, ("logical", s)),))
    f, s = logical_instance(k // 2)
    return Proof((Step(f, ("logical", s)),))


def bounded_proof_search(T: TheoryPresentation, goal: Formula, budget: int) -> Optional[Proof]:
    """Tiny sound search: axiom, logical instance, or one modus-ponens step
    from an enumerated implication axiom.  None means not-found-within-budget."""
    test = _axiom_test_for(T.ref, 64)
    if test(goal).is_true():
        p = Proof((Step(goal, ("axiom",)),))
        return p
    s = is_logical_axiom(goal)
    if s is not None:
        return Proof((Step(goal, ("logical", s)),))
    limit = budget if T.finite_size is None else min(budget, T.finite_size)
    for i in range(limit):
        try:
            ax = T.enumerator(i)
        except (IndexError, StopIteration):
            break
        if isinstance(ax, Imp) and ax.right == goal:
            prem = ax.left
            if test(prem).is_true():
                return Proof((Step(prem, ("axiom",)), Step(ax, ("axiom",)), Step(goal, ("mp", 1, 0))))
            ps = is_logical_axiom(prem)
            if ps is not None:
                return Proof((Step(prem, ("logical", ps)), Step(ax, ("axiom",)), Step(goal, ("mp", 1, 0))))
    return None


# ---------------------------------------------------------------------------
# Term evaluation under an environment

_VALUE_BIT_CAP = 4_000_000


def term_value_env(t: Term, env: dict) -> int:
    out: list[int] = []
    stack: list[tuple] = [("t", t)]
    while stack:
        kind, x = stack.pop()
        if kind == "t":
            if isinstance(x, Zero):
                out.append(0)
            elif isinstance(x, Var):
                if x.index not in env:
                    raise EvalError(f"unbound variable x{x.index}")
                out.append(env[x.index])
            elif isinstance(x, Succ):
                stack.append(("succ", None))
                stack.append(("t", x.arg))
            elif isinstance(x, (Add, Mul)):
                stack.append(("add" if isinstance(x, Add) else "mul", None))
                stack.append(("t", x.right))
                stack.append(("t", x.left))
            elif isinstance(x, Exp):
                stack.append(("exp", None))
                stack.append(("t", x.power))
                stack.append(("t", x.base))
            else:
                raise TypeError(f"not a term: {x!r}")
        elif kind == "succ":
            out[-1] += 1
        elif kind == "add":
            b = out.pop()
            out[-1] += b
        elif kind == "mul":
            b = out.pop()
            r = out[-1] * b
            if r.bit_length() > _VALUE_BIT_CAP:
                raise OverflowError("term value exceeds size cap")
            out[-1] = r
        elif kind == "exp":
            e = out.pop()
            b = out.pop()
            if b > 1 and e * b.bit_length() > _VALUE_BIT_CAP:
                raise OverflowError("term value exceeds size cap")
            out.append(b**e)
    (v,) = out
    return v


# ---------------------------------------------------------------------------
# Formula evaluation


def _atom_value(f: DAtom, budget: int, env: dict) -> TV3:
    fam = registry.get_family(f.name)
    registry.check_arity(f.name, len(f.args))
    if fam.evaluator is None:
        raise EvalError(f"no evaluator installed for {f.name}")
    try:
        argvals = [term_value_env(a, env) for a in f.args]
    except OverflowError:
        return UNKNOWN
    return fam.evaluator(f.params, argvals, budget)


def _graph_contraction(f, budget: int, env: dict) -> Optional[TV3]:
    """Exact evaluation of Q v (G [/\\ | ->] body) where G is a functional
    graph atom determining v from the other arguments."""
    if isinstance(f, (Ex, BEx)):
        v, inner, positive = f.var, f.body, True
    elif isinstance(f, (All, BAll)):
        v, inner, positive = f.var, f.body, False
    else:
        return None
    if positive and isinstance(inner, And):
        g, body = inner.left, inner.right
    elif positive and isinstance(inner, DAtom):
        g, body = inner, None
    elif not positive and isinstance(inner, Imp):
        g, body = inner.left, inner.right
    else:
        return None
    if not isinstance(g, DAtom):
        return None
    try:
        fam = registry.get_family(g.name)
    except KeyError:
        return None
    if fam.graph_out is None or fam.solver is None:
        return None
    if fam.graph_out >= len(g.args) or g.args[fam.graph_out] != Var(v):
        return None
    others = [a for i, a in enumerate(g.args) if i != fam.graph_out]
    if any(v in term_vars(a) for a in others):
        return None
    try:
        vals = [term_value_env(a, env) for a in others]
        w = fam.solver(g.params, vals)
    except (OverflowError, EvalError):
        return None
    if w is None:
        return TRUE if not positive else FALSE
    # bounded forms: the witness must respect the bound
    if isinstance(f, (BEx, BAll)):
        try:
            bval = term_value_env(f.bound, env)
            in_range = w <= bval
        except OverflowError:
            in_range = w.bit_length() < _VALUE_BIT_CAP  # bound exceeds the cap
        if not in_range:
            return TRUE if not positive else FALSE
    if body is None:
        return TRUE if positive else FALSE
    env2 = dict(env)
    env2[v] = w
    return eval_formula(body, budget, env2)


def _suggest_witnesses(matrix: Formula, v: int, env: dict, budget: int) -> list[int]:
    """Candidate values for v harvested from functional atoms in the matrix."""
    out: set[int] = set()
    stack: list[Formula] = [matrix]
    while stack:
        g = stack.pop()
        if isinstance(g, DAtom):
            try:
                fam = registry.get_family(g.name)
            except KeyError:
                continue
            if fam.suggester is not None:
                try:
                    out.update(fam.suggester(g.params, g.args, v, env, budget))
                except (OverflowError, EvalError):
                    pass
            if fam.graph_out is not None and fam.solver is not None:
                if fam.graph_out < len(g.args) and g.args[fam.graph_out] == Var(v):
                    others = [a for i, a in enumerate(g.args) if i != fam.graph_out]
                    if not any(v in term_vars(a) for a in others):
                        try:
                            vals = [term_value_env(a, env) for a in others]
                            w = fam.solver(g.params, vals)
                            if w is not None:
                                out.add(w)
                        except (OverflowError, EvalError):
                            pass
            continue
        for c in g._children():
            if isinstance(c, Formula):
                stack.append(c)
    sugg = _collection_witness(matrix, v, env, budget)
    if sugg is not None:
        out.add(sugg)
    return sorted(out)


def _collection_witness(matrix: Formula, v: int, env: dict, budget: int) -> Optional[int]:
    """Witness for the collection_rewrite output shape: the sequence code of
    least inner witnesses per value of the leading bounded variable."""
    blocks = []
    g = matrix
    while isinstance(g, BAll):
        blocks.append((g.var, g.bound))
        g = g.body
    if not blocks:
        return None
    guard = None
    if isinstance(g, Imp):
        guard, g = g.left, g.right
    # shape produced by collection_rewrite:
    #   (E w<=s SeqAt(s,k,w)) /\ (A w<=s (SeqAt(s,k,w) -> body))
    if not (isinstance(g, And) and isinstance(g.left, BEx) and isinstance(g.right, BAll)):
        return None
    if g.left.bound != Var(v) or g.right.bound != Var(v):
        return None
    w_var = g.right.var
    if not (isinstance(g.right.body, Imp) and isinstance(g.right.body.left, DAtom)):
        return None
    seq_atom = g.right.body.left
    if seq_atom.name != "SeqAt" or seq_atom.args[0] != Var(v) or seq_atom.args[2] != Var(w_var):
        return None
    k_var = blocks[0][0]
    if seq_atom.args[1] != Var(k_var):
        return None
    body = g.right.body.right
    rest_blocks = blocks[1:]

    try:
        k_hi = term_value_env(blocks[0][1], env)
    except (OverflowError, EvalError):
        return None
    if k_hi > budget:
        return None

    def holds_at(k: int, w: int) -> TV3:
        env2 = dict(env)
        env2[k_var] = k
        env2[w_var] = w
        f: Formula = body if guard is None else Imp(guard, body)
        for bv, bt in reversed(rest_blocks):
            f = BAll(bv, bt, f)
        return eval_formula(f, budget, env2)

    witnesses = []
    for k in range(k_hi + 1):
        found = None
        for w in range(budget + 1):
            r = holds_at(k, w)
            if r.is_true():
                found = w
                break
            if r.is_unknown():
                return None
        if found is None:
            return None
        witnesses.append(found)
    return coding.seq_encode(witnesses)


def eval_formula(f: Formula, budget: int, env: Optional[dict] = None) -> TV3:
    """Three-valued truth of f in the standard model under env, at budget."""
    env = env or {}
    if budget <= 0:
        return UNKNOWN
    if isinstance(f, EqAtom):
        try:
            return from_bool(term_value_env(f.left, env) == term_value_env(f.right, env))
        except OverflowError:
            return UNKNOWN
    if isinstance(f, LeAtom):
        try:
            return from_bool(term_value_env(f.left, env) <= term_value_env(f.right, env))
        except OverflowError:
            return UNKNOWN
    if isinstance(f, DAtom):
        return _atom_value(f, budget, env)
    if isinstance(f, Not):
        return eval_formula(f.arg, budget, env).negate()
    if isinstance(f, And):
        a = eval_formula(f.left, budget, env)
        if a.is_false():
            return FALSE
        return kleene_and(a, eval_formula(f.right, budget, env))
    if isinstance(f, Or):
        a = eval_formula(f.left, budget, env)
        if a.is_true():
            return TRUE
        return kleene_or(a, eval_formula(f.right, budget, env))
    if isinstance(f, Imp):
        a = eval_formula(f.left, budget, env)
        if a.is_false():
            return TRUE
        return kleene_or(a.negate(), eval_formula(f.right, budget, env))
    if isinstance(f, (Ex, All, BEx, BAll)):
        c = _graph_contraction(f, budget, env)
        if c is not None:
            return c
        positive = isinstance(f, (Ex, BEx))
        body = f.body
        v = f.var
        bound_val: Optional[int] = None
        exhaustive = False
        if isinstance(f, (BEx, BAll)):
            try:
                bound_val = term_value_env(f.bound, env)
            except OverflowError:
                bound_val = None
            if bound_val is not None and bound_val <= budget:
                hi = bound_val
                exhaustive = True
            else:
                hi = budget
        else:
            hi = budget

        env2 = dict(env)
        saw_unknown = False
        if not exhaustive:
            # targeted witnesses first: codes live far beyond any scan range
            for w in _suggest_witnesses(body, v, env, budget):
                if bound_val is not None and w > bound_val:
                    continue
                if bound_val is None and isinstance(f, (BEx, BAll)) and w.bit_length() >= _VALUE_BIT_CAP:
                    continue
                env2[v] = w
                r = eval_formula(body, budget, env2)
                if positive and r.is_true():
                    return TRUE
                if not positive and r.is_false():
                    return FALSE
                if r.is_unknown():
                    saw_unknown = True
        for w in range(hi + 1):
            env2[v] = w
            r = eval_formula(body, budget, env2)
            if positive and r.is_true():
                return TRUE
            if not positive and r.is_false():
                return FALSE
            if r.is_unknown():
                saw_unknown = True
        if exhaustive and not saw_unknown:
            return FALSE if positive else TRUE
        return UNKNOWN
    raise TypeError(f"not a formula: {f!r}")


def eval_sentence(f: Formula, budget: int) -> TV3:
    if free_vars(f):
        raise EvalError("open formula")
    return eval_formula(f, budget, {})


def eval_prf(T: Union[TheoryPresentation, refs.TheoryRef, str], p: int, x: int, budget: int = 64) -> TV3:
    """Two-valued meta-evaluator behind Prf[T]: decode failures are false."""
    try:
        proof = decode_proof(p)
        goal = coding.decode_formula(x)
    except coding.NotACode:
        return FALSE
    return from_bool(check_proof(T, proof, goal, budget))


def eval_truth(gamma: ComplexityClass, x: int, budget: int) -> TV3:
    """Meta-evaluator behind TrueSigma/TruePi: class mismatch and decode
    failure are false; otherwise budgeted evaluation of the decoded sentence."""
    try:
        s = coding.decode_formula(x)
    except coding.NotACode:
        return FALSE
    if free_vars(s):
        return FALSE
    if not class_leq(classify(s), gamma):
        return FALSE
    return eval_formula(s, max(budget - 1, 0), {})


# ---------------------------------------------------------------------------
# Designated-atom evaluators

_mcon_cache: dict = {}
_diag_cache: dict = {}


def _eval_axof(params, args, budget) -> TV3:
    (ref,) = params
    (x,) = args
    try:
        f = coding.decode_formula(x)
    except coding.NotACode:
        return FALSE
    return axiom_membership(ref, f, budget)


def _eval_prf_atom(params, args, budget) -> TV3:
    (ref,) = params
    p, g = args
    return eval_prf(ref, p, g, budget)


def _eval_prfx(params, args, budget) -> TV3:
    (ref,) = params
    p, g, e = args
    try:
        proof = decode_proof(p)
        goal = coding.decode_formula(g)
    except coding.NotACode:
        return FALSE

    def test(f: Formula) -> TV3:
        if coding.encode(f) == e:
            return TRUE
        return axiom_membership(ref, f, budget)

    return from_bool(check_proof_steps(test, proof, goal))


def _sentence_axiom_test(codes: Iterable[int]) -> AxiomTest:
    codeset = set(codes)

    def test(f: Formula) -> TV3:
        return from_bool(coding.encode(f) in codeset)

    return test


def _eval_prfsent(params, args, budget) -> TV3:
    p, g, s = args
    try:
        proof = decode_proof(p)
        goal = coding.decode_formula(g)
    except coding.NotACode:
        return FALSE
    return from_bool(check_proof_steps(_sentence_axiom_test([s]), proof, goal))


def _eval_prfsentx(params, args, budget) -> TV3:
    p, g, s, e = args
    try:
        proof = decode_proof(p)
        goal = coding.decode_formula(g)
    except coding.NotACode:
        return FALSE
    return from_bool(check_proof_steps(_sentence_axiom_test([s, e]), proof, goal))


def _eval_prfmachx(params, args, budget) -> TV3:
    p, g, y, e = args
    try:
        proof = decode_proof(p)
        goal = coding.decode_formula(g)
    except coding.NotACode:
        return FALSE

    def test(f: Formula) -> TV3:
        if coding.encode(f) == e:
            return TRUE
        return axiom_membership(refs.Mach(y), f, budget)

    return from_bool(check_proof_steps(test, proof, goal))


def _eval_prfidx(params, args, budget) -> TV3:
    (ref,) = params
    k, g = args
    if k > 1_000_000:
        return UNKNOWN
    try:
        goal = coding.decode_formula(g)
    except coding.NotACode:
        return FALSE
    return from_bool(canonical_proof(ref, k).conclusion == goal)


def _eval_prfex(params, args, budget) -> TV3:
    (ref,) = params
    k, a = args
    try:
        proof = decode_proof(k)
        body = coding.decode_formula(a)
    except coding.NotACode:
        return FALSE
    fv = sorted(free_vars(body))
    if len(fv) != 1:
        return FALSE
    goal = Ex(fv[0], body)
    return from_bool(check_proof_steps(_axiom_test_for(ref, budget), proof, goal))


def _numeral_height(t: Term) -> Optional[int]:
    n = 0
    while isinstance(t, Succ):
        n += 1
        t = t.arg
    return n if isinstance(t, Zero) else None


def _matches_numeral_subst(inst: Formula, base: Formula, fv: list[int], vals: list[int]) -> bool:
    """inst == base with numerals of vals substituted for fv, checked without
    materializing huge numerals."""
    mapping = dict(zip(fv, vals))

    def walk(b, i, bound) -> bool:
        if isinstance(b, Var) and b.index in mapping and b.index not in bound:
            h = _numeral_height(i) if isinstance(i, Term) else None
            return h is not None and h == mapping[b.index]
        if type(b) is not type(i):
            return False
        if isinstance(b, Var):
            return b.index == i.index
        if isinstance(b, DAtom):
            if b.name != i.name or b.params != i.params or len(b.args) != len(i.args):
                return False
        if isinstance(b, (All, Ex, BAll, BEx)):
            if b.var != i.var:
                return False
            bound = bound | {b.var}
        bc, ic = b._children(), i._children()
        if len(bc) != len(ic):
            return False
        return all(walk(x, y, bound) for x, y in zip(bc, ic))

    return walk(base, inst, frozenset())


def _eval_prfsub(params, args, budget) -> TV3:
    (ref,) = params
    if len(args) < 2:
        return FALSE
    p, fcode = args[0], args[1]
    vals = list(args[2:])
    try:
        proof = decode_proof(p)
        base = coding.decode_formula(fcode)
    except coding.NotACode:
        return FALSE
    fv = sorted(free_vars(base))
    if len(fv) != len(vals):
        return FALSE
    goal = proof.conclusion
    if not _matches_numeral_subst(goal, base, fv, vals):
        return FALSE
    return from_bool(check_proof_steps(_axiom_test_for(ref, budget), proof, goal))


def _eval_prfgoal(params, args, budget) -> TV3:
    goalkind, thykind = params[0], params[1]
    try:
        proof = decode_proof(args[0])
    except coding.NotACode:
        return FALSE
    y = args[1]
    if goalkind == "marker":
        goal: Formula = theories.marker_sentence(params[2])
    elif goalkind == "inhab":
        scode, x = args[2], args[3]
        if x > 100_000:
            return UNKNOWN  # the goal's numeral cannot be materialized
        sigma = coding.try_decode_formula(scode)
        if sigma is None:
            return FALSE
        fv = sorted(free_vars(sigma))
        if len(fv) != 2:
            return FALSE
        inst = substitute(sigma, fv[0], numeral(x + 1))
        goal = Ex(fv[1], inst)
    elif goalkind == "refl":
        m, kind, lvl = params[2], params[3], params[4]
        scode, x = args[2], args[3]
        zv = 0
        t_atom = DAtom(
            "TrueClAt", (kind, lvl), (code_literal(scode), code_literal(x + 1), Var(zv))
        )
        if thykind == "idx":
            mcon = theories.ncon_machine_of(m, Var(zv), 1)
        else:
            mcon = theories.ncon_sent_of(m, Var(zv), 1)
        goal = All(zv, Imp(t_atom, mcon))
    elif goalkind == "connum":
        m = params[2]
        z = args[2]
        if thykind == "idx":
            goal = theories.ncon_machine_of(m, code_literal(z), 0)
        else:
            goal = theories.ncon_sent_of(m, code_literal(z), 0)
    else:
        return FALSE

    if thykind == "sent":
        test = _sentence_axiom_test([y])
    else:
        test = _axiom_test_for(refs.Mach(y), budget)
    return from_bool(check_proof_steps(test, proof, goal))


def _eval_true(kind: str):
    def ev(params, args, budget) -> TV3:
        (n,) = params
        (x,) = args
        return eval_truth(ComplexityClass(kind, n) if n > 0 else ComplexityClass(kind, 0), x, budget)

    return ev


def _eval_trueseqat(params, args, budget) -> TV3:
    kind, n = params
    a, s, k = args
    body = coding.try_decode_formula(a)
    if body is None:
        return FALSE
    try:
        w = coding.seq_at(s, k)
    except (coding.NotACode, IndexError):
        return FALSE
    fv = sorted(free_vars(body))
    if len(fv) > 1:
        return FALSE
    gamma = ComplexityClass(kind, n)
    if not class_leq(classify(body), gamma):
        return FALSE
    env = {fv[0]: w} if fv else {}
    return eval_formula(body, max(budget - 1, 0), env)


def _eval_trueclat(params, args, budget) -> TV3:
    kind, n = params
    s, a, b = args
    body = coding.try_decode_formula(s)
    if body is None:
        return FALSE
    fv = sorted(free_vars(body))
    if len(fv) != 2:
        return FALSE
    gamma = ComplexityClass(kind, n)
    if not class_leq(classify(body), gamma):
        return FALSE
    return eval_formula(body, max(budget - 1, 0), {fv[0]: a, fv[1]: b})


def _eval_inclass(kind: str):
    def ev(params, args, budget) -> TV3:
        (n,) = params
        (x,) = args
        f = coding.try_decode_formula(x)
        if f is None:
            return FALSE
        return from_bool(class_leq(classify(f), ComplexityClass(kind, n)))

    return ev


def _diag_cached(z: int, i: int):
    key = (z, i)
    if key in _diag_cache:
        return _diag_cache[key]
    from .diagonal import diag_value

    w = diag_value(z, i)
    if len(_diag_cache) < 4096:
        _diag_cache[key] = w
    return w


def _eval_diag(params, args, budget) -> TV3:
    z, i, y = args
    w = _diag_cached(z, i)
    return from_bool(w is not None and w == y)


def _solve_diag(params, vals):
    z, i = vals
    return _diag_cached(z, i)


def _eval_seqat(params, args, budget) -> TV3:
    s, k, w = args
    try:
        return from_bool(coding.seq_at(s, k) == w)
    except (coding.NotACode, IndexError):
        return FALSE


def _solve_seqat(params, vals):
    s, k = vals
    try:
        return coding.seq_at(s, k)
    except (coding.NotACode, IndexError):
        return None


_machdesc_cache: dict = {}


def _machine_parts4(y: int):
    """(level, x, z, pads) when y is a machine description code, else None;
    cached because index evaluation probes the same y many times."""
    if y in _machdesc_cache:
        return _machdesc_cache[y]
    out = None
    try:
        items = coding.seq_decode(y)
        if len(items) >= 4 and items[0] == coding.MACHINE_DESC_TAG and all(p == 0 for p in items[4:]):
            out = (items[1], items[2], items[3], len(items) - 4)
    except coding.NotACode:
        out = None
    if len(_machdesc_cache) < 1_000_000:
        _machdesc_cache[y] = out
    return out


def _eval_machidx(params, args, budget) -> TV3:
    (m,) = params
    x, w, z, y = args
    parts = _machine_parts4(y)
    return from_bool(parts is not None and parts == (m, x, z, w))


def _solve_machidx(params, vals):
    (m,) = params
    x, w, z = vals
    if w > 100_000:
        raise OverflowError("machine index padding too large to materialize")
    try:
        return coding.machine_index(x, w, z, m)
    except (coding.NotACode, ValueError):
        return None


def _suggest_machidx(params, arg_terms, v, env, budget):
    """When the padding count w is quantified and the output y is known,
    invert the description code."""
    (m,) = params
    x_t, w_t, z_t, y_t = arg_terms
    if w_t != Var(v):
        return []
    try:
        y = term_value_env(y_t, env)
    except (OverflowError, EvalError):
        return []
    parts = _machine_parts4(y)
    if parts is None or parts[0] != m:
        return []
    return [parts[3]]


def _mcon_slice_code(m: int, n: int, z: int) -> Optional[int]:
    key = (m, n, z)
    if key in _mcon_cache:
        return _mcon_cache[key]
    tau = coding.try_decode_formula(z)
    out: Optional[int] = None
    if tau is not None and len(free_vars(tau)) == 2:
        out = coding.encode(theories.ncon_of_slice(m, tau, n + 1))
    _mcon_cache[key] = out
    return out


_SMALL_CODE_BITS = 700  # any reflection formula codes far above this


def _eval_consliceat(params, args, budget) -> TV3:
    (m,) = params
    x, n, z = args
    if x.bit_length() < _SMALL_CODE_BITS:
        return FALSE
    target = _mcon_slice_code(m, n, z)
    return from_bool(target is not None and x == target)


def _solve_consliceat(params, vals):
    (m,) = params
    n, z = vals
    return _mcon_slice_code(m, n, z)


def _eval_padconat(params, args, budget) -> TV3:
    (m,) = params
    x, s, n, z = args
    if s < 1 or x.bit_length() < _SMALL_CODE_BITS:
        return FALSE
    target = _mcon_slice_code(m, n, z)
    if target is None:
        return FALSE
    f = coding.try_decode_formula(x)
    if f is None:
        return FALSE
    for phi, count in craig.pad_decompositions(f):
        if count == s and coding.encode(phi) == target:
            return TRUE
    return FALSE


def _suggest_padconat(params, arg_terms, v, env, budget):
    """Suggest the padding length from the conjunction code when x is known."""
    x_t, s_t, n_t, z_t = arg_terms
    if s_t != Var(v):
        return []
    try:
        x = term_value_env(x_t, env)
    except (OverflowError, EvalError):
        return []
    f = coding.try_decode_formula(x)
    if f is None:
        return []
    return [count for _, count in craig.pad_decompositions(f)]


def _eval_sliceconj(params, args, budget) -> TV3:
    (unary,) = params
    x, y, p = args
    psi = coding.try_decode_formula(p)
    if psi is None:
        return FALSE
    if y > budget:
        return UNKNOWN
    fv = sorted(free_vars(unary))
    if len(fv) != 1:
        return FALSE
    members = []
    for z in range(y + 1):
        r = eval_formula(unary, max(budget - 1, 0), {fv[0]: z})
        if r.is_unknown():
            return UNKNOWN
        if r.is_true():
            g = coding.try_decode_formula(z)
            if g is not None:
                members.append(And(g, psi))
    if not members:
        conj: Formula = EqAtom(ZERO, ZERO)
    else:
        conj = members[-1]
        for g in reversed(members[:-1]):
            conj = And(g, conj)
    return from_bool(x == coding.encode(conj))


def _eval_itercon(params, args, budget) -> TV3:
    m, ref = params
    (x,) = args
    if x > 12:
        return UNKNOWN
    try:
        T = theories.resolve_ref(ref)
    except theories.TheoryError:
        return FALSE
    f = theories.iter_ncon(m, x, T)
    return eval_formula(f, max(budget - 1, 0), {})


def _eval_rfninst(params, args, budget) -> TV3:
    (baseref,) = params
    x, n, z = args
    if x.bit_length() < _SMALL_CODE_BITS:
        return FALSE
    f = coding.try_decode_formula(x)
    if f is None:
        return FALSE
    # strip the universal closure, then read off the consequent
    g = f
    while isinstance(g, All):
        g = g.body
    if not isinstance(g, Imp):
        return FALSE
    phi = g.right
    ref = refs.SlipExt(baseref if not isinstance(baseref, str) else refs.Named(baseref), z, n + 1)
    try:
        expected = theories.rfn_instance_for_ref(ref, phi)
    except (theories.TheoryError, ValueError):
        return FALSE
    return from_bool(f == expected)


def _eval_zfax(params, args, budget) -> TV3:
    return UNKNOWN


def _install() -> None:
    fam = registry.families()
    reg = registry.get_family
    reg("AxOf").evaluator = _eval_axof
    reg("Prf").evaluator = _eval_prf_atom
    reg("PrfX").evaluator = _eval_prfx
    reg("PrfSent").evaluator = _eval_prfsent
    reg("PrfSentX").evaluator = _eval_prfsentx
    reg("PrfMachX").evaluator = _eval_prfmachx
    reg("PrfIdx").evaluator = _eval_prfidx
    reg("PrfEx").evaluator = _eval_prfex
    reg("PrfSub").evaluator = _eval_prfsub
    reg("PrfGoal").evaluator = _eval_prfgoal
    reg("TrueSigma").evaluator = _eval_true("Sigma")
    reg("TruePi").evaluator = _eval_true("Pi")
    reg("TrueSeqAt").evaluator = _eval_trueseqat
    reg("TrueClAt").evaluator = _eval_trueclat
    reg("InSigma").evaluator = _eval_inclass("Sigma")
    reg("InPi").evaluator = _eval_inclass("Pi")
    reg("Diag").evaluator = _eval_diag
    reg("Diag").solver = _solve_diag
    reg("SeqAt").evaluator = _eval_seqat
    reg("SeqAt").solver = _solve_seqat
    reg("MachIdx").evaluator = _eval_machidx
    reg("MachIdx").solver = _solve_machidx
    reg("MachIdx").suggester = _suggest_machidx
    reg("ConSliceAt").evaluator = _eval_consliceat
    reg("ConSliceAt").solver = _solve_consliceat
    reg("PadConAt").evaluator = _eval_padconat
    reg("PadConAt").suggester = _suggest_padconat
    reg("SliceConj").evaluator = _eval_sliceconj
    reg("IterCon").evaluator = _eval_itercon
    reg("RfnInst").evaluator = _eval_rfninst
    reg("ZfAx").evaluator = _eval_zfax


_install()
