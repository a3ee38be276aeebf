"""From deciding terms back to automata.

A closed term of type !Str -o !Bool, !Str -o !!Bool or Str -o !Bool decides
a language over {0,1}; this module recovers a DFA for it.  Two routes:

* extract_semantic: decompose the term so the string argument is consumed
  at known instantiation types, then breadth-first-search the finitely many
  word-morphism states over the truncated types (one endomorphism pair
  table per string occurrence).  Each discovered state is tagged with its
  shortest witness word and acceptance is decided by actually running the
  term on the witness, so the result is trustworthy exactly when the state
  space separates the language classes: guaranteed for quantifier-free
  instantiation types, heuristic otherwise, and always re-checked by
  verify_dfa.

* extract_lstar: classic observation-table learning against the term as a
  membership oracle, with an equivalence oracle that is exhaustive up to
  max_len and randomized (seeded) beyond it.

Plain DFA utilities (run, minimize, equivalence) live here too.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Optional

from .syntax import (
    App, Arrow, Bang, BangLam, BangType, Lam, Term, Type, TyApp, TyLam,
    Var, print_term, print_type, subst_term, type_alpha_eq,
)
from .typecheck import Context, MUEAL, typecheck
from .encode import BOOL, STR, church_string, str_of
from .reduction import normalize, read_bool, DEFAULT_FUEL
from .regcompile import ALPHABET, Dfa
from .semantics import (
    CapExceeded, DEFAULT_CAP, EndoMonoid, POLICY_ERROR, interp_type,
    phi_identity,
)
from .truncate import truncate_type


class UnsupportedShape(Exception):
    """The term's normal form does not fit the decomposition analysis."""


class VerificationFailed(Exception):
    def __init__(self, report):
        super().__init__("extracted automaton disagrees with the term on %d word(s), "
                         "first: %r" % (len(report.mismatches), report.mismatches[0]))
        self.report = report


# ---------------------------------------------------------------------------
# DFA utilities

def dfa_run(d: Dfa, w: str) -> bool:
    return d.run(w)


def _reachable(d: Dfa) -> list:
    seen = {d.start}
    order = [d.start]
    i = 0
    while i < len(order):
        for c in ALPHABET:
            nxt = d.delta[order[i]][c]
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
        i += 1
    return order


def minimize(d: Dfa) -> Dfa:
    """Unique minimal DFA (Moore partition refinement), states renamed
    q0, q1, ... in BFS order from the start state."""
    states = _reachable(d)
    block = {s: (s in d.accept) for s in states}
    while True:
        sig = {s: (block[s],) + tuple(block[d.delta[s][c]] for c in ALPHABET)
               for s in states}
        classes = {}
        for s in states:
            classes.setdefault(sig[s], []).append(s)
        if len(classes) == len(set(block.values())):
            break
        block = {}
        for i, (_, members) in enumerate(sorted(classes.items(),
                                                key=lambda kv: str(kv[0]))):
            for s in members:
                block[s] = i

    # canonical naming by BFS over blocks
    names = {}
    order = [block[d.start]]
    names[block[d.start]] = "q0"
    i = 0
    rep = {}
    for s in states:
        rep.setdefault(block[s], s)
    while i < len(order):
        b = order[i]
        for c in ALPHABET:
            nb = block[d.delta[rep[b]][c]]
            if nb not in names:
                names[nb] = "q%d" % len(names)
                order.append(nb)
        i += 1
    new_states = tuple(names[b] for b in order)
    delta = {names[b]: {c: names[block[d.delta[rep[b]][c]]] for c in ALPHABET}
             for b in order}
    accept = frozenset(names[block[s]] for s in states if s in d.accept)
    return Dfa(new_states, "q0", accept, delta)


def dfa_equiv(a: Dfa, b: Dfa) -> bool:
    """Language equivalence via product-automaton search."""
    seen = {(a.start, b.start)}
    frontier = [(a.start, b.start)]
    while frontier:
        sa, sb = frontier.pop()
        if (sa in a.accept) != (sb in b.accept):
            return False
        for c in ALPHABET:
            p = (a.delta[sa][c], b.delta[sb][c])
            if p not in seen:
                seen.add(p)
                frontier.append(p)
    return True


def all_words(max_len: int):
    for n in range(max_len + 1):
        for tup in itertools.product(ALPHABET, repeat=n):
            yield "".join(tup)


# ---------------------------------------------------------------------------
# Membership oracles

_DECISION_TYPES = (
    ("bang", Arrow(BangType(STR), BangType(BOOL))),
    ("bang", Arrow(BangType(STR), BangType(BangType(BOOL)))),
    ("plain", Arrow(STR, BangType(BOOL))),
)


def _decision_shape(t: Term, mode: str = MUEAL) -> str:
    ty = typecheck(mode, Context(), t)
    for shape, want in _DECISION_TYPES:
        if type_alpha_eq(ty, want):
            return shape
    raise UnsupportedShape(
        "term has type %s; expected !Str -o !Bool, !Str -o !!Bool or Str -o !Bool"
        % print_type(ty))


def membership_oracle(t: Term, fuel: int = DEFAULT_FUEL) -> Callable[[str], bool]:
    """read_bool(normalize(t w)), with the bang on the argument matching
    t's input type; queries are cached."""
    shape = _decision_shape(t)
    cache = {}

    def query(w: str) -> bool:
        if w not in cache:
            arg = church_string(w)
            if shape == "bang":
                arg = Bang(arg)
            cache[w] = read_bool(App(t, arg), fuel)
        return cache[w]

    return query


# ---------------------------------------------------------------------------
# Decomposition (the syntactic analysis)

@dataclass
class Decomposition:
    """t !s and !^bang_peel (u s[sigma_1] ... s[sigma_n]) share a normal form."""
    u: Term
    n: int
    sigmas: list
    bang_peel: int
    input_banged: bool

    def apply_to(self, s: Term) -> Term:
        out = self.u
        for sigma in self.sigmas:
            out = App(out, TyApp(s, sigma))
        for _ in range(self.bang_peel):
            out = Bang(out)
        return out


def decompose_bang_input(t: Term, fuel: int = DEFAULT_FUEL) -> Decomposition:
    """Peel the outer abstraction, strip the bangs in front of the body and
    split the string variable's occurrences (each must be a type
    application, which names its instantiation type)."""
    shape = _decision_shape(t)
    nf = normalize(t, fuel)
    match nf:
        case BangLam(x, _, body) if shape == "bang":
            pass
        case Lam(x, _, body) if shape == "plain":
            pass
        case _:
            raise UnsupportedShape(
                "normal form is not an abstraction of the expected kind: %s"
                % print_term(nf))

    bang_peel = 0
    while isinstance(body, Bang):
        body = body.body
        bang_peel += 1

    # every free occurrence of x must be x[sigma]; collect sigmas preorder
    from .syntax import all_names, fresh_name
    sigmas = []
    names = []
    taken = set(all_names(body)) | {x}

    def rewrite(s: Term) -> Term:
        if x not in s.fvs:
            return s
        match s:
            case TyApp(Var(y), sigma) if y == x:
                sigmas.append(sigma)
                nm = fresh_name("_s%d" % len(sigmas), taken)
                taken.add(nm)
                names.append(nm)
                return Var(nm)
            case Var(y) if y == x:
                raise UnsupportedShape(
                    "occurrence of the string variable without a type application")
            case Lam(y, ann, b):
                return s if y == x else Lam(y, ann, rewrite(b))
            case BangLam(y, ann, b):
                return s if y == x else BangLam(y, ann, rewrite(b))
            case App(f, a):
                return App(rewrite(f), rewrite(a))
            case Bang(b):
                return Bang(rewrite(b))
            case TyLam(a, b):
                return TyLam(a, rewrite(b))
            case TyApp(f, sigma):
                return TyApp(rewrite(f), sigma)
            case _:
                raise UnsupportedShape("unexpected node around the string variable: %s"
                                       % print_term(s))

    core = rewrite(body)
    u = core
    for nm, sigma in zip(reversed(names), reversed(sigmas)):
        u = Lam(nm, str_of(sigma), u)
    return Decomposition(u, len(sigmas), sigmas, bang_peel, shape == "bang")


@dataclass
class IteratorParts:
    """u s and !(g h ... h) share a normal form whenever s !f0 !f1 -> !h."""
    f0: Term
    f1: Term
    g: Term
    m: int
    sigma: Type

    def step_type(self) -> Type:
        return Arrow(self.sigma, self.sigma)


def decompose_iterator(u: Term, fuel: int = DEFAULT_FUEL) -> IteratorParts:
    """Match the nested let-bang chain whose innermost subject is
    x !f0 !f1 (the n = 1 analysis).  Anything else is unsupported; callers
    fall back to the semantic or learning route."""
    nf = normalize(u, fuel)
    match nf:
        case Lam(x, ann, body) if ann is not None:
            match ann:
                case Arrow(BangType(Arrow(s1, s2)), _) if type_alpha_eq(s1, s2):
                    sigma = s1
                case _:
                    raise UnsupportedShape(
                        "argument type %s is not Str[sigma]" % print_type(ann))
        case _:
            raise UnsupportedShape("not a unary abstraction: %s" % print_term(nf))

    if x not in body.fvs:
        match body:
            case Bang(g):
                return IteratorParts(_id_step(sigma), _id_step(sigma), g, 0, sigma)
            case _:
                raise UnsupportedShape("constant body is not a bang: %s"
                                       % print_term(body))

    lets = []  # (name, inner term of the bang)
    v = body
    while True:
        match v:
            case App(App(Var(y), Bang(f0)), Bang(f1)) if y == x:
                if f0.fvs or f1.fvs:
                    raise UnsupportedShape("step functions are not closed")
                break
            case App(BangLam(y, _, Bang(p)), subject):
                if x in p.fvs:
                    raise UnsupportedShape(
                        "string variable occurs outside the innermost subject")
                lets.append((y, p))
                v = subject
            case _:
                raise UnsupportedShape(
                    "body is not a let-bang chain over the string application: %s"
                    % print_term(v))

    from .syntax import all_names, fresh_name
    avoid = set(all_names(nf))
    z = fresh_name("z", avoid)
    r = Var(z)
    for y, p in reversed(lets):
        r = subst_term(p, y, r)
    from .syntax import split_occurrences
    r2, names = split_occurrences(r, z)
    tau = Arrow(sigma, sigma)
    g = r2
    for nm in reversed(names):
        g = Lam(nm, tau, g)
    return IteratorParts(f0, f1, g, len(names), sigma)


def _id_step(sigma: Type) -> Term:
    return Lam("s", Arrow(sigma, sigma), Var("s"))


def truncated_iterator(parts: IteratorParts) -> IteratorParts:
    from .truncate import truncate_term
    sigma = truncate_type(parts.sigma)
    return IteratorParts(truncate_term(parts.f0), truncate_term(parts.f1),
                         truncate_term(parts.g), parts.m, sigma)


# ---------------------------------------------------------------------------
# Semantic extraction (witness BFS over word-morphism states)

def extract_semantic(t: Term, base: int = 2, policy: str = POLICY_ERROR,
                     cap: int = DEFAULT_CAP, verify_len: Optional[int] = 10,
                     fuel: int = DEFAULT_FUEL) -> Dfa:
    """BFS the tuples of per-occurrence pair tables; acceptance of a state
    is the term's verdict on its shortest witness word.  Raises CapExceeded
    when any enumerated space outgrows `cap` and VerificationFailed when
    the bounded re-check disagrees (only possible for state spaces the
    heuristic policy failed to separate)."""
    dec = decompose_bang_input(t, fuel)
    query = membership_oracle(t, fuel)

    monoids = []
    cells_per_state = 0
    for sigma in dec.sigmas:
        monoid = EndoMonoid(interp_type(truncate_type(sigma), base, policy, cap), cap)
        if monoid.count ** 2 > cap:
            raise CapExceeded("pair table over End(%s)" % print_type(sigma),
                              monoid.count ** 2, cap)
        monoids.append(monoid)
        cells_per_state += monoid.count ** 2

    start = tuple(phi_identity(m, cap) for m in monoids)
    index = {start: 0}
    witness = [""]
    order = [start]
    delta_idx = {}
    i = 0
    while i < len(order):
        state = order[i]
        for c in ALPHABET:
            nxt = tuple(tab.then_letter(c, m) for tab, m in zip(state, monoids))
            if nxt not in index:
                if cells_per_state * (len(order) + 1) > cap:
                    raise CapExceeded("word-morphism state space",
                                      cells_per_state * (len(order) + 1), cap)
                index[nxt] = len(order)
                witness.append(witness[i] + c)
                order.append(nxt)
            delta_idx[(i, c)] = index[nxt]
        i += 1

    names = ["q%d" % j for j in range(len(order))]
    d = Dfa(tuple(names), "q0",
            frozenset(names[j] for j in range(len(order)) if query(witness[j])),
            {names[j]: {c: names[delta_idx[(j, c)]] for c in ALPHABET}
             for j in range(len(order))})
    d = minimize(d)
    if verify_len is not None:
        report = verify_dfa(d, t, verify_len, fuel)
        if report.mismatches:
            raise VerificationFailed(report)
    return d


# ---------------------------------------------------------------------------
# Learning extraction

def extract_lstar(t: Term, max_len: int = 10, seed: int = 0,
                  fuel: int = DEFAULT_FUEL, random_samples: int = 200) -> Dfa:
    """Observation-table learning with the term as membership oracle.

    Counterexample handling adds every suffix of the counterexample to the
    test suffixes, so only table closedness needs restoring.  The final
    hypothesis has survived a full equivalence pass: exhaustive on words up
    to max_len plus `random_samples` seeded draws up to twice that length.
    """
    query = membership_oracle(t, fuel)
    rng = random.Random(seed)

    prefixes = [""]
    suffixes = [""]

    def row(p):
        return tuple(query(p + e) for e in suffixes)

    def close():
        changed = True
        while changed:
            changed = False
            rows = {row(p) for p in prefixes}
            for p in list(prefixes):
                for c in ALPHABET:
                    rq = row(p + c)
                    if rq not in rows:
                        prefixes.append(p + c)
                        rows.add(rq)
                        changed = True

    def hypothesis() -> Dfa:
        close()
        reps = {}
        for p in prefixes:
            reps.setdefault(row(p), p)
        index = {r: "q%d" % i for i, r in enumerate(reps)}
        delta = {}
        accept = set()
        for r, p in reps.items():
            delta[index[r]] = {c: index[row(p + c)] for c in ALPHABET}
            if query(p):
                accept.add(index[r])
        return Dfa(tuple(index.values()), index[row("")], frozenset(accept), delta)

    def counterexample(h: Dfa) -> Optional[str]:
        for w in all_words(max_len):
            if h.run(w) != query(w):
                return w
        for _ in range(random_samples):
            n = rng.randint(max_len + 1, 2 * max_len) if max_len > 0 else 0
            w = "".join(rng.choice(ALPHABET) for _ in range(n))
            if h.run(w) != query(w):
                return w
        return None

    while True:
        h = hypothesis()
        cex = counterexample(h)
        if cex is None:
            return minimize(h)
        for i in range(len(cex) + 1):
            if cex[i:] not in suffixes:
                suffixes.append(cex[i:])


# ---------------------------------------------------------------------------
# Verification

@dataclass
class VerifyReport:
    checked: int
    max_len: int
    mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def __str__(self):
        if self.ok:
            return "ok: automaton and term agree on all %d words of length <= %d" \
                % (self.checked, self.max_len)
        lines = ["%d mismatch(es) among %d words of length <= %d:"
                 % (len(self.mismatches), self.checked, self.max_len)]
        for w, term_says, dfa_says in self.mismatches[:20]:
            lines.append("  %r: term %s, automaton %s" % (w, term_says, dfa_says))
        return "\n".join(lines)


def verify_dfa(d: Dfa, t: Term, max_len: int, fuel: int = DEFAULT_FUEL) -> VerifyReport:
    """Compare the automaton with the term on every word up to max_len."""
    query = membership_oracle(t, fuel)
    report = VerifyReport(checked=0, max_len=max_len)
    for w in all_words(max_len):
        report.checked += 1
        ts, ds = query(w), d.run(w)
        if ts != ds:
            report.mismatches.append((w, ts, ds))
    return report
