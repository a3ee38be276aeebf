"""Normalization and readers for canonical data.

The strategy is leftmost-outermost over four redex shapes:

    (\\x:A. t) u        beta
    (\\!x:S. t) (!u)    bang
    (/\\a. t) [A]       type beta
    unfold (fold[T] t)  fixpoint cancellation

The calculus is confluent and normalizing, so the strategy only pins down
the reduction sequence, not the result.  Everything here also works on
open and on erased terms.
"""

from __future__ import annotations

from typing import Iterator, Optional

from .syntax import (
    App, Bang, BangLam, Fold, Lam, Path, Term, TyApp, TyLam, TyVar, Unfold,
    Var, children, erase_annotations, fresh_name, print_term, subst_term,
    subst_type_in_term,
)

DEFAULT_FUEL = 10 ** 6


class FuelExhausted(Exception):
    def __init__(self, steps: int):
        super().__init__("no normal form after %d reduction steps" % steps)
        self.steps = steps


class DecodeError(Exception):
    """A normal form does not have the shape the reader expects."""


def _contract(t: Term) -> Optional[Term]:
    """The four redex shapes, at the root only."""
    match t:
        case App(Lam(x, _, body), arg):
            return subst_term(body, x, arg)
        case App(BangLam(x, _, body), Bang(arg)):
            return subst_term(body, x, arg)
        case TyApp(TyLam(a, body), ty):
            return subst_type_in_term(body, a, ty)
        case Unfold(Fold(_, body)):
            return body
    return None


def _rebuild(t: Term, i: int, c: Term) -> Term:
    match t:
        case Lam(x, ty, _):
            return Lam(x, ty, c)
        case BangLam(x, ty, _):
            return BangLam(x, ty, c)
        case TyLam(a, _):
            return TyLam(a, c)
        case App(f, a):
            return App(c, a) if i == 0 else App(f, c)
        case Bang(_):
            return Bang(c)
        case TyApp(_, ty):
            return TyApp(c, ty)
        case Fold(ty, _):
            return Fold(ty, c)
        case Unfold(_):
            return Unfold(c)
    raise TypeError(t)


def step_with_path(t: Term) -> Optional[tuple]:
    """Contract the leftmost-outermost redex; return (term, path) or None."""
    r = _contract(t)
    if r is not None:
        return r, ()
    for i, c in enumerate(children(t)):
        sub = step_with_path(c)
        if sub is not None:
            c2, path = sub
            return _rebuild(t, i, c2), (i,) + path
    return None


def step(t: Term) -> Optional[Term]:
    """One leftmost-outermost step, or None if t is normal."""
    r = step_with_path(t)
    return None if r is None else r[0]


def normalize(t: Term, fuel: int = DEFAULT_FUEL) -> Term:
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    for _ in range(fuel):
        r = step_with_path(t)
        if r is None:
            return t
        t = r[0]
    if step_with_path(t) is None:
        return t
    raise FuelExhausted(fuel)


def trace(t: Term, fuel: int = DEFAULT_FUEL) -> Iterator[tuple]:
    """Yield (term, contracted path) pairs until a normal form is reached."""
    for _ in range(fuel):
        r = step_with_path(t)
        if r is None:
            return
        t, path = r
        yield t, path
    if step_with_path(t) is not None:
        raise FuelExhausted(fuel)


def is_normal(t: Term) -> bool:
    return step_with_path(t) is None


# -- alternate strategies, used to check confluence -------------------------

def redex_paths(t: Term) -> list:
    out = []
    def walk(s, path):
        if _contract(s) is not None:
            out.append(path)
        for i, c in enumerate(children(s)):
            walk(c, path + (i,))
    walk(t, ())
    return out


def contract_at(t: Term, path: Path) -> Term:
    if not path:
        r = _contract(t)
        if r is None:
            raise ValueError("no redex at %r" % (path,))
        return r
    i = path[0]
    return _rebuild(t, i, contract_at(children(t)[i], path[1:]))


def normalize_random(t: Term, rng, fuel: int = DEFAULT_FUEL) -> Term:
    """Normalize contracting a randomly chosen redex each step."""
    for _ in range(fuel):
        paths = redex_paths(t)
        if not paths:
            return t
        t = contract_at(t, paths[rng.randrange(len(paths))])
    if not redex_paths(t):
        return t
    raise FuelExhausted(fuel)


# -- readers -----------------------------------------------------------------

def _strip_bangs(t: Term) -> tuple:
    n = 0
    while isinstance(t, Bang):
        t = t.body
        n += 1
    return t, n


def read_bool(t: Term, fuel: int = DEFAULT_FUEL) -> bool:
    """Read a boolean out of a closed term of type !^k Bool (any k >= 0)."""
    nf, _ = _strip_bangs(erase_annotations(normalize(t, fuel)))
    match nf:
        case Lam(x, _, Lam(y, _, Var(z))):
            if z == y:  # innermost binding wins under shadowing
                return False
            if z == x:
                return True
    raise DecodeError("not a boolean normal form: %s" % print_term(nf))


def decode_church_string(t: Term, fuel: int = DEFAULT_FUEL) -> str:
    """Match \\!f0. \\!f1. !(\\x. f_{w1} (... (f_{wn} x))) and return w."""
    nf, _ = _strip_bangs(erase_annotations(normalize(t, fuel)))
    match nf:
        case BangLam(f0, _, BangLam(f1, _, Bang(Lam(x, _, body)))):
            if x in (f0, f1):
                raise DecodeError("iterator variable shadows a step function")
            letters = []
            while True:
                match body:
                    case Var(z) if z == x:
                        return "".join(letters)
                    case App(Var(f), rest) if f == f1:  # innermost first
                        letters.append("1")
                        body = rest
                    case App(Var(f), rest) if f == f0:
                        letters.append("0")
                        body = rest
                    case _:
                        raise DecodeError("unexpected iterator body: %s" % print_term(body))
    raise DecodeError("not a Church string: %s" % print_term(nf))


def decode_church_nat(t: Term, fuel: int = DEFAULT_FUEL) -> int:
    nf, _ = _strip_bangs(erase_annotations(normalize(t, fuel)))
    match nf:
        case BangLam(f, _, Bang(Lam(x, _, body))):
            if x == f:
                raise DecodeError("iterator variable shadows the step function")
            n = 0
            while True:
                match body:
                    case Var(z) if z == x:
                        return n
                    case App(Var(g), rest) if g == f:
                        n += 1
                        body = rest
                    case _:
                        raise DecodeError("unexpected iterator body: %s" % print_term(body))
    raise DecodeError("not a Church numeral: %s" % print_term(nf))


def decode_scott_string(t: Term, fuel: int = DEFAULT_FUEL, max_len: int = 10 ** 4) -> str:
    """Destruct a Scott string by applying it to tagging continuations.

    Each round builds (unfold t)[a] c0 c1 ce with fresh free variables as
    tags; the head of the normal form tells us the first letter (or that
    the string is empty) and hands back the suffix.
    """
    letters = []
    for _ in range(max_len):
        avoid = t.fvs | {"a"}
        c0 = fresh_name("_c0", avoid)
        c1 = fresh_name("_c1", avoid)
        ce = fresh_name("_ce", avoid)
        probe = App(App(App(TyApp(Unfold(t), TyVar("a")), Var(c0)), Var(c1)), Var(ce))
        nf = normalize(probe, fuel)
        match nf:
            case Var(z) if z == ce:
                return "".join(letters)
            case App(Var(z), rest) if z in (c0, c1):
                letters.append("0" if z == c0 else "1")
                t = rest
            case _:
                raise DecodeError("not a Scott string, head reduced to: %s"
                                  % print_term(nf))
    raise FuelExhausted(max_len)
