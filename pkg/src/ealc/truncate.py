"""Truncation at depth 0: collapse everything under a bang.

On types every !S becomes the unit 1 = forall a. a -o a; on terms every
!t becomes the annotated identity of type 1 and every \\!x becomes a plain
abstraction over 1 (its variable can only have occurred inside bangs, which
are now identities, so it is dead).  The output is exponential-free, and
for well-typed input it typechecks at the truncated type and normalizes in
lock-step with the source; both facts are exercised by the test suite
rather than assumed.

Truncation is defined for the calculus without type fixpoints; terms or
types mentioning mu are rejected.
"""

from __future__ import annotations

from .syntax import (
    App, Arrow, Bang, BangLam, BangType, Fold, Forall, Lam, Mu, Term, Type,
    TyApp, TyLam, TyVar, UNIT, Unfold, Var, print_type,
)


class TruncationError(Exception):
    """Raised on mu types/terms, which truncation does not cover."""


def truncate_type(t: Type) -> Type:
    match t:
        case TyVar():
            return t
        case BangType(_):
            return UNIT
        case Arrow(src, dst):
            return Arrow(truncate_type(src), truncate_type(dst))
        case Forall(a, body):
            return Forall(a, truncate_type(body))
        case Mu():
            raise TruncationError("cannot truncate the fixpoint type %s" % print_type(t))
    raise TypeError(t)


def _unit_id() -> Term:
    return TyLam("a", Lam("x", TyVar("a"), Var("x")))


def truncate_term(t: Term) -> Term:
    match t:
        case Var():
            return t
        case Bang(_):
            return _unit_id()
        case BangLam(x, _, body):
            return Lam(x, UNIT, truncate_term(body))
        case Lam(x, ann, body):
            ann2 = None if ann is None else truncate_type(ann)
            return Lam(x, ann2, truncate_term(body))
        case App(f, a):
            return App(truncate_term(f), truncate_term(a))
        case TyLam(a, body):
            return TyLam(a, truncate_term(body))
        case TyApp(f, ty):
            return TyApp(truncate_term(f), truncate_type(ty))
        case Fold(_, _) | Unfold(_):
            raise TruncationError("cannot truncate fold/unfold terms")
    raise TypeError(t)
