"""Raw syntax of the kernel: terms, types, contexts and substitutions.

A term is a variable or a coherence ``Coh(ctx, ty, sub)``; a type is the
base type ``*`` or an arrow between two terms over a lower-dimensional
type.  Contexts and substitutions are ordered association sequences with
pairwise-distinct names.  Everything is immutable, so all operations in
this module are pure functions and safe to call from any thread.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Literal, Union

from .errors import (
    DimensionError,
    DuplicateVariable,
    MalformedSyntax,
    SubstitutionUndefined,
    UnknownVariable,
)

VarName = str

Sign = Literal["-", "+"]
NEG: Sign = "-"
POS: Sign = "+"


class Term:
    """Abstract base for terms; instances are Var or Coh."""

    __slots__ = ()


class Type:
    """Abstract base for types; instances are Star or Arr."""

    __slots__ = ()


@dataclass(frozen=True)
class Var(Term):
    name: VarName

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Star(Type):
    def __str__(self) -> str:
        return "*"


@dataclass(frozen=True)
class Arr(Type):
    src: Term
    base: Type
    tgt: Term

    def __str__(self) -> str:
        return f"{self.src} -> {self.tgt}"


@dataclass(frozen=True)
class Context:
    """Ordered sequence of (variable, type) declarations."""

    entries: tuple[tuple[VarName, Type], ...] = ()

    def __post_init__(self) -> None:
        seen = set()
        for name, _ in self.entries:
            if name in seen:
                raise DuplicateVariable(name, "context")
            seen.add(name)

    @property
    def vars(self) -> tuple[VarName, ...]:
        return tuple(name for name, _ in self.entries)

    def lookup(self, name: VarName) -> Type:
        for v, ty in self.entries:
            if v == name:
                return ty
        raise UnknownVariable(name, "context")

    def has(self, name: VarName) -> bool:
        return any(v == name for v, _ in self.entries)

    def extend(self, name: VarName, ty: Type) -> "Context":
        return Context(self.entries + ((name, ty),))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[tuple[VarName, Type]]:
        return iter(self.entries)

    def __str__(self) -> str:
        return " ".join(f"({v} : {type_str(ty)})" for v, ty in self.entries)


@dataclass(frozen=True)
class Substitution:
    """Ordered sequence of (variable, term) assignments."""

    entries: tuple[tuple[VarName, Term], ...] = ()

    def __post_init__(self) -> None:
        seen = set()
        for name, _ in self.entries:
            if name in seen:
                raise DuplicateVariable(name, "substitution")
            seen.add(name)

    @property
    def domain(self) -> tuple[VarName, ...]:
        return tuple(name for name, _ in self.entries)

    @property
    def values(self) -> tuple[Term, ...]:
        return tuple(t for _, t in self.entries)

    def lookup(self, name: VarName) -> Term:
        for v, t in self.entries:
            if v == name:
                return t
        raise SubstitutionUndefined(name)

    def has(self, name: VarName) -> bool:
        return any(v == name for v, _ in self.entries)

    def replace(self, index: int, term: Term) -> "Substitution":
        entries = list(self.entries)
        entries[index] = (entries[index][0], term)
        return Substitution(tuple(entries))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[tuple[VarName, Term]]:
        return iter(self.entries)

    def __str__(self) -> str:
        return "<" + ", ".join(f"{v} := {term_str(t)}" for v, t in self.entries) + ">"


@dataclass(frozen=True)
class Coh(Term):
    ctx: Context
    ty: Type
    sub: Substitution

    def __post_init__(self) -> None:
        if self.sub.domain != self.ctx.vars:
            raise MalformedSyntax(
                "coherence argument domain must match its context variables in order"
            )

    def __str__(self) -> str:
        return term_str(self)


Item = Union[Term, Type, Substitution]

STAR = Star()


def identity_sub(ctx: Context) -> Substitution:
    return Substitution(tuple((v, Var(v)) for v in ctx.vars))


# ---------------------------------------------------------------------------
# Dimension
# ---------------------------------------------------------------------------


def dim_type(ty: Type) -> int:
    d = 0
    while isinstance(ty, Arr):
        d += 1
        ty = ty.base
    return d


def dim_ctx(ctx: Context) -> int:
    return max((dim_type(ty) for _, ty in ctx.entries), default=-1)


def dim_term(ctx: Context, t: Term) -> int:
    if isinstance(t, Var):
        return dim_type(ctx.lookup(t.name))
    if isinstance(t, Coh):
        return dim_type(t.ty)
    raise MalformedSyntax(f"not a term: {t!r}")


# ---------------------------------------------------------------------------
# Support
# ---------------------------------------------------------------------------


def support(ctx: Context, item: Item) -> frozenset[VarName]:
    """Downward-closed set of variables the item depends on in ctx.

    A variable contributes itself plus, recursively, the support of its
    declared type; a coherence contributes only the support of its
    argument substitution.
    """
    if isinstance(item, Var):
        ty = ctx.lookup(item.name)
        return frozenset({item.name}) | support(ctx, ty)
    if isinstance(item, Coh):
        return support(ctx, item.sub)
    if isinstance(item, Star):
        return frozenset()
    if isinstance(item, Arr):
        return support(ctx, item.src) | support(ctx, item.tgt)
    if isinstance(item, Substitution):
        out: frozenset[VarName] = frozenset()
        for _, t in item.entries:
            out |= support(ctx, t)
        return out
    raise MalformedSyntax(f"cannot take support of {item!r}")


# ---------------------------------------------------------------------------
# Substitution application and composition (partial functions)
# ---------------------------------------------------------------------------


def apply_sub(item: Term | Type, sigma: Substitution) -> Term | Type:
    """Apply sigma; raises SubstitutionUndefined if a needed variable is absent.

    Coherences substitute only their argument substitution:
    ``Coh(G, A, tau)[sigma] = Coh(G, A, tau o sigma)``.
    """
    if isinstance(item, Star):
        return item
    if isinstance(item, Arr):
        return Arr(
            apply_sub(item.src, sigma),
            apply_sub(item.base, sigma),
            apply_sub(item.tgt, sigma),
        )
    if isinstance(item, Var):
        return sigma.lookup(item.name)
    if isinstance(item, Coh):
        return Coh(item.ctx, item.ty, compose_sub(item.sub, sigma))
    raise MalformedSyntax(f"cannot substitute into {item!r}")


def apply_sub_term(t: Term, sigma: Substitution) -> Term:
    out = apply_sub(t, sigma)
    assert isinstance(out, Term)
    return out


def apply_sub_type(ty: Type, sigma: Substitution) -> Type:
    out = apply_sub(ty, sigma)
    assert isinstance(out, Type)
    return out


def compose_sub(tau: Substitution, sigma: Substitution) -> Substitution:
    """Pointwise application of sigma to the terms of tau.

    With tau : Gamma -> Delta and sigma : Delta -> Theta (reading a
    substitution as assigning terms of the second context to variables
    of the first), the composite assigns Theta-terms to Gamma-variables.
    """
    return Substitution(tuple((v, apply_sub_term(t, sigma)) for v, t in tau.entries))


def rename_term(t: Term, mapping: dict[VarName, VarName]) -> Term:
    """Rename free variables; names absent from the mapping are kept."""
    if isinstance(t, Var):
        return Var(mapping.get(t.name, t.name))
    if isinstance(t, Coh):
        sub = Substitution(
            tuple((v, rename_term(u, mapping)) for v, u in t.sub.entries)
        )
        return Coh(t.ctx, t.ty, sub)
    raise MalformedSyntax(f"not a term: {t!r}")


def rename_type(ty: Type, mapping: dict[VarName, VarName]) -> Type:
    if isinstance(ty, Star):
        return ty
    if isinstance(ty, Arr):
        return Arr(
            rename_term(ty.src, mapping),
            rename_type(ty.base, mapping),
            rename_term(ty.tgt, mapping),
        )
    raise MalformedSyntax(f"not a type: {ty!r}")


# ---------------------------------------------------------------------------
# Boundaries
# ---------------------------------------------------------------------------


def type_boundary(ty: Type, m: int, sign: Sign) -> Term:
    """The m-dimensional source (-) or target (+) endpoint stored in a type."""
    n = dim_type(ty)
    if not 0 <= m < n:
        raise DimensionError(f"type boundary at {m} needs 0 <= {m} < dim = {n}")
    while True:
        assert isinstance(ty, Arr)
        n -= 1
        if m == n:
            return ty.src if sign == NEG else ty.tgt
        ty = ty.base


def term_boundary(ctx: Context, t: Term, n: int, sign: Sign) -> Term:
    """The n-dimensional source or target of a term; the term itself at n = dim."""
    d = dim_term(ctx, t)
    if n > d or n < 0:
        raise DimensionError(f"term boundary at {n} needs 0 <= {n} <= dim = {d}")
    if n == d:
        return t
    if isinstance(t, Var):
        return type_boundary(ctx.lookup(t.name), n, sign)
    assert isinstance(t, Coh)
    return apply_sub_term(type_boundary(t.ty, n, sign), t.sub)


# ---------------------------------------------------------------------------
# Alpha equality
# ---------------------------------------------------------------------------

# Canonical names use '%' which the surface language cannot produce, so
# canonicalisation never captures a user variable.


def _canon_term(t: Term, env: dict[VarName, VarName]) -> Term:
    if isinstance(t, Var):
        return Var(env.get(t.name, t.name))
    assert isinstance(t, Coh)
    ren = {v: f"%{i}" for i, v in enumerate(t.ctx.vars)}
    ctx = Context(tuple((ren[v], _canon_type(ty, ren)) for v, ty in t.ctx.entries))
    ty = _canon_type(t.ty, ren)
    sub = Substitution(tuple((ren[v], _canon_term(u, env)) for v, u in t.sub.entries))
    return Coh(ctx, ty, sub)


def _canon_type(ty: Type, env: dict[VarName, VarName]) -> Type:
    if isinstance(ty, Star):
        return ty
    assert isinstance(ty, Arr)
    return Arr(_canon_term(ty.src, env), _canon_type(ty.base, env), _canon_term(ty.tgt, env))


def canonical_term(t: Term) -> Term:
    """Rename all bound contexts positionally; free variables are untouched."""
    return _canon_term(t, {})


def canonical_type(ty: Type) -> Type:
    return _canon_type(ty, {})


def canonical_ctx(ctx: Context) -> Context:
    ren = {v: f"%{i}" for i, v in enumerate(ctx.vars)}
    return Context(tuple((ren[v], _canon_type(ty, ren)) for v, ty in ctx.entries))


def canonical_sub(sigma: Substitution) -> Substitution:
    """Canonicalise values only; the domain names are kept as given."""
    return Substitution(tuple((v, _canon_term(t, {})) for v, t in sigma.entries))


def alpha_eq(a: Item | Context, b: Item | Context) -> bool:
    """Equality up to consistent renaming of bound context variables."""
    if isinstance(a, Term) and isinstance(b, Term):
        return canonical_term(a) == canonical_term(b)
    if isinstance(a, Type) and isinstance(b, Type):
        return canonical_type(a) == canonical_type(b)
    if isinstance(a, Context) and isinstance(b, Context):
        return canonical_ctx(a) == canonical_ctx(b)
    if isinstance(a, Substitution) and isinstance(b, Substitution):
        return canonical_sub(a) == canonical_sub(b)
    return False


# ---------------------------------------------------------------------------
# Fresh names and printing
# ---------------------------------------------------------------------------


def fresh_name(base: VarName, taken: Iterable[VarName]) -> VarName:
    taken = set(taken)
    name = base
    while name in taken:
        name += "'"
    return name


def term_str(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    assert isinstance(t, Coh)
    args = ", ".join(term_str(u) for u in t.sub.values)
    return f"coh {{ {t.ctx} : {type_str(t.ty)} }} [{args}]"


def type_str(ty: Type) -> str:
    if isinstance(ty, Star):
        return "*"
    assert isinstance(ty, Arr)
    return f"{term_str(ty.src)} -> {term_str(ty.tgt)}"


def sub_str(sigma: Substitution) -> str:
    return str(sigma)


def ctx_str(ctx: Context) -> str:
    return str(ctx)
