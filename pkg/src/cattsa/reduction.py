"""One-step reduction, innermost-leftmost normalisation, definitional
equality, the graded equality relation, and regularity diagnostics.

The only base redex is insertion at the head of a coherence whose
argument at some locally maximal cell is an unbiased composite of
sufficient linear height; everything else is congruence closure.  These
functions assume well-typed input (they never call the typechecker, which
keeps the equality/typing stratification well founded) and surface
scope-level defects as IllTyped where they are detected incidentally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

from .errors import CattError, IllTyped
from .insertion import InsertionProblem, insert_ctx, insert_sub
from .pasting import is_pasting, is_unbiased, maximal_vars, unbiased_type
from .syntax import (
    Arr,
    Coh,
    Context,
    Item,
    Star,
    Substitution,
    Term,
    Type,
    Var,
    VarName,
    alpha_eq,
    apply_sub_type,
    dim_term,
    rename_type,
    term_str,
    type_str,
)
from .trees import branching_height, ctx_to_tree, is_linear, linear_height

RULE_INSERTION = "insertion"
RULE_CELL = "cell-reduction"
RULE_ARG = "argument-reduction"
RULE_TYPE = "type-component"
RULE_SUB = "sub-component"

Position = tuple[tuple[str, int], ...]

# Module default for accepting disc-shaped inner contexts in the insertion
# redex; the CLI flips this via --no-disc-insertion.
ALLOW_DISC_INSERTION_DEFAULT = True


def set_disc_insertion(enabled: bool) -> None:
    global ALLOW_DISC_INSERTION_DEFAULT
    ALLOW_DISC_INSERTION_DEFAULT = enabled


@dataclass(frozen=True)
class Redex:
    rule: str
    position: Position
    detail: Optional[tuple[VarName, Context, Substitution]] = None

    def position_str(self) -> str:
        if not self.position:
            return "head"
        parts = []
        for kind, index in self.position:
            parts.append(f"{kind}[{index}]" if kind in ("arg", "entry") else kind)
        return ".".join(parts)


def _resolve_flag(allow_disc_insertion: Optional[bool]) -> bool:
    if allow_disc_insertion is None:
        return ALLOW_DISC_INSERTION_DEFAULT
    return allow_disc_insertion


# ---------------------------------------------------------------------------
# Redex enumeration
# ---------------------------------------------------------------------------


def step_candidates(
    ctx: Context, item: Item, *, allow_disc_insertion: Optional[bool] = None
) -> list[tuple[Redex, Item]]:
    """All one-step reducts of a well-typed item, in traversal order.

    Traversal visits substitution entries left to right, then the type of a
    coherence, then the head itself, recursively; normalisation picks the
    deepest candidate and breaks ties by this order.
    """
    allow = _resolve_flag(allow_disc_insertion)
    if isinstance(item, Term):
        return [(r, t) for r, t in _term_steps(item, allow)]
    if isinstance(item, Type):
        return [(r, t) for r, t in _type_steps(item, allow)]
    if isinstance(item, Substitution):
        return [(r, t) for r, t in _sub_steps(item, allow)]
    raise IllTyped(f"cannot reduce {item!r}")


def _with_rule(kind: str, pos: Position, detail) -> Redex:
    if not pos:
        rule = RULE_INSERTION
    elif kind == "term":
        rule = RULE_ARG if pos[0][0] == "arg" else RULE_CELL
    elif kind == "type":
        rule = RULE_TYPE
    else:
        rule = RULE_SUB
    return Redex(rule, pos, detail)


def _term_steps(t: Term, allow: bool) -> list[tuple[Redex, Term]]:
    out: list[tuple[Redex, Term]] = []
    if isinstance(t, Var):
        return out
    assert isinstance(t, Coh)
    delta, ty, sigma = t.ctx, t.ty, t.sub
    for i, (_, arg) in enumerate(sigma.entries):
        for redex, res in _term_steps(arg, allow):
            pos = (("arg", i),) + redex.position
            out.append(
                (_with_rule("term", pos, redex.detail), Coh(delta, ty, sigma.replace(i, res)))
            )
    for redex, res in _type_steps(ty, allow):
        pos = (("type", 0),) + redex.position
        out.append((_with_rule("term", pos, redex.detail), Coh(delta, res, sigma)))
    out.extend(_head_insertions(t, allow))
    return out


def _type_steps(ty: Type, allow: bool) -> list[tuple[Redex, Type]]:
    out: list[tuple[Redex, Type]] = []
    if isinstance(ty, Star):
        return out
    assert isinstance(ty, Arr)
    for redex, res in _term_steps(ty.src, allow):
        pos = (("src", 0),) + redex.position
        out.append((_with_rule("type", pos, redex.detail), Arr(res, ty.base, ty.tgt)))
    for redex, res in _type_steps(ty.base, allow):
        pos = (("base", 0),) + redex.position
        out.append((_with_rule("type", pos, redex.detail), Arr(ty.src, res, ty.tgt)))
    for redex, res in _term_steps(ty.tgt, allow):
        pos = (("tgt", 0),) + redex.position
        out.append((_with_rule("type", pos, redex.detail), Arr(ty.src, ty.base, res)))
    return out


def _sub_steps(sigma: Substitution, allow: bool) -> list[tuple[Redex, Substitution]]:
    out: list[tuple[Redex, Substitution]] = []
    for i, (_, arg) in enumerate(sigma.entries):
        for redex, res in _term_steps(arg, allow):
            pos = (("entry", i),) + redex.position
            out.append((_with_rule("sub", pos, redex.detail), sigma.replace(i, res)))
    return out


def _head_insertions(t: Coh, allow: bool) -> list[tuple[Redex, Term]]:
    """Insertion redexes at the head of a coherence, in context order."""
    delta, ty, sigma = t.ctx, t.ty, t.sub
    if not is_pasting(delta):
        return []
    tree = ctx_to_tree(delta)
    maximal = set(maximal_vars(delta))
    out: list[tuple[Redex, Term]] = []
    for x in delta.vars:
        if x not in maximal:
            continue
        arg = sigma.lookup(x)
        if not isinstance(arg, Coh) or not is_unbiased(arg):
            continue
        inner_tree = ctx_to_tree(arg.ctx)
        if not allow and is_linear(inner_tree):
            continue
        if branching_height(tree, x) > linear_height(inner_tree):
            continue
        problem = InsertionProblem(delta, x, arg.ctx, arg.ty)
        result = insert_ctx(problem)
        new_term = Coh(
            result.inserted,
            apply_sub_type(ty, result.external),
            insert_sub(sigma, x, arg.sub, result),
        )
        out.append((Redex(RULE_INSERTION, (), (x, arg.ctx, arg.sub)), new_term))
    return out


# ---------------------------------------------------------------------------
# Normalisation
# ---------------------------------------------------------------------------


def _pick_innermost_leftmost(
    candidates: list[tuple[Redex, Item]]
) -> tuple[Redex, Item]:
    best = candidates[0]
    for cand in candidates[1:]:
        if len(cand[0].position) > len(best[0].position):
            best = cand
    return best


def _render(item: Item) -> str:
    if isinstance(item, Term):
        return term_str(item)
    if isinstance(item, Type):
        return type_str(item)
    return str(item)


def normalize(
    ctx: Context,
    item: Item,
    *,
    allow_disc_insertion: Optional[bool] = None,
    trace: Optional[list[str]] = None,
) -> Item:
    """Innermost-leftmost normal form of a well-typed term, type or
    substitution.  Appends one line per step to trace when given."""
    cur = item
    while True:
        candidates = step_candidates(
            ctx, cur, allow_disc_insertion=allow_disc_insertion
        )
        if not candidates:
            return cur
        redex, result = _pick_innermost_leftmost(candidates)
        if trace is not None:
            trace.append(
                f"{redex.rule} at {redex.position_str()}: "
                f"{_render(cur)} ⇝ {_render(result)}"
            )
        cur = result


def normalize_term(ctx: Context, t: Term, **kw) -> Term:
    out = normalize(ctx, t, **kw)
    assert isinstance(out, Term)
    return out


def normalize_type(ctx: Context, ty: Type, **kw) -> Type:
    out = normalize(ctx, ty, **kw)
    assert isinstance(out, Type)
    return out


def _sort_of(item: Item) -> type:
    for sort in (Term, Type, Substitution):
        if isinstance(item, sort):
            return sort
    raise IllTyped(f"not a reducible item: {item!r}")


def def_eq(
    ctx: Context,
    a: Item,
    b: Item,
    *,
    allow_disc_insertion: Optional[bool] = None,
) -> bool:
    """Definitional equality: compare innermost-leftmost normal forms."""
    if _sort_of(a) is not _sort_of(b):
        return False
    na = normalize(ctx, a, allow_disc_insertion=allow_disc_insertion)
    nb = normalize(ctx, b, allow_disc_insertion=allow_disc_insertion)
    return alpha_eq(na, nb)


# ---------------------------------------------------------------------------
# Graded equality
# ---------------------------------------------------------------------------


def eq_at_level(ctx: Context, a: Item, b: Item, n: int) -> bool:
    """Equality that is definitional strictly below dimension n and
    structural (up to alpha) at dimension n and above."""
    if n < 0:
        raise IllTyped("equality level must be non-negative")
    if isinstance(a, Term) and isinstance(b, Term):
        return _eq_terms(ctx, a, b, n)
    if isinstance(a, Type) and isinstance(b, Type):
        return _eq_types(ctx, a, b, n)
    if isinstance(a, Substitution) and isinstance(b, Substitution):
        return _eq_subs(ctx, a, b, n)
    return False


def _eq_terms(ctx: Context, a: Term, b: Term, n: int) -> bool:
    try:
        da = dim_term(ctx, a)
        db = dim_term(ctx, b)
    except CattError as exc:
        raise IllTyped(str(exc)) from exc
    if da < n and db < n:
        return def_eq(ctx, a, b)
    if isinstance(a, Var):
        return a == b
    if isinstance(a, Coh):
        if not isinstance(b, Coh):
            return False
        if len(a.ctx) != len(b.ctx) or not alpha_eq(a.ctx, b.ctx):
            return False
        ren = dict(zip(b.ctx.vars, a.ctx.vars))
        if not _eq_types(a.ctx, a.ty, rename_type(b.ty, ren), n):
            return False
        return _eq_subs(ctx, a.sub, b.sub, n)
    return False


def _eq_types(ctx: Context, a: Type, b: Type, n: int) -> bool:
    if isinstance(a, Star) or isinstance(b, Star):
        return isinstance(a, Star) and isinstance(b, Star)
    assert isinstance(a, Arr) and isinstance(b, Arr)
    return (
        _eq_terms(ctx, a.src, b.src, n)
        and _eq_terms(ctx, a.tgt, b.tgt, n)
        and _eq_types(ctx, a.base, b.base, n)
    )


def _eq_subs(ctx: Context, a: Substitution, b: Substitution, n: int) -> bool:
    if len(a) != len(b):
        return False
    return all(_eq_terms(ctx, u, v, n) for u, v in zip(a.values, b.values))


# ---------------------------------------------------------------------------
# Regularity
# ---------------------------------------------------------------------------

Height = Union[int, float]  # math.inf for variables


def _regular(ctx: Context, t: Term) -> Optional[Height]:
    if isinstance(t, Var):
        return math.inf
    assert isinstance(t, Coh)
    delta = t.ctx
    if not is_pasting(delta):
        return None
    tree = ctx_to_tree(delta)
    if is_linear(tree):  # a disc
        return None
    if not alpha_eq(t.ty, unbiased_type(delta)):
        return None
    heights: dict[VarName, Height] = {}
    for v, arg in t.sub.entries:
        h = _regular(ctx, arg)
        if h is None:
            return None
        heights[v] = h
    for x in maximal_vars(delta):
        if branching_height(tree, x) >= heights[x]:
            return None
    return linear_height(tree)


def is_regular(ctx: Context, t: Term) -> bool:
    return _regular(ctx, t) is not None


def regular_height(ctx: Context, t: Term) -> Height:
    h = _regular(ctx, t)
    if h is None:
        raise IllTyped(f"term is not regular: {term_str(t)}")
    return h
