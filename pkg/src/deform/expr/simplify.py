"""Best-effort, value-preserving simplification.

The canonical moves are constant folding, identity elimination, like-term
collection over sums, and monomial merging/cancellation over products.
Rebuilt trees are deterministic (factors and terms sorted by printed form)
and the whole pass is idempotent. This is not canonical-form rewriting:
deciding whether an expression is zero stays a sampling question for the
callers that need soundness.

Value preservation: at any point where both the input and the output are
defined they agree. Cancellation may enlarge the definition domain
(x*x^-1 -> 1), never shrink truth on the common domain.
"""
from __future__ import annotations

import math

from .nodes import (Add, Call, Const, Div, Expr, Mul, Neg, ONE, Pow, Sub,
                    Var, ZERO)
from .printer import to_source


class _FoldError(Exception):
    """Internal: folding would divide by zero or overflow; keep the node."""


def _check(v: float) -> float:
    if not math.isfinite(v):
        raise _FoldError
    return v


def product_parts(e: Expr):
    """Decompose into (coefficient, [(base, exponent), ...]).

    Flattens Mul/Div/Neg chains, folds constant factors, merges repeated
    bases, and distributes integer powers over products. Opaque subtrees
    (sums, calls, symbolic powers) become single factors.
    """
    coeff = 1.0
    factors: dict[Expr, float] = {}

    def add_factor(base: Expr, exp: float):
        factors[base] = factors.get(base, 0.0) + exp

    def walk_pow(b: Expr, k: float):
        nonlocal coeff
        if k == 0.0:
            return
        if isinstance(b, Const):
            try:
                coeff = _check(coeff * _check(math.pow(b.value, k)))
            except (ValueError, OverflowError):
                add_factor(Pow(b, Const(k)) if k != 1.0 else b, 1.0)
            return
        if isinstance(b, Neg):
            if k == int(k):
                if int(k) % 2:
                    coeff = -coeff
                walk_pow(b.arg, k)
                return
            add_factor(b, k)
            return
        if isinstance(b, (Mul, Div)) and k == int(k):
            walk_pow(b.left, k)
            walk_pow(b.right, -k if isinstance(b, Div) else k)
            return
        if isinstance(b, Pow) and isinstance(b.exponent, Const):
            k2 = b.exponent.value
            if k == int(k) and k2 == int(k2):
                walk_pow(b.base, k * k2)
                return
        add_factor(b, k)

    def walk(e: Expr, sign: int):
        nonlocal coeff
        if isinstance(e, Mul):
            walk(e.left, sign)
            walk(e.right, sign)
        elif isinstance(e, Div):
            walk(e.left, sign)
            walk(e.right, -sign)
        elif isinstance(e, Neg):
            coeff = -coeff
            walk(e.arg, sign)
        elif isinstance(e, Const):
            if sign > 0:
                coeff = _check(coeff * e.value)
            else:
                if e.value == 0.0:
                    raise _FoldError
                coeff = _check(coeff / e.value)
        elif isinstance(e, Pow) and isinstance(e.exponent, Const):
            walk_pow(e.base, e.exponent.value * sign)
        else:
            add_factor(e, float(sign))

    walk(e, 1)
    return coeff, [(b, k) for b, k in factors.items() if k != 0.0]


def _pow_node(base: Expr, exp: float) -> Expr:
    return base if exp == 1.0 else Pow(base, Const(exp))


def _fold_chain(parts):
    node = None
    for p in parts:
        node = p if node is None else Mul(node, p)
    return node


def rebuild_product(coeff: float, factors) -> Expr:
    """Deterministic product tree from product_parts output."""
    if coeff == 0.0:
        return ZERO
    num, den = [], []
    for base, exp in sorted(factors, key=lambda f: to_source(f[0])):
        if exp == 0.0:
            continue
        (num if exp > 0 else den).append(_pow_node(base, abs(exp)))
    num_expr = _fold_chain(num)
    den_expr = _fold_chain(den)
    if num_expr is None:
        head = Const(coeff)
    elif coeff == 1.0:
        head = num_expr
    elif coeff == -1.0:
        # distribute the sign into a bare sum factor; a second simplify
        # pass would do exactly that, so emitting Neg(sum) here would
        # break idempotence
        if isinstance(num_expr, (Add, Sub)):
            head = _negated_sum(num_expr)
        else:
            head = Neg(num_expr)
    else:
        head = _fold_chain([Const(coeff)] + num)
    if den_expr is None:
        return head
    return Div(head, den_expr)


def _negated_sum(e: Expr) -> Expr:
    try:
        constant, terms = sum_terms(Neg(e))
    except _FoldError:
        return Neg(e)
    return rebuild_sum(constant, terms)


def sum_terms(e: Expr):
    """Decompose into (constant, [(coefficient, key), ...]).

    Keys are canonical coefficient-free products; Add/Sub/Neg chains are
    flattened and like terms collected.
    """
    constant = 0.0
    terms: dict[Expr, float] = {}

    def walk(e: Expr, sign: float):
        nonlocal constant
        if isinstance(e, Add):
            walk(e.left, sign)
            walk(e.right, sign)
        elif isinstance(e, Sub):
            walk(e.left, sign)
            walk(e.right, -sign)
        elif isinstance(e, Neg):
            walk(e.arg, -sign)
        else:
            c, fs = product_parts(e)
            c = _check(c * sign)
            if not fs:
                constant = _check(constant + c)
            else:
                key = rebuild_product(1.0, fs)
                terms[key] = _check(terms.get(key, 0.0) + c)

    walk(e, 1.0)
    return constant, [(c, k) for k, c in terms.items() if c != 0.0]


def _term_node(coeff: float, key: Expr) -> Expr:
    if coeff == 1.0:
        return key
    # route through the product rebuilder so coefficient placement matches
    # what a later simplify pass would produce (keeps the pass idempotent)
    try:
        c2, fs = product_parts(key)
        return rebuild_product(coeff * c2, fs)
    except _FoldError:
        return Mul(Const(coeff), key)


def rebuild_sum(constant: float, terms) -> Expr:
    """Deterministic sum tree from sum_terms output (constant term last)."""
    items = sorted(((c, k) for c, k in terms if c != 0.0),
                   key=lambda ck: to_source(ck[1]))
    if not items:
        return Const(constant)
    expr = None
    for c, k in items:
        if expr is None:
            expr = _term_node(c, k)
        elif c > 0:
            expr = Add(expr, _term_node(c, k))
        else:
            expr = Sub(expr, _term_node(-c, k))
    if constant > 0:
        expr = Add(expr, Const(constant))
    elif constant < 0:
        expr = Sub(expr, Const(-constant))
    return expr


def _collect_sum(e: Expr) -> Expr:
    try:
        constant, terms = sum_terms(e)
    except _FoldError:
        return e
    return rebuild_sum(constant, terms)


def _collect_product(e: Expr) -> Expr:
    try:
        coeff, factors = product_parts(e)
    except _FoldError:
        return e
    return rebuild_product(coeff, factors)


_FOLD = {"sin": math.sin, "cos": math.cos, "exp": math.exp,
         "log": math.log, "atan": math.atan, "sqrt": math.sqrt}


def _simp_call(fn: str, a: Expr) -> Expr:
    if isinstance(a, Const):
        try:
            return Const(_check(_FOLD[fn](a.value)))
        except (ValueError, OverflowError, _FoldError):
            return Call(fn, a)
    if fn == "log" and isinstance(a, Call) and a.fn == "exp":
        return a.arg
    if fn == "exp":
        # exp(c0 + sum c_i*log(u_i)) -> e^c0 * prod u_i^c_i
        try:
            constant, terms = sum_terms(a)
        except _FoldError:
            return Call(fn, a)
        if terms and all(isinstance(k, Call) and k.fn == "log"
                         for _, k in terms):
            try:
                coeff = _check(math.exp(constant))
                merged: dict[Expr, float] = {}
                for c, k in terms:
                    merged[k.arg] = merged.get(k.arg, 0.0) + c
                return _collect_product(
                    rebuild_product(coeff, list(merged.items())))
            except (OverflowError, _FoldError):
                return Call(fn, a)
    return Call(fn, a)


def _simp_pow(base: Expr, exponent: Expr) -> Expr:
    if isinstance(exponent, Const):
        k = exponent.value
        if k == 0.0:
            return ONE
        if isinstance(base, Const):
            try:
                return Const(_check(math.pow(base.value, k)))
            except (ValueError, OverflowError, _FoldError):
                return Pow(base, exponent)
        if k == 1.0:
            return base
        return _collect_product(Pow(base, exponent))
    if isinstance(base, Const) and base.value == 1.0:
        return ONE
    return Pow(base, exponent)


def simplify(e: Expr) -> Expr:
    """Value-preserving rewrite; idempotent and deterministic."""
    if isinstance(e, (Const, Var)):
        return e
    if isinstance(e, Call):
        return _simp_call(e.fn, simplify(e.arg))
    if isinstance(e, Neg):
        return _collect_sum(Neg(simplify(e.arg)))
    if isinstance(e, (Add, Sub)):
        left, right = simplify(e.left), simplify(e.right)
        node = Add(left, right) if isinstance(e, Add) else Sub(left, right)
        return _collect_sum(node)
    if isinstance(e, (Mul, Div)):
        left, right = simplify(e.left), simplify(e.right)
        node = Mul(left, right) if isinstance(e, Mul) else Div(left, right)
        return _collect_product(node)
    if isinstance(e, Pow):
        return _simp_pow(simplify(e.base), simplify(e.exponent))
    raise TypeError(f"not an Expr: {e!r}")
