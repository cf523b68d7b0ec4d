"""Shared fixtures: the worked example forms, domains, and seeded random
expression generators used by the property tests."""
import random

import pytest

from deform import Domain, one_form
from deform.expr import parse
from deform.expr.nodes import (Add, Call, Const, Mul, Pow, Var)


@pytest.fixture
def box():
    return Domain((-2.0, 2.0, -2.0, 2.0))


@pytest.fixture
def punctured_box():
    return Domain((-2.0, 2.0, -2.0, 2.0), punctures=((0.0, 0.0),))


@pytest.fixture
def strip():
    return Domain((0.5, 2.0, -1.0, 1.0))


@pytest.fixture
def example1():
    # (2xy + 1) dx + (x^2 + cos y) dy: exact on the plane
    return one_form("2*x*y + 1", "x^2 + cos(y)")


@pytest.fixture
def example2():
    # the angle form: closed but not exact around the origin
    return one_form("-y/(x^2+y^2)", "x/(x^2+y^2)")


@pytest.fixture
def example4():
    # d(log r): exact even on the punctured plane
    return one_form("x/(x^2+y^2)", "y/(x^2+y^2)")


def _affine(rng):
    a = round(rng.uniform(-1.5, 1.5), 3)
    b = round(rng.uniform(-1.5, 1.5), 3)
    c = round(rng.uniform(-1.5, 1.5), 3)
    return Add(Add(Mul(Const(a), Var("x")), Mul(Const(b), Var("y"))),
               Const(c))


def random_smooth_expr(rng: random.Random, depth: int = 3):
    """Random expression that is defined (and mildly conditioned) on all of
    [-2, 2]^2: polynomials, trig/exp/atan of affine arguments, and log/sqrt
    of strictly positive arguments."""
    if depth == 0:
        return rng.choice([Var("x"), Var("y"),
                           Const(round(rng.uniform(-3, 3), 3))])
    pick = rng.random()
    if pick < 0.5:
        a = random_smooth_expr(rng, depth - 1)
        b = random_smooth_expr(rng, depth - 1)
        op = rng.choice([lambda: Add(a, b), lambda: Mul(a, b)])
        return op()
    if pick < 0.65:
        return Pow(random_smooth_expr(rng, 1), Const(float(rng.randint(2, 3))))
    fn = rng.choice(["sin", "cos", "exp", "atan", "log", "sqrt"])
    arg = _affine(rng)
    if fn in ("log", "sqrt"):
        arg = Add(Const(1.0), Pow(arg, Const(2.0)))
    return Call(fn, arg)


def random_polynomial(rng: random.Random, max_degree: int = 4,
                      coeff_bound: float = 3.0):
    """Random nonconstant polynomial with total degree <= max_degree."""
    monomials = [(i, j) for i in range(max_degree + 1)
                 for j in range(max_degree + 1) if 0 < i + j <= max_degree]
    count = rng.randint(1, 5)
    terms = rng.sample(monomials, count)
    parts = []
    for i, j in terms:
        c = round(rng.uniform(-coeff_bound, coeff_bound), 3)
        if c == 0.0:
            c = 1.0
        term = Const(c)
        if i:
            term = Mul(term, Pow(Var("x"), Const(float(i))))
        if j:
            term = Mul(term, Pow(Var("y"), Const(float(j))))
        parts.append(term)
    e = parts[0]
    for p in parts[1:]:
        e = Add(e, p)
    return e
