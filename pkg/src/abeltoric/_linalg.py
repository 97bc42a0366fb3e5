"""Small exact linear-algebra helpers over Z and Q (sympy-backed)."""
from fractions import Fraction
from functools import lru_cache
from math import gcd

import sympy


def _to_fraction(x):
    x = sympy.nsimplify(x) if not isinstance(x, sympy.Rational) else x
    return Fraction(int(x.p), int(x.q))


def det(rows):
    if not rows:
        return 1
    return int(sympy.Matrix(rows).det())


def rank(rows):
    if not rows:
        return 0
    return sympy.Matrix(rows).rank()


def maximal_minors_gcd(rows):
    """gcd of the k x k minors of a k x r integer matrix (k <= r)."""
    import itertools

    k = len(rows)
    r = len(rows[0]) if rows else 0
    g = 0
    for cols in itertools.combinations(range(r), k):
        g = gcd(g, det([[row[c] for c in cols] for row in rows]))
        if g == 1:
            return 1
    return g


@lru_cache(maxsize=None)
def inverse(rows):
    """Exact inverse of a square matrix given as a tuple of tuples; entries are Fractions."""
    m = sympy.Matrix(rows).inv()
    return tuple(tuple(_to_fraction(m[i, j]) for j in range(m.cols)) for i in range(m.rows))


def solve(columns, target):
    """Solve sum_i c_i * columns[i] = target over Q.

    Returns the unique solution as a tuple of Fractions, or None when the system
    is inconsistent.  Raises ValueError when the solution is not unique.
    """
    if not columns:
        return () if all(t == 0 for t in target) else None
    a = sympy.Matrix([list(c) for c in columns]).T
    b = sympy.Matrix(list(target))
    try:
        sol, params = a.gauss_jordan_solve(b)
    except ValueError:
        return None
    if params.shape[0]:
        raise ValueError("solution is not unique")
    return tuple(_to_fraction(v) for v in sol)


def nullspace(rows):
    """Rational basis of the kernel of the matrix given by rows."""
    vecs = sympy.Matrix(rows).nullspace()
    return [tuple(_to_fraction(v) for v in vec) for vec in vecs]
