"""Brute-force reference implementations, written without the library's shortcuts.

Values here are Fractions in [0, 1] rather than integer numerators, and
enumerations are naive fixpoints or subset scans.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import gcd


def f_oplus(x, y):
    return min(Fraction(1), x + y)


def f_neg(x):
    return 1 - x


def f_odot(x, y):
    return f_neg(f_oplus(f_neg(x), f_neg(y)))


def f_ominus(x, y):
    return f_odot(x, f_neg(y))


def f_join(x, y):
    return f_oplus(f_ominus(x, y), y)


def f_meet(x, y):
    return f_neg(f_join(f_neg(x), f_neg(y)))


def f_distance(x, y):
    return f_oplus(f_ominus(x, y), f_ominus(y, x))


def chain_fractions(order):
    return [Fraction(k, order - 1) for k in range(order)]


def to_fractions(a, orders):
    return tuple(Fraction(x, n - 1) for x, n in zip(a, orders))


def closure_oracle(orders, generators):
    """Subalgebra generated inside ∏ Ł_n, by naive fixpoint on Fraction tuples."""
    zero = tuple(Fraction(0) for _ in orders)
    cur = {zero, *[tuple(Fraction(v) for v in g) for g in generators]}
    while True:
        new = set(cur)
        for a in cur:
            new.add(tuple(f_neg(x) for x in a))
            for b in cur:
                new.add(tuple(f_oplus(x, y) for x, y in zip(a, b)))
        if new == cur:
            return cur
        cur = new


def _leq(a, b):
    return all(x <= y for x, y in zip(a, b))


def ideal_closure_oracle(sig, carrier, seed):
    """Close a subset downward and under ⊕ until nothing changes."""
    cur = set(seed) | {sig.zero}
    while True:
        new = set(cur)
        for a in cur:
            new |= {b for b in carrier if _leq(b, a)}
            for b in cur:
                new.add(sig.oplus(a, b))
        if new == cur:
            return frozenset(cur)
        cur = new


def ideals_oracle(A):
    """All ideals, grown one element at a time from {0}."""
    sig, carrier = A.signature, A.carrier
    start = ideal_closure_oracle(sig, carrier, ())
    found = {start}
    todo = [start]
    while todo:
        I = todo.pop()
        for a in carrier - I:
            J = ideal_closure_oracle(sig, carrier, I | {a})
            if J not in found:
                found.add(J)
                todo.append(J)
    return found


def maximal_oracle(A):
    proper = [I for I in ideals_oracle(A) if A.one not in I]
    return {I for I in proper if not any(I < J for J in proper)}


def is_ideal_oracle(A, members):
    sig = A.signature
    if A.zero not in members:
        return False
    for a in members:
        for b in A.carrier:
            if _leq(b, a) and b not in members:
                return False
        for b in members:
            if sig.oplus(a, b) not in members:
                return False
    return True


def cuts_oracle(A):
    els = A.elements
    cuts = set()
    for mask in range(1 << len(els)):
        S = [e for j, e in enumerate(els) if mask >> j & 1]
        up = [b for b in els if all(_leq(s, b) for s in S)]
        lo = frozenset(a for a in els if all(_leq(a, u) for u in up))
        if lo == frozenset(S):
            cuts.add(lo)
    return cuts


def boolean_ideals_oracle(k):
    """Ideals of 2^k by scanning every subset of the 2^k bitmasks."""
    els = range(1 << k)
    out = []
    for mask in range(1 << (1 << k)):
        S = {e for e in els if mask >> e & 1}
        if 0 not in S:
            continue
        if all((a | b) in S for a in S for b in S) and all(
                x in S for a in S for x in els if x & ~a == 0):
            out.append(frozenset(S))
    return out


def boole_n_oracle(k, n):
    """All ideal sequences of length n-1 on 2^k satisfying the two sequence conditions."""
    ideals = boolean_ideals_oracle(k)
    out = []
    for seq in product(ideals, repeat=n - 1):
        if any(seq[i - 1] != seq[n - i - 1] for i in range(1, n)):
            continue
        if all(seq[h - 1] & seq[i - h - 1] <= seq[i - 1] for i in range(2, n) for h in range(1, i)):
            out.append(seq)
    return out


def relation_oracle(k, n, ideals):
    """R_J by scanning every n-tuple of 2^k."""
    top = (1 << k) - 1
    out = set()
    for t in product(range(1 << k), repeat=n):
        if any(t[i] & ~t[i - 1] for i in range(1, n)):
            continue
        if all((t[i - 1] & (top ^ t[i])) in ideals[i - 1] for i in range(1, n)):
            out.add(t)
    return out


def lcm(a, b):
    return a * b // gcd(a, b)


def divides(m, n):
    return n % m == 0


def all_tables(order, npoints):
    return list(product(range(order), repeat=npoints))


def brn_axioms_oracle(k, n, relation):
    """The four relational axioms checked literally on bitmask tuples."""
    top = (1 << k) - 1
    R = set(relation)
    if any(t[i] & ~t[i - 1] for t in R for i in range(1, n)):
        return False
    if any(tuple(top ^ x for x in reversed(t)) not in R for t in R):
        return False
    if any((a,) * n not in R for a in range(1 << k)):
        return False
    for a in R:
        for b in R:
            c = []
            for i in range(n):
                v = a[i] | b[i]
                for h in range(n):
                    for m in range(n):
                        if h + m == i - 1:
                            v |= a[h] & b[m]
                c.append(v)
            if tuple(c) not in R:
                return False
    return True
