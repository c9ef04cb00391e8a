"""Exact arithmetic in cyclotomic fields Q(zeta_l).

Elements are coefficient vectors over the power basis 1, x, ..., x^{phi(l)-1}
modulo the l-th cyclotomic polynomial, with Fraction coefficients.  Enough
field operations for Gaussian elimination, which is what exact defect
certification needs.  Sizes stay small (degree <= 10 or so), so plain dense
arithmetic is adequate.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence

from .errors import InvalidInputError

# polynomials are coefficient lists, lowest degree first, no trailing zeros


def _poly_trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod_exact(num: list, den: list) -> list:
    """Quotient of integer polynomials known to divide exactly."""
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for k in range(len(q) - 1, -1, -1):
        c = num[k + len(den) - 1]
        if c % lead != 0:
            raise ArithmeticError("division is not exact")
        q[k] = c // lead
        for i, d in enumerate(den):
            num[k + i] -= q[k] * d
    if any(num):
        raise ArithmeticError("division is not exact")
    return q


@lru_cache(maxsize=None)
def _cyclotomic_cached(l: int) -> tuple:
    num = [-1] + [0] * (l - 1) + [1]
    for d in range(1, l):
        if l % d == 0:
            num = _poly_divmod_exact(num, _cyclotomic_cached(d))
    return tuple(num)


def cyclotomic_polynomial(l: int) -> List[int]:
    """Integer coefficients of the l-th cyclotomic polynomial, low first."""
    if l < 1:
        raise InvalidInputError("l must be >= 1")
    return list(_cyclotomic_cached(l))


class CycloContext:
    """Field arithmetic in Q(zeta_l) on the power basis."""

    def __init__(self, l: int):
        self.l = l
        self.phi_poly = cyclotomic_polynomial(l)
        self.deg = len(self.phi_poly) - 1
        # x^e reduced mod Phi_l, as integer vectors, for e up to max need
        top = max(l, 2 * self.deg - 1)
        table = []
        for e in range(top):
            if e < self.deg:
                v = [0] * self.deg
                v[e] = 1
            else:
                prev = table[e - 1]
                v = [0] + list(prev)
                c = v.pop()  # coefficient at x^deg
                if c:
                    v = [a - c * b for a, b in zip(v, self.phi_poly[:self.deg])]
            table.append(v)
        self._pow = table

    # -- element constructors ----------------------------------------------

    def zero(self) -> tuple:
        return tuple([Fraction(0)] * self.deg)

    def one(self) -> tuple:
        return tuple([Fraction(1)] + [Fraction(0)] * (self.deg - 1))

    def zeta_power(self, e: int) -> tuple:
        return tuple(Fraction(c) for c in self._pow[e % self.l])

    def from_exponent_counts(self, counts: Sequence[int]) -> tuple:
        """Sum of counts[e] * zeta^e as a field element."""
        acc = [0] * self.deg
        for e, c in enumerate(counts):
            if c:
                v = self._pow[e % self.l]
                acc = [a + c * b for a, b in zip(acc, v)]
        return tuple(Fraction(c) for c in acc)

    # -- arithmetic ----------------------------------------------------------

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def mul(self, a, b):
        conv = [Fraction(0)] * (2 * self.deg - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        conv[i + j] += x * y
        acc = list(conv[:self.deg])
        for e in range(self.deg, len(conv)):
            c = conv[e]
            if c:
                v = self._pow[e]
                acc = [p + c * q for p, q in zip(acc, v)]
        return tuple(acc)

    def is_zero(self, a) -> bool:
        return all(x == 0 for x in a)

    def inverse(self, a):
        """Multiplicative inverse via the extended Euclidean algorithm."""
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        r0 = [Fraction(c) for c in self.phi_poly]
        r1 = _poly_trim([Fraction(x) for x in a])
        s0, s1 = [], [Fraction(1)]
        while True:
            if len(r1) == 1:
                c = r1[0]
                inv = [x / c for x in s1]
                out = [Fraction(0)] * self.deg
                for i, x in enumerate(inv):
                    out[i] = x
                return tuple(out)
            q, r = _poly_divmod_frac(r0, r1)
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
            r0, r1 = r1, r
            if not r1:
                raise ArithmeticError("element is a zero divisor; l composite issue")


def _poly_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _poly_trim(out)


def _poly_sub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] -= x
    return _poly_trim(out)


def _poly_divmod_frac(num: list, den: list):
    num = list(num)
    if len(num) < len(den):
        return [], _poly_trim(num)
    q = [Fraction(0)] * (len(num) - len(den) + 1)
    lead = den[-1]
    for k in range(len(q) - 1, -1, -1):
        c = num[k + len(den) - 1]
        if c:
            q[k] = c / lead
            for i, d in enumerate(den):
                num[k + i] -= q[k] * d
    return _poly_trim(q), _poly_trim(num)


def exact_rank(rows: List[list], ctx: CycloContext) -> int:
    """Rank of a matrix of field elements by Gaussian elimination."""
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        piv = None
        for r in range(rank, len(rows)):
            if not ctx.is_zero(rows[r][col]):
                piv = r
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = ctx.inverse(rows[rank][col])
        rows[rank] = [ctx.mul(inv, v) for v in rows[rank]]
        for r in range(len(rows)):
            if r != rank and not ctx.is_zero(rows[r][col]):
                f = rows[r][col]
                rows[r] = [ctx.sub(v, ctx.mul(f, w))
                           for v, w in zip(rows[r], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank


def exact_defect_butson(exponents: Sequence[Sequence[int]], l: int,
                        max_degree: int = 10, max_size: int = 64) -> int:
    """Tangent-space dimension of a Butson matrix, certified exactly.

    The real tangent system [Re C; Im C] over R has the same rank as the
    stacked [C; conj(C)] over Q(zeta_l), so the defect M*N - rank comes out
    of exact field arithmetic with no floating point involved.
    """
    E = [list(map(int, row)) for row in exponents]
    m = len(E)
    n = len(E[0]) if m else 0
    if m == 0 or n == 0:
        raise InvalidInputError("empty exponent table")
    if any(len(r) != n for r in E):
        raise InvalidInputError("ragged exponent table")
    ctx = CycloContext(l)
    if ctx.deg > max_degree or m * n > max_size:
        raise InvalidInputError(
            f"exact defect limited to degree <= {max_degree} and size <= "
            f"{max_size}; got degree {ctx.deg}, size {m * n}")
    if m == 1:
        return n
    rows = []
    for i in range(m):
        for j in range(i + 1, m):
            for sign in (1, -1):
                row = [ctx.zero()] * (m * n)
                for k in range(n):
                    c = ctx.zeta_power(sign * (E[i][k] - E[j][k]))
                    row[i * n + k] = c
                    row[j * n + k] = ctx.neg(c)
                rows.append(row)
    return m * n - exact_rank(rows, ctx)


def exact_vanishing(exponents: Sequence[int], l: int) -> bool:
    """Whether the sum of zeta_l^e over the exponent list is exactly zero."""
    counts = [0] * l
    for e in exponents:
        counts[e % l] += 1
    ctx = CycloContext(l)
    return ctx.is_zero(ctx.from_exponent_counts(counts))


def solve_integer(a_columns: List[Sequence[int]], v: Sequence[int]) -> Optional[List[int]]:
    """Solve sum_j c_j * a_columns[j] = v over the integers.

    Column reduction to echelon form with a recorded transform; returns one
    solution or None.  Exactness matters here, not speed: systems are tiny.
    """
    ncols = len(a_columns)
    if ncols == 0:
        return None if any(v) else []
    nrows = len(a_columns[0])
    w = [list(map(int, col)) for col in a_columns]
    u = [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]

    def col_addmul(dst: int, src: int, f: int):
        for r in range(nrows):
            w[dst][r] += f * w[src][r]
        for r in range(ncols):
            u[dst][r] += f * u[src][r]

    def col_swap(i: int, j: int):
        w[i], w[j] = w[j], w[i]
        u[i], u[j] = u[j], u[i]

    pivots = []  # (row, col) pairs, rows increasing
    pc = 0
    for row in range(nrows):
        if pc == ncols:
            break
        live = [j for j in range(pc, ncols) if w[j][row] != 0]
        if not live:
            continue
        # Euclidean reduction among the live columns at this row
        while len(live) > 1:
            live.sort(key=lambda j: abs(w[j][row]))
            base = live[0]
            nxt = []
            for j in live[1:]:
                col_addmul(j, base, -(w[j][row] // w[base][row]))
                if w[j][row] != 0:
                    nxt.append(j)
            live = [base] + nxt
        j = live[0]
        col_swap(pc, j)
        if w[pc][row] < 0:
            for r in range(nrows):
                w[pc][r] = -w[pc][r]
            for r in range(ncols):
                u[pc][r] = -u[pc][r]
        pivots.append((row, pc))
        pc += 1

    res = list(map(int, v))
    y = [0] * ncols
    for row, col in pivots:
        p = w[col][row]
        if res[row] % p != 0:
            return None
        t = res[row] // p
        if t:
            for r in range(nrows):
                res[r] -= t * w[col][r]
        y[col] = t
    if any(res):
        return None
    x = [sum(u[j][i] * y[j] for j in range(ncols)) for i in range(ncols)]
    # paranoia: confirm the reconstruction
    for r in range(nrows):
        if sum(a_columns[j][r] * x[j] for j in range(ncols)) != v[r]:
            raise ArithmeticError("integer solve reconstruction failed")
    return x
