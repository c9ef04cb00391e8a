"""Constructors for partial complex Hadamard matrices.

Fourier matrices of finite abelian groups and their row truncations, phase
deformations of tensor products, a one-parameter 4x4 family, a one-parameter
7x7 family, and matrices given by an eigenphase/exponent table (each row a
power sequence lambda_i ** n_j).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .errors import InvalidInputError
from .matrix import PHMatrix, PhaseLike, as_phase, ensure_verified
from .phases import PhaseEntry


def _check_orders(orders: Sequence[int]) -> Tuple[int, ...]:
    orders = tuple(int(n) for n in orders)
    if not orders:
        raise InvalidInputError("need at least one cyclic factor")
    if any(n < 1 for n in orders):
        raise InvalidInputError(f"cyclic orders must be positive, got {orders}")
    return orders


def group_elements(orders: Sequence[int]) -> list:
    """Elements of Z_n1 x ... x Z_nk in row-major order.

    The position of g in this list is the row/column index used by
    fourier_group, so (i, a) <-> i * n2 + a for two factors.
    """
    orders = _check_orders(orders)
    return list(itertools.product(*(range(n) for n in orders)))


def group_index(g: Sequence[int], orders: Sequence[int]) -> int:
    idx = 0
    for c, n in zip(g, orders):
        idx = idx * n + (c % n)
    return idx


def fourier_cyclic(n: int) -> PHMatrix:
    """The n x n Fourier matrix of Z_n, entries exp(2*pi*i*jk/n)."""
    if n < 1:
        raise InvalidInputError("order must be >= 1")
    rows = [[PhaseEntry.butson((i * j) % n, n) for j in range(n)] for i in range(n)]
    return PHMatrix(rows, label=f"F{n}")


def fourier_group(orders: Sequence[int]) -> PHMatrix:
    """Fourier matrix of a product of cyclic groups, rows and columns in
    row-major element order, entries as lcm-order roots of unity."""
    orders = _check_orders(orders)
    l = math.lcm(*orders)
    elems = group_elements(orders)
    weights = [l // n for n in orders]
    rows = []
    for g in elems:
        rows.append([
            PhaseEntry.butson(sum(w * gc * hc for w, gc, hc in zip(weights, g, h)) % l, l)
            for h in elems
        ])
    label = f"F{orders[0]}" if len(orders) == 1 else "F" + "x".join(str(n) for n in orders)
    return PHMatrix(rows, label=label)


def normalize_row_subset(rows: Sequence, orders: Sequence[int]) -> list:
    """Row selectors (group tuples or flat indices) -> list of group tuples."""
    orders = _check_orders(orders)
    elems = group_elements(orders)
    out = []
    for r in rows:
        if isinstance(r, int):
            if not (0 <= r < len(elems)):
                raise InvalidInputError(f"row index {r} out of range 0..{len(elems) - 1}")
            out.append(elems[r])
        else:
            g = tuple(int(c) for c in r)
            if len(g) != len(orders):
                raise InvalidInputError(f"element {g} has wrong arity for orders {orders}")
            out.append(tuple(c % n for c, n in zip(g, orders)))
    if len(set(out)) != len(out):
        raise InvalidInputError("row subset has duplicates")
    if not out:
        raise InvalidInputError("row subset is empty")
    return out


def truncated_fourier(rows: Sequence, orders: Sequence[int]) -> PHMatrix:
    """Row submatrix of the group Fourier matrix.

    `rows` may be group elements (tuples) or flat row indices.
    """
    orders = _check_orders(orders)
    subset = normalize_row_subset(rows, orders)
    full = fourier_group(orders)
    picked = [full.entries[group_index(g, orders)] for g in subset]
    desc = ",".join("".join(map(str, g)) if len(orders) > 1 else str(g[0]) for g in subset)
    return PHMatrix(picked, label=f"{full.label}[{desc}]")


@dataclass(frozen=True)
class DitaParams:
    """Data for a phase-deformed tensor product.

    phases[i][b] multiplies block row i, inner column b; shape must be
    (outer.m, inner.n).  With all phases 1 this is the plain tensor product.
    """
    outer: PHMatrix
    inner: PHMatrix
    phases: tuple

    def __post_init__(self):
        grid = tuple(tuple(as_phase(v) for v in row) for row in self.phases)
        if len(grid) != self.outer.m or any(len(r) != self.inner.n for r in grid):
            raise InvalidInputError(
                f"phase grid must be {self.outer.m} x {self.inner.n}")
        object.__setattr__(self, "phases", grid)


def dita_deformation(params: DitaParams) -> PHMatrix:
    """Deformed tensor product, composite indices row-major.

    Entry ((i,a),(j,b)) = outer_ij * phases[i][b] * inner_ab.  Rows stay
    orthogonal for every unit phase grid: the j-sum factors out of each
    block-row pair, and within a block row the phases cancel.
    """
    h, k, q = params.outer, params.inner, params.phases
    rows = []
    for i in range(h.m):
        for a in range(k.m):
            rows.append([h.entries[i][j] * q[i][b] * k.entries[a][b]
                         for j in range(h.n) for b in range(k.n)])
    return PHMatrix(rows, label="dita")


def f22q(q: PhaseLike) -> PHMatrix:
    """The 4x4 one-parameter family: F_2 x F_2 with one free phase q.

    Hadamard for every unit q; equals F_2 tensor F_2 at q = 1.
    """
    qp = as_phase(q)
    one = PhaseEntry.one()
    m1 = -one
    rows = [
        [one, one, one, one],
        [one, m1, one, m1],
        [one, qp, m1, -qp],
        [one, -qp, m1, qp],
    ]
    return PHMatrix(rows, label="F22q")


def petrescu(q: PhaseLike) -> PHMatrix:
    """A one-parameter family of 7x7 Hadamard matrices.

    Built over the primitive cube root w = exp(2*pi*i/3); every row pair's
    inner product reduces to a multiple of 1 + w + conj(w) = 0, for any
    unit q.
    """
    qp = as_phase(q)
    w = PhaseEntry.turns(Fraction(1, 3))
    one = PhaseEntry.one()
    qbw = qp.conj() * w
    rows = [
        [-qp, qp, w, one, w, one, w],
        [qp, -qp, w, one, one, w, w],
        [w, w, -w, one, w, w, one],
        [one, one, one, -one, w, w, w],
        [w, one, w, w, -qbw, qbw, one],
        [one, w, w, w, qbw, -qbw, one],
        [w, w, one, w, one, one, -one],
    ]
    return PHMatrix(rows, label="P7")


# -- eigenphase/exponent form -----------------------------------------------

ExponentLike = Union[int, Fraction, float]


@dataclass(frozen=True)
class MasterSpec:
    """Rows as power sequences: H_ij = lambda_i ** n_j.

    Powers of a unit phase follow the principal-turn convention,
    (e^{2*pi*i*t})^r = e^{2*pi*i*t*r} with t in [0, 1), so non-integer
    exponents depend on that branch choice.
    """
    eigenphases: tuple
    exponents: tuple

    def __post_init__(self):
        phases = tuple(as_phase(v) for v in self.eigenphases)
        expo = tuple(self.exponents)
        if not phases or not expo:
            raise InvalidInputError("need at least one eigenphase and one exponent")
        for e in expo:
            if not isinstance(e, (int, Fraction, float)):
                raise InvalidInputError(f"exponent {e!r} is not a real number")
        object.__setattr__(self, "eigenphases", phases)
        object.__setattr__(self, "exponents", expo)

    @property
    def m(self) -> int:
        return len(self.eigenphases)

    @property
    def n(self) -> int:
        return len(self.exponents)

    def angle_turns(self) -> list:
        """Principal turns of the eigenphases, exact where possible."""
        out = []
        for p in self.eigenphases:
            t = p.exact_turn()
            out.append(t if t is not None else p.turn_value())
        return out

    def char_sum(self, theta: float) -> complex:
        """Sum of e^{i*theta*n_j} over the exponent list, theta signed.

        theta is a plain real angle; no 2*pi reduction is applied, since the
        exponents need not be integers.
        """
        n = np.array([float(e) for e in self.exponents], dtype=np.float64)
        return complex(np.sum(np.exp(1j * theta * n)))


def master_matrix(spec: MasterSpec) -> PHMatrix:
    """Materialize the power-sequence matrix of a MasterSpec.

    Exact turns are kept when an eigenphase turn is rational and the
    exponent is an integer or Fraction.
    """
    turns = spec.angle_turns()
    rows = []
    for t in turns:
        row = []
        for e in spec.exponents:
            if isinstance(t, Fraction) and isinstance(e, (int, Fraction)):
                row.append(PhaseEntry.turns(t * e))
            else:
                row.append(PhaseEntry.turns((float(t) * float(e)) % 1.0))
        rows.append(row)
    return PHMatrix(rows, label="master")


def master_dita(n_outer: int, m_inner: int, k: int,
                p: Sequence[ExponentLike], r: Sequence[ExponentLike]):
    """A deformed tensor of Fourier matrices together with its power-sequence
    description.

    Returns (H, spec) where H is the deformed tensor product of F_{n_outer}
    and F_{m_inner} with block phases Q_ib = exp(2*pi*i * i*(m*p_b + b) / (m*n*k)),
    always verified partial Hadamard, and spec has eigenphases
    lambda_(i,a) = exp(2*pi*i*(i/(m*n*k) + a/m)) and exponents
    n_(j,b) = m*k*(n*r_j + j) + m*p_b + b.

    The materialized spec agrees with H entrywise exactly when all p_b and
    r_j are integers; for fractional parameters the two differ by branch
    terms and only H is guaranteed Hadamard.
    """
    if n_outer < 1 or m_inner < 1 or k < 1:
        raise InvalidInputError("sizes and k must be positive integers")
    if len(p) != m_inner or len(r) != n_outer:
        raise InvalidInputError(
            f"need {m_inner} inner parameters and {n_outer} outer parameters")
    n, m = n_outer, m_inner
    base = m * n * k

    def _turn(num) -> PhaseEntry:
        if isinstance(num, (int, Fraction)):
            return PhaseEntry.turns(Fraction(num, base))
        return PhaseEntry.turns(float(num) / base)

    grid = [[_turn(i * (m * p[b] + b)) for b in range(m)] for i in range(n)]
    dita = dita_deformation(DitaParams(fourier_cyclic(n), fourier_cyclic(m),
                                       tuple(tuple(row) for row in grid)))
    ensure_verified(dita, 1e-9)

    lam = [PhaseEntry.turns((Fraction(i, base) + Fraction(a, m)) % 1)
           for i in range(n) for a in range(m)]
    expo = []
    for j in range(n):
        for b in range(m):
            e = m * k * (n * r[j] + j) + m * p[b] + b
            if isinstance(e, Fraction) and e.denominator == 1:
                e = int(e)
            expo.append(e)
    return dita, MasterSpec(tuple(lam), tuple(expo))


def f22q_master_spec(q: PhaseLike) -> MasterSpec:
    """Power-sequence form of the 4x4 family.

    Exists under the principal-branch convention only when q is a root of
    unity of order divisible by 4: q = exp(2*pi*i*c/d) reduced with 4 | d.
    Then eigenphases (1, -1, q, -q) with exponents (0, 1, d/2, d/2 + 1)
    reproduce f22q(q) entry by entry.
    """
    qp = as_phase(q)
    t = qp.exact_turn()
    if t is None:
        raise InvalidInputError(
            "q must be an exact root of unity (rational turn) to admit a "
            "power-sequence form")
    d = t.denominator
    if d % 4 != 0:
        raise InvalidInputError(
            f"no power-sequence form under the principal branch: the turn "
            f"denominator of q is {d}, which is not divisible by 4")
    one = PhaseEntry.one()
    lam = (one, -one, qp, -qp)
    expo = (0, 1, d // 2, d // 2 + 1)
    return MasterSpec(lam, expo)
