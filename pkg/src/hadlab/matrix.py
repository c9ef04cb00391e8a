"""Partial complex Hadamard matrices and their elementary operations.

An M x N matrix H with unit-modulus entries is partial Hadamard when its
rows are pairwise orthogonal, <H_i, H_j> = N * delta_ij.  Entries are kept
in exact form (roots of unity, rational turns) whenever the construction
permits, and analysis routines down-convert to complex arrays on demand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .errors import InvalidInputError
from .phases import PhaseEntry, TurnLike

PhaseLike = Union[PhaseEntry, complex, float, int, Fraction]


def as_phase(v: PhaseLike, tol: float = 1e-9) -> PhaseEntry:
    """Coerce a scalar to a PhaseEntry.

    Fractions are read as exact turns; other numbers as cartesian values.
    """
    if isinstance(v, PhaseEntry):
        return v
    if isinstance(v, Fraction):
        return PhaseEntry.turns(v)
    return PhaseEntry.cartesian(complex(v), tol=tol)


class PHMatrix:
    """A grid of unit-modulus entries with optional provenance label.

    The `verified` flag records that verify_partial_hadamard passed; it is
    set only by that function.
    """

    __slots__ = ("_entries", "_m", "_n", "label", "_array", "_verified_tol")

    def __init__(self, entries: Sequence[Sequence[PhaseLike]], label: Optional[str] = None):
        rows = [tuple(as_phase(v) for v in row) for row in entries]
        if not rows or not rows[0]:
            raise InvalidInputError("matrix must have at least one row and one column")
        n = len(rows[0])
        if any(len(r) != n for r in rows):
            raise InvalidInputError("ragged rows are not a matrix")
        self._entries = tuple(rows)
        self._m = len(rows)
        self._n = n
        self.label = label
        self._array = None
        self._verified_tol = None

    # -- basic views -------------------------------------------------------

    @property
    def m(self) -> int:
        return self._m

    @property
    def n(self) -> int:
        return self._n

    @property
    def shape(self) -> tuple:
        return (self._m, self._n)

    def entry(self, i: int, j: int) -> PhaseEntry:
        return self._entries[i][j]

    @property
    def entries(self):
        return self._entries

    @property
    def verified(self) -> bool:
        return self._verified_tol is not None

    def to_array(self) -> np.ndarray:
        if self._array is None:
            z = np.array([[e.value for e in row] for row in self._entries],
                         dtype=np.complex128)
            z.setflags(write=False)
            self._array = z
        return self._array

    def common_butson_order(self) -> Optional[int]:
        """The shared root-of-unity order if every entry is stored as butson."""
        orders = {e.l for row in self._entries for e in row if e.kind == "butson"}
        if len(orders) == 1 and all(e.kind == "butson" for row in self._entries for e in row):
            return orders.pop()
        return None

    def exact_turn_grid(self) -> Optional[list]:
        """Turns of all entries as Fractions, or None if any entry is inexact."""
        grid = []
        for row in self._entries:
            out = []
            for e in row:
                t = e.exact_turn()
                if t is None:
                    return None
                out.append(t)
            grid.append(out)
        return grid

    def __repr__(self) -> str:
        tag = f" {self.label!r}" if self.label else ""
        return f"<PHMatrix {self._m}x{self._n}{tag}>"


@dataclass(frozen=True)
class VerificationReport:
    is_hadamard: bool
    max_inner_residual: float
    max_modulus_residual: float
    tolerance: float


@dataclass(frozen=True)
class ButsonForm:
    """Exponent table E with H_ij = exp(2*pi*i*E_ij/l)."""
    l: int
    exponents: tuple


def verify_partial_hadamard(h: PHMatrix, tol: float = 1e-9) -> VerificationReport:
    """Check unit moduli and pairwise row orthogonality.

    Inner-product residuals are compared against tol*N (inner products scale
    with the row length), modulus residuals against tol directly.
    """
    z = h.to_array()
    mod_res = float(np.max(np.abs(np.abs(z) - 1.0)))
    gram = z @ z.conj().T
    off = gram - np.diag(np.diag(gram))
    inner_res = float(np.max(np.abs(off))) if h.m > 1 else 0.0
    # the diagonal must equal N as well; fold its deviation into the inner residual
    diag_res = float(np.max(np.abs(np.diag(gram) - h.n)))
    inner_res = max(inner_res, diag_res)
    ok = inner_res <= tol * h.n and mod_res <= tol
    if ok:
        prev = h._verified_tol
        h._verified_tol = tol if prev is None else min(prev, tol)
    return VerificationReport(ok, inner_res, mod_res, tol)


def ensure_verified(h: PHMatrix, tol: float = 1e-9) -> None:
    """Establish the partial-Hadamard property or raise InvalidInputError."""
    if h._verified_tol is not None and h._verified_tol <= tol:
        return
    rep = verify_partial_hadamard(h, tol)
    if not rep.is_hadamard:
        raise InvalidInputError(
            f"matrix is not partial Hadamard at tol={tol}: "
            f"inner residual {rep.max_inner_residual:.3g}, "
            f"modulus residual {rep.max_modulus_residual:.3g}")


def dephase(h: PHMatrix):
    """Normalize the first row and column to 1.

    Returns (dephased, row_phases, col_phases) with
    H_ij = row_phases[i] * col_phases[j] * dephased_ij, exactly for exact
    representations.
    """
    e = h.entries
    p00 = e[0][0]
    row_phases = tuple(e[i][0] for i in range(h.m))
    col_phases = tuple(e[0][j] * p00.conj() for j in range(h.n))
    new = [[e[i][j] * e[i][0].conj() * e[0][j].conj() * p00 for j in range(h.n)]
           for i in range(h.m)]
    out = PHMatrix(new, label=_derived_label(h, "dephased"))
    return out, row_phases, col_phases


def dephase_at(h: PHMatrix, r: int, c: int) -> PHMatrix:
    """Dephase relative to pivot row r and pivot column c."""
    if not (0 <= r < h.m and 0 <= c < h.n):
        raise InvalidInputError("pivot out of range")
    e = h.entries
    new = [[e[i][j] * e[i][c].conj() * e[r][j].conj() * e[r][c] for j in range(h.n)]
           for i in range(h.m)]
    return PHMatrix(new, label=_derived_label(h, f"dephased@{r},{c}"))


def row_quotient(h: PHMatrix, i: int, j: int) -> np.ndarray:
    """The entrywise quotient vector H_i / H_j = (H_ik * conj(H_jk))_k."""
    if not (0 <= i < h.m and 0 <= j < h.m):
        raise InvalidInputError(f"row indices ({i},{j}) out of range for {h.m} rows")
    z = h.to_array()
    return z[i] * np.conj(z[j])


def row_quotient_phases(h: PHMatrix, i: int, j: int) -> tuple:
    """Like row_quotient but as PhaseEntry values (exact when H is exact)."""
    if not (0 <= i < h.m and 0 <= j < h.m):
        raise InvalidInputError(f"row indices ({i},{j}) out of range for {h.m} rows")
    e = h.entries
    return tuple(e[i][k] * e[j][k].conj() for k in range(h.n))


def detect_butson(h: PHMatrix, l_max: int = 60) -> Optional[ButsonForm]:
    """Smallest l <= l_max such that every entry is an l-th root of unity.

    Exact representations are resolved through denominators; floating entries
    are matched against roots within 1e-9.
    """
    if l_max < 1:
        raise InvalidInputError("l_max must be >= 1")
    grid = h.exact_turn_grid()
    if grid is not None:
        l = 1
        for row in grid:
            for t in row:
                l = l * t.denominator // math.gcd(l, t.denominator)
        if l > l_max:
            return None
        expo = tuple(tuple(int(t * l) for t in row) for row in grid)
        return ButsonForm(l, expo)
    z = h.to_array()
    turns = (np.angle(z) / (2.0 * math.pi)) % 1.0
    for l in range(1, l_max + 1):
        e = np.rint(turns * l).astype(int) % l
        resid = np.abs(z - np.exp(2j * math.pi * e / l))
        if np.max(resid) <= 1e-9:
            return ButsonForm(l, tuple(tuple(int(v) for v in row) for row in e))
    return None


def tensor_product(h: PHMatrix, k: PHMatrix) -> PHMatrix:
    """Kronecker product with row-major composite indices (i,a) -> i*m_k + a."""
    eh, ek = h.entries, k.entries
    rows = []
    for i in range(h.m):
        for a in range(k.m):
            rows.append([eh[i][j] * ek[a][b] for j in range(h.n) for b in range(k.n)])
    label = None
    if h.label and k.label:
        label = f"{h.label} (x) {k.label}"
    return PHMatrix(rows, label=label)


def apply_equivalence(h: PHMatrix,
                      row_perm: Sequence[int],
                      col_perm: Sequence[int],
                      row_phases: Sequence[PhaseLike],
                      col_phases: Sequence[PhaseLike]) -> PHMatrix:
    """Permute rows/columns and multiply them by unit phases.

    The image of H under (sigma, tau, a, b) is H'_{sigma(i), tau(j)} = a_i b_j H_ij.
    """
    if sorted(row_perm) != list(range(h.m)) or sorted(col_perm) != list(range(h.n)):
        raise InvalidInputError("row_perm/col_perm must be permutations of the index ranges")
    if len(row_phases) != h.m or len(col_phases) != h.n:
        raise InvalidInputError("phase vectors must match the matrix shape")
    a = [as_phase(p) for p in row_phases]
    b = [as_phase(p) for p in col_phases]
    new = [[None] * h.n for _ in range(h.m)]
    e = h.entries
    for i in range(h.m):
        for j in range(h.n):
            new[row_perm[i]][col_perm[j]] = a[i] * b[j] * e[i][j]
    return PHMatrix(new, label=_derived_label(h, "equiv"))


@dataclass(frozen=True)
class EquivalenceProfile:
    """A tuple of invariants shared by all equivalent forms of a matrix."""
    shape: tuple
    defect: int
    cycle_labels: tuple
    butson_order: Optional[int]


def equivalence_profile(h: PHMatrix, tol: float = 1e-9, l_max: int = 60,
                        cycle_tol: float = 1e-8, budget: int = 10 ** 7) -> EquivalenceProfile:
    """Invariants of the equivalence class of H.

    The Butson order of the matrix as given is not invariant (row and column
    phases change entry orders), so the reported order is the minimum over
    all pivot dephasings, which phase changes cannot affect.
    """
    ensure_verified(h, tol)
    # imported here: defect and regularity modules build on this one
    from .defect import defect as _defect
    from .regularity import cycle_structure_profile

    rep = _defect(h, tol=tol)
    labels = tuple(sorted(cycle_structure_profile(h, tol=cycle_tol, budget=budget).values()))
    best: Optional[int] = None
    for r in range(h.m):
        for c in range(h.n):
            form = detect_butson(dephase_at(h, r, c), l_max)
            if form is not None and (best is None or form.l < best):
                best = form.l
    return EquivalenceProfile((h.m, h.n), rep.defect, labels, best)


def _derived_label(h: PHMatrix, op: str) -> Optional[str]:
    return f"{op}({h.label})" if h.label else None
