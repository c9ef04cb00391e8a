"""Rank-one projection grids from row quotients, and what they generate.

Each ordered row pair (i, j) of a partial Hadamard matrix gives the unit
vector v_ij = H_i / H_j (entrywise) and the projection P_ij onto it.  Row
and column sums of the grid are projections (sub-magic); for a square
matrix they equal the identity.  When the v's are pairwise parallel or
orthogonal the grid encodes a partial Latin square whose classes act as
partial permutations of the rows; composing them generates a finite
semigroup.  Traces of words in the P's are collected in moment matrices
whose unit eigenvalues count the semigroup elements reachable at each word
length, in the square case N^{p-1}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import ConsistencyError, InvalidInputError, SearchBudgetExceeded
from .matrix import PHMatrix, ensure_verified

MAX_CLOSURE = 10 ** 6
MAX_MOMENT_ENTRIES = 16 * 10 ** 6


class ProjectionGrid:
    """The M x M family of rank-one projections P_ij = v_ij v_ij* / N."""

    def __init__(self, h: PHMatrix):
        ensure_verified(h)
        z = h.to_array()
        self.m = h.m
        self.n = h.n
        # V[i, j, :] = row i over row j, a unit-modulus vector of length N
        self.vectors = z[:, None, :] * np.conj(z[None, :, :])

    def projection(self, i: int, j: int) -> np.ndarray:
        v = self.vectors[i, j]
        return np.outer(v, np.conj(v)) / self.n


def projection_grid(h: PHMatrix) -> ProjectionGrid:
    return ProjectionGrid(h)


@dataclass(frozen=True)
class SubmagicReport:
    ok: bool
    max_row_residual: float
    max_col_residual: float
    tolerance: float


def verify_submagic(h: PHMatrix, tol: float = 1e-9) -> SubmagicReport:
    """Row and column sums of the projection grid must be projections."""
    grid = ProjectionGrid(h)
    m, n = grid.m, grid.n

    def proj_residual(s: np.ndarray) -> float:
        return float(np.max(np.abs(s @ s - s)))

    row_res = 0.0
    col_res = 0.0
    for i in range(m):
        s = sum(grid.projection(i, j) for j in range(m))
        row_res = max(row_res, proj_residual(s))
    for j in range(m):
        s = sum(grid.projection(i, j) for i in range(m))
        col_res = max(col_res, proj_residual(s))
    return SubmagicReport(row_res <= tol * n and col_res <= tol * n,
                          row_res, col_res, tol)


@dataclass(frozen=True)
class ClassicalityReport:
    classical: bool
    worst_overlap: float     # the overlap farthest from both 0 and 1
    tolerance: float


def classicality_test(h: PHMatrix, tol: float = 1e-8) -> ClassicalityReport:
    """Are all pairs of quotient vectors either parallel or orthogonal?

    Overlaps |<v_ij, v_kl>|/N land in {0, 1} exactly for group Fourier
    matrices and their truncations; anything strictly between witnesses a
    genuinely quantum (non-classical) grid.
    """
    grid = ProjectionGrid(h)
    m, n = grid.m, grid.n
    flat = grid.vectors.reshape(m * m, n)
    ov = np.abs(flat @ np.conj(flat.T)) / n
    dist = np.minimum(ov, np.abs(ov - 1.0))
    worst = float(np.max(dist))
    return ClassicalityReport(worst <= tol, worst, tol)


@dataclass(frozen=True)
class PreLatinSquare:
    """Class labels of the quotient vectors, first occurrence row-major.

    labels[i][j] is 1-based; label 1 is always the diagonal (all-ones)
    class.  No label repeats within a row or a column: a repeat would force
    two distinct rows of the matrix to be proportional.
    """
    labels: Tuple[Tuple[int, ...], ...]
    n_labels: int

    def __str__(self):
        return "\n".join(" ".join(f"{x:2d}" for x in row) for row in self.labels)


def pre_latin_square(h: PHMatrix, tol: float = 1e-8):
    """Classify quotient vectors up to phase; None when non-classical.

    Returns (square, representatives) where representatives[x-1] is the
    vector of the first pair assigned label x.
    """
    rep = classicality_test(h, tol)
    if not rep.classical:
        return None
    grid = ProjectionGrid(h)
    m, n = grid.m, grid.n
    reps: List[np.ndarray] = []
    labels = [[0] * m for _ in range(m)]
    for i in range(m):
        for j in range(m):
            v = grid.vectors[i, j]
            assigned = None
            for x, u in enumerate(reps):
                if abs(np.vdot(u, v)) / n > 0.5:
                    assigned = x + 1
                    break
            if assigned is None:
                reps.append(v)
                assigned = len(reps)
            labels[i][j] = assigned
    square = PreLatinSquare(tuple(tuple(r) for r in labels), len(reps))
    for row in square.labels:
        if len(set(row)) != m:
            raise ConsistencyError("class label repeated within a row")
    for col in zip(*square.labels):
        if len(set(col)) != m:
            raise ConsistencyError("class label repeated within a column")
    return square, reps


@dataclass(frozen=True)
class PartialPermutation:
    """A partial injective map on row indices 0..m-1.

    targets[j] is the image of j, or None where undefined.  kappa counts
    the domain.
    """
    targets: Tuple[Optional[int], ...]

    @property
    def m(self) -> int:
        return len(self.targets)

    @property
    def kappa(self) -> int:
        return sum(1 for t in self.targets if t is not None)

    def __post_init__(self):
        defined = [t for t in self.targets if t is not None]
        if len(set(defined)) != len(defined):
            raise InvalidInputError("partial permutation must be injective")
        if any(t is not None and not (0 <= t < self.m) for t in self.targets):
            raise InvalidInputError("target out of range")

    @classmethod
    def identity(cls, m: int) -> "PartialPermutation":
        return cls(tuple(range(m)))

    @classmethod
    def empty(cls, m: int) -> "PartialPermutation":
        return cls((None,) * m)

    def notation(self) -> str:
        """Compact 1-based display: 'id', the empty-set sign, or source ->
        target pairs compressed to two digits where possible."""
        if all(t == j for j, t in enumerate(self.targets)):
            return "id" if self.m > 0 else "∅"
        pairs = [(j, t) for j, t in enumerate(self.targets) if t is not None]
        if not pairs:
            return "∅"
        if self.m < 10:
            return ",".join(f"{j + 1}{t + 1}" for j, t in pairs)
        return ",".join(f"{j + 1}→{t + 1}" for j, t in pairs)

    def __str__(self):
        return self.notation()


def compose(f: PartialPermutation, g: PartialPermutation) -> PartialPermutation:
    """f after g: defined at x when g(x) and f(g(x)) both are."""
    if f.m != g.m:
        raise InvalidInputError("mismatched sizes")
    out = []
    for x in range(g.m):
        y = g.targets[x]
        out.append(None if y is None else f.targets[y])
    return PartialPermutation(tuple(out))


def sigma_from_square(square: PreLatinSquare, label: int) -> PartialPermutation:
    """The partial permutation of class x: sends j to i when labels[i][j] = x."""
    m = len(square.labels)
    targets: List[Optional[int]] = [None] * m
    for i in range(m):
        for j in range(m):
            if square.labels[i][j] == label:
                targets[j] = i
    return PartialPermutation(tuple(targets))


@dataclass(frozen=True)
class SemigroupClosure:
    elements: Tuple[PartialPermutation, ...]
    generator_count: int

    @property
    def size(self) -> int:
        return len(self.elements)

    def notations(self) -> list:
        return [e.notation() for e in self.elements]


def semigroup_closure(generators: Sequence[PartialPermutation],
                      cap: int = MAX_CLOSURE) -> SemigroupClosure:
    """Close a set of partial permutations under composition (BFS)."""
    gens = list(generators)
    if not gens:
        return SemigroupClosure((), 0)
    m = gens[0].m
    if any(g.m != m for g in gens):
        raise InvalidInputError("generators act on different index sets")
    seen = {g.targets: g for g in gens}
    frontier = list(seen.values())
    while frontier:
        nxt = []
        for a in frontier:
            for b in list(seen.values()):
                for c in (compose(a, b), compose(b, a)):
                    if c.targets not in seen:
                        seen[c.targets] = c
                        nxt.append(c)
                        if len(seen) > cap:
                            raise SearchBudgetExceeded(
                                f"closure exceeded {cap} elements")
        frontier = nxt
    ordered = tuple(sorted(seen.values(),
                           key=lambda e: (-e.kappa, e.targets.index(None)
                                          if None in e.targets else -1,
                                          str(e.targets))))
    return SemigroupClosure(ordered, len(gens))


def extract_semigroup(h: PHMatrix, tol: float = 1e-8,
                      cap: int = MAX_CLOSURE):
    """Pre-Latin square classes of H, closed under composition.

    Returns (closure, square).  Raises InvalidInputError when the grid is
    non-classical, since then no partial-permutation picture exists.
    """
    res = pre_latin_square(h, tol)
    if res is None:
        raise InvalidInputError(
            "projection grid is non-classical; no partial permutation "
            "semigroup to extract")
    square, _ = res
    gens = [sigma_from_square(square, x) for x in range(1, square.n_labels + 1)]
    return semigroup_closure(gens, cap), square


def interval_shift_maps(m: int) -> Tuple[PartialPermutation, ...]:
    """All order-preserving shifts between index intervals, plus the empty
    map: 1 + sum_k (m+1-k)^2 elements over interval lengths k = 1..m."""
    if m < 1:
        raise InvalidInputError("need at least 1 row")
    elems = {PartialPermutation.empty(m).targets: PartialPermutation.empty(m)}
    for k in range(1, m + 1):
        for src in range(m - k + 1):
            for dst in range(m - k + 1):
                targets: List[Optional[int]] = [None] * m
                for t in range(k):
                    targets[src + t] = dst + t
                pp = PartialPermutation(tuple(targets))
                elems[pp.targets] = pp
    return tuple(sorted(elems.values(),
                        key=lambda e: (-e.kappa, e.targets.index(None)
                                       if None in e.targets else -1,
                                       str(e.targets))))


def predicted_truncated_semigroup(m: int, n: int) -> SemigroupClosure:
    """The expected closure for an M-row initial truncation of F_N when
    N > 2M - 2: the interval shift maps together with the empty map.

    For shorter matrices the wrap-around of Z_N produces extra
    coincidences, so the prediction refuses to apply.
    """
    if m < 2:
        raise InvalidInputError("need at least 2 rows")
    if not n > 2 * m - 2:
        raise InvalidInputError(
            f"prediction requires N > 2M - 2 (got M={m}, N={n})")
    return SemigroupClosure(interval_shift_maps(m), 0)


# -- moment matrices -----------------------------------------------------------

@dataclass(frozen=True)
class MomentMatrix:
    p: int
    matrix: np.ndarray
    formal: bool      # True when M < N: the grid is only sub-magic

    @property
    def side(self) -> int:
        return self.matrix.shape[0]


def moment_matrix(h: PHMatrix, p: int) -> MomentMatrix:
    """The M^p x M^p matrix of normalized traces of length-p words.

    Entry ((i_1..i_p), (j_1..j_p)) = Tr(P_{i1 j1} ... P_{ip jp}) / N.  Since
    each P is rank one, the trace collapses to a cyclic product of the
    Gram tensor A[i,j,k,l] = <v_ij, v_kl>, evaluated here in a single
    contraction.
    """
    if p < 1:
        raise InvalidInputError("word length p must be >= 1")
    grid = ProjectionGrid(h)
    m, n = grid.m, grid.n
    if m ** (2 * p) > MAX_MOMENT_ENTRIES:
        raise InvalidInputError(
            f"moment matrix would need {m ** (2 * p)} entries; refusing")
    v = grid.vectors
    a = np.einsum("ijm,klm->ijkl", np.conj(v), v)
    letters = "abcdefghijklmnopqrstuvwxyz"
    if 2 * p > len(letters):
        raise InvalidInputError("word length too large")
    row = letters[:p]
    col = letters[p:2 * p]
    subs = ",".join(row[t] + col[t] + row[(t + 1) % p] + col[(t + 1) % p]
                    for t in range(p))
    out = "".join(row) + "".join(col)
    t = np.einsum(f"{subs}->{out}", *([a] * p)) / (n ** (p + 1))
    return MomentMatrix(p, t.reshape(m ** p, m ** p), formal=(m < n))


@dataclass(frozen=True)
class MomentReport:
    p: int
    value: int
    formal: bool
    ambiguous: bool
    nearest_excluded: float   # distance to 1 of the closest non-counted eigenvalue


def moment(h: PHMatrix, p: int, tol: float = 1e-8) -> MomentReport:
    """Count unit eigenvalues of the length-p moment matrix.

    For a square Hadamard matrix this is N^{p-1}.  Eigenvalues within tol
    of 1 are counted; any eigenvalue in the decade above tol flags the
    count as ambiguous.
    """
    mm = moment_matrix(h, p)
    ev = np.linalg.eigvals(mm.matrix)
    dist = np.abs(ev - 1.0)
    value = int(np.sum(dist < tol))
    excluded = dist[dist >= tol]
    nearest = float(np.min(excluded)) if excluded.size else math.inf
    ambiguous = bool(np.any((dist >= tol) & (dist < 10 * tol)))
    return MomentReport(p, value, mm.formal, ambiguous, nearest)


def cyclic_moment_oracle(n: int, p: int) -> int:
    """Unit-eigenvalue count for the full Fourier matrix F_n: n^{p-1}."""
    if n < 1 or p < 1:
        raise InvalidInputError("need n, p >= 1")
    return n ** (p - 1)
