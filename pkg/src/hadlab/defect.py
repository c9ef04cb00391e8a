"""Tangent-space dimension (defect) of partial Hadamard matrices.

The defect counts the real degrees of freedom of first-order deformations
that keep all rows orthogonal and all entries unimodular, M*N minus the
rank of the tangent system.  It is bounded below by M + N - 1 (the trivial
row/column phase deformations), and equality certifies that the matrix is
isolated up to equivalence.

Four independent routes are implemented: the direct tangent system, an
extension system through a unitary completion, a kernel/image split for row
truncations of group Fourier matrices, and a character-sum system for
matrices given in eigenphase/exponent form.  They must agree; disagreement
raises ConsistencyError rather than returning a number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .constructors import (MasterSpec, group_elements, master_matrix,
                           normalize_row_subset, truncated_fourier,
                           _check_orders)
from .cyclotomic import exact_defect_butson
from .errors import ConsistencyError, InvalidInputError
from .matrix import PHMatrix, detect_butson, ensure_verified

DEFAULT_CONFIDENCE = 1e6


@dataclass(frozen=True)
class RankResult:
    rank: int
    smallest_kept: Optional[float]
    largest_dropped: Optional[float]
    gap_ratio: float


def numerical_rank(mat: np.ndarray, tol: float = 1e-9) -> RankResult:
    """SVD rank with the spectral-gap diagnostic.

    Threshold is tol * sigma_max * max(shape).  gap_ratio compares the
    smallest kept singular value to the largest dropped one; +inf when
    nothing was dropped (or everything was), which counts as confident.
    """
    if mat.size == 0 or mat.shape[0] == 0:
        return RankResult(0, None, None, math.inf)
    s = np.linalg.svd(mat, compute_uv=False)
    smax = float(s[0])
    if smax == 0.0:
        return RankResult(0, None, None, math.inf)
    thresh = tol * smax * max(mat.shape)
    rank = int(np.sum(s > thresh))
    smallest_kept = float(s[rank - 1]) if rank > 0 else None
    largest_dropped = float(s[rank]) if rank < len(s) else None
    if largest_dropped is None or largest_dropped == 0.0 or rank == 0:
        gap = math.inf
    else:
        gap = smallest_kept / largest_dropped
    return RankResult(rank, smallest_kept, largest_dropped, gap)


@dataclass(frozen=True)
class DefectReport:
    defect: int
    method: str
    bound: int                      # M + N - 1, the generic lower bound
    unknowns: int
    rank: int
    gap_ratio: float
    smallest_kept: Optional[float]
    largest_dropped: Optional[float]
    tolerance: float
    confidence: float
    ambiguous: bool
    exact: bool = False
    breakdown: Optional[dict] = None

    @property
    def certifies_isolation(self) -> bool:
        return (self.defect == self.bound) and not self.ambiguous


def complex_rows_to_real(rows: np.ndarray) -> np.ndarray:
    """Stack a complex constraint matrix into [Re; Im] over the reals."""
    return np.vstack([rows.real, rows.imag])


def tangent_system(h: PHMatrix) -> np.ndarray:
    """Complex tangent constraints, one row per unordered row pair.

    Unknowns are the M*N real phase directions A_ik (column index i*N + k);
    the pair (i, j) contributes sum_k H_ik conj(H_jk) (A_ik - A_jk) = 0.
    """
    z = h.to_array()
    m, n = h.m, h.n
    npairs = m * (m - 1) // 2
    sys = np.zeros((npairs, m * n), dtype=np.complex128)
    r = 0
    for i in range(m):
        for j in range(i + 1, m):
            w = z[i] * np.conj(z[j])
            sys[r, i * n:(i + 1) * n] = w
            sys[r, j * n:(j + 1) * n] = -w
            r += 1
    return sys


def _report(method: str, h_shape: Tuple[int, int], unknowns: int, rr: RankResult,
            tol: float, confidence: float, exact: bool = False,
            breakdown: Optional[dict] = None) -> DefectReport:
    m, n = h_shape
    d = unknowns - rr.rank
    ambiguous = (not exact) and rr.gap_ratio < confidence
    rep = DefectReport(
        defect=d, method=method, bound=m + n - 1, unknowns=unknowns,
        rank=rr.rank, gap_ratio=rr.gap_ratio, smallest_kept=rr.smallest_kept,
        largest_dropped=rr.largest_dropped, tolerance=tol,
        confidence=confidence, ambiguous=ambiguous, exact=exact,
        breakdown=breakdown)
    if not rep.ambiguous and d < rep.bound:
        raise ConsistencyError(
            f"computed defect {d} under the lower bound {rep.bound}; the "
            f"input cannot be partial Hadamard at this tolerance")
    return rep


def defect(h: PHMatrix, tol: float = 1e-9,
           confidence: float = DEFAULT_CONFIDENCE) -> DefectReport:
    """Defect from the direct tangent system."""
    ensure_verified(h, tol)
    if h.m == 1:
        rr = RankResult(0, None, None, math.inf)
        return _report("direct", h.shape, h.n, rr, tol, confidence, exact=True)
    real_sys = complex_rows_to_real(tangent_system(h))
    rr = numerical_rank(real_sys, tol)
    return _report("direct", h.shape, h.m * h.n, rr, tol, confidence)


def defect_exact(h: PHMatrix, l_max: int = 60) -> DefectReport:
    """Defect by exact cyclotomic rank; input must be Butson-type."""
    ensure_verified(h)
    form = detect_butson(h, l_max)
    if form is None:
        raise InvalidInputError(
            f"no root-of-unity form of order <= {l_max} found; exact defect "
            f"needs a Butson-type matrix")
    d = exact_defect_butson(form.exponents, form.l)
    rr = RankResult(h.m * h.n - d, None, None, math.inf)
    return _report("direct-exact", h.shape, h.m * h.n, rr, 0.0, math.inf,
                   exact=True, breakdown={"butson_order": form.l})


def exact_feasible(h: PHMatrix, l_max: int = 60) -> bool:
    """Cheap feasibility test for the exact route (small field, small size)."""
    form = detect_butson(h, l_max)
    if form is None:
        return False
    from .cyclotomic import CycloContext
    deg = CycloContext(form.l).deg
    size = h.m * h.n
    return (deg <= 4 and size <= 40) or (deg <= 2 and size <= 64)


# -- extension route ---------------------------------------------------------

def unitary_completion(h: PHMatrix, seed: Optional[int] = None) -> np.ndarray:
    """An N x N matrix K with K K* = N I whose first M rows are H.

    The missing rows span the orthogonal complement of the row space; with a
    seed they are mixed by a random unitary, giving a different but equally
    valid completion.
    """
    ensure_verified(h)
    z = h.to_array() / math.sqrt(h.n)
    if h.m == h.n:
        return h.to_array().copy()
    _, _, vh = np.linalg.svd(z, full_matrices=True)
    comp = vh[h.m:]
    if seed is not None:
        rng = np.random.default_rng(seed)
        g = rng.normal(size=(comp.shape[0], comp.shape[0])) \
            + 1j * rng.normal(size=(comp.shape[0], comp.shape[0]))
        q, r = np.linalg.qr(g)
        q = q * (np.diag(r) / np.abs(np.diag(r)))
        comp = q @ comp
    k = np.vstack([z, comp]) * math.sqrt(h.n)
    resid = np.max(np.abs(k @ np.conj(k.T) - h.n * np.eye(h.n)))
    if resid > 1e-8 * h.n:
        raise ConsistencyError(f"completion failed, unitarity residual {resid:.3g}")
    return k


def extension_system(h: PHMatrix, k: np.ndarray) -> np.ndarray:
    """Real constraint matrix for deformations through a completion.

    Unknowns: a Hermitian M x M block X and a free complex M x (N-M) block
    Y, as M*M + 2*M*(N-M) reals.  Each matrix position gives one row,
    Im((E K)_ij conj(H_ij)) = 0 for E = (X Y).
    """
    m, n = h.m, h.n
    z = h.to_array()
    nu = m * m + 2 * m * (n - m)

    # unknown layout: X diagonal, then (Re, Im) per off-diagonal pair, then Y
    off = {}
    pos = m
    for a in range(m):
        for b in range(a + 1, m):
            off[(a, b)] = (pos, pos + 1)
            pos += 2
    y_base = pos

    rows = np.zeros((m * n, nu), dtype=np.float64)
    for i in range(m):
        for j in range(n):
            c = np.conj(z[i, j]) * k[:, j]  # c_u = K_uj conj(H_ij)
            row = rows[i * n + j]
            for u in range(n):
                cu = c[u]
                if u < m:
                    if u == i:
                        row[i] += cu.imag              # diagonal X_ii, real

                    elif i < u:
                        re_ix, im_ix = off[(i, u)]
                        row[re_ix] += cu.imag          # X_iu: coeff 1
                        row[im_ix] += cu.real          # Im(i * cu) = Re cu
                    else:
                        re_ix, im_ix = off[(u, i)]
                        row[re_ix] += cu.imag          # conj(X_ui): Re part
                        row[im_ix] += -cu.real         # Im(-i * cu)
                else:
                    b = u - m
                    row[y_base + 2 * (i * (n - m) + b)] += cu.imag
                    row[y_base + 2 * (i * (n - m) + b) + 1] += cu.real
    return rows


def defect_via_extension(h: PHMatrix, tol: float = 1e-9,
                         confidence: float = DEFAULT_CONFIDENCE,
                         seed: Optional[int] = None) -> DefectReport:
    """Defect from the completion route; agrees with the direct system."""
    ensure_verified(h, tol)
    k = unitary_completion(h, seed=seed)
    sys = extension_system(h, k)
    rr = numerical_rank(sys, tol)
    nu = h.m * h.m + 2 * h.m * (h.n - h.m)
    return _report("extension", h.shape, nu, rr, tol, confidence,
                   breakdown={"completion_seeded": seed is not None})


# -- split route for truncated Fourier ---------------------------------------

def defect_split_truncated_fourier(rows: Sequence, orders: Sequence[int],
                                   tol: float = 1e-9,
                                   confidence: float = DEFAULT_CONFIDENCE) -> DefectReport:
    """Defect of a row truncation of a group Fourier matrix, computed as
    dim(kernel) + dim(image cap admissible), then cross-checked against the
    direct tangent system.

    Writing P_g(h) for the Fourier transform of tangent row g at frequency
    h, the map A -> (P_g(h))_{g,h in S} has a kernel (invisible directions)
    and an image that meets the admissible subspace cut out by
    P_g(h) = P_{g+h}(h) (row-pair orthogonality, when g+h stays in S) and
    P_g(-h) = conj(P_g(h)) (realness).  For difference-closed subsets, in
    particular initial intervals of a cyclic group, every pair constraint is
    captured and the split is exact; the direct cross-check guards the rest.
    """
    orders = _check_orders(orders)
    subset = normalize_row_subset(rows, orders)
    m = len(subset)
    elems = group_elements(orders)
    n = len(elems)
    l = math.lcm(*orders)
    weights = [l // nn for nn in orders]
    sub_index = {g: a for a, g in enumerate(subset)}

    def add(g, hh):
        return tuple((gc + hc) % nn for gc, hc, nn in zip(g, hh, orders))

    def neg(hh):
        return tuple((-hc) % nn for hc, nn in zip(hh, orders))

    def char(hh, kk) -> complex:
        e = sum(w * hc * kc for w, hc, kc in zip(weights, hh, kk)) % l
        return complex(np.exp(2j * np.pi * e / l))

    # the window map on real tangent directions, complex target (a, b)
    phi = np.zeros((m * m, m * n), dtype=np.complex128)
    for a in range(m):
        for b, hh in enumerate(subset):
            for kk_ix, kk in enumerate(elems):
                phi[a * m + b, a * n + kk_ix] = char(hh, kk)
    # phi maps R^{m n} -> R^{2 m^2}; real target coords: Re block then Im block
    phi_real = np.vstack([phi.real, phi.imag])

    def re_ix(a, b):
        return a * m + b

    def im_ix(a, b):
        return m * m + a * m + b

    u, s, vh = np.linalg.svd(phi_real, full_matrices=False)
    smax = float(s[0]) if len(s) else 0.0
    thresh = tol * smax * max(phi_real.shape) if smax > 0 else 0.0
    rank_phi = int(np.sum(s > thresh))
    gap_phi = math.inf
    if 0 < rank_phi < len(s) and s[rank_phi] > 0:
        gap_phi = float(s[rank_phi - 1] / s[rank_phi])
    dim_k = m * n - rank_phi
    basis = u[:, :rank_phi]  # orthonormal basis of the image, in R^{2 m^2}

    cons = []
    for a, g in enumerate(subset):
        for b, hh in enumerate(subset):
            tgt = add(g, hh)
            a2 = sub_index.get(tgt)
            if a2 is not None and a2 != a:
                row = np.zeros(2 * m * m)
                row[re_ix(a, b)] += 1.0
                row[re_ix(a2, b)] -= 1.0
                cons.append(row)
                row = np.zeros(2 * m * m)
                row[im_ix(a, b)] += 1.0
                row[im_ix(a2, b)] -= 1.0
                cons.append(row)
    for a in range(m):
        for b, hh in enumerate(subset):
            b2 = sub_index.get(neg(hh))
            if b2 is None:
                continue
            if b2 == b:
                row = np.zeros(2 * m * m)
                row[im_ix(a, b)] = 1.0
                cons.append(row)
            elif b2 > b:
                row = np.zeros(2 * m * m)
                row[re_ix(a, b)] += 1.0
                row[re_ix(a, b2)] -= 1.0
                cons.append(row)
                row = np.zeros(2 * m * m)
                row[im_ix(a, b)] += 1.0
                row[im_ix(a, b2)] += 1.0
                cons.append(row)
    if cons and rank_phi > 0:
        restricted = np.array(cons) @ basis
        rr_c = numerical_rank(restricted, tol)
        rank_cons = rr_c.rank
        gap_cons = rr_c.gap_ratio
    else:
        rank_cons = 0
        gap_cons = math.inf
    dim_i = rank_phi - rank_cons
    d_split = dim_k + dim_i
    gap = min(gap_phi, gap_cons)

    direct = defect(truncated_fourier(subset, orders), tol, confidence)
    if d_split != direct.defect and not direct.ambiguous and gap >= confidence:
        raise ConsistencyError(
            f"split defect {d_split} disagrees with direct defect "
            f"{direct.defect} for rows {subset} of orders {orders}")
    rr = RankResult(m * n - d_split, None, None, gap)
    return _report("split", (m, n), m * n, rr, tol, confidence,
                   breakdown={"dim_kernel": dim_k, "dim_image_admissible": dim_i,
                              "direct_defect": direct.defect})


# -- eigenphase/exponent route ------------------------------------------------

def defect_master(spec: MasterSpec, tol: float = 1e-9,
                  confidence: float = DEFAULT_CONFIDENCE) -> DefectReport:
    """Defect straight from an eigenphase/exponent table.

    Tangent rows are expanded over the basis functions k -> e^{-i t_s n_k}
    (orthogonal because the matrix is Hadamard with distinct eigenphases),
    turning realness and orthogonality of directions into character-sum
    systems in a complex coefficient matrix B.  Cross-checked against the
    direct tangent system of the materialized matrix.
    """
    if spec.m != spec.n:
        raise InvalidInputError(
            "eigenphase/exponent defect needs a square table")
    nsz = spec.m
    h = master_matrix(spec)
    ensure_verified(h, tol)
    turns = [float(x) for x in spec.angle_turns()]
    for i in range(nsz):
        for j in range(i + 1, nsz):
            if abs(turns[i] - turns[j]) < 1e-12:
                raise InvalidInputError("eigenphases must be pairwise distinct")
    t = [2.0 * math.pi * v for v in turns]

    ell = np.zeros((nsz, nsz), dtype=np.complex128)
    for s in range(nsz):
        for a in range(nsz):
            ell[s, a] = spec.char_sum(-(t[s] + t[a]))

    def x_ix(i, s):
        return i * nsz + s

    def y_ix(i, s):
        return nsz * nsz + i * nsz + s

    rows = []
    # realness: N conj(B_ia) = (B L)_ia
    for i in range(nsz):
        for a in range(nsz):
            re_row = np.zeros(2 * nsz * nsz)
            im_row = np.zeros(2 * nsz * nsz)
            re_row[x_ix(i, a)] += nsz
            im_row[y_ix(i, a)] -= nsz
            for s in range(nsz):
                re_row[x_ix(i, s)] -= ell[s, a].real
                re_row[y_ix(i, s)] += ell[s, a].imag
                im_row[x_ix(i, s)] -= ell[s, a].imag
                im_row[y_ix(i, s)] -= ell[s, a].real
            rows.append(re_row)
            rows.append(im_row)
    # orthogonality of perturbed rows, per ordered pair
    for i in range(nsz):
        for j in range(nsz):
            if i == j:
                continue
            r = np.array([spec.char_sum(t[i] - t[j] - t[s]) for s in range(nsz)])
            re_row = np.zeros(2 * nsz * nsz)
            im_row = np.zeros(2 * nsz * nsz)
            for s in range(nsz):
                re_row[x_ix(i, s)] += r[s].real
                re_row[x_ix(j, s)] -= r[s].real
                re_row[y_ix(i, s)] -= r[s].imag
                re_row[y_ix(j, s)] += r[s].imag
                im_row[x_ix(i, s)] += r[s].imag
                im_row[x_ix(j, s)] -= r[s].imag
                im_row[y_ix(i, s)] += r[s].real
                im_row[y_ix(j, s)] -= r[s].real
            rows.append(re_row)
            rows.append(im_row)
    sys = np.array(rows)
    rr = numerical_rank(sys, tol)
    d = 2 * nsz * nsz - rr.rank

    direct = defect(h, tol, confidence)
    ambiguous = rr.gap_ratio < confidence
    if d != direct.defect and not ambiguous and not direct.ambiguous:
        raise ConsistencyError(
            f"eigenphase/exponent defect {d} disagrees with direct defect "
            f"{direct.defect}")
    return _report("master", (nsz, nsz), 2 * nsz * nsz, rr, tol, confidence,
                   breakdown={"direct_defect": direct.defect})


# -- closed forms and certificates --------------------------------------------

def element_order(g: Sequence[int], orders: Sequence[int]) -> int:
    o = 1
    for gc, nn in zip(g, orders):
        o = math.lcm(o, nn // math.gcd(gc, nn))
    return o


def fourier_defect_formula(orders: Sequence[int]) -> int:
    """Defect of a group Fourier matrix: sum over elements of the subgroup
    index [G : <g>]."""
    orders = _check_orders(orders)
    size = math.prod(orders)
    return sum(size // element_order(g, orders) for g in group_elements(orders))


def cyclic_defect_closed_form(n: int) -> int:
    """Same number for a cyclic group, as a product over prime powers."""
    if n < 1:
        raise InvalidInputError("n must be >= 1")
    total = 1
    rem = n
    p = 2
    while rem > 1:
        if rem % p == 0:
            a = 0
            pk = 1
            while rem % p == 0:
                rem //= p
                a += 1
                pk *= p
            total *= (pk // p) * (p + a * p - a)
        p += 1 if p == 2 else 2
    return total


def count_one_entries(h: PHMatrix, tol: float = 1e-9) -> int:
    grid = h.exact_turn_grid()
    if grid is not None:
        return sum(1 for row in grid for t in row if t == 0)
    z = h.to_array()
    return int(np.sum(np.abs(z - 1.0) <= tol))


def real_truncation_defect_formula(m: int, n: int) -> int:
    """Defect of a row truncation of a real Hadamard matrix of order n."""
    if not (1 <= m <= n):
        raise InvalidInputError("need 1 <= m <= n")
    return m * (m + 1) // 2 + m * (n - m)


@dataclass(frozen=True)
class IsolationCertificate:
    shape: Tuple[int, int]
    defect: int
    bound: int
    certified_isolated: bool
    status: str          # "isolated" | "undetermined" | "ambiguous"
    exact: bool
    report: DefectReport

    def __str__(self):
        return (f"{self.shape[0]}x{self.shape[1]}: defect {self.defect}, "
                f"bound {self.bound} -> {self.status}"
                + (" (exact)" if self.exact else ""))


def isolation_certificate(h: PHMatrix, tol: float = 1e-9,
                          confidence: float = DEFAULT_CONFIDENCE,
                          prefer_exact: bool = True) -> IsolationCertificate:
    """Decide whether the defect certificate proves isolation.

    defect == M + N - 1 certifies the matrix is isolated among partial
    Hadamard matrices up to equivalence; a larger defect leaves the question
    undetermined (the bound is one-sided).  The exact cyclotomic route is
    used when available so that the certificate does not rest on a floating
    rank decision.
    """
    ensure_verified(h, tol)
    rep = None
    if prefer_exact and exact_feasible(h):
        rep = defect_exact(h)
    if rep is None:
        rep = defect(h, tol, confidence)
    bound = h.m + h.n - 1
    if rep.ambiguous:
        status = "ambiguous"
    elif rep.defect == bound:
        status = "isolated"
    else:
        status = "undetermined"
    return IsolationCertificate(
        shape=(h.m, h.n), defect=rep.defect, bound=bound,
        certified_isolated=(status == "isolated"), status=status,
        exact=rep.exact, report=rep)


def truncation_probe(n: int, sizes: Optional[Sequence[int]] = None,
                     tol: float = 1e-9,
                     confidence: float = DEFAULT_CONFIDENCE) -> list:
    """Isolation certificates for initial-interval truncations of F_n."""
    if n < 2:
        raise InvalidInputError("n must be >= 2")
    if sizes is None:
        sizes = range(2, n + 1)
    out = []
    for m in sizes:
        if not (1 <= m <= n):
            raise InvalidInputError(f"truncation size {m} out of range for n={n}")
        h = truncated_fourier(range(m), [n])
        out.append(isolation_certificate(h, tol, confidence))
    return out
