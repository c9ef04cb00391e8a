"""Root-of-unity structure of vanishing sums from row pairs.

For orthogonal rows i, j the N terms H_ik conj(H_jk) sum to zero.  A matrix
is regular when every such multiset splits into rotated complete sets of
p-th roots of unity (p prime): subsets of the form rho * {1, zeta_p, ...,
zeta_p^{p-1}}.  The decomposition search is an exact-cover backtracking over
the term indices; integer exponent input additionally gets an exact lattice
treatment, where negative coefficients can appear.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .cyclotomic import CycloContext, solve_integer
from .errors import ConsistencyError, InvalidInputError, SearchBudgetExceeded
from .matrix import PHMatrix, ensure_verified, row_quotient_phases
from .phases import PhaseEntry

DEFAULT_BUDGET = 10 ** 7


def _primes_upto(n: int) -> list:
    out = []
    for p in range(2, n + 1):
        if all(p % q for q in out):
            out.append(p)
    return out


@dataclass(frozen=True)
class Cycle:
    """A rotated complete set of p-th roots inside a term multiset."""
    p: int
    rho: complex
    indices: Tuple[int, ...]


@dataclass(frozen=True)
class CycleDecomposition:
    cycles: Tuple[Cycle, ...]

    @property
    def label(self) -> str:
        return "+".join(str(p) for p in sorted((c.p for c in self.cycles),
                                               reverse=True))

    def __str__(self):
        return self.label


def term_multiset(h: PHMatrix, i: int, j: int) -> tuple:
    """The orthogonality terms H_ik * conj(H_jk) of a row pair, as phases."""
    if i == j:
        raise InvalidInputError("need two distinct rows")
    return row_quotient_phases(h, i, j)


def _is_rotated_cycle(values: np.ndarray, idxs: tuple, p: int, tol: float) -> bool:
    """Do the terms at idxs equal rho times each p-th root exactly once?"""
    rho = values[idxs[0]]
    seen = set()
    for ix in idxs:
        q = values[ix] / rho
        m = int(round((math.atan2(q.imag, q.real) / (2.0 * math.pi)) * p)) % p
        if m in seen:
            return False
        if abs(q - complex(math.cos(2.0 * math.pi * m / p),
                           math.sin(2.0 * math.pi * m / p))) > tol:
            return False
        seen.add(m)
    return True


def cycle_decompose(terms: Sequence, tol: float = 1e-8,
                    budget: int = DEFAULT_BUDGET) -> Optional[CycleDecomposition]:
    """Partition a vanishing multiset into rotated prime cycles.

    Deterministic search: the anchor is always the smallest uncovered index,
    primes are tried largest first, co-indices in lexicographic order, so
    equal inputs always give the same decomposition.  Returns None when the
    completed search finds no partition; raises SearchBudgetExceeded when
    the node budget runs out first, which is an inconclusive outcome, not a
    negative one.
    """
    values = np.array([t.value if isinstance(t, PhaseEntry) else complex(t)
                       for t in terms], dtype=np.complex128)
    n = len(values)
    if n == 0:
        return CycleDecomposition(())
    total = complex(np.sum(values))
    if abs(total) > tol * n:
        raise InvalidInputError(
            f"terms sum to {abs(total):.3g}, not a vanishing sum at tol {tol}")
    primes = _primes_upto(n)
    nodes = [0]

    def search(uncovered: tuple) -> Optional[list]:
        if not uncovered:
            return []
        anchor = uncovered[0]
        rest = uncovered[1:]
        for p in (q for q in reversed(primes) if q <= len(uncovered)):
            for combo in itertools.combinations(rest, p - 1):
                nodes[0] += 1
                if nodes[0] > budget:
                    raise SearchBudgetExceeded(
                        f"cycle search exceeded {budget} nodes")
                idxs = (anchor,) + combo
                if _is_rotated_cycle(values, idxs, p, tol):
                    remaining = tuple(u for u in rest if u not in combo)
                    tail = search(remaining)
                    if tail is not None:
                        return [Cycle(p, complex(values[anchor]), idxs)] + tail
        return None

    found = search(tuple(range(n)))
    if found is None:
        return None
    return CycleDecomposition(tuple(found))


@dataclass(frozen=True)
class IntegerCycleDecomposition:
    """Exact lattice account of a sum of l-th roots of unity.

    components are (p, rotation, coefficient) triples standing for
    coefficient * zeta_l^rotation * (sum of all p-th roots); rotations are
    reduced mod l/p.  nonnegative=False certifies that no decomposition with
    all nonnegative coefficients exists; None means the search could not
    settle it within budget.
    """
    l: int
    vanishing: bool
    components: Optional[Tuple[Tuple[int, int, int], ...]]
    nonnegative: Optional[bool]
    method: Optional[str]
    search_complete: bool


def cycle_decompose_integer(exponents: Sequence[int], l: int,
                            budget: int = DEFAULT_BUDGET) -> IntegerCycleDecomposition:
    """Exact decomposition of sum_k zeta_l^{e_k} over the integers.

    Tries the same exact-cover search as the floating route (p restricted to
    primes dividing l, arithmetic exact); if no partition exists, solves the
    lattice system over all rotated prime cycles, where coefficients may
    need to be negative.
    """
    if l < 1:
        raise InvalidInputError("l must be >= 1")
    exps = [int(e) % l for e in exponents]
    n = len(exps)
    counts = [0] * l
    for e in exps:
        counts[e] += 1
    ctx = CycloContext(l)
    if not ctx.is_zero(ctx.from_exponent_counts(counts)):
        return IntegerCycleDecomposition(l, False, None, None, None, True)

    primes = [p for p in _primes_upto(l) if l % p == 0]
    nodes = [0]
    budget_hit = [False]

    def is_cycle(idxs: tuple, p: int) -> bool:
        step = l // p
        e0 = exps[idxs[0]]
        offs = sorted((exps[ix] - e0) % l for ix in idxs)
        return offs == [m * step for m in range(p)]

    def search(uncovered: tuple) -> Optional[list]:
        if not uncovered:
            return []
        anchor = uncovered[0]
        rest = uncovered[1:]
        for p in (q for q in reversed(primes) if q <= len(uncovered)):
            for combo in itertools.combinations(rest, p - 1):
                nodes[0] += 1
                if nodes[0] > budget:
                    budget_hit[0] = True
                    return None
                idxs = (anchor,) + combo
                if is_cycle(idxs, p):
                    remaining = tuple(u for u in rest if u not in combo)
                    tail = search(remaining)
                    if tail is not None:
                        return [(p, exps[anchor] % (l // p))] + tail
                    if budget_hit[0]:
                        return None
        return None

    if n > 0 and primes:
        found = search(tuple(range(n)))
    else:
        found = [] if n == 0 else None
    complete = not budget_hit[0]
    if found is not None:
        agg = {}
        for p, r in found:
            agg[(p, r)] = agg.get((p, r), 0) + 1
        comps = tuple(sorted(((p, r, c) for (p, r), c in agg.items()),
                             key=lambda t: (-t[0], t[1])))
        return IntegerCycleDecomposition(l, True, comps, True, "exact-cover", complete)

    # lattice fallback: v = sum of c_{p,r} * (indicator of r + m*(l/p))
    cols = []
    keys = []
    for p in primes:
        step = l // p
        for r in range(step):
            vec = [0] * l
            for m in range(p):
                vec[(r + m * step) % l] += 1
            cols.append(vec)
            keys.append((p, r))
    sol = solve_integer(cols, counts)
    if sol is None:
        raise ConsistencyError(
            f"vanishing sum of {l}-th roots admits no integer cycle "
            f"combination; this contradicts the lattice structure of "
            f"vanishing sums")
    comps = tuple(sorted(((p, r, c) for (p, r), c in zip(keys, sol) if c != 0),
                         key=lambda t: (-t[0], t[1])))
    allpos = all(c >= 0 for _, _, c in comps)
    if allpos and complete:
        raise ConsistencyError(
            "lattice solve found a nonnegative combination but the exact "
            "cover search completed empty; these cannot both be right")
    nonneg: Optional[bool] = True if allpos else (False if complete else None)
    return IntegerCycleDecomposition(l, True, comps, nonneg, "lattice-solve", complete)


def lam_leung_length_admissible(n: int, l: int) -> bool:
    """Can n be written as a nonnegative combination of the primes of l?

    Vanishing sums of l-th roots only exist at such lengths.
    """
    if n < 0:
        raise InvalidInputError("length must be >= 0")
    primes = [p for p in _primes_upto(l) if l % p == 0] if l > 1 else []
    reachable = [False] * (n + 1)
    reachable[0] = True
    for p in primes:
        for v in range(p, n + 1):
            if reachable[v - p]:
                reachable[v] = True
    return reachable[n]


def cycle_structure_profile(h: PHMatrix, tol: float = 1e-8,
                            budget: int = DEFAULT_BUDGET) -> dict:
    """Decomposition label for every row pair.

    Values are labels like "3+2", or "irregular" when the completed search
    finds no partition, or "inconclusive" when the budget ran out.
    """
    ensure_verified(h)
    out = {}
    for i in range(h.m):
        for j in range(i + 1, h.m):
            terms = row_quotient_phases(h, i, j)
            try:
                dec = cycle_decompose(terms, tol=tol, budget=budget)
            except SearchBudgetExceeded:
                out[(i, j)] = "inconclusive"
                continue
            out[(i, j)] = dec.label if dec is not None else "irregular"
    return out


def is_regular(h: PHMatrix, tol: float = 1e-8,
               budget: int = DEFAULT_BUDGET) -> bool:
    """True when every row pair decomposes into rotated prime cycles."""
    profile = cycle_structure_profile(h, tol=tol, budget=budget)
    if any(v == "inconclusive" for v in profile.values()):
        raise SearchBudgetExceeded(
            "regularity undecided: some pair searches hit the budget")
    return all(v != "irregular" for v in profile.values())


@dataclass(frozen=True)
class WeakIsolationProbe:
    regular: Optional[bool]
    certified_isolated: bool
    isolation_status: str
    butson_order: Optional[int]
    counterexample_candidate: bool


def weak_isolation_probe(h: PHMatrix, tol: float = 1e-9,
                         cycle_tol: float = 1e-8,
                         budget: int = DEFAULT_BUDGET,
                         l_max: int = 60) -> WeakIsolationProbe:
    """Look for a regular, certified-isolated matrix that is not of
    root-of-unity type; such an example would separate regularity from the
    stronger arithmetic properties.
    """
    from .defect import isolation_certificate
    from .matrix import detect_butson

    cert = isolation_certificate(h, tol=tol)
    try:
        reg: Optional[bool] = is_regular(h, tol=cycle_tol, budget=budget)
    except SearchBudgetExceeded:
        reg = None
    form = detect_butson(h, l_max)
    order = form.l if form is not None else None
    candidate = bool(reg) and cert.certified_isolated and order is None
    return WeakIsolationProbe(
        regular=reg, certified_isolated=cert.certified_isolated,
        isolation_status=cert.status, butson_order=order,
        counterexample_candidate=candidate)
