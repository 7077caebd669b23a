"""Braided vector spaces, quantum symmetrizers, Hilbert coefficients.

A braiding here is always monomial: basis x tensor y maps to a root of
unity times (x > y) tensor x, which covers rack braidings, diagonal
braidings and the graded-module braidings over dihedral groups.  Braid
words therefore act by (permutation, exponent) pairs on tensor bases and
never by dense matrices.

The n-th symmetrizer is the sum over the symmetric group of the braid
lifts of minimal words.  Its assembly uses the coset factorization: the
sum equals (previous symmetrizer tensor identity) times the sum over
the n minimal coset representatives, and because the column space of
each symmetrizer sits inside (image of the previous one) tensor the
basis, all ranks are computed in coordinates of that image.  The
matrices involved then have at most d * rank(previous) rows, which
keeps the whole Hilbert ladder cheap even when the ambient dimension
d^n is large.  Validity of the factorization is pinned against the
literal factorial-term sum in the test suite.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass

import numpy as np

from .modlin import (
    nullspace_mod,
    primes_one_mod,
    rank_exact_cyclo,
    root_of_unity_mod,
    row_reduce_mod,
    solve_in_span_mod,
    zeta_reduction_matrix,
)
from .cyclo import CycloNumber
from .racks import Rack, RackCocycle

MODULAR_BUDGET = 20_000   # max d^n columns in modular mode
EXACT_BUDGET = 2_000      # max d^n columns in exact mode
MAX_TOTAL_DEGREE = 64     # give up searching for the top degree here


class BraidEquationError(ValueError):
    """Construction produced an operator violating the braid equation."""

    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"braid equation fails on basis triple {witness}")


class DegreeTooLargeError(RuntimeError):
    """Requested degree exceeds the configured column budget."""


# ---------------------------------------------------------------------------
# Monomial operators on tensor powers
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class MonomialOp:
    """Operator e_j -> zeta^expo[j] e_perm[j] on a tensor basis."""

    k: int
    perm: np.ndarray
    expo: np.ndarray

    @classmethod
    def identity(cls, size: int, k: int) -> "MonomialOp":
        return cls(k, np.arange(size, dtype=np.int64),
                   np.zeros(size, dtype=np.int64))

    def compose_after(self, first: "MonomialOp") -> "MonomialOp":
        """self applied after `first` (matrix product self * first)."""
        return MonomialOp(self.k, self.perm[first.perm],
                          (first.expo + self.expo[first.perm]) % self.k)

    def equal(self, other: "MonomialOp") -> bool:
        return (np.array_equal(self.perm, other.perm)
                and np.array_equal(self.expo, other.expo))


class BraidedSpace:
    """Monomial braided vector space.

    c(x tensor y) = zeta_k^expo[x][y] (target[x][y] tensor x).  The braid
    equation is checked exhaustively on basis triples at construction.
    """

    def __init__(self, k: int, target, expo, labels=None):
        self.k = k
        self.target = tuple(tuple(int(v) for v in row) for row in target)
        self.expo = tuple(tuple(int(v) % k for v in row) for row in expo)
        self.dim = len(self.target)
        self.labels = tuple(labels) if labels is not None else tuple(
            f"x{i}" for i in range(self.dim))
        d = self.dim
        if any(len(row) != d for row in self.target) or \
           any(len(row) != d for row in self.expo) or len(self.labels) != d:
            raise ValueError("braiding tables have inconsistent shapes")
        self._inv_target = []
        for x in range(d):
            row = self.target[x]
            if sorted(row) != list(range(d)):
                raise ValueError(f"left translation by basis {x} not bijective")
            inv = [0] * d
            for y, t in enumerate(row):
                inv[t] = y
            self._inv_target.append(tuple(inv))
        self._letter_cache: dict[tuple[int, int, int], MonomialOp] = {}
        self._check_braid_equation()

    def _check_braid_equation(self):
        left = word_operator(self, 3, (1, 2, 1))
        right = word_operator(self, 3, (2, 1, 2))
        if not left.equal(right):
            bad = int(np.nonzero((left.perm != right.perm)
                                 | (left.expo != right.expo))[0][0])
            d = self.dim
            witness = (bad // (d * d), bad // d % d, bad % d)
            raise BraidEquationError(witness)

    def braid_letter(self, n: int, i: int, sign: int = 1) -> MonomialOp:
        """The operator of sigma_i^sign on the n-fold tensor power."""
        if not 1 <= i <= n - 1:
            raise ValueError(f"letter {i} out of range for {n} strands")
        key = (n, i, sign)
        op = self._letter_cache.get(key)
        if op is not None:
            return op
        d = self.dim
        size = d ** n
        idx = np.arange(size, dtype=np.int64)
        stride_x = d ** (n - i)
        stride_y = d ** (n - i - 1)
        x = idx // stride_x % d
        y = idx // stride_y % d
        base = idx - x * stride_x - y * stride_y
        tgt = np.array(self.target, dtype=np.int64)
        exp = np.array(self.expo, dtype=np.int64)
        if sign >= 0:
            perm = base + tgt[x, y] * stride_x + x * stride_y
            expo = exp[x, y]
        else:
            inv_tgt = np.array(self._inv_target, dtype=np.int64)
            yprime = inv_tgt[y, x]
            perm = base + y * stride_x + yprime * stride_y
            expo = (-exp[y, yprime]) % self.k
        op = MonomialOp(self.k, perm, expo)
        self._letter_cache[key] = op
        return op


def word_operator(V: BraidedSpace, n: int, word) -> MonomialOp:
    """Operator of a braid word (letters +-i for sigma_i^(+-1))."""
    acc = MonomialOp.identity(V.dim ** n, V.k)
    for letter in word:
        if letter == 0 or abs(letter) > n - 1:
            raise ValueError(f"letter {letter} invalid on {n} strands")
        acc = acc.compose_after(V.braid_letter(n, abs(letter),
                                               1 if letter > 0 else -1))
    return acc


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------


def braiding_from_rack(X: Rack, q: RackCocycle, labels=None) -> BraidedSpace:
    """c(x tensor y) = q(x, y) (x > y) tensor x on the free space on X."""
    if q.size != X.size:
        raise ValueError("cocycle and rack sizes differ")
    return BraidedSpace(k=q.order, target=X.act, expo=q.table,
                        labels=labels or [str(l) for l in X.labels])


class DiagonalBraidedSpace(BraidedSpace):
    """Diagonal braiding: x > y = y with scalar matrix zeta^qexp[x][y]."""

    def __init__(self, k: int, qexp, labels=None):
        d = len(qexp)
        target = [[y for y in range(d)] for _ in range(d)]
        super().__init__(k, target, qexp, labels)
        self.qexp = self.expo


# ---------------------------------------------------------------------------
# Matsumoto section
# ---------------------------------------------------------------------------


def matsumoto_word(sigma) -> tuple[int, ...]:
    """A reduced word for a permutation (one-line form), deterministic.

    Letters are 1-based; the word multiplies left-to-right with the
    rightmost letter applied first, matching word_operator.
    """
    s = list(sigma)
    if sorted(s) != list(range(len(s))):
        raise ValueError("not a permutation of 0..n-1")
    picks = []
    while True:
        i = next((i for i in range(len(s) - 1) if s[i] > s[i + 1]), None)
        if i is None:
            break
        s[i], s[i + 1] = s[i + 1], s[i]
        picks.append(i + 1)
    return tuple(reversed(picks))


def all_reduced_words(sigma) -> set[tuple[int, ...]]:
    """Every reduced word of a permutation (small n only)."""
    s = tuple(sigma)
    if s == tuple(range(len(s))):
        return {()}
    out = set()
    for i in range(len(s) - 1):
        if s[i] > s[i + 1]:
            shorter = list(s)
            shorter[i], shorter[i + 1] = shorter[i + 1], shorter[i]
            for w in all_reduced_words(shorter):
                out.add(w + (i + 1,))
    return out


def perm_operator(V: BraidedSpace, n: int, sigma) -> MonomialOp:
    """Braid lift of a permutation through the length-additive section."""
    return word_operator(V, n, matsumoto_word(sigma))


def verify_matsumoto_invariance(V: BraidedSpace, n: int = 4) -> bool:
    """All reduced words of every permutation induce the same operator."""
    for sigma in itertools.permutations(range(n)):
        ops = [word_operator(V, n, w) for w in all_reduced_words(sigma)]
        if any(not op.equal(ops[0]) for op in ops[1:]):
            return False
    return True


# ---------------------------------------------------------------------------
# Symmetrizer assembly
# ---------------------------------------------------------------------------


def coset_ops(V: BraidedSpace, n: int) -> list[MonomialOp]:
    """Lifts of the minimal coset representatives: words (n-1, ..., t+1)."""
    return [word_operator(V, n, tuple(range(n - 1, t, -1)))
            for t in range(n)]


def symmetrizer_literal_exact(V: BraidedSpace, n: int) -> np.ndarray:
    """Sum over all n! permutations, as integer counts per zeta power.

    Returns an (N, N, k) array over Z[x]/(x^k - 1); reduce with
    reduce_zeta_array for canonical comparisons.  Oracle path: O(n! N).
    """
    N = V.dim ** n
    acc = np.zeros((N, N, V.k), dtype=np.int64)
    cols = np.arange(N)
    for sigma in itertools.permutations(range(n)):
        op = perm_operator(V, n, sigma)
        np.add.at(acc, (op.perm, cols, op.expo), 1)
    return acc


def symmetrizer_factorized_exact(V: BraidedSpace, n: int) -> np.ndarray:
    """Same array as the literal sum, assembled by the coset factorization."""
    d = V.dim
    k = V.k
    if n == 0:
        out = np.zeros((1, 1, k), dtype=np.int64)
        out[0, 0, 0] = 1
        return out
    prev = np.zeros((d, d, k), dtype=np.int64)
    prev[np.arange(d), np.arange(d), 0] = 1
    for m in range(2, n + 1):
        N = d ** m
        out = np.zeros((d ** (m - 1), d, N, k), dtype=np.int64)
        cols = np.arange(N)
        for op in coset_ops(V, m):
            a, b = op.perm // d, op.perm % d
            for e in range(k):
                sel = cols[op.expo == e]
                if sel.size:
                    out[:, b[sel], sel, :] += np.roll(prev[:, a[sel], :],
                                                      e, axis=-1)
        prev = out.reshape(N, N, k)
    return prev


def reduce_zeta_array(arr: np.ndarray, k: int) -> np.ndarray:
    """Map counts over Z[x]/(x^k - 1) to the power basis of Q(zeta_k)."""
    return np.tensordot(arr, zeta_reduction_matrix(k), axes=([-1], [0]))


def symmetrizer_dense_mod(V: BraidedSpace, n: int, p: int, omega: int) -> np.ndarray:
    """Dense symmetrizer matrix over GF(p) with zeta_k mapped to omega."""
    d = V.dim
    zpow = np.array([pow(omega, e, p) for e in range(V.k)], dtype=np.int64)
    prev = np.eye(d, dtype=np.int64)
    if n == 0:
        return np.ones((1, 1), dtype=np.int64)
    for m in range(2, n + 1):
        N = d ** m
        out = np.zeros((d ** (m - 1), d, N), dtype=np.int64)
        cols = np.arange(N)
        for op in coset_ops(V, m):
            a, b = op.perm // d, op.perm % d
            out[:, b, cols] = (out[:, b, cols]
                               + prev[:, a] * zpow[op.expo][None, :]) % p
        prev = out.reshape(N, N)
    return prev


def exact_matrix_as_cyclo(arr: np.ndarray, k: int) -> list[list[CycloNumber]]:
    reduced = reduce_zeta_array(arr, k)
    return [[CycloNumber(k, [int(c) for c in reduced[i, j]])
             for j in range(reduced.shape[1])] for i in range(reduced.shape[0])]


# ---------------------------------------------------------------------------
# Hilbert coefficients
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SymmetrizerReport:
    """Per-degree rank data of the quantum symmetrizer."""

    degree: int
    ambient_dim: int
    rank: int
    nullity: int
    mode: str                 # "modular" | "exact"
    primes: tuple[int, ...]
    agreed: bool
    seconds: float

    def to_dict(self) -> dict:
        return {
            "schema": "symmetrizer_report.v1",
            "degree": self.degree,
            "ambient_dim": self.ambient_dim,
            "rank": self.rank,
            "nullity": self.nullity,
            "mode": self.mode,
            "primes": list(self.primes),
            "agreed": self.agreed,
            "seconds": round(self.seconds, 6),
        }


def ladder_ranks_iter(V: BraidedSpace, p: int, omega: int,
                      budget: int = MODULAR_BUDGET):
    """Yield (degree, rank, seconds) over GF(p) for degrees 0, 1, 2, ...

    Works in coordinates of the previous image; once a rank hits zero
    all later degrees are reported zero without assembly (the algebra is
    generated in degree one).  Raises DegreeTooLargeError when a degree
    needing assembly would exceed the column budget.
    """
    d = V.dim
    yield 0, 1, 0.0
    yield 1, d, 0.0
    gamma = np.eye(d, dtype=np.int64)
    r_prev = d
    zpow = np.array([pow(omega, e, p) for e in range(V.k)], dtype=np.int64)
    n = 1
    while True:
        n += 1
        if r_prev == 0:
            yield n, 0, 0.0
            continue
        N = d ** n
        if N > budget:
            raise DegreeTooLargeError(
                f"degree {n} needs {N} columns, budget {budget}")
        t0 = time.perf_counter()
        C = np.zeros((r_prev * d, N), dtype=np.int64)
        Cr = C.reshape(r_prev, d, N)
        cols = np.arange(N)
        for op in coset_ops(V, n):
            a, b = op.perm // d, op.perm % d
            Cr[:, b, cols] = (Cr[:, b, cols]
                              + gamma[:, a] * zpow[op.expo][None, :]) % p
        work = C.copy()
        _, pivots = row_reduce_mod(work, p)
        r_n = len(pivots)
        if r_n > 0:
            gamma = solve_in_span_mod(C[:, pivots], C, p)
        r_prev = r_n
        yield n, r_n, time.perf_counter() - t0


def hilbert_ladder_mod(V: BraidedSpace, dmax: int, p: int, omega: int,
                       budget: int = MODULAR_BUDGET):
    """Ranks + per-degree times of the symmetrizers for degrees 0..dmax."""
    ranks, times = [], []
    for n, rank, secs in ladder_ranks_iter(V, p, omega, budget):
        ranks.append(rank)
        times.append(secs)
        if n == dmax:
            break
    return ranks, times


def hilbert_coeffs(V: BraidedSpace, dmax: int, mode: str = "modular",
                   nprimes: int = 2, budget: int | None = None
                   ) -> list[SymmetrizerReport]:
    """Per-degree symmetrizer ranks for degrees 0..dmax."""
    d = V.dim
    if mode == "modular":
        if nprimes < 2:
            raise ValueError("modular mode needs at least two primes")
        budget = MODULAR_BUDGET if budget is None else budget
        primes = primes_one_mod(V.k, count=nprimes)
        runs = []
        for p in primes:
            omega = root_of_unity_mod(p, V.k)
            runs.append(hilbert_ladder_mod(V, dmax, p, omega, budget))
        reports = []
        for n in range(dmax + 1):
            vals = [ranks[n] for ranks, _ in runs]
            agreed = len(set(vals)) == 1
            secs = sum(ts[n] for _, ts in runs)
            reports.append(SymmetrizerReport(
                degree=n, ambient_dim=d ** n, rank=vals[0],
                nullity=d ** n - vals[0], mode="modular", primes=primes,
                agreed=agreed, seconds=secs))
        return reports
    if mode == "exact":
        budget = EXACT_BUDGET if budget is None else budget
        reports = []
        for n in range(dmax + 1):
            N = d ** n
            if N > budget:
                raise DegreeTooLargeError(
                    f"degree {n} needs {N} columns, budget {budget}")
            t0 = time.perf_counter()
            if n == 0:
                rank = 1
            elif n == 1:
                rank = d
            else:
                arr = symmetrizer_factorized_exact(V, n)
                rank = rank_exact_cyclo(exact_matrix_as_cyclo(arr, V.k), V.k)
            reports.append(SymmetrizerReport(
                degree=n, ambient_dim=N, rank=rank, nullity=N - rank,
                mode="exact", primes=(), agreed=True,
                seconds=time.perf_counter() - t0))
        return reports
    raise ValueError(f"unknown mode {mode!r}")


def symmetrizer_rank(V: BraidedSpace, n: int, mode: str = "modular",
                     nprimes: int = 2, budget: int | None = None
                     ) -> SymmetrizerReport:
    """Rank/nullity of the degree-n symmetrizer."""
    return hilbert_coeffs(V, n, mode=mode, nprimes=nprimes, budget=budget)[n]


def hilbert_equal(V1: BraidedSpace, V2: BraidedSpace, dmax: int,
                  mode: str = "modular", nprimes: int = 2,
                  budget: int | None = None) -> bool:
    """Degreewise equality of rank sequences (spaces of equal dimension)."""
    if V1.dim != V2.dim:
        raise ValueError("spaces must have the same dimension")
    a = hilbert_coeffs(V1, dmax, mode=mode, nprimes=nprimes, budget=budget)
    b = hilbert_coeffs(V2, dmax, mode=mode, nprimes=nprimes, budget=budget)
    return all(x.rank == y.rank for x, y in zip(a, b))


def total_dimension(V: BraidedSpace, nprimes: int = 2,
                    budget: int | None = None,
                    max_degree: int = MAX_TOTAL_DEGREE):
    """(total dimension, reports) by summing ranks until one vanishes.

    A graded algebra generated in degree one dies for good once a degree
    vanishes, so the first zero rank certifies termination.  Modular
    mode only; single incremental pass per prime.
    """
    budget = MODULAR_BUDGET if budget is None else budget
    primes = primes_one_mod(V.k, count=max(nprimes, 2))
    runs = []
    for p in primes:
        omega = root_of_unity_mod(p, V.k)
        rows = []
        for n, rank, secs in ladder_ranks_iter(V, p, omega, budget):
            rows.append((rank, secs))
            if rank == 0:
                break
            if n >= max_degree:
                raise DegreeTooLargeError(
                    f"no vanishing degree found below {max_degree}")
        runs.append(rows)
    if len({len(r) for r in runs}) != 1:
        raise AssertionError("termination degree disagrees across primes")
    reports = []
    for n in range(len(runs[0])):
        vals = [rows[n][0] for rows in runs]
        reports.append(SymmetrizerReport(
            degree=n, ambient_dim=V.dim ** n, rank=vals[0],
            nullity=V.dim ** n - vals[0], mode="modular", primes=primes,
            agreed=len(set(vals)) == 1,
            seconds=sum(rows[n][1] for rows in runs)))
    if not all(r.agreed for r in reports):
        raise AssertionError("ranks disagree across primes")
    return sum(r.rank for r in reports), reports


# ---------------------------------------------------------------------------
# Quadraticity probe
# ---------------------------------------------------------------------------


def quadratic_relations(V: BraidedSpace, nprimes: int = 2):
    """Nullspace basis of the degree-2 symmetrizer over GF(p).

    Returns (prime, omega, basis); the dimension is double-checked
    against a second prime.
    """
    primes = primes_one_mod(V.k, count=nprimes)
    dims = []
    first = None
    for p in primes:
        omega = root_of_unity_mod(p, V.k)
        basis = nullspace_mod(symmetrizer_dense_mod(V, 2, p, omega), p)
        dims.append(basis.shape[0])
        if first is None:
            first = (p, omega, basis)
    if len(set(dims)) != 1:
        raise AssertionError("kernel dimension disagrees across primes")
    return first


def _ideal_degree_rank(V: BraidedSpace, n: int, p: int, omega: int,
                       kernel: np.ndarray) -> int:
    """Rank of the degree-n slice of the two-sided ideal on the kernel."""
    d = V.dim
    N = d ** n
    rows = []
    pair_idx = np.arange(d * d)
    for t in range(n - 1):
        lo = d ** (n - 2 - t)
        hi_stride = d ** (n - t)
        for a in range(d ** t):
            base = a * hi_stride
            offsets = base + pair_idx * lo
            for v in kernel:
                for b in range(lo):
                    row = np.zeros(N, dtype=np.int64)
                    row[offsets + b] = v
                    rows.append(row)
    mat = np.array(rows, dtype=np.int64)
    _, pivots = row_reduce_mod(mat % p, p)
    return len(pivots)


def is_quadratic_through(V: BraidedSpace, n: int, nprimes: int = 2,
                         budget: int | None = None) -> bool:
    """Whether relations up to degree n are generated in degree two.

    Compares, in each degree 3..n, the symmetrizer nullity with the
    dimension of the degree slice of the ideal generated by the
    degree-2 kernel; the slice can never exceed the nullity.
    """
    if n < 3:
        raise ValueError("the probe starts at degree 3")
    primes = primes_one_mod(V.k, count=nprimes)
    verdicts = []
    for p in primes:
        omega = root_of_unity_mod(p, V.k)
        kernel = nullspace_mod(symmetrizer_dense_mod(V, 2, p, omega), p)
        ranks, _ = hilbert_ladder_mod(V, n, p, omega,
                                      MODULAR_BUDGET if budget is None else budget)
        ok = True
        for deg in range(3, n + 1):
            nullity = V.dim ** deg - ranks[deg]
            ideal_dim = _ideal_degree_rank(V, deg, p, omega, kernel)
            if ideal_dim > nullity:
                raise AssertionError("ideal slice exceeds the relation space")
            if ideal_dim != nullity:
                ok = False
        verdicts.append(ok)
    if len(set(verdicts)) != 1:
        raise AssertionError("quadraticity verdict disagrees across primes")
    return verdicts[0]


def reports_jsonl(reports) -> str:
    """One JSON object per line, one line per degree report."""
    import json

    return "\n".join(json.dumps(r.to_dict(), sort_keys=True)
                     for r in reports) + "\n"


# ---------------------------------------------------------------------------
# Debug dumps (documented sparse triplet text format)
# ---------------------------------------------------------------------------


def dump_operator_triplets(op: MonomialOp, path):
    """One 'row col exponent' line per nonzero of a monomial operator."""
    with open(path, "w") as fh:
        for col in range(op.perm.shape[0]):
            fh.write(f"{int(op.perm[col])} {col} {int(op.expo[col])}\n")


def dump_symmetrizer_triplets(V: BraidedSpace, n: int, p: int, path):
    """One 'row col residue' line per nonzero of the modular symmetrizer."""
    omega = root_of_unity_mod(p, V.k)
    mat = symmetrizer_dense_mod(V, n, p, omega)
    with open(path, "w") as fh:
        for r, c in zip(*np.nonzero(mat)):
            fh.write(f"{int(r)} {int(c)} {int(mat[r, c])}\n")
