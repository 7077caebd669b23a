"""Diagonal braidings over dihedral rotation subgroups, and the order-12 case.

For the dihedral group of order 2n with n = 2r, r odd, the graded
modules over the rotation subgroup that carry finite Nichols algebras
are spanned by weight vectors: each basis vector has a degree (a power
of the rotation) and a character (the eigenvalue exponent of the
rotation action), both exponents modulo 2r with respect to a fixed
primitive 2r-th root of unity.  The braiding is diagonal with
q(x, y) = zeta^(deg_x * char_y).

One-dimensional summands carry degree r, character r.  Two-dimensional
summands carry parameters (h, j), both odd, h <= r, j <= r - 2, with r
dividing h j; the two basis vectors get (h, j) and (-h, -j).  A sum of
such summands is compatible exactly when r divides h j' + h' j for each
pair, in which case the Nichols algebra is a twisted tensor product of
exterior algebras of total dimension 2^dim.

The order-12 group (r = 3) additionally carries three-dimensional
modules supported on its two reflection classes; these are constructed
from their explicit generator action tables and compared against the
reflection-rack braidings.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coxeter import GroupTable
from .nichols import BraidedSpace, DiagonalBraidedSpace, MonomialOp
from .racks import Rack, RackCocycle, cohomologous_solve


class InvalidSummandError(ValueError):
    """Summand parameters violate the admissibility constraints."""


# ---------------------------------------------------------------------------
# Admissible summands and the diagonal braiding
# ---------------------------------------------------------------------------


def admissible_pairs(r: int) -> list[tuple[int, int]]:
    """All (h, j) with h <= r and j <= r - 2 odd and r | h j."""
    if r < 3 or r % 2 == 0:
        raise InvalidSummandError("r must be odd and at least 3")
    return [(h, j)
            for h in range(1, r + 1, 2)
            for j in range(1, r - 1, 2)
            if (h * j) % r == 0]


def validate_summand(r: int, h: int, j: int):
    if not (1 <= h <= r and h % 2 == 1):
        raise InvalidSummandError(f"h = {h} must be odd in 1..{r}")
    if not (1 <= j <= r - 2 and j % 2 == 1):
        raise InvalidSummandError(f"j = {j} must be odd in 1..{r - 2}")
    if (h * j) % r != 0:
        raise InvalidSummandError(f"r = {r} must divide h j = {h * j}")


@dataclass(frozen=True)
class DihedralSummandData:
    """Bookkeeping for one constructed diagonal space."""

    r: int
    v0_copies: int
    pairs: tuple[tuple[int, int, int], ...]   # (h, j, multiplicity)
    degrees: tuple[int, ...]                  # exponent of the rotation
    characters: tuple[int, ...]               # rotation eigenvalue exponent


def dihedral_yd(r: int, pairs=(), v0_copies: int = 0) -> DiagonalBraidedSpace:
    """Diagonal braided space of a sum of admissible summands.

    pairs is a list of (h, j) or (h, j, multiplicity); v0_copies adds
    one-dimensional summands.  Scalars live in the 2r-th roots of unity.
    """
    if r < 3 or r % 2 == 0:
        raise InvalidSummandError("r must be odd and at least 3")
    k = 2 * r
    degrees: list[int] = []
    chars: list[int] = []
    labels: list[str] = []
    norm_pairs: list[tuple[int, int, int]] = []
    for c in range(v0_copies):
        degrees.append(r)
        chars.append(r)
        labels.append(f"v0({c})" if v0_copies > 1 else "v0")
    seen = set()
    for entry in pairs:
        h, j, mult = entry if len(entry) == 3 else (*entry, 1)
        validate_summand(r, h, j)
        if (h, j) in seen:
            raise InvalidSummandError(f"duplicate summand ({h}, {j})")
        seen.add((h, j))
        norm_pairs.append((h, j, mult))
        for c in range(mult):
            tag = f";{c}" if mult > 1 else ""
            degrees.append(h % k)
            chars.append(j % k)
            labels.append(f"v(+{h},{j}{tag})")
            degrees.append((-h) % k)
            chars.append((-j) % k)
            labels.append(f"v(-{h},{j}{tag})")
    if not degrees:
        raise InvalidSummandError("empty sum")
    d = len(degrees)
    qexp = [[degrees[x] * chars[y] % k for y in range(d)] for x in range(d)]
    space = DiagonalBraidedSpace(k, qexp, labels)
    space.summands = DihedralSummandData(
        r=r, v0_copies=v0_copies, pairs=tuple(norm_pairs),
        degrees=tuple(degrees), characters=tuple(chars))
    return space


def compatible(r: int, pairs) -> bool:
    """Whether r divides h j' + h' j for every pair of summands."""
    ps = [p[:2] for p in pairs]
    for h, j in ps:
        validate_summand(r, h, j)
    return all((h * j2 + h2 * j) % r == 0
               for a, (h, j) in enumerate(ps)
               for (h2, j2) in ps[a:])


@dataclass(frozen=True)
class DynkinDiagram:
    """Vertex labels q_ii and edge labels q_ij q_ji (as zeta exponents)."""

    k: int
    vertices: tuple[int, ...]
    edges: dict[tuple[int, int], int]

    def edge_count(self) -> int:
        return len(self.edges)


def dynkin_diagram(V: DiagonalBraidedSpace) -> DynkinDiagram:
    """Generalized Dynkin diagram of a diagonal braiding."""
    d = V.dim
    verts = tuple(V.qexp[i][i] for i in range(d))
    edges = {}
    for i in range(d):
        for j in range(i + 1, d):
            e = (V.qexp[i][j] + V.qexp[j][i]) % V.k
            if e:
                edges[(i, j)] = e
    return DynkinDiagram(k=V.k, vertices=verts, edges=edges)


def exterior_coefficients(dim: int) -> list[int]:
    """Binomial Hilbert coefficients of an exterior algebra, plus the 0 tail."""
    from math import comb

    return [comb(dim, n) for n in range(dim + 1)] + [0]


# ---------------------------------------------------------------------------
# The order-12 dihedral group: graded modules over the full group
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GradedModule:
    """Module graded by group elements with monomial generator actions.

    Scalars are powers of a fixed primitive k-th root of unity; the
    action of the two Coxeter generators determines everything else via
    canonical words.  Construction verifies the defining relations and
    the grading compatibility h V_g = V_(h g h^-1).
    """

    g: GroupTable
    k: int
    labels: tuple[str, ...]
    degrees: tuple[int, ...]                  # element ids
    gen_actions: tuple[MonomialOp, ...]       # one per Coxeter generator

    def __post_init__(self):
        dim = len(self.labels)
        if len(self.degrees) != dim:
            raise ValueError("degree list has the wrong length")
        for op in self.gen_actions:
            if op.perm.shape[0] != dim or op.k != self.k:
                raise ValueError("generator action has the wrong shape")
        # defining relations of the dihedral group act trivially
        for i, op in enumerate(self.gen_actions):
            if not op.compose_after(op).equal(MonomialOp.identity(dim, self.k)):
                raise ValueError(f"generator {i} does not act as an involution")
        m = self.g.matrix.entry(0, 1)
        braid = MonomialOp.identity(dim, self.k)
        for _ in range(m):
            braid = braid.compose_after(self.gen_actions[0])
            braid = braid.compose_after(self.gen_actions[1])
        if not braid.equal(MonomialOp.identity(dim, self.k)):
            raise ValueError("the braid relation does not act as the identity")
        # grading compatibility for the generators
        for i, op in enumerate(self.gen_actions):
            s = self.g.simple_reflection(i)
            for v in range(dim):
                want = self.g.conj(s, self.degrees[v])
                if self.degrees[int(op.perm[v])] != want:
                    raise ValueError("action violates the grading rule")

    @property
    def dim(self) -> int:
        return len(self.labels)

    def act(self, w: int) -> MonomialOp:
        """Action of an arbitrary element along its canonical word."""
        op = MonomialOp.identity(self.dim, self.k)
        for i in self.g.words[w]:
            op = op.compose_after(self.gen_actions[i])
        return op


def direct_sum(*modules: GradedModule) -> GradedModule:
    first = modules[0]
    g, k = first.g, first.k
    if any(m.g is not g or m.k != k for m in modules):
        raise ValueError("summands live over different groups or scalar orders")
    labels = tuple(l for m in modules for l in m.labels)
    degrees = tuple(d for m in modules for d in m.degrees)
    gen_actions = []
    for i in range(g.rank):
        offs = 0
        perm = np.empty(len(labels), dtype=np.int64)
        expo = np.empty(len(labels), dtype=np.int64)
        for m in modules:
            op = m.gen_actions[i]
            perm[offs:offs + m.dim] = op.perm + offs
            expo[offs:offs + m.dim] = op.expo
            offs += m.dim
        gen_actions.append(MonomialOp(k, perm, expo))
    return GradedModule(g=g, k=k, labels=labels, degrees=degrees,
                        gen_actions=tuple(gen_actions))


def braided_from_graded(mod: GradedModule) -> BraidedSpace:
    """Braiding c(x tensor y) = (deg x . y) tensor x of a graded module."""
    d = mod.dim
    target = [[0] * d for _ in range(d)]
    expo = [[0] * d for _ in range(d)]
    for x in range(d):
        op = mod.act(mod.degrees[x])
        for y in range(d):
            t = int(op.perm[y])
            target[x][y] = t
            expo[x][y] = int(op.expo[y])
            if mod.degrees[t] != mod.g.conj(mod.degrees[x], mod.degrees[y]):
                raise ValueError("grading rule fails inside the braiding")
    return BraidedSpace(mod.k, target, expo, mod.labels)


def _require_i26(g: GroupTable):
    if g.rank != 2 or g.matrix.entry(0, 1) != 6:
        raise ValueError("these modules live over the dihedral group of order 12")


def _monomial(k, entries) -> MonomialOp:
    """entries: per basis index, (exponent, target index)."""
    perm = np.array([t for _, t in entries], dtype=np.int64)
    expo = np.array([e % k for e, _ in entries], dtype=np.int64)
    return MonomialOp(k, perm, expo)


def _compose_words(ops: list[MonomialOp], word) -> MonomialOp:
    acc = MonomialOp.identity(ops[0].perm.shape[0], ops[0].k)
    for i in word:
        acc = acc.compose_after(ops[i])
    return acc


def u_module(g: GroupTable, j: int, primed: bool = False) -> GradedModule:
    """Three-dimensional module supported on one reflection class (j = 0, 1).

    The action is given on the first generator and on the rotation; the
    second generator action is derived from s' = s c.
    """
    _require_i26(g)
    if j not in (0, 1):
        raise ValueError("j must be 0 or 1")
    k = 6
    s = g.simple_reflection(0)
    c = g.mul(s, g.simple_reflection(1))      # the rotation s s'

    def power(base, e):
        acc = 0
        for _ in range(e):
            acc = g.mul(acc, base)
        return acc

    if not primed:
        # basis e_s, e_(s c^2), e_(s c^4); exponents of -1 are 3 mod 6
        degrees = (s, g.mul(s, power(c, 2)), g.mul(s, power(c, 4)))
        labels = ("e[s]", "e[s'ss']", "e[ss'ss's]")
        s_act = _monomial(k, [(3, 0), (3 * (j + 1), 2), (3 * (j + 1), 1)])
        c_act = _monomial(k, [(0, 2), (3 * j, 0), (0, 1)])
    else:
        # basis e_(s c), e_(s c^5), e_(s c^3)
        degrees = (g.mul(s, c), g.mul(s, power(c, 5)), g.mul(s, power(c, 3)))
        labels = ("e[s']", "e[ss's]", "e[s'ss'ss']")
        s_act = _monomial(k, [(3, 1), (3, 0), (3 * (j + 1), 2)])
        c_act = _monomial(k, [(0, 1), (0, 2), (3 * j, 0)])
    sp_act = _compose_words([s_act, c_act], (0, 1))  # s' = s c
    return GradedModule(g=g, k=k, labels=labels, degrees=degrees,
                        gen_actions=(s_act, sp_act))


def v31_module(g: GroupTable) -> GradedModule:
    """Two-dimensional module in central degree: rotation acts by zeta^(+-1)."""
    _require_i26(g)
    k = 6
    s = g.simple_reflection(0)
    c = g.mul(s, g.simple_reflection(1))
    c3 = g.mul(c, g.mul(c, c))
    s_act = _monomial(k, [(0, 1), (0, 0)])       # swap the weight vectors
    c_act = _monomial(k, [(1, 0), (5, 1)])
    sp_act = _compose_words([s_act, c_act], (0, 1))
    return GradedModule(g=g, k=k, labels=("v(+3,1)", "v(-3,1)"),
                        degrees=(c3, c3), gen_actions=(s_act, sp_act))


def v0_module(g: GroupTable, j: int) -> GradedModule:
    """One-dimensional module in central degree; j picks the sign of s."""
    _require_i26(g)
    if j not in (0, 1):
        raise ValueError("j must be 0 or 1")
    k = 6
    s = g.simple_reflection(0)
    c = g.mul(s, g.simple_reflection(1))
    c3 = g.mul(c, g.mul(c, c))
    s_act = _monomial(k, [(3 * j, 0)])
    c_act = _monomial(k, [(3, 0)])
    sp_act = _compose_words([s_act, c_act], (0, 1))
    return GradedModule(g=g, k=k, labels=(f"v0[{j}]",), degrees=(c3,),
                        gen_actions=(s_act, sp_act))


def u_module_cocycle(g: GroupTable, j: int, primed: bool = False):
    """Extract the rack cocycle of a three-dimensional module's braiding.

    Returns (class reflection indices, RackCocycle) with rows/columns in
    class order, so it is directly comparable to the restrictions of the
    two sign cocycles.
    """
    mod = u_module(g, j, primed)
    space = braided_from_graded(mod)
    classes = g.reflection_classes()
    refl_of_elem = {t.elem: t.index for t in g.reflections}
    class_of = next(c for c in classes
                    if refl_of_elem[mod.degrees[0]] in c)
    order = {refl_of_elem[mod.degrees[b]]: b for b in range(mod.dim)}
    if set(order) != set(class_of):
        raise AssertionError("module support is not one reflection class")
    # reorder basis into class order and check scalars are +-1
    basis = [order[t] for t in class_of]
    table = []
    for x in basis:
        row = []
        for y in basis:
            e = space.expo[x][y]
            if e % 3 != 0:
                raise AssertionError("braiding scalar is not a sign")
            row.append((e // 3) % 2)
        table.append(tuple(row))
    return class_of, RackCocycle(2, tuple(table))


def identify_u_modules(g: GroupTable, qp: RackCocycle, qm: RackCocycle,
                       rack: Rack) -> dict:
    """Compare each three-dimensional module with the sign cocycles.

    For every module the braiding is a rack braiding on one reflection
    class; the record lists which restricted cocycle it literally equals
    and which it is cohomologous to (basis rescalings change the cocycle
    by a coboundary, so cohomology is the right invariant).
    """
    out = {}
    for primed in (False, True):
        for j in (0, 1):
            class_of, qu = u_module_cocycle(g, j, primed)
            sub = rack.subrack(class_of)
            rec = {}
            for name, q in (("q+", qp), ("q-", qm)):
                qr = q.restrict(class_of)
                rec[name] = {
                    "equal": qr.table == qu.table,
                    "cohomologous":
                        cohomologous_solve(qu, qr, sub) is not None,
                }
            key = ("U'" if primed else "U") + str(j)
            out[key] = rec
    return out
