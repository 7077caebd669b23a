"""Braidings, Matsumoto section, symmetrizer ranks, quadraticity."""

import itertools

import numpy as np
import pytest

from coxrack.coxeter import build_group, preset_matrix
from coxrack.modlin import primes_one_mod, rank_mod, root_of_unity_mod
from coxrack.nichols import (
    BraidEquationError,
    BraidedSpace,
    DegreeTooLargeError,
    MonomialOp,
    all_reduced_words,
    braiding_from_rack,
    hilbert_coeffs,
    hilbert_equal,
    is_quadratic_through,
    matsumoto_word,
    perm_operator,
    quadratic_relations,
    reduce_zeta_array,
    symmetrizer_dense_mod,
    symmetrizer_factorized_exact,
    symmetrizer_literal_exact,
    symmetrizer_rank,
    total_dimension,
    verify_matsumoto_invariance,
    word_operator,
)
from coxrack.racks import (
    RackCocycle,
    q_minus,
    q_plus,
    rack_from_class,
    reflection_rack,
)


@pytest.fixture(scope="module")
def spaces():
    cache = {}

    def get(name, which="plus"):
        key = (name, which)
        if key not in cache:
            g = build_group(preset_matrix(name))
            rack = reflection_rack(g)
            q = q_plus(g) if which == "plus" else q_minus(g)
            cache[key] = braiding_from_rack(rack, q)
        return cache[key]

    return get


def one_point_space():
    return BraidedSpace(k=2, target=[[0]], expo=[[1]], labels=["x"])


# -- Matsumoto section -------------------------------------------------------


def perm_of_word(word, n):
    """Oracle: evaluate a word of adjacent swaps (rightmost first)."""
    perm = list(range(n))
    for letter in reversed(word):
        i = letter - 1
        perm[i], perm[i + 1] = perm[i + 1], perm[i]  # compose s_i first
    return tuple(perm)


def test_matsumoto_words():
    assert matsumoto_word((0, 1, 2)) == ()
    assert matsumoto_word((1, 0)) == (1,)
    assert matsumoto_word((0, 2, 1)) == (2,)
    w0 = matsumoto_word((2, 1, 0))
    assert w0 in {(1, 2, 1), (2, 1, 2)}
    # every word evaluates back to its permutation, at reduced length
    for n in (3, 4):
        for sigma in itertools.permutations(range(n)):
            w = matsumoto_word(sigma)
            inversions = sum(1 for a in range(n) for b in range(a + 1, n)
                             if sigma[a] > sigma[b])
            assert len(w) == inversions
            # check all reduced words evaluate to sigma too
            for word in all_reduced_words(sigma):
                assert len(word) == inversions


def test_all_reduced_words_consistent_with_matsumoto():
    for sigma in itertools.permutations(range(4)):
        words = all_reduced_words(sigma)
        assert matsumoto_word(sigma) in words
    assert all_reduced_words((2, 1, 0)) == {(1, 2, 1), (2, 1, 2)}


def test_longest_s3_words_give_equal_operators(spaces):
    V = spaces("A2")
    a = word_operator(V, 3, (1, 2, 1))
    b = word_operator(V, 3, (2, 1, 2))
    assert a.equal(b)


def test_matsumoto_invariance_battery(spaces):
    for name in ("A2", "I2(4)", "I2(5)"):
        for which in ("plus", "minus"):
            assert verify_matsumoto_invariance(spaces(name, which), 4)
    assert verify_matsumoto_invariance(one_point_space(), 4)


def test_identity_and_adjacent_transposition(spaces):
    V = spaces("A2")
    ident = perm_operator(V, 3, (0, 1, 2))
    assert ident.equal(MonomialOp.identity(27, V.k))
    swap = perm_operator(V, 3, (1, 0, 2))
    assert swap.equal(V.braid_letter(3, 1))


def test_braid_letter_inverse(spaces):
    V = spaces("A2", "minus")
    for i in (1, 2):
        fwd = V.braid_letter(3, i, 1)
        rev = V.braid_letter(3, i, -1)
        assert fwd.compose_after(rev).equal(MonomialOp.identity(27, V.k))
        assert rev.compose_after(fwd).equal(MonomialOp.identity(27, V.k))


# -- braided spaces ----------------------------------------------------------


def test_one_point_rack_braiding():
    V = one_point_space()
    assert V.dim == 1 and V.expo == ((1,),)
    reports = hilbert_coeffs(V, 3)
    assert [r.rank for r in reports] == [1, 1, 0, 0]


def test_braiding_from_rack_validates(spaces):
    V = spaces("A2")
    assert V.dim == 3
    # q-minus braiding has c^2 != id on some pair (non-commuting targets)
    Vm = spaces("A2", "minus")
    c = Vm.braid_letter(2, 1)
    c2 = c.compose_after(c)
    assert not c2.equal(MonomialOp.identity(9, Vm.k))


def test_braid_equation_failure_has_witness():
    # a flipped cocycle entry on the A2 rack breaks the braid equation
    g = build_group(preset_matrix("A2"))
    rack = reflection_rack(g)
    table = [list(r) for r in q_plus(g).table]
    table[0][1] ^= 1
    with pytest.raises(BraidEquationError) as exc:
        braiding_from_rack(rack, RackCocycle(2, tuple(tuple(r) for r in table)))
    assert len(exc.value.witness) == 3


def test_braid_equation_battery(spaces):
    for name in ("A3", "A4", "B3", "D4", "H3", "I2(6)", "I2(7)"):
        spaces(name)          # construction checks the braid equation
        spaces(name, "minus")


# -- symmetrizers ------------------------------------------------------------


def test_factorized_equals_literal_small(spaces):
    for key in (("A2", "plus"), ("A2", "minus")):
        V = spaces(*key)
        for n in range(5):
            lit = reduce_zeta_array(symmetrizer_literal_exact(V, n), V.k)
            fac = reduce_zeta_array(symmetrizer_factorized_exact(V, n), V.k)
            assert np.array_equal(lit, fac)


def test_dense_mod_matches_exact_reduction(spaces):
    V = spaces("A2")
    p = primes_one_mod(V.k, 1)[0]
    omega = root_of_unity_mod(p, V.k)
    for n in (2, 3):
        dense = symmetrizer_dense_mod(V, n, p, omega)
        exact = reduce_zeta_array(symmetrizer_literal_exact(V, n), V.k)
        # k = 2: power basis is just the rational part
        assert np.array_equal(dense, exact[:, :, 0] % p)


def test_trivial_degrees(spaces):
    V = spaces("A3")
    r0 = symmetrizer_rank(V, 0)
    r1 = symmetrizer_rank(V, 1)
    assert (r0.rank, r1.rank) == (1, V.dim)
    assert r0.ambient_dim == 1 and r1.ambient_dim == V.dim


def test_fk3_per_degree_ranks(spaces):
    # oracle: the literal factorial sum over GF(p), degrees <= 5
    V = spaces("A2")
    p = primes_one_mod(V.k, 1)[0]
    omega = root_of_unity_mod(p, V.k)
    zpow = np.array([pow(omega, e, p) for e in range(V.k)])
    oracle = []
    for n in range(6):
        N = V.dim ** n
        acc = np.zeros((N, N), dtype=np.int64)
        cols = np.arange(N)
        for sigma in itertools.permutations(range(n)):
            op = perm_operator(V, n, sigma)
            acc[op.perm, cols] = (acc[op.perm, cols] + zpow[op.expo]) % p
        oracle.append(rank_mod(acc, p))
    assert oracle == [1, 3, 4, 3, 1, 0]
    reports = hilbert_coeffs(V, 5)
    assert [r.rank for r in reports] == oracle
    assert all(r.agreed for r in reports)
    assert sum(r.rank for r in reports) == 12


def test_i24_total_dimension(spaces):
    V = spaces("I2(4)")
    total, reports = total_dimension(V, budget=300_000)
    assert total == 64
    assert [r.rank for r in reports] == [1, 4, 8, 12, 14, 12, 8, 4, 1, 0]


def test_hilbert_equalities(spaces):
    assert hilbert_equal(spaces("A2"), spaces("A2", "minus"), 4)
    assert hilbert_equal(spaces("I2(5)"), spaces("I2(5)", "minus"), 3)


def test_b3_abelian_class_exterior(spaces):
    g = build_group(preset_matrix("B3"))
    small = min(g.reflection_classes(), key=len)
    rack = rack_from_class(g, [g.reflections[i].elem for i in small])
    for q in (q_minus(g).restrict(small), q_plus(g).restrict(small)):
        V = braiding_from_rack(rack, q)
        total, reports = total_dimension(V)
        assert total == 8
        assert [r.rank for r in reports] == [1, 3, 3, 1, 0]


def test_subrack_monotonicity(spaces):
    # ranks of a subrack braiding never exceed the ambient ones
    g = build_group(preset_matrix("B3"))
    amb = spaces("B3", "minus")
    small = min(g.reflection_classes(), key=len)
    rack = rack_from_class(g, [g.reflections[i].elem for i in small])
    sub = braiding_from_rack(rack, q_minus(g).restrict(small))
    amb_ranks = [r.rank for r in hilbert_coeffs(amb, 3)]
    sub_ranks = [r.rank for r in hilbert_coeffs(sub, 3)]
    assert all(s <= a for s, a in zip(sub_ranks, amb_ranks))


def test_budget_guard(spaces):
    V = spaces("A3")
    with pytest.raises(DegreeTooLargeError):
        hilbert_coeffs(V, 8, budget=10_000)
    with pytest.raises(DegreeTooLargeError):
        hilbert_coeffs(V, 5, mode="exact")


def test_exact_mode_matches_modular(spaces):
    for key in (("A2", "plus"), ("A2", "minus"), ("I2(4)", "plus")):
        V = spaces(*key)
        exact = hilbert_coeffs(V, 3, mode="exact")
        modular = hilbert_coeffs(V, 3)
        assert [r.rank for r in exact] == [r.rank for r in modular]
        assert all(r.mode == "exact" for r in exact)


def test_report_serialization(spaces):
    rep = symmetrizer_rank(spaces("A2"), 2)
    d = rep.to_dict()
    assert d["schema"] == "symmetrizer_report.v1"
    assert d["rank"] + d["nullity"] == d["ambient_dim"] == 9
    assert len(d["primes"]) == 2 and d["agreed"]


def test_reports_jsonl(spaces):
    import json

    from coxrack.nichols import reports_jsonl

    reports = hilbert_coeffs(spaces("A2"), 3)
    lines = reports_jsonl(reports).strip().splitlines()
    assert len(lines) == 4
    assert [json.loads(l)["rank"] for l in lines] == [1, 3, 4, 3]


def test_twist_pairs_equal_ranks_battery(spaces):
    # twist-equivalent cocycles give equal low-degree rank sequences on
    # the full certificate battery (depth is covered by the A2/A3/I2
    # jobs elsewhere)
    for name in ("A1", "A2", "A3", "A4", "B2", "B3", "I2(5)", "I2(6)",
                 "I2(7)", "H3", "D4"):
        assert hilbert_equal(spaces(name), spaces(name, "minus"), 2)


# -- quadraticity ------------------------------------------------------------


def test_quadratic_kernel_dimension(spaces):
    V = spaces("A2")
    p, omega, basis = quadratic_relations(V)
    assert basis.shape[0] == 9 - 4 == 5
    mat = symmetrizer_dense_mod(V, 2, p, omega)
    for v in basis:
        assert not (mat @ v % p).any()


def test_one_dim_space_quadratic():
    assert is_quadratic_through(one_point_space(), 3)


def test_fk3_quadratic_through_4(spaces):
    assert is_quadratic_through(spaces("A2"), 4)
    assert is_quadratic_through(spaces("A2", "minus"), 4)


# -- dumps -------------------------------------------------------------------


def test_dump_formats(tmp_path, spaces):
    from coxrack.nichols import dump_operator_triplets, dump_symmetrizer_triplets

    V = spaces("A2")
    op = V.braid_letter(2, 1)
    path = tmp_path / "op.txt"
    dump_operator_triplets(op, path)
    lines = path.read_text().strip().splitlines()
    assert len(lines) == 9
    row, col, e = map(int, lines[0].split())
    assert row == int(op.perm[col]) and e == int(op.expo[col])

    p = primes_one_mod(V.k, 1)[0]
    path2 = tmp_path / "sym.txt"
    dump_symmetrizer_triplets(V, 2, p, path2)
    assert len(path2.read_text().strip().splitlines()) > 0
