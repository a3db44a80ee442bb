"""Spans of matrices: canonical form, channels, products, catalog systems."""

import random
from fractions import Fraction

import pytest

from zerocap.exactlinalg import ExactMatrix, GaussianRational, ZERO
from zerocap.graphs import (
    complete_graph,
    cycle_graph,
    disjoint_union,
    empty_graph,
    random_graph,
    strong_product,
)
from zerocap.ncgraph import (
    ClassicalChannel,
    NcGraph,
    QuantumChannel,
    check_unitary,
    confusability_graph,
    conjugate_by_unitary,
    constant_diagonal_system,
    corner_family,
    corner_family_reference,
    diagonal_system,
    direct_sum_nc,
    from_classical_channel,
    from_kraus,
    full_matrix_system,
    matrix_unit,
    scalar_identity_system,
    tensor,
)

i_ = GaussianRational(Fraction(0), Fraction(1))


def rand_gr(rng):
    return GaussianRational(
        Fraction(rng.randint(-3, 3), rng.randint(1, 3)),
        Fraction(rng.randint(-3, 3), rng.randint(1, 3)),
    )


# --- canonical form and membership -------------------------------------


def test_equals_under_generator_shuffle_and_scaling():
    rng = random.Random(0)
    a = ExactMatrix.from_rows([[1, i_], [0, 2]])
    b = ExactMatrix.from_rows([[0, 1], [1, 0]])
    s1 = NcGraph.span_from_generators(2, [a, b])
    s2 = NcGraph.span_from_generators(2, [b.scale(3), a + b, a.scale(i_)])
    assert s1.equals(s2)
    assert s1.dim == 2


def test_contains_and_annihilator_agree():
    rng = random.Random(1)
    for _ in range(20):
        n = rng.randint(1, 3)
        gens = [
            ExactMatrix.from_rows(
                [[rand_gr(rng) for _ in range(n)] for _ in range(n)]
            )
            for _ in range(rng.randint(1, n * n))
        ]
        s = NcGraph.span_from_generators(n, gens)
        ann = s.annihilator_rows()
        assert len(ann) == n * n - s.dim

        def annihilated(x):
            v = x.vec()
            return all(
                sum((row[k] * v[k] for k in row), start=ZERO).is_zero()
                for row in ann
            )

        # members: random combinations of generators
        comb = ExactMatrix.zeros(n, n)
        for g in gens:
            comb = comb + g.scale(rand_gr(rng))
        assert s.contains(comb) and annihilated(comb)
        # non-member (when the span is proper)
        if not s.is_full():
            probe = ExactMatrix.from_rows(
                [[rand_gr(rng) for _ in range(n)] for _ in range(n)]
            )
            assert s.contains(probe) == annihilated(probe)


def test_operator_system_flags():
    s = scalar_identity_system(3)
    assert s.is_self_adjoint and s.contains_identity and not s.is_full()
    t = NcGraph.span_from_generators(2, [matrix_unit(2, 0, 1)])
    assert not t.is_self_adjoint and not t.contains_identity
    assert full_matrix_system(2).is_full()


# --- graphs to spans -----------------------------------------------------


def test_from_graph_dimensions_and_special_cases():
    assert NcGraph.from_graph(empty_graph(3)) == diagonal_system(3)
    assert NcGraph.from_graph(complete_graph(3)) == full_matrix_system(3)
    s = NcGraph.from_graph(cycle_graph(5))
    assert s.dim == 5 + 2 * 5
    assert s.is_operator_system()


def test_as_graph_roundtrip_and_rejection():
    rng = random.Random(2)
    for _ in range(10):
        g = random_graph(rng.randint(1, 5), rng.random(), rng)
        assert NcGraph.from_graph(g).as_graph() == g
    assert scalar_identity_system(2).as_graph() is None
    assert constant_diagonal_system(2).as_graph() is None


def test_tensor_matches_strong_product():
    rng = random.Random(3)
    for _ in range(6):
        g = random_graph(rng.randint(1, 3), rng.random(), rng)
        h = random_graph(rng.randint(1, 3), rng.random(), rng)
        assert tensor(NcGraph.from_graph(g), NcGraph.from_graph(h)) == NcGraph.from_graph(
            strong_product(g, h)
        )


def test_direct_sum_matches_disjoint_union():
    rng = random.Random(4)
    for _ in range(6):
        g = random_graph(rng.randint(1, 3), rng.random(), rng)
        h = random_graph(rng.randint(1, 3), rng.random(), rng)
        assert direct_sum_nc(
            NcGraph.from_graph(g), NcGraph.from_graph(h)
        ) == NcGraph.from_graph(disjoint_union(g, h))


def test_direct_sum_has_no_cross_blocks():
    s = direct_sum_nc(full_matrix_system(1), full_matrix_system(1))
    assert s.dim == 2
    assert not s.contains(matrix_unit(2, 0, 1))


def test_conjugation_by_permutation_relabels_graph():
    rng = random.Random(5)
    for _ in range(8):
        n = rng.randint(2, 8)
        g = random_graph(n, rng.random(), rng)
        perm = list(range(n))
        rng.shuffle(perm)
        # P e_j = e_{perm[j]}; conjugation by P relabels vertices by perm^-1
        p = ExactMatrix.from_rows(
            [[1 if perm[j] == r else 0 for j in range(n)] for r in range(n)]
        )
        relabeled = NcGraph.from_graph(g)
        conj = conjugate_by_unitary(relabeled, p)
        gg = conj.as_graph()
        assert gg is not None
        mapped = {(min(perm[a], perm[b]), max(perm[a], perm[b])) for a, b in gg.edges}
        assert mapped == set(g.edges)


def test_conjugation_requires_unitary():
    bad = ExactMatrix.from_rows([[1, 1], [0, 1]])
    with pytest.raises(ValueError):
        conjugate_by_unitary(full_matrix_system(2), bad)
    rot = ExactMatrix.from_rows(
        [
            [GaussianRational(Fraction(3, 5)), GaussianRational(Fraction(4, 5))],
            [GaussianRational(Fraction(-4, 5)), GaussianRational(Fraction(3, 5))],
        ]
    )
    check_unitary(rot)  # rational rotation is fine
    assert conjugate_by_unitary(scalar_identity_system(2), rot) == scalar_identity_system(2)


# --- channels -------------------------------------------------------------


def test_quantum_channel_validation():
    with pytest.raises(ValueError):
        QuantumChannel(2, 2, (ExactMatrix.from_rows([[1, 0], [0, 0]]),))
    ident = QuantumChannel(2, 2, (ExactMatrix.identity(2),))
    assert from_kraus(ident) == scalar_identity_system(2)


def test_dephasing_channel_span_is_diagonal():
    k1 = ExactMatrix.from_rows([[1, 0], [0, 0]])
    k2 = ExactMatrix.from_rows([[0, 0], [0, 1]])
    chan = QuantumChannel(2, 2, (k1, k2))
    assert from_kraus(chan) == diagonal_system(2)
    # apply acts as expected on a test input
    x = ExactMatrix.from_rows([[1, 2], [3, 4]])
    assert chan.apply(x) == ExactMatrix.from_rows([[1, 0], [0, 4]])


def test_pythagorean_isometry_channel():
    # V maps C^1 into C^2 isometrically with rational entries
    v = ExactMatrix.from_rows([[GaussianRational(Fraction(3, 5))], [GaussianRational(Fraction(4, 5))]])
    chan = QuantumChannel(1, 2, (v,))
    assert from_kraus(chan) == full_matrix_system(1)


def test_classical_channel_validation_and_confusability():
    half = Fraction(1, 2)
    # cyclic typewriter on 5 symbols: input x lands on x or x+1
    rows = [[half if y == x or y == (x + 1) % 5 else Fraction(0) for x in range(5)] for y in range(5)]
    chan = ClassicalChannel.from_rows(rows)
    assert confusability_graph(chan) == cycle_graph(5)
    assert from_classical_channel(chan) == NcGraph.from_graph(cycle_graph(5))
    with pytest.raises(ValueError):
        ClassicalChannel.from_rows([[half], [half / 2]])
    with pytest.raises(ValueError):
        ClassicalChannel.from_rows([[Fraction(3, 2)], [Fraction(-1, 2)]])


def test_noiseless_channel_confusability_is_empty_graph():
    chan = ClassicalChannel.from_rows(
        [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]
    )
    assert confusability_graph(chan) == empty_graph(2)


# --- catalog ---------------------------------------------------------------


def test_constant_diagonal_system():
    s = constant_diagonal_system(2)
    assert s.dim == 3
    assert s.is_operator_system() and not s.is_full()
    assert s.contains(ExactMatrix.from_rows([[5, 7], [i_, 5]]))
    assert not s.contains(ExactMatrix.from_rows([[5, 7], [i_, 6]]))


def test_corner_family_structure():
    for c in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1)):
        s = corner_family(c)
        assert s.dim == 4 if c != 1 else s.dim <= 4
        assert s.is_operator_system()
        ref = corner_family_reference(c)
        assert ref == 2 + c + 1 / c
        assert ref >= 4
    with pytest.raises(ValueError):
        corner_family(Fraction(0))
    with pytest.raises(ValueError):
        corner_family(Fraction(3, 2))


def test_corner_family_identity_decomposition():
    s = corner_family(Fraction(1, 2))
    b3 = ExactMatrix.from_rows([[0, 0, 0], [0, GaussianRational(Fraction(1, 2)), 0], [0, 0, 1]])
    b4 = ExactMatrix.from_rows([[1, 0, 0], [0, GaussianRational(Fraction(1, 2)), 0], [0, 0, 0]])
    assert s.contains(b3) and s.contains(b4)
    assert b3 + b4 == ExactMatrix.identity(3)


# --- JSON -------------------------------------------------------------------


def test_json_roundtrips():
    s = corner_family(Fraction(1, 4))
    assert NcGraph.from_json_dict(s.to_json_dict()) == s
    k1 = ExactMatrix.from_rows([[1, 0], [0, 0]])
    k2 = ExactMatrix.from_rows([[0, 0], [0, 1]])
    chan = QuantumChannel(2, 2, (k1, k2))
    assert QuantumChannel.from_json_dict(chan.to_json_dict()) == chan
    half = Fraction(1, 2)
    cc = ClassicalChannel.from_rows([[half, half], [half, half]])
    assert ClassicalChannel.from_json_dict(cc.to_json_dict()) == cc
