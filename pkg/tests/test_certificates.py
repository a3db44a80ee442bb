"""Rank certificates: verification, transformations, search, exact decision."""

import json
import random
from fractions import Fraction

import numpy as np
import pytest

from zerocap.certificates import (
    HaemersCertificate,
    TpMapCertificate,
    VerificationError,
    cohomomorphism_apply,
    compression_lower_bound,
    conjugate_certificate,
    direct_sum_certificate,
    from_tp_map,
    full_matrix_certificate,
    haemers_exact_decide,
    haemers_lower,
    haemers_upper_search,
    homomorphism_kraus,
    identity_certificate,
    independent_witness_kraus,
    lift_graph_certificate,
    project_to_graph_certificate,
    random_certificate,
    tensor_certificate,
    to_tp_map,
    verify_certificate,
    verify_tp_map,
    verify_xi_certificate,
)
from zerocap.certificates import _four_square
from zerocap.classical import (
    FittingMatrix,
    gram_fitting_matrix,
    pentagon_representation,
    random_fitting_matrix,
    unit_diagonal_form,
    verify_fitting,
)
from zerocap.exactlinalg import ExactMatrix, GaussianRational, ONE, parse_scalar
from zerocap.graphs import complete_graph, cycle_graph, empty_graph, independence_number, strong_product
from zerocap.independence import IndependentSystem, verify_independent
from zerocap.ncgraph import (
    NcGraph,
    conjugate_by_unitary,
    constant_diagonal_system,
    corner_family,
    corner_family_reference,
    diagonal_system,
    direct_sum_nc,
    full_matrix_system,
    scalar_identity_system,
    tensor,
)


def rational_unit(rng, m):
    """Exact unit vector in Q(i)^m via the rational sphere parametrization.

    For any rational g, the vector (2 g, 1 - |g|^2) / (1 + |g|^2) has
    exact norm 1; entries of g are drawn with small random numerators.
    """
    g = [
        GaussianRational(
            Fraction(int(rng.integers(-3, 4)), int(rng.integers(1, 4))),
            Fraction(int(rng.integers(-3, 4)), int(rng.integers(1, 4))),
        )
        for _ in range(m - 1)
    ]
    norm = sum((x.abs2() for x in g), Fraction(0))
    scale = GaussianRational(1 / (1 + norm))
    out = [x * GaussianRational(Fraction(2)) * scale for x in g]
    out.append(GaussianRational(1 - norm) * scale)
    assert sum((x.abs2() for x in out), Fraction(0)) == 1
    return out


# -- types ----------------------------------------------------------------


def test_certificate_validation():
    with pytest.raises(ValueError):
        HaemersCertificate(n=2, m=1, k=1, C=ExactMatrix.zeros(1, 3), D=ExactMatrix.zeros(1, 2))
    with pytest.raises(ValueError, match="sanity cap"):
        HaemersCertificate(n=1, m=2, k=1, C=ExactMatrix.zeros(1, 2), D=ExactMatrix.zeros(1, 2))
    with pytest.raises(ValueError):
        HaemersCertificate(n=2, m=1, k=0, C=ExactMatrix.zeros(0, 2), D=ExactMatrix.zeros(0, 2))


def test_certificate_json_round_trip():
    cert = full_matrix_certificate(3)
    data = json.loads(json.dumps(cert.to_json_dict()))
    assert HaemersCertificate.from_json_dict(data) == cert


def test_tp_map_json_round_trip():
    tp = to_tp_map(full_matrix_system(2), full_matrix_certificate(2))
    data = json.loads(json.dumps(tp.to_json_dict()))
    assert TpMapCertificate.from_json_dict(data) == tp


# -- verify_certificate ----------------------------------------------------


def test_full_matrix_algebra_rank_one():
    for n in range(1, 5):
        cert = full_matrix_certificate(n)
        assert cert.m == n and cert.k == 1
        assert verify_certificate(full_matrix_system(n), cert) == 1


def test_scalar_identity_span_rank_n():
    for n in range(1, 5):
        assert verify_certificate(scalar_identity_system(n), identity_certificate(n)) == n


def test_diagonal_span_rank_n():
    for n in range(1, 5):
        assert verify_certificate(diagonal_system(n), identity_certificate(n)) == n


def test_constant_diagonal_span_rank_two():
    # identity certificate is tight here: the span is a proper subspace of
    # M_2, so rank 1 is impossible, and B = I_2 gives exactly 2
    assert verify_certificate(constant_diagonal_system(2), identity_certificate(2)) == 2


def test_corner_family_rank_three_beats_reference():
    for c in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
        rank = verify_certificate(corner_family(c), identity_certificate(3))
        assert rank == 3
        assert corner_family_reference(c) >= 4 > rank


def test_trace_violation_detected():
    doubled = ExactMatrix.identity(2).scale(2)
    cert = HaemersCertificate(n=2, m=1, k=2, C=ExactMatrix.identity(2), D=doubled)
    with pytest.raises(VerificationError) as err:
        verify_certificate(scalar_identity_system(2), cert)
    assert err.value.kind == "trace"


def test_membership_violation_reports_block():
    # B = E_00 is not a multiple of the identity
    bad = ExactMatrix.from_strings([["1", "0"], ["0", "0"]])
    cert = HaemersCertificate(n=2, m=1, k=2, C=ExactMatrix.identity(2), D=bad)
    with pytest.raises(VerificationError) as err:
        verify_certificate(scalar_identity_system(2), cert)
    assert err.value.kind == "block-membership"
    assert err.value.where == (0, 0)


def test_ambient_dimension_mismatch():
    with pytest.raises(VerificationError):
        verify_certificate(scalar_identity_system(3), identity_certificate(2))


def test_non_operator_system_warns():
    offdiag = NcGraph(2, [{1: ONE}])  # span of a single off-diagonal unit
    cert = HaemersCertificate(
        n=2, m=1, k=1,
        C=ExactMatrix.from_strings([["1", "0"]]),
        D=ExactMatrix.from_strings([["0", "1"]]),
    )
    with pytest.warns(UserWarning, match="not an operator system"):
        with pytest.raises(VerificationError):
            verify_certificate(offdiag, cert)


def test_rank_matches_float_oracle_on_random_certificates():
    rng = np.random.default_rng(11)
    for s in (scalar_identity_system(2), diagonal_system(3), constant_diagonal_system(3)):
        for m in (1, 2):
            cert = random_certificate(s, m, rng)
            exact = verify_certificate(s, cert)
            numeric = np.linalg.matrix_rank(cert.matrix().to_complex(), tol=1e-9)
            assert exact == numeric == cert.k


# -- verify_xi_certificate ---------------------------------------------------


def test_xi_requires_equal_factors():
    cert = HaemersCertificate(
        n=2, m=1, k=2, C=ExactMatrix.identity(2), D=ExactMatrix.identity(2).scale(-1)
    )
    with pytest.raises(VerificationError) as err:
        verify_xi_certificate(scalar_identity_system(2), cert)
    assert err.value.kind == "factor-mismatch"


def test_xi_diagonal_identity():
    for n in (1, 2, 3, 4):
        assert verify_xi_certificate(diagonal_system(n), identity_certificate(n)) == n


def test_xi_full_matrix_rank_one():
    # the block-basis vector gives a PSD rank-1 certificate for M_2
    assert verify_xi_certificate(full_matrix_system(2), full_matrix_certificate(2)) == 1


def test_xi_scalar_identity_rank_at_least_n():
    # every PSD certificate for a span of identity multiples is a Kronecker
    # product (PSD m x m) x I_n with unit trace, so its rank is a positive
    # multiple of n; exercised on random exact unit vectors
    rng = np.random.default_rng(23)
    for n in (2, 3):
        s = scalar_identity_system(n)
        for m in (2, 3, 4):
            mu = rational_unit(rng, m)
            ident = ExactMatrix.identity(n)
            blocks = [ident.scale(x) for x in mu]
            rows = []
            for r in range(n):
                row = []
                for blk in blocks:
                    row.extend(blk.row(r))
                rows.append(row)
            c = ExactMatrix.from_rows(rows)
            cert = HaemersCertificate(n=n, m=m, k=n, C=c, D=c)
            rank = verify_xi_certificate(s, cert)
            assert rank >= n
            # a PSD certificate is in particular a plain certificate
            assert verify_certificate(s, cert) == rank


# -- lift / project ----------------------------------------------------------


def test_lift_all_ones_is_rank_one():
    n = 4
    ones = ExactMatrix.from_strings([["1"] * n for _ in range(n)])
    fm = FittingMatrix(graph=complete_graph(n), variant="unit-diagonal", b=ones)
    cert = lift_graph_certificate(fm)
    assert cert.m == n and cert.k == 1
    # the span of a complete graph is the full matrix algebra
    s = NcGraph.from_graph(complete_graph(n))
    assert s.is_full()
    assert verify_certificate(s, cert) == 1


def test_lift_identity_for_empty_graph():
    n = 3
    fm = FittingMatrix(graph=empty_graph(n), variant="unit-diagonal", b=ExactMatrix.identity(n))
    cert = lift_graph_certificate(fm)
    assert verify_certificate(diagonal_system(n), cert) == n


def test_lift_requires_unit_diagonal():
    fm = gram_fitting_matrix(cycle_graph(5), pentagon_representation())
    with pytest.raises(VerificationError, match="unit-diagonal"):
        lift_graph_certificate(fm)


def test_lift_pentagon_gram():
    fm = unit_diagonal_form(gram_fitting_matrix(cycle_graph(5), pentagon_representation()))
    cert = lift_graph_certificate(fm)
    assert verify_certificate(NcGraph.from_graph(cycle_graph(5)), cert) == 3


def test_project_round_trip_never_increases_rank():
    g = cycle_graph(5)
    s = NcGraph.from_graph(g)
    rng = random.Random(3)
    for _ in range(5):
        fm = random_fitting_matrix(g, rng, "unit-diagonal")
        before = verify_fitting(fm)
        projected = project_to_graph_certificate(s, lift_graph_certificate(fm))
        assert projected.variant == "nonzero-diagonal"
        assert verify_fitting(projected) <= before


# -- tensor / direct sum / conjugation ----------------------------------------


def test_tensor_scalar_identity_ranks_multiply():
    s = scalar_identity_system(2)
    cert = tensor_certificate(s, identity_certificate(2), s, identity_certificate(2))
    assert cert.n == 4 and cert.m == 1
    assert verify_certificate(tensor(s, s), cert) == 4


def test_tensor_full_matrix_gives_rank_one_for_m4():
    m2 = full_matrix_system(2)
    cert = tensor_certificate(m2, full_matrix_certificate(2), m2, full_matrix_certificate(2))
    # tensor of full algebras is the full algebra, so the certificate also
    # verifies directly against M_4
    assert verify_certificate(full_matrix_system(4), cert) == 1


def test_tensor_corner_family_with_diagonal():
    sg = corner_family(Fraction(1, 2))
    d2 = diagonal_system(2)
    cert = tensor_certificate(sg, identity_certificate(3), d2, identity_certificate(2))
    assert verify_certificate(tensor(sg, d2), cert) == 6


def test_tensor_random_certificates_multiply():
    rng = np.random.default_rng(7)
    s, t = diagonal_system(2), constant_diagonal_system(2)
    c1 = random_certificate(s, 2, rng)
    c2 = random_certificate(t, 1, rng)
    out = tensor_certificate(s, c1, t, c2)
    assert verify_certificate(tensor(s, t), out) == c1.k * c2.k


def test_direct_sum_examples():
    ci2, ci3 = scalar_identity_system(2), scalar_identity_system(3)
    cert = direct_sum_certificate(ci2, identity_certificate(2), ci3, identity_certificate(3))
    assert verify_certificate(direct_sum_nc(ci2, ci3), cert) == 5

    m2 = full_matrix_system(2)
    cert = direct_sum_certificate(m2, full_matrix_certificate(2), m2, full_matrix_certificate(2))
    assert verify_certificate(direct_sum_nc(m2, m2), cert) == 2


def test_direct_sum_diagonals_recover_bigger_diagonal():
    d2, d3 = diagonal_system(2), diagonal_system(3)
    assert direct_sum_nc(d2, d3) == diagonal_system(5)
    cert = direct_sum_certificate(d2, identity_certificate(2), d3, identity_certificate(3))
    assert verify_certificate(diagonal_system(5), cert) == 5


def test_direct_sum_pads_uneven_block_counts():
    rng = np.random.default_rng(19)
    s, t = scalar_identity_system(2), diagonal_system(2)
    c1 = random_certificate(s, 1, rng)
    c2 = random_certificate(t, 3, rng)
    out = direct_sum_certificate(s, c1, t, c2)
    assert out.m == 3
    assert verify_certificate(direct_sum_nc(s, t), out) == c1.k + c2.k


def test_conjugate_by_permutation_and_phase():
    ci3 = scalar_identity_system(3)
    perm = ExactMatrix.from_strings([["0", "1", "0"], ["0", "0", "1"], ["1", "0", "0"]])
    cert = conjugate_certificate(ci3, identity_certificate(3), perm)
    assert verify_certificate(conjugate_by_unitary(ci3, perm), cert) == 3

    s2 = constant_diagonal_system(2)
    phase = ExactMatrix.from_strings([["i", "0"], ["0", "1"]])
    cert = conjugate_certificate(s2, identity_certificate(2), phase)
    assert verify_certificate(conjugate_by_unitary(s2, phase), cert) == 2
    # conjugating back restores the original factors exactly
    back = conjugate_certificate(conjugate_by_unitary(s2, phase), cert, phase.conj_transpose())
    assert back == identity_certificate(2)


def test_conjugate_rejects_non_unitary():
    with pytest.raises(ValueError):
        conjugate_certificate(
            scalar_identity_system(2), identity_certificate(2), ExactMatrix.identity(2).scale(2)
        )


# -- cohomomorphisms -----------------------------------------------------------


def test_cohomomorphism_identity():
    sg = corner_family(Fraction(1, 2))
    cert = cohomomorphism_apply(
        [ExactMatrix.identity(3)], identity_certificate(3), source=sg, target=sg
    )
    assert cert.m == 1
    assert verify_certificate(sg, cert) == 3


def test_vertex_map_embeds_small_diagonal():
    for n in (3, 4):
        kraus = homomorphism_kraus([0, 1], 2, n)
        cert = cohomomorphism_apply(
            kraus, identity_certificate(n), source=diagonal_system(2), target=diagonal_system(n)
        )
        rank = verify_certificate(diagonal_system(2), cert)
        assert 2 <= rank <= n


def test_cohomomorphism_violation_reports_triple():
    # collapsing both vertices breaks the condition for the diagonal span
    kraus = homomorphism_kraus([0, 0], 2, 3)
    with pytest.raises(VerificationError) as err:
        cohomomorphism_apply(
            kraus, identity_certificate(3), source=diagonal_system(2), target=diagonal_system(3)
        )
    assert err.value.kind == "cohomomorphism"
    assert len(err.value.where) == 3


def test_witness_kraus_unit_norm_vectors():
    s = NcGraph.from_graph(cycle_graph(5))
    wit = IndependentSystem.standard_basis(5, [1, 3])
    kraus = independent_witness_kraus(wit)
    assert len(kraus) == 2  # unit vectors need a single operator each
    fm = unit_diagonal_form(gram_fitting_matrix(cycle_graph(5), pentagon_representation()))
    cert = cohomomorphism_apply(
        kraus, lift_graph_certificate(fm), source=diagonal_system(2), target=s
    )
    assert verify_certificate(diagonal_system(2), cert) >= 2


def test_witness_kraus_scaled_and_complex_vectors():
    d3 = diagonal_system(3)
    wit = IndependentSystem.from_columns([
        ExactMatrix.column([parse_scalar("2"), parse_scalar("0"), parse_scalar("0")]),
        ExactMatrix.column([parse_scalar("0"), parse_scalar("1/3"), parse_scalar("0")]),
        ExactMatrix.column([parse_scalar("0"), parse_scalar("0"), parse_scalar("1+i")]),
    ])
    assert verify_independent(d3, wit)
    kraus = independent_witness_kraus(wit)
    cert = cohomomorphism_apply(kraus, identity_certificate(3), source=d3, target=d3)
    assert verify_certificate(d3, cert) == 3


def test_witness_kraus_rotated_span():
    rot = ExactMatrix.from_strings([["3/5", "4/5"], ["-4/5", "3/5"]])
    rotated = conjugate_by_unitary(diagonal_system(2), rot)
    wit = IndependentSystem.from_columns([
        ExactMatrix.column([parse_scalar("3/5"), parse_scalar("4/5")]),
        ExactMatrix.column([parse_scalar("-4/5"), parse_scalar("3/5")]),
    ])
    assert verify_independent(rotated, wit)
    kraus = independent_witness_kraus(wit)
    cert = conjugate_certificate(diagonal_system(2), identity_certificate(2), rot)
    out = cohomomorphism_apply(kraus, cert, source=diagonal_system(2), target=rotated)
    assert verify_certificate(diagonal_system(2), out) == 2


def test_four_square_decompositions_are_exact():
    for total in list(range(1, 61)) + [9999, 123456]:
        parts = _four_square(total)
        assert 1 <= len(parts) <= 4
        assert all(p > 0 for p in parts)
        assert sum(p * p for p in parts) == total


# -- compression lower bound ----------------------------------------------------


def test_compression_diagonal_standard_basis():
    got = compression_lower_bound(
        diagonal_system(3), identity_certificate(3), IndependentSystem.standard_basis(3, [0, 1, 2])
    )
    assert got == 3


def test_compression_pentagon_span():
    s = NcGraph.from_graph(cycle_graph(5))
    fm = unit_diagonal_form(gram_fitting_matrix(cycle_graph(5), pentagon_representation()))
    cert = lift_graph_certificate(fm)
    got = compression_lower_bound(s, cert, IndependentSystem.standard_basis(5, [1, 3]))
    assert 2 <= got <= 3


def test_compression_pentagon_strong_square():
    # the 25-vertex strong square has independence number 5; compressing any
    # verified certificate onto that witness must report at least 5
    g = cycle_graph(5)
    s = NcGraph.from_graph(g)
    fm = unit_diagonal_form(gram_fitting_matrix(g, pentagon_representation()))
    cert = tensor_certificate(s, lift_graph_certificate(fm), s, lift_graph_certificate(fm))
    size, witness = independence_number(strong_product(g, g))
    assert size == 5
    sys_ = IndependentSystem.standard_basis(25, sorted(witness))
    got = compression_lower_bound(tensor(s, s), cert, sys_)
    assert 5 <= got <= 9


def test_compression_rejects_dependent_vectors():
    with pytest.raises(VerificationError):
        compression_lower_bound(
            full_matrix_system(2),
            full_matrix_certificate(2),
            IndependentSystem.standard_basis(2, [0, 1]),
        )


# -- trace-preserving-map form ----------------------------------------------------


def test_tp_map_identity_certificate():
    tp = to_tp_map(scalar_identity_system(2), identity_certificate(2))
    assert len(tp.E) == 1
    assert tp.E[0] == ExactMatrix.identity(2)
    assert tp.F[0] == ExactMatrix.identity(2)
    assert verify_tp_map(scalar_identity_system(2), tp) == 2


def test_tp_map_rank_one_is_a_functional():
    tp = to_tp_map(full_matrix_system(3), full_matrix_certificate(3))
    assert tp.k == 1
    assert all(e.rows == 1 for e in tp.E)
    assert verify_tp_map(full_matrix_system(3), tp) == 1


def test_tp_round_trip_preserves_k():
    rng = np.random.default_rng(31)
    for s in (scalar_identity_system(2), constant_diagonal_system(2), diagonal_system(3)):
        cert = random_certificate(s, 2, rng)
        back = from_tp_map(to_tp_map(s, cert))
        assert back == cert
        assert back.k == cert.k


def test_tp_map_detects_bad_trace():
    ident = ExactMatrix.identity(2)
    tp = TpMapCertificate(n=2, k=2, E=(ident.scale(2),), F=(ident,))
    with pytest.raises(VerificationError) as err:
        verify_tp_map(scalar_identity_system(2), tp)
    assert err.value.kind == "trace"


# -- numeric search -----------------------------------------------------------------


def test_search_finds_rank_one_for_full_algebra():
    for n in (2, 3):
        s = full_matrix_system(n)
        cert = haemers_upper_search(s, 1, seed=5)
        assert cert is not None
        assert verify_certificate(s, cert) == 1


def test_search_finds_identity_for_corner_family():
    s = corner_family(Fraction(1, 2))
    cert = haemers_upper_search(s, 3, m_schedule=[1], seed=1)
    assert cert is not None
    assert cert.m == 1
    assert verify_certificate(s, cert) == 3


def test_search_returns_nothing_when_infeasible():
    assert haemers_upper_search(scalar_identity_system(2), 1, budget=3, seed=2) is None


def test_search_is_reproducible():
    s = full_matrix_system(2)
    a = haemers_upper_search(s, 1, seed=9)
    b = haemers_upper_search(s, 1, seed=9)
    assert a == b


def test_search_validates_inputs():
    with pytest.raises(ValueError):
        haemers_upper_search(full_matrix_system(2), 0)
    with pytest.raises(ValueError):
        haemers_upper_search(full_matrix_system(2), 1, m_schedule=[0])


# -- lower bounds --------------------------------------------------------------------


def test_lower_bound_full_algebra_is_one():
    report = haemers_lower(full_matrix_system(2))
    assert report.value == 1
    assert report.witness is None


def test_lower_bound_proper_subspace_is_two():
    report = haemers_lower(scalar_identity_system(2))
    assert report.value == 2
    assert "subspace" in report.justification


def test_lower_bound_diagonal_witness():
    report = haemers_lower(diagonal_system(4))
    assert report.value == 4
    assert report.witness is not None and report.witness.size == 4
    assert verify_independent(diagonal_system(4), report.witness)
    labels = [c[1] for c in report.contributions]
    assert any("independent" in text for text in labels)


# -- exact decision -------------------------------------------------------------------


def test_decide_scalar_identity_infeasible():
    for m in (1, 2):
        decision = haemers_exact_decide(scalar_identity_system(2), 1, m)
        assert decision.status == "infeasible"
        assert decision.engine.status == "no-common-root"


def test_decide_diagonal_infeasible():
    for m in (1, 2):
        decision = haemers_exact_decide(diagonal_system(2), 1, m)
        assert decision.status == "infeasible"


def test_decide_full_matrix_feasible_with_certificate():
    decision = haemers_exact_decide(full_matrix_system(2), 1, 2)
    assert decision.status == "feasible"
    assert decision.certificate is not None
    assert verify_certificate(full_matrix_system(2), decision.certificate) == 1


def test_decide_times_out_to_unknown():
    decision = haemers_exact_decide(diagonal_system(2), 1, 1, time_budget=0.0)
    assert decision.status == "unknown"
    assert decision.certificate is None


def test_decide_warns_above_variable_guideline():
    with pytest.warns(UserWarning, match="guideline"):
        decision = haemers_exact_decide(diagonal_system(2), 2, 2, time_budget=0.01)
    assert decision.status in ("unknown", "unknown-feasible", "feasible")
