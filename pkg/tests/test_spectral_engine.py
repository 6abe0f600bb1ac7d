import numpy as np
import pytest
from sympy import Matrix, eye, zeros

from src.errors import DimensionMismatch, InvalidDifferentials, NotACocycle, NotChainMap, NotInFiltration, NotInKernel
from src.spectral_engine import (
    Bicomplex,
    CochainComplex,
    build_cone_triple,
    cone_sequence_is_exact,
    corrupt_triple,
    edge_map_eval,
    minimal_residue_triple,
    page,
    phi,
    random_bicomplex,
    random_chain_map,
    random_cone_triple,
    residue_quotient,
    tensor_bicomplex,
    total_cohomology,
    verify_cone_lemma,
    verify_triple,
)


def zigzag():
    return Bicomplex(
        {(0, 1): 1, (1, 1): 1, (1, 0): 1, (2, 0): 1},
        dI={(0, 1): Matrix([[1]]), (1, 0): Matrix([[1]])},
        dII={(1, 0): Matrix([[1]])},
    )


def test_cochain_complex_rejects_nonzero_square():
    with pytest.raises(InvalidDifferentials):
        CochainComplex({0: 1, 1: 1, 2: 1}, {0: Matrix([[1]]), 1: Matrix([[1]])})


def test_cochain_complex_cohomology():
    complex_ = CochainComplex({0: 1, 1: 2, 2: 1}, {0: Matrix([[1], [0]]), 1: Matrix([[0, 1]])})
    assert complex_.cohomology_dims() == {0: 0, 1: 0, 2: 0}


def test_bicomplex_rejects_commuting_square():
    with pytest.raises(InvalidDifferentials):
        Bicomplex(
            {(0, 0): 1, (1, 0): 1, (0, 1): 1, (1, 1): 1},
            dI={(0, 0): Matrix([[1]]), (0, 1): Matrix([[1]])},
            dII={(0, 0): Matrix([[1]]), (1, 0): Matrix([[1]])},
        )


def test_bicomplex_rejects_wrong_shape():
    with pytest.raises(InvalidDifferentials):
        Bicomplex({(0, 0): 1, (1, 0): 2}, dI={(0, 0): Matrix([[1]])})


def test_bicomplex_rejects_negative_position():
    with pytest.raises(InvalidDifferentials):
        Bicomplex({(-1, 0): 1})


def test_zigzag_pages():
    L = zigzag()
    assert {pos: n for pos, n in page(L, 1).dims.items() if n} == {(0, 1): 1, (2, 0): 1}
    assert {pos: n for pos, n in page(L, 2).dims.items() if n} == {(0, 1): 1, (2, 0): 1}
    assert not any(page(L, "inf").dims.values())
    assert total_cohomology(L).dims == {0: 0, 1: 0, 2: 0}


def test_page_frame_is_validated():
    frame = page(zigzag(), 2).to_frame()
    assert list(frame.columns) == ["p", "q", "dim"]
    assert frame["dim"].sum() == 2


def test_unknown_page():
    with pytest.raises(ValueError):
        page(zigzag(), 3)


def test_infinite_page_sums_to_total_cohomology(rng):
    for _ in range(200):
        L = random_bicomplex(rng, max_dim=3, size=3)
        limit = page(L, "inf").dims
        totals = total_cohomology(L).dims
        for n, dim in totals.items():
            assert sum(k for (p, q), k in limit.items() if p + q == n) == dim


def test_second_page_bounds_limit(rng):
    for _ in range(5):
        L = random_bicomplex(rng, max_dim=3, size=3)
        second, limit = page(L, 2).dims, page(L, "inf").dims
        assert all(limit[pos] <= second[pos] for pos in L.dims)


def test_edge_map_eval_on_point():
    L = Bicomplex({(0, 1): 1})
    assert edge_map_eval(L, 1, 0, 1, {0: 1}) == (1,)
    assert edge_map_eval(L, 2, 0, 1, {0: 3}) == (3,)
    assert edge_map_eval(L, "inf", 0, 1, {0: 1}) == (1,)


def test_edge_map_eval_checks_filtration():
    L = Bicomplex({(0, 1): 1, (1, 0): 1})
    with pytest.raises(NotInFiltration):
        edge_map_eval(L, 2, 1, 0, {0: 1})


def test_edge_map_eval_checks_cocycle():
    with pytest.raises(NotACocycle):
        edge_map_eval(zigzag(), 1, 0, 1, {0: 1})


def test_transpose_keeps_total_cohomology(rng):
    L = random_bicomplex(rng, max_dim=3, size=3)
    assert total_cohomology(L.transpose()).dims == total_cohomology(L).dims


def test_tensor_bicomplex_satisfies_kuenneth():
    V = CochainComplex({1: 1})
    K = CochainComplex({0: 1, 1: 1})
    L = tensor_bicomplex(V, K)
    assert total_cohomology(L).dims == {0: 0, 1: 1, 2: 1}


def test_tensor_bicomplex_of_acyclic_factor():
    V = CochainComplex({0: 1, 1: 1}, {0: Matrix([[1]])})
    K = CochainComplex({0: 1, 1: 1})
    assert not any(total_cohomology(tensor_bicomplex(V, K)).dims.values())


@pytest.mark.parametrize("seed", range(5))
def test_random_chain_maps_commute(seed):
    rng = np.random.default_rng(seed)
    A = random_bicomplex(rng, max_dim=3, size=3)
    B = random_bicomplex(rng, max_dim=3, size=3)
    assert random_chain_map(A, B, rng).is_chain_map()


def test_random_bicomplex_respects_dimension_cap(rng):
    for _ in range(10):
        L = random_bicomplex(rng, max_dim=2, size=3)
        assert all(n <= 2 for n in L.dims.values())


def test_cone_source_must_avoid_row_zero():
    A = Bicomplex({(0, 0): 1})
    with pytest.raises(DimensionMismatch):
        build_cone_triple(A, A, {(0, 0): Matrix([[1]])})


def test_cone_needs_chain_map():
    A = Bicomplex({(0, 1): 1})
    B = Bicomplex({(0, 1): 1, (0, 2): 1}, dII={(0, 1): Matrix([[1]])})
    with pytest.raises(NotChainMap):
        build_cone_triple(A, B, {(0, 1): Matrix([[1]])})


def test_complex_map_is_checked_before_tensoring():
    V = CochainComplex({1: 1})
    W = CochainComplex({1: 1, 2: 1}, {1: Matrix([[1]])})
    with pytest.raises(NotChainMap):
        build_cone_triple(V, W, {1: Matrix([[1]])}, CochainComplex({0: 1}))


def test_minimal_triple_cone_cohomology():
    t = minimal_residue_triple()
    assert total_cohomology(t.A).dims[1] == 1
    assert total_cohomology(t.B).dims[1] == 1
    assert not any(total_cohomology(t.C).dims.values())
    assert cone_sequence_is_exact(t)


def test_minimal_triple_residue_and_phi():
    t = minimal_residue_triple()
    assert residue_quotient(t, 0, 1).dim == 1
    assert phi(t, 0, 0, {0: -1}) == (1,)
    assert phi(t, 0, 0, {0: 1}) == (-1,)


def test_minimal_triple_satisfies_cone_lemma():
    check = verify_triple(minimal_residue_triple())
    assert check.failures == 0
    assert check.nontrivial >= 1


def test_corrupted_triple_is_caught():
    check = verify_triple(corrupt_triple(minimal_residue_triple()))
    assert check.failures >= 1


@pytest.mark.parametrize("kind", ["tensor", "bicomplex", "residue"])
def test_random_cone_triples_are_exact(kind):
    for trial in range(3):
        t = random_cone_triple(np.random.default_rng([5, trial]), kind)
        assert t.f.is_chain_map()
        assert cone_sequence_is_exact(t)


def test_unknown_trial_kind():
    with pytest.raises(ValueError):
        random_cone_triple(np.random.default_rng(0), "extra")


def test_cone_lemma_holds_on_hundred_trials():
    report = verify_cone_lemma(seed=1, trials=100)
    assert len(report.trials) == 100
    assert report.passed
    assert report.trials["nontrivial"].sum() > 0
    assert set(report.trials["kind"]) == {"tensor", "bicomplex", "residue"}


def test_cone_lemma_report_is_deterministic():
    first = verify_cone_lemma(seed=3, trials=6)
    second = verify_cone_lemma(seed=3, trials=6)
    assert first.to_json_lines() == second.to_json_lines()
    assert len(first.to_json_lines().splitlines()) == 6


def test_cone_lemma_reports_corrupted_triple():
    report = verify_cone_lemma(seed=1, trials=0, extra_triples=[corrupt_triple(minimal_residue_triple())])
    assert not report.passed
    assert report.failures >= 1
    assert list(report.trials["kind"]) == ["extra"]


def test_phi_vanishes_for_surjective_f(rng):
    # f projects B + X onto B, and X has no second page, so E_2(A) -> E_2(B) is injective
    for _ in range(20):
        B = random_bicomplex(rng, max_dim=2, size=3, q_min=1)
        X = random_bicomplex(rng, max_dim=2, size=3, q_min=1, kinds=("vpair", "hpair", "square"))
        A = B.direct_sum(X)
        f = {pos: Matrix.hstack(eye(B.dim(*pos)), zeros(B.dim(*pos), X.dim(*pos))) for pos in A.dims if B.dim(*pos)}
        t = build_cone_triple(A, B, f)
        for q in range(4):
            assert residue_quotient(t, 0, q + 1).dim == 0
            for beta in B.second_page_entry(1, q).representatives:
                try:
                    value = phi(t, 0, q, beta)
                except NotInKernel:
                    continue
                assert not any(value)
