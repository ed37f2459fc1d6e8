import itertools
import math

import numpy as np
import pytest
from scipy.sparse import issparse

import radical_algebra

from sunmesh import (
    ARITY_FULL,
    Coupler,
    EulerAngles,
    FockBasis,
    ResourceError,
    ValidationError,
    basis_dimension,
    canonicalize,
    lift_coupler,
    lift_plan,
    lift_via_permanents,
    lifted_generator,
    permanent_ryser,
    random_unitary_qr,
    triangle_decompose,
)


def canonical_plan(n, seed):
    m = random_unitary_qr(n, seed=seed)
    return m, canonicalize(triangle_decompose(m), m)


def permanent_brute(a):
    n = a.shape[0]
    return sum(
        np.prod([a[i, perm[i]] for i in range(n)])
        for perm in itertools.permutations(range(n))
    )


def test_basis_dimension_values():
    assert basis_dimension(2, 2) == 3
    assert basis_dimension(3, 3) == 10
    assert basis_dimension(4, 2) == 10
    assert basis_dimension(9, 5) == 1287
    assert basis_dimension(5, 0) == 1
    assert basis_dimension(1, 7) == 1


def test_basis_dimension_overflow_is_loud():
    with pytest.raises(OverflowError):
        basis_dimension(36, 35)  # C(70, 35) > 2^63 - 1


def test_basis_dimension_validation():
    with pytest.raises(ValidationError):
        basis_dimension(0, 2)
    with pytest.raises(ValidationError):
        basis_dimension(2, -1)


def test_fock_basis_is_lexicographically_descending():
    basis = FockBasis(2, 2)
    assert basis.states == ((2, 0), (1, 1), (0, 2))
    basis = FockBasis(3, 2)
    assert basis.states == ((2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2))
    assert len(basis) == 6
    assert basis.index[(1, 0, 1)] == 2
    assert all(sum(s) == 2 for s in basis.states)


def test_lifted_generator_offdiagonal_elements():
    basis = FockBasis(2, 2)
    c12 = lifted_generator(basis, 1, 2).toarray()
    # photon moved from mode 2 to mode 1: <m+e1-e2| C_12 |m> = sqrt((m1+1) m2)
    want = np.zeros((3, 3))
    want[0, 1] = math.sqrt(2.0)  # (1,1) -> (2,0)
    want[1, 2] = math.sqrt(2.0)  # (0,2) -> (1,1)
    assert np.array_equal(c12, want)
    c21 = lifted_generator(basis, 2, 1).toarray()
    assert np.array_equal(c21, want.T)


def test_lifted_generator_diagonal_counts_photons():
    basis = FockBasis(3, 2)
    c22 = lifted_generator(basis, 2, 2).toarray()
    assert np.array_equal(np.diag(c22), [s[1] for s in basis.states])


def test_lifted_generator_is_sparse_and_validated():
    basis = FockBasis(3, 2)
    assert issparse(lifted_generator(basis, 1, 3))
    with pytest.raises(ValidationError):
        lifted_generator(basis, 0, 1)
    with pytest.raises(ValidationError):
        lifted_generator(basis, 1, 4)


# Exact commutator checks: see radical_algebra for the integer-radical
# representation that makes the equalities below exact rather than approximate.


@pytest.mark.parametrize("n,p", [(2, 2), (3, 2), (3, 3), (4, 3)])
def test_commutators_close_exactly(n, p):
    basis = FockBasis(n, p)
    gens = {
        (a, b): radical_algebra.exact_generator(basis, a, b)
        for a in range(n)
        for b in range(n)
    }
    for ab, cd in itertools.product(gens, repeat=2):
        assert radical_algebra.commutator_defect(gens, ab, cd) == {}, (ab, cd)


def test_library_entries_match_exact_radicals_bitwise():
    basis = FockBasis(4, 3)
    for a, b in [(0, 1), (1, 3), (2, 2)]:
        lib = lifted_generator(basis, a + 1, b + 1).toarray()
        exact = radical_algebra.exact_generator(basis, a, b)
        assert np.count_nonzero(lib) == len(exact)
        for (r, c), terms in exact.items():
            ((m, f),) = terms.items()
            assert lib[r, c] == f * math.sqrt(m)


# --- lifting -----------------------------------------------------------------


def test_lift_coupler_mixing_element_value():
    # the middle rotation maps |2,0> to cos^2|2,0> + sqrt2 cos sin|1,1> + ...
    basis = FockBasis(2, 2)
    beta = 0.7
    c = Coupler(1, 2, EulerAngles(0.0, beta, 0.0), ARITY_FULL)
    lifted = lift_coupler(basis, c)
    want = math.sqrt(2.0) * math.cos(beta / 2) * math.sin(beta / 2)
    assert abs(lifted[basis.index[(1, 1)], basis.index[(2, 0)]] - want) < 1e-12


def test_lift_coupler_z_phases_are_occupation_weighted():
    basis = FockBasis(2, 2)
    c = Coupler(1, 2, EulerAngles(0.8, 0.0, 0.0), ARITY_FULL)
    lifted = lift_coupler(basis, c)
    # diagonal phases exp(i*(alpha/2)(m1 - m2)) on (2,0), (1,1), (0,2)
    want = np.diag(np.exp(1j * 0.4 * np.array([2.0, 0.0, -2.0])))
    assert np.allclose(lifted, want, atol=1e-14)


def test_lift_coupler_p1_equals_fundamental_block():
    from sunmesh import su2_from_euler

    basis = FockBasis(2, 1)
    ang = EulerAngles(0.3, 1.1, -0.4)
    lifted = lift_coupler(basis, Coupler(1, 2, ang, ARITY_FULL))
    assert np.allclose(lifted, su2_from_euler(ang), atol=1e-14)


def test_lift_coupler_is_unitary():
    basis = FockBasis(3, 3)
    c = Coupler(2, 3, EulerAngles(0.5, 1.3, -0.9), ARITY_FULL)
    lifted = lift_coupler(basis, c)
    dim = len(basis)
    assert np.linalg.norm(lifted @ lifted.conj().T - np.eye(dim)) < 1e-9


def test_lift_coupler_rejects_nonadjacent():
    basis = FockBasis(3, 2)
    with pytest.raises(ValidationError):
        lift_coupler(basis, Coupler(1, 3, EulerAngles(0, 1, 0), ARITY_FULL))


@pytest.mark.parametrize("n,p", [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2), (4, 3)])
def test_lift_routes_agree(n, p):
    m, plan = canonical_plan(n, seed=10 * n + p)
    basis = FockBasis(n, p)
    assert np.abs(lift_plan(basis, plan) - lift_via_permanents(m, p)).max() < 1e-8


@pytest.mark.parametrize("n", [2, 3, 5])
def test_lift_plan_p1_is_the_fundamental(n):
    m, plan = canonical_plan(n, seed=30 + n)
    basis = FockBasis(n, 1)
    assert np.abs(lift_plan(basis, plan) - m).max() < 1e-12


def test_lift_plan_applies_global_phase_once_per_photon():
    m = random_unitary_qr(3, seed=77)
    plan = triangle_decompose(m)  # nonzero global phase
    assert abs(plan.global_phase) > 1e-3
    for p in (1, 2, 3):
        basis = FockBasis(3, p)
        diff = np.abs(lift_plan(basis, plan) - lift_via_permanents(m, p)).max()
        assert diff < 1e-10, p


def test_lift_plan_validates_inputs():
    m, plan = canonical_plan(3, seed=41)
    with pytest.raises(ValidationError):
        lift_plan(FockBasis(4, 2), plan)
    from sunmesh import MeshPlan

    nonadj = MeshPlan(3, 0.0, (Coupler(1, 3, EulerAngles(0, 1, 0), ARITY_FULL),))
    with pytest.raises(ValidationError):
        lift_plan(FockBasis(3, 2), nonadj)


def test_lift_plan_caches_one_eigensystem_per_pair():
    m, plan = canonical_plan(4, seed=42)
    basis = FockBasis(4, 2)
    lifted, info = lift_plan(basis, plan, return_info=True)
    assert info["offdiag_types"] == 3
    assert info["pairs"] == [(1, 2), (2, 3), (3, 4)]
    assert np.abs(lifted - lift_via_permanents(m, 2)).max() < 1e-8


def test_dimension_cap_is_enforced_and_overridable(monkeypatch):
    m, plan = canonical_plan(4, seed=43)
    monkeypatch.setenv("TRIMESH_DIM_CAP", "30")
    with pytest.raises(ResourceError):
        lift_plan(FockBasis(4, 4), plan)  # dim 35 > 30
    monkeypatch.setenv("TRIMESH_DIM_CAP", "35")
    lift_plan(FockBasis(4, 4), plan)
    monkeypatch.setenv("TRIMESH_DIM_CAP", "bogus")
    with pytest.raises(ValidationError):
        lift_plan(FockBasis(4, 4), plan)


def test_permanent_known_values():
    assert permanent_ryser([[4.2]]) == pytest.approx(4.2)
    assert permanent_ryser(np.ones((3, 3))) == pytest.approx(6.0)
    assert permanent_ryser([[1, 2], [3, 4]]) == pytest.approx(10.0)
    # identity permanent is 1 regardless of size
    assert permanent_ryser(np.eye(6)) == pytest.approx(1.0)


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5, 6])
def test_permanent_matches_brute_force(k):
    rng = np.random.default_rng(k)
    a = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
    assert abs(permanent_ryser(a) - permanent_brute(a)) < 1e-9


def test_permanent_size_cap():
    with pytest.raises(ResourceError):
        permanent_ryser(np.eye(21))


def test_lift_via_permanents_u3_p3_is_unitary():
    u = random_unitary_qr(3, seed=90)
    lifted = lift_via_permanents(u, 3)
    dim = basis_dimension(3, 3)
    assert lifted.shape == (dim, dim)
    assert np.linalg.norm(lifted @ lifted.conj().T - np.eye(dim)) < 1e-9


def test_lift_via_permanents_p0_is_trivial():
    u = random_unitary_qr(3, seed=91)
    assert np.array_equal(lift_via_permanents(u, 0), np.ones((1, 1)))


def test_lift_via_permanents_validation():
    with pytest.raises(ValidationError):
        lift_via_permanents(np.diag([1.0, 2.0]), 2)
    with pytest.raises(ResourceError):
        lift_via_permanents(np.eye(2), 21)


def test_lift_via_permanents_worker_independent():
    u = random_unitary_qr(4, seed=92)
    assert np.array_equal(
        lift_via_permanents(u, 2), lift_via_permanents(u, 2, workers=4)
    )


def test_lift_plan_generator_economy_at_n9_p5():
    # 36 couplers but only the 8 nearest-neighbour generator pairs, at the
    # full 1287-dimensional five-photon space
    m, plan = canonical_plan(9, seed=95)
    basis = FockBasis(9, 5)
    lifted, info = lift_plan(basis, plan, return_info=True)
    assert len(basis) == 1287
    assert info["offdiag_types"] == 8
    sample = np.abs(lifted[0]) ** 2
    assert abs(sample.sum() - 1.0) < 1e-9
