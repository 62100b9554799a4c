import math
from itertools import permutations

import numpy as np
import pytest

from symzeig import (
    SymTensor,
    apply_permutation,
    canonical_indices,
    contract,
    from_unique_entries,
    frobenius_norm,
    identity_tensor,
    inner_product,
    kmode_product,
    labeling_tensor,
    num_unique_entries,
    random_tensor,
    similarity_transform,
    symmetrize,
    vec,
)
from symzeig.tensors import multilinear_transform

from helpers import brute_contract, random_orthogonal, random_sym_tensor, random_unit


def test_num_unique_entries_matches_binomial():
    for d, n in [(2, 2), (3, 3), (4, 5), (6, 2)]:
        assert num_unique_entries(d, n) == math.comb(n + d - 1, d)
        assert len(canonical_indices(d, n)) == num_unique_entries(d, n)


def test_canonical_indices_lex_order_and_multiplicity():
    idx = canonical_indices(3, 3)
    assert idx[0].indices == (1, 1, 1) and idx[0].multiplicity == 1
    assert idx[1].indices == (1, 1, 2) and idx[1].multiplicity == 3
    assert idx[4].indices == (1, 2, 3) and idx[4].multiplicity == 6
    assert idx[-1].indices == (3, 3, 3)
    tuples = [c.indices for c in idx]
    assert tuples == sorted(tuples)
    # multiplicities sum to the full array size
    assert sum(c.multiplicity for c in idx) == 27


class TestFromUniqueEntries:
    def test_labeling_first_entry(self):
        t = from_unique_entries(3, 3, np.arange(1.0, 11.0))
        assert t[0, 0, 0] == 1.0
        assert t[2, 2, 2] == 10.0

    def test_matrix_case(self):
        t = from_unique_entries(2, 2, [5.0, -1.0, 2.0])
        assert np.array_equal(t.array, [[5.0, -1.0], [-1.0, 2.0]])

    def test_conservative_sum_is_144(self):
        # sum over all 27 positions of |value|; the shift scale doubles it
        t = labeling_tensor(3, 3)
        assert np.abs(t.array).sum() == 144.0
        assert 2 * np.abs(t.array).sum() == 288.0

    def test_length_mismatch_names_expected_count(self):
        with pytest.raises(ValueError, match="10"):
            from_unique_entries(3, 3, np.arange(9.0))

    def test_round_trip_bit_exact(self):
        rng = np.random.default_rng(7)
        entries = rng.standard_normal(num_unique_entries(4, 3))
        t = from_unique_entries(4, 3, entries)
        assert np.array_equal(t.unique_entries(), entries)

    def test_result_is_exactly_symmetric(self):
        rng = np.random.default_rng(8)
        t = from_unique_entries(3, 4, rng.standard_normal(num_unique_entries(3, 4)))
        arr = t.array
        for perm in permutations(range(3)):
            assert np.array_equal(arr, np.transpose(arr, perm))


class TestSymmetrize:
    def test_symmetric_input_is_fixed_point(self):
        rng = np.random.default_rng(9)
        t = random_sym_tensor(3, 3, rng)
        again = symmetrize(t.array)
        assert np.array_equal(again.array, t.array)

    def test_matrix_case_is_half_sum(self):
        rng = np.random.default_rng(10)
        m = rng.standard_normal((4, 4))
        assert np.allclose(symmetrize(m).array, (m + m.T) / 2, rtol=0, atol=0)

    def test_single_entry_averaged_over_orbit(self):
        a = np.zeros((2, 2, 2))
        a[0, 0, 1] = 0.9
        s = symmetrize(a).array
        for pos in [(0, 0, 1), (0, 1, 0), (1, 0, 0)]:
            assert s[pos] == 0.9 / 3
        assert s[0, 0, 0] == 0.0 and s[1, 1, 1] == 0.0

    def test_unequal_dims_rejected(self):
        with pytest.raises(ValueError, match="equal"):
            symmetrize(np.zeros((2, 3)))


class TestKmodeProduct:
    def test_identity_leaves_tensor(self):
        rng = np.random.default_rng(11)
        a = rng.standard_normal((2, 3, 4))
        for k in range(3):
            out = kmode_product(a, np.eye(a.shape[k]), k)
            assert np.allclose(out, a, rtol=0, atol=0)

    def test_matrix_case_is_b_a_ct(self):
        rng = np.random.default_rng(12)
        for _ in range(100):
            a = rng.standard_normal((3, 3))
            b = rng.standard_normal((3, 3))
            c = rng.standard_normal((3, 3))
            out = kmode_product(kmode_product(a, b, 0), c, 1)
            assert np.allclose(out, b @ a @ c.T, rtol=1e-12, atol=1e-12)

    @pytest.mark.parametrize("shape", [(3, 3, 3), (2, 4, 3), (5, 2, 3, 4)])
    def test_distinct_modes_commute(self, shape):
        rng = np.random.default_rng(13)
        for _ in range(40):
            a = rng.standard_normal(shape)
            b = rng.standard_normal((2, shape[0]))
            c = rng.standard_normal((4, shape[-1]))
            lhs = kmode_product(kmode_product(a, b, 0), c, a.ndim - 1)
            rhs = kmode_product(kmode_product(a, c, a.ndim - 1), b, 0)
            assert np.allclose(lhs, rhs, rtol=1e-12, atol=1e-12)

    @pytest.mark.parametrize("shape", [(3, 3, 3), (4, 2, 5), (2, 3, 4, 5)])
    def test_same_mode_composes(self, shape):
        rng = np.random.default_rng(14)
        for _ in range(40):
            a = rng.standard_normal(shape)
            b = rng.standard_normal((3, shape[1]))
            c = rng.standard_normal((6, 3))
            lhs = kmode_product(kmode_product(a, b, 1), c, 1)
            rhs = kmode_product(a, c @ b, 1)
            assert np.allclose(lhs, rhs, rtol=1e-12, atol=1e-12)

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValueError, match="columns"):
            kmode_product(np.zeros((2, 2)), np.zeros((3, 3)), 0)
        with pytest.raises(ValueError, match="out of range"):
            kmode_product(np.zeros((2, 2)), np.eye(2), 5)


class TestContract:
    def test_identity_tensor_maps_unit_vector_to_itself(self):
        e = identity_tensor(4, 3)
        rng = np.random.default_rng(15)
        for _ in range(50):
            x = random_unit(3, rng)
            assert np.linalg.norm(contract(e, x, 3) - x) <= 1e-12

    def test_basis_contraction_extracts_slice_column(self):
        t = labeling_tensor(3, 3)
        v = contract(t, np.array([1.0, 0.0, 0.0]), 2)
        assert np.array_equal(v, [1.0, 2.0, 3.0])
        assert v[0] == 1.0

    @pytest.mark.parametrize("order,dim", [(3, 3), (2, 4), (4, 2), (4, 5)])
    def test_matches_brute_force(self, order, dim):
        rng = np.random.default_rng(16)
        for _ in range(25):
            t = random_sym_tensor(order, dim, rng)
            x = rng.standard_normal(dim)
            for m in range(1, order + 1):
                got = contract(t, x, m)
                want = brute_contract(t.array, x, m)
                assert np.allclose(got, want, rtol=1e-12, atol=1e-12)

    def test_composition(self):
        rng = np.random.default_rng(17)
        for _ in range(100):
            t = random_sym_tensor(3, 4, rng)
            x = rng.standard_normal(4)
            for m in range(2, 4):
                step = contract(contract(t, x, 1), x, m - 1)
                whole = contract(t, x, m)
                assert np.allclose(step, whole, rtol=1e-12, atol=1e-12)

    def test_partial_contraction_stays_exactly_symmetric(self):
        rng = np.random.default_rng(18)
        t = random_sym_tensor(4, 3, rng)
        x = rng.standard_normal(3)
        SymTensor(contract(t, x, 2))  # raises if not bit-exact symmetric

    def test_m_out_of_range(self):
        t = labeling_tensor(3, 3)
        with pytest.raises(ValueError, match="out of range"):
            contract(t, np.ones(3), 4)
        with pytest.raises(ValueError, match="out of range"):
            contract(t, np.ones(3), 0)


class TestSimilarityTransform:
    def test_identity_is_noop(self):
        rng = np.random.default_rng(19)
        t = random_sym_tensor(3, 3, rng)
        assert np.allclose(similarity_transform(t, np.eye(3)).array, t.array,
                           rtol=0, atol=1e-15)

    def test_inverse_transform_restores(self):
        rng = np.random.default_rng(20)
        for _ in range(30):
            t = random_sym_tensor(3, 4, rng)
            q = random_orthogonal(4, rng)
            back = similarity_transform(similarity_transform(t, q), q.T)
            assert np.allclose(back.array, t.array, rtol=1e-10, atol=1e-10)

    def test_general_nonsingular_inverse(self):
        rng = np.random.default_rng(21)
        t = random_sym_tensor(3, 3, rng)
        p = rng.standard_normal((3, 3)) + 3 * np.eye(3)
        back = similarity_transform(similarity_transform(t, p), np.linalg.inv(p))
        assert np.allclose(back.array, t.array, rtol=1e-8, atol=1e-8)

    def test_frobenius_invariance_under_orthogonal(self):
        rng = np.random.default_rng(22)
        for _ in range(100):
            t = random_sym_tensor(3, 4, rng)
            q = random_orthogonal(4, rng)
            out = similarity_transform(t, q)
            assert abs(out.norm() - t.norm()) <= 1e-10 * t.norm()

    def test_raw_transform_asymmetry_is_tiny(self):
        rng = np.random.default_rng(23)
        for order, dim in [(3, 3), (4, 4)]:
            for _ in range(20):
                t = random_sym_tensor(order, dim, rng)
                q = random_orthogonal(dim, rng)
                raw = multilinear_transform(t, q)
                asym = np.max(np.abs(raw - symmetrize(raw).array))
                assert asym <= 1e-10 * t.norm()

    def test_output_exactly_symmetric(self):
        rng = np.random.default_rng(24)
        t = random_sym_tensor(4, 3, rng)
        q = random_orthogonal(3, rng)
        SymTensor(similarity_transform(t, q).array)  # validates symmetry


class TestInnerProductAndNorm:
    def test_self_inner_product_is_sum_of_squares(self):
        rng = np.random.default_rng(25)
        t = random_sym_tensor(3, 3, rng)
        assert inner_product(t, t) == pytest.approx((t.array**2).sum(), rel=1e-14)
        assert inner_product(t, t) >= 0

    def test_symmetry_exact(self):
        rng = np.random.default_rng(26)
        a = rng.standard_normal((3, 3, 3))
        b = rng.standard_normal((3, 3, 3))
        assert inner_product(a, b) == inner_product(b, a)

    def test_labeling_norm_squared_930(self):
        t = labeling_tensor(3, 3)
        assert frobenius_norm(t) ** 2 == pytest.approx(930.0, rel=1e-14)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError, match="mismatch"):
            inner_product(np.zeros((2, 2)), np.zeros((3, 3)))


class TestIdentityTensor:
    def test_order_two_is_identity_matrix(self):
        assert np.array_equal(identity_tensor(2, 4).array, np.eye(4))

    def test_order_four_basis_vector(self):
        e = identity_tensor(4, 2)
        x = np.array([1.0, 0.0])
        assert np.allclose(contract(e, x, 3), x, atol=1e-14)

    @pytest.mark.parametrize("order", [2, 4, 6])
    @pytest.mark.parametrize("dim", [2, 3, 4])
    def test_unit_sphere_property(self, order, dim):
        e = identity_tensor(order, dim)
        rng = np.random.default_rng(order * 10 + dim)
        for _ in range(100):
            x = random_unit(dim, rng)
            assert np.linalg.norm(contract(e, x, order - 1) - x) <= 1e-12

    def test_eigenvalue_shift(self):
        rng = np.random.default_rng(27)
        t = random_sym_tensor(4, 3, rng)
        e = identity_tensor(4, 3)
        # find one eigenpair via the power map on the shifted tensor
        from symzeig import SolverConfig, sshopm

        r = sshopm(t, random_unit(3, rng), 3 * float(np.abs(t.array).sum()),
                   SolverConfig(max_iter=20000))
        assert r.converged
        lam, x = r.eigenpair.lam, r.eigenpair.x
        shifted = symmetrize(t.array + 2.5 * e.array)
        v = contract(shifted, x, 3)
        # the shifted pair inherits the residual of the input pair
        assert np.linalg.norm(v - (lam + 2.5) * x) <= r.eigenpair.residual + 1e-10

    def test_odd_order_rejected(self):
        with pytest.raises(ValueError, match="even"):
            identity_tensor(3, 3)


class TestLabelingTensor:
    def test_ten_unique_entries(self):
        t = labeling_tensor(3, 3)
        assert np.array_equal(t.unique_entries(), np.arange(1.0, 11.0))

    def test_matrix_case(self):
        t = labeling_tensor(2, 2)
        assert np.array_equal(t.array, [[1.0, 2.0], [2.0, 3.0]])


class TestApplyPermutation:
    def test_identity_permutation(self):
        t = labeling_tensor(3, 3)
        assert np.array_equal(apply_permutation(t, [0, 1, 2]).array, t.array)

    def test_inverse_round_trip_bit_exact(self):
        rng = np.random.default_rng(28)
        t = random_sym_tensor(3, 4, rng)
        perm = list(rng.permutation(4))
        inv = np.argsort(perm)
        back = apply_permutation(apply_permutation(t, perm), inv)
        assert np.array_equal(back.array, t.array)

    def test_equals_similarity_transform_with_permutation_matrix(self):
        rng = np.random.default_rng(29)
        t = random_sym_tensor(3, 3, rng)
        perm = [2, 0, 1]
        p = np.eye(3)[:, perm]
        a = apply_permutation(t, perm).array
        b = similarity_transform(t, p).array
        assert np.allclose(a, b, rtol=0, atol=1e-12)

    def test_invalid_permutation_rejected(self):
        t = labeling_tensor(3, 3)
        with pytest.raises(ValueError, match="permutation"):
            apply_permutation(t, [0, 0, 1])


class TestVecAndTypes:
    def test_vec_first_index_fastest(self):
        a = np.arange(24.0).reshape(2, 3, 4)
        v = vec(a)
        n1, n2, _ = a.shape
        for i in range(2):
            for j in range(3):
                for k in range(4):
                    assert v[i + n1 * j + n1 * n2 * k] == a[i, j, k]

    def test_sym_tensor_rejects_asymmetric(self):
        a = np.zeros((2, 2, 2))
        a[0, 0, 1] = 1.0
        with pytest.raises(ValueError, match="not symmetric"):
            SymTensor(a)

    def test_sym_tensor_immutable(self):
        t = labeling_tensor(3, 3)
        with pytest.raises(ValueError):
            t.array[0, 0, 0] = 5.0

    def test_random_tensor_deterministic(self):
        a = random_tensor(3, 6, seed=7)
        b = random_tensor(3, 6, seed=7)
        assert np.array_equal(a.array, b.array)
