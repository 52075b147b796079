import numpy as np
import pytest

from durakit.codec import gf256


ALL = np.arange(256, dtype=np.uint8)


class TestFieldAxioms:
    def test_addition_is_xor_and_self_inverse(self):
        xor = np.bitwise_xor.outer(ALL, ALL)
        assert np.array_equal(xor, xor.T)  # commutative
        assert np.all(np.bitwise_xor(ALL, ALL) == 0)  # x + x = 0
        for a in (0, 1, 7, 255):
            assert gf256.add(a, 0) == a

    def test_multiplication_commutes(self):
        assert np.array_equal(gf256.MUL_TABLE, gf256.MUL_TABLE.T)

    def test_multiplicative_identity_and_zero(self):
        assert np.array_equal(gf256.MUL_TABLE[1], ALL)
        assert np.all(gf256.MUL_TABLE[0] == 0)

    def test_every_nonzero_element_has_inverse(self):
        for a in range(1, 256):
            assert gf256.mul(a, gf256.inv(a)) == 1

    def test_inverse_of_zero_rejected(self):
        with pytest.raises(ZeroDivisionError):
            gf256.inv(0)
        with pytest.raises(ZeroDivisionError):
            gf256.div(3, 0)

    def test_mul_div_round_trip_exhaustive(self):
        for b in range(1, 256):
            products = gf256.MUL_TABLE[:, b]
            recovered = gf256.MUL_TABLE[gf256.INV_TABLE[b]][products]
            assert np.array_equal(recovered, ALL)

    def test_associativity_exhaustive(self):
        # a*(b*c) == (a*b)*c for all 256**3 triples, chunked over a
        table = gf256.MUL_TABLE
        for a in range(256):
            left = table[a][table]            # [b, c] -> a*(b*c)
            right = table[table[a]][:, :]     # rows indexed by a*b
            assert np.array_equal(left, right), f"associativity broken at a={a}"

    def test_distributivity_exhaustive(self):
        table = gf256.MUL_TABLE
        xor = np.bitwise_xor.outer(ALL, ALL)
        for a in range(256):
            left = table[a][xor]                               # a*(b+c)
            right = np.bitwise_xor.outer(table[a], table[a])   # a*b + a*c
            assert np.array_equal(left, right), f"distributivity broken at a={a}"

    def test_table_matches_scalar_path(self):
        rng = np.random.default_rng(0)
        for _ in range(500):
            a, b = int(rng.integers(256)), int(rng.integers(256))
            assert gf256.MUL_TABLE[a, b] == gf256.mul(a, b)

    def test_div_matches_mul_by_inverse(self):
        for a in (0, 1, 9, 171, 255):
            for b in (1, 2, 90, 255):
                assert gf256.div(a, b) == gf256.mul(a, gf256.inv(b))


class TestVectorHelpers:
    def test_mul_bytes_scalar_cases(self):
        data = np.array([0, 1, 7, 200, 255], dtype=np.uint8)
        assert np.all(gf256.mul_bytes(0, data) == 0)
        assert np.array_equal(gf256.mul_bytes(1, data), data)
        expected = np.array([gf256.mul(3, int(v)) for v in data], dtype=np.uint8)
        assert np.array_equal(gf256.mul_bytes(3, data), expected)

    def test_addmul_accumulates(self):
        acc = np.zeros(4, dtype=np.uint8)
        data = np.array([1, 2, 3, 4], dtype=np.uint8)
        gf256.addmul_bytes(acc, 5, data)
        gf256.addmul_bytes(acc, 5, data)
        assert np.all(acc == 0)  # adding twice cancels

    def test_mul_table_is_immutable(self):
        with pytest.raises(ValueError):
            gf256.MUL_TABLE[0, 0] = 1


class TestMatrixAlgebra:
    def test_invert_round_trip(self):
        rng = np.random.default_rng(2)
        for size in (1, 2, 4, 6):
            while True:
                matrix = [
                    [int(v) for v in rng.integers(0, 256, size)] for _ in range(size)
                ]
                if gf256.matrix_rank(matrix, size) == size:
                    break
            inverse = gf256.matrix_invert(matrix)
            for i in range(size):
                for j in range(size):
                    acc = 0
                    for t in range(size):
                        acc ^= gf256.mul(matrix[i][t], inverse[t][j])
                    assert acc == int(i == j)

    def test_singular_rejected(self):
        with pytest.raises(ValueError):
            gf256.matrix_invert([[1, 2], [1, 2]])

    def test_rank(self):
        assert gf256.matrix_rank([[1, 0], [0, 1], [1, 1]], 2) == 2
        assert gf256.matrix_rank([[1, 1], [1, 1]], 2) == 1
        assert gf256.matrix_rank([[0, 0]], 2) == 0
