import pytest

from heartforge.complexes import iso_test, pc_stalk
from heartforge.endalg import (
    FiniteDimAlgebra,
    chain_end_algebra,
    poly_factor,
    poly_gcd,
    poly_mul,
    split_complex,
)


def test_poly_factor_basics():
    # t^2 + t = t(t+1) over F_2
    assert poly_factor(2, [0, 1, 1]) == [([0, 1], 1), ([1, 1], 1)]
    # t^2 + t + 1 irreducible over F_2
    assert poly_factor(2, [1, 1, 1]) == [([1, 1, 1], 1)]
    # t^4 = t·t·t·t
    assert poly_factor(2, [0, 0, 0, 0, 1]) == [([0, 1], 4)]
    # (t+1)^2·t over F_3
    f = poly_mul(3, [0, 1], poly_mul(3, [1, 1], [1, 1]))
    assert poly_factor(3, f) == [([0, 1], 1), ([1, 1], 2)]
    # p-th power: (t^2+t+1)^2 over F_2 has zero derivative
    g = poly_mul(2, [1, 1, 1], [1, 1, 1])
    assert poly_factor(2, g) == [([1, 1, 1], 2)]


def test_poly_gcd():
    f = poly_mul(2, [1, 1], [1, 0, 1])  # (t+1)·(t^2+1) = (t+1)^3
    assert poly_gcd(2, f, [1, 1]) == [1, 1]


def _matrix_algebra(p, n):
    """Full matrix algebra Mat_n(F_p) as a FiniteDimAlgebra."""
    dim = n * n

    def mul(x, y):
        out = [0] * dim
        for i in range(n):
            for j in range(n):
                s = 0
                for k in range(n):
                    s += x[i * n + k] * y[k * n + j]
                out[i * n + j] = s % p
        return out

    unit = [1 if i % (n + 1) == 0 else 0 for i in range(dim)]
    return FiniteDimAlgebra(p, dim, mul, unit)


def _dual_numbers(p):
    # F_p[t]/(t^2)
    def mul(x, y):
        return [(x[0] * y[0]) % p, (x[0] * y[1] + x[1] * y[0]) % p]

    return FiniteDimAlgebra(p, 2, mul, [1, 0])


def _field_f4():
    # F_4 = F_2[w]/(w^2+w+1)
    def mul(x, y):
        a = (x[0] * y[0] + x[1] * y[1]) % 2
        b = (x[0] * y[1] + x[1] * y[0] + x[1] * y[1]) % 2
        return [a, b]

    return FiniteDimAlgebra(2, 2, mul, [1, 0])


def test_radical_dual_numbers():
    E = _dual_numbers(2)
    rad = E.radical_basis()
    assert len(rad) == 1 and rad[0] == [0, 1]
    E3 = _dual_numbers(3)
    assert len(E3.radical_basis()) == 1


def test_radical_semisimple():
    assert _field_f4().radical_basis() == []
    assert _matrix_algebra(2, 2).radical_basis() == []
    assert _matrix_algebra(3, 2).radical_basis() == []


def test_radical_upper_triangular():
    # upper triangular 2x2 over F_2: radical is the strictly upper part
    p = 2

    def mul(x, y):
        # basis e11, e12, e22
        a = (x[0] * y[0]) % p
        b = (x[0] * y[1] + x[1] * y[2]) % p
        c = (x[2] * y[2]) % p
        return [a, b, c]

    E = FiniteDimAlgebra(p, 3, mul, [1, 0, 1])
    rad = E.radical_basis()
    assert len(rad) == 1 and rad[0] == [0, 1, 0]


def test_idempotent_in_product_algebra():
    # F_2 x F_2 as F_2[t]/(t^2+t)
    def mul(x, y):
        # basis 1, t with t^2 = t
        return [(x[0] * y[0]) % 2, (x[0] * y[1] + x[1] * y[0] + x[1] * y[1]) % 2]

    E = FiniteDimAlgebra(2, 2, mul, [1, 0])
    e = E.find_nontrivial_idempotent()
    assert e is not None
    assert E.mul(e, e) == e


def test_no_idempotent_in_local():
    assert _dual_numbers(2).find_nontrivial_idempotent() is None
    assert _field_f4().find_nontrivial_idempotent() is None


def test_minimal_polynomial_matrix_algebra():
    E = _matrix_algebra(2, 2)
    # e11 has minimal polynomial t^2 - t
    e11 = [1, 0, 0, 0]
    assert E.minimal_polynomial(e11) == [0, 1, 1]


def test_split_stalk_sum(lam):
    C = pc_stalk(lam, (1, 2), 0)
    parts = split_complex(C)
    assert len(parts) == 2
    assert sorted(p.term(0) for p in parts) == [(1,), (2,)]


def test_split_indecomposable(lam):
    from test_complexes import lambda_silting_summand

    C = lambda_silting_summand(lam)
    parts = split_complex(C)
    assert len(parts) == 1
    assert iso_test(parts[0], C)


def test_split_direct_sum_of_complexes(lam):
    from test_complexes import lambda_silting_summand

    C = lambda_silting_summand(lam)
    D = C.direct_sum(pc_stalk(lam, (2,), -2))
    parts = split_complex(D)
    assert len(parts) == 2
    assert sorted(p.summand_count() for p in parts) == [1, 3]


def test_chain_end_algebra_unit(lam):
    from test_complexes import lambda_silting_summand

    C = lambda_silting_summand(lam)
    E, _ = chain_end_algebra(C)
    assert E.mul(E.unit, E.unit) == E.unit
