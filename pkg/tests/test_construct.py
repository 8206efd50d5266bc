import math

import numpy as np
import pytest

from diamondlab.construct import (CyclicGrading, grading_audit, loop_basis, loop_nottingham, zassenhaus,
                                  zassenhaus_constant)
from diamondlab.errors import DomainError, ModulusError
from diamondlab.liecore import bracket, jacobi_audit


def divided_power_constant(i, j, p, q):
    """[x^(i+1) d, x^(j+1) d] in the divided power algebra, computed with exact integers.

    x^(a) d applied to x^(b) gives C(a+b-1, a) x^(a+b-1), so the commutator
    coefficient is C(a+b-1, a) - C(a+b-1, b) with a = i+1, b = j+1.
    """
    a, b = i + 1, j + 1
    if not -1 <= i + j <= q - 2:
        return 0
    return (math.comb(a + b - 1, a) - math.comb(a + b - 1, b)) % p


@pytest.mark.parametrize("p,n", [(7, 1), (5, 2), (11, 1)])
def test_constants_match_divided_powers(p, n):
    q = p ** n
    z = zassenhaus(p, n)
    for i in range(-1, q - 1):
        for j in range(-1, q - 1):
            assert z.c(i, j) == divided_power_constant(i, j, p, q), (i, j)


def test_known_constants():
    q = 7
    assert zassenhaus_constant(0, 5, 7, q) == 5  # -2
    assert zassenhaus_constant(-1, 5, 7, q) == 1
    assert all(zassenhaus_constant(i, -1, 7, q) == 6 for i in range(0, 6))
    assert zassenhaus_constant(4, 5, 7, q) == 0  # index 9 out of range


@pytest.mark.parametrize("p,n", [(5, 2), (7, 1), (7, 2), (11, 1), (13, 1), (5, 3)])
def test_zassenhaus_jacobi(p, n):
    assert zassenhaus(p, n).jacobi_violations() == []


def test_zassenhaus_jacobi_detects_corruption():
    z = zassenhaus(7, 1)
    z.constants[2, 3] = (z.constants[2, 3] + 1) % 7
    z.constants[3, 2] = (z.constants[3, 2] - 1) % 7
    assert z.jacobi_violations()


def test_zassenhaus_domain():
    with pytest.raises(DomainError):
        zassenhaus(5, 1)
    with pytest.raises(DomainError):
        zassenhaus(3, 2)
    with pytest.raises(ModulusError):
        zassenhaus(6, 1)
    with pytest.raises(DomainError):
        zassenhaus(7, 1).c(6, 0)


def test_grading():
    z = zassenhaus(7, 1)
    assert grading_audit(z, CyclicGrading.standard(z))
    assert grading_audit(z, CyclicGrading(5, lambda i: i % 5))  # any Z-grading reduces
    assert not grading_audit(z, CyclicGrading(6, lambda i: i * i % 6))


def test_loop_basis_order():
    assert loop_basis(7, 1) == [-1, 5]
    assert loop_basis(7, 2) == [4]
    assert loop_basis(7, 6) == [0]
    assert loop_basis(7, 7) == [-1, 5]


@pytest.mark.parametrize("p,n,N", [(7, 1, 120), (5, 2, 100), (11, 1, 60)])
def test_loop_dims_and_jacobi(p, n, N):
    q = p ** n
    L = loop_nottingham(p, n, N)
    assert [m for m in range(1, N + 1) if L.dim(m) == 2] == list(range(1, N + 1, q - 1))
    assert all(L.dim(m) == 1 for m in range(1, N + 1) if (m - 1) % (q - 1))
    assert jacobi_audit(L, up_to=min(N, 60)) == []


def test_loop_y_kills_all_but_two_indices():
    # [e_i, e_{q-2}] can only be nonzero for i + q - 2 <= q - 2
    q, N = 7, 50
    L = loop_nottingham(7, 1, N)
    y = L.generator("y")
    for m in range(1, N):
        for k, idx in enumerate(loop_basis(q, m)):
            hit = not bracket(L, L.basis(m, k), y).is_zero
            assert hit == (idx in (-1, 0)), (m, idx)


def test_loop_requires_headroom():
    with pytest.raises(DomainError):
        loop_nottingham(7, 1, 13)


def test_loop_tables_periodic():
    L = loop_nottingham(7, 1, 60)
    assert np.array_equal(L.table(3, 1), L.table(9, 1))
    assert np.array_equal(L.table(7, 7), L.table(13, 19))
