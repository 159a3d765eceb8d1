import json

import numpy as np
import pytest

from quatdet.errors import (
    BadSplitIndex,
    DimensionMismatch,
    IndexEqual,
    IndexOutOfRange,
    NonSquare,
    NotAPermutation,
)
from quatdet.qdet import extension_counterexample, naive_det_witnesses
from quatdet.qmatrix import (
    MatrixFormatError,
    QMatrix,
    adjoint,
    block_join,
    block_split,
    column_from_complex,
    complexify,
    decomplexify,
    direct_sum,
    dumps,
    elementary_diag,
    elementary_shear,
    hadamard,
    is_hermitian,
    is_unitary,
    load,
    loads,
    matmul,
    permutation,
    random_qmatrix,
    random_unitary,
    save,
)
from quatdet.quaternion import Quaternion

from conftest import I_, J_, K_, random_hermitian


def test_identity_left_unit(rng):
    m = random_qmatrix(rng, 3, 5)
    assert matmul(QMatrix.identity(3), m) == m


def test_diag_products():
    got = matmul(QMatrix.diag([I_, I_]), QMatrix.diag([J_, J_]))
    assert got == QMatrix.diag([K_, K_])


def test_intertwiner():
    ce = extension_counterexample()
    assert matmul(ce.S, ce.M) == matmul(ce.N, ce.S)


def test_matmul_shape_error(rng):
    with pytest.raises(DimensionMismatch):
        matmul(random_qmatrix(rng, 2, 3), random_qmatrix(rng, 2, 3))


def test_matmul_against_entrywise_sum(rng):
    x, y = random_qmatrix(rng, 3, 4), random_qmatrix(rng, 4, 2)
    ref = [[sum((x[i, t] * y[t, j] for t in range(4)), Quaternion()) for j in range(2)] for i in range(3)]
    assert matmul(x, y).allclose(QMatrix.from_entries(ref), 1e-13)


def test_adjoint_examples():
    assert adjoint(QMatrix.identity(3)) == QMatrix.identity(3)
    assert adjoint(QMatrix.from_entries([[I_]])) == QMatrix.from_entries([[-I_]])
    a, b = naive_det_witnesses()
    for w in (a, b):
        assert matmul(adjoint(w), w).allclose(QMatrix.identity(2), 1e-15)


def test_hermitian_unitary_predicates():
    h = QMatrix.from_entries([[1, I_], [-I_, 2]])
    assert is_hermitian(h)
    assert is_unitary(naive_det_witnesses()[0])
    shear = QMatrix.from_entries([[1, 1], [0, 1]])
    assert not is_hermitian(shear) and not is_unitary(shear)
    with pytest.raises(NonSquare):
        is_hermitian(random_qmatrix(np.random.default_rng(0), 2, 3))
    with pytest.raises(NonSquare):
        is_unitary(random_qmatrix(np.random.default_rng(0), 2, 3))


def test_adjoint_properties(rng):
    for _ in range(50):
        n, m, p = rng.integers(1, 7, size=3)
        x, y = random_qmatrix(rng, n, m), random_qmatrix(rng, m, p)
        assert adjoint(adjoint(x)) == x
        assert adjoint(matmul(x, y)).allclose(matmul(adjoint(y), adjoint(x)), 1e-13)


def test_complexify_examples():
    np.testing.assert_array_equal(complexify(QMatrix.identity(3)), np.eye(6))
    np.testing.assert_array_equal(complexify(QMatrix.from_entries([[J_]])), [[0, -1], [1, 0]])


def test_complexify_homomorphism(rng):
    for _ in range(200):
        n, m, p = rng.integers(1, 9, size=3)
        x, y = random_qmatrix(rng, n, m), random_qmatrix(rng, m, p)
        zx, zy = complexify(x), complexify(y)
        np.testing.assert_allclose(complexify(matmul(x, y)), zx @ zy, atol=1e-12)
        np.testing.assert_allclose(complexify(adjoint(x)), zx.conj().T, atol=1e-12)


def test_complexify_round_trip(rng):
    m = random_qmatrix(rng, 4, 3)
    assert decomplexify(complexify(m)) == m
    # entrywise split q = z1 + j z2
    z1, z2 = m.complex_parts()
    q = m[1, 2]
    rebuilt = Quaternion.from_complex(z1[1, 2]) + J_ * Quaternion.from_complex(z2[1, 2])
    assert rebuilt.isclose(q, 1e-15)


def test_complexify_hermitian(rng):
    z = complexify(random_hermitian(rng, 5))
    np.testing.assert_allclose(z, z.conj().T, atol=1e-15)


def test_column_from_complex():
    v = np.array([1 + 2j, 3 - 1j])
    col = column_from_complex(v)
    assert col.shape == (1, 1)
    assert col[0, 0] == Quaternion(1, 2) + J_ * Quaternion(3, -1)


def test_elementary_diag():
    assert elementary_diag(2, 1, J_) == QMatrix.diag([J_, 1])
    assert elementary_diag(3, 2, 1) == QMatrix.identity(3)
    q = Quaternion(0.5, -1, 2, 0.25)
    prod = QMatrix.identity(4)
    for i in range(1, 5):
        prod = matmul(prod, elementary_diag(4, i, q))
    assert prod == QMatrix.diag([q] * 4)
    with pytest.raises(IndexOutOfRange):
        elementary_diag(2, 3, q)


def test_elementary_shear():
    q = Quaternion(1, 2, -3, 0.5)
    assert matmul(elementary_shear(3, 1, 2, q), elementary_shear(3, 1, 2, -q)) == QMatrix.identity(3)
    assert elementary_shear(3, 2, 3, 0) == QMatrix.identity(3)
    minus = elementary_diag(3, 1, -1)
    assert elementary_shear(3, 1, 2, -q) == matmul(matmul(minus, elementary_shear(3, 1, 2, q)), minus)
    with pytest.raises(IndexEqual):
        elementary_shear(3, 2, 2, q)
    with pytest.raises(IndexOutOfRange):
        elementary_shear(3, 0, 2, q)


def test_permutation(rng):
    assert permutation([1, 2, 3]) == QMatrix.identity(3)
    assert permutation([2, 1]) == QMatrix.from_entries([[0, 1], [1, 0]])
    for _ in range(20):
        p = permutation(rng.permutation(6) + 1)
        assert matmul(p, adjoint(p)) == QMatrix.identity(6)
    for bad in ([1, 1], [0, 1], []):
        with pytest.raises(NotAPermutation):
            permutation(bad)


def test_hadamard(rng):
    x = random_qmatrix(rng, 2, 3)
    assert hadamard(x, QMatrix(np.tile([1.0, 0, 0, 0], (2, 3, 1)))) == x
    assert hadamard(QMatrix.zeros(2, 3), x) == QMatrix.zeros(2, 3)
    with pytest.raises(DimensionMismatch):
        hadamard(x, random_qmatrix(rng, 3, 2))


def test_blocks(rng):
    m = random_qmatrix(rng, 5)
    for k in range(1, 5):
        assert block_join(*block_split(m, k)) == m
    two = random_qmatrix(rng, 2)
    assert all(b.shape == (1, 1) for b in block_split(two, 1))
    a, b, c, d = block_split(QMatrix.identity(5), 2)
    assert a == QMatrix.identity(2) and d == QMatrix.identity(3)
    assert b == QMatrix.zeros(2, 3) and c == QMatrix.zeros(3, 2)
    assert direct_sum(a, d) == QMatrix.identity(5)
    for k in (0, 5):
        with pytest.raises(BadSplitIndex):
            block_split(m, k)
    with pytest.raises(NonSquare):
        block_split(random_qmatrix(rng, 2, 3), 1)


def test_random_unitary(rng):
    for n in (1, 3, 8):
        assert is_unitary(random_unitary(rng, n), 1e-12)


def test_shape_errors(rng):
    with pytest.raises(DimensionMismatch):
        random_qmatrix(rng, 2) + random_qmatrix(rng, 3)
    with pytest.raises(ValueError):
        QMatrix(np.zeros((2, 2, 3)))


def test_immutable(rng):
    m = random_qmatrix(rng, 2)
    with pytest.raises(ValueError):
        m.data[0, 0, 0] = 1.0


def test_scalar_sides():
    m = QMatrix.from_entries([[I_]])
    assert (m * J_)[0, 0] == K_
    assert (J_ * m)[0, 0] == -K_


# --- JSON -------------------------------------------------------------------

def test_json_round_trip(rng, tmp_path):
    m = random_qmatrix(rng, 3, 2)
    assert loads(dumps(m)) == m
    path = tmp_path / "m.json"
    save(m, path)
    assert load(path) == m


def test_json_scalar():
    m = loads('{"rows": 1, "cols": 1, "entries": [[[2, 0, 0, 0]]]}')
    assert m[0, 0] == Quaternion(2.0)


@pytest.mark.parametrize(
    "obj, where",
    [
        ([], "$"),
        ({"rows": 1, "cols": 1}, "$"),
        ({"rows": 1, "cols": 1, "entries": []}, "$.entries"),
        ({"rows": 0, "cols": 1, "entries": [[]]}, "$.rows"),
        ({"rows": 2, "cols": 1, "entries": [[[1, 0, 0, 0]]]}, "$.entries"),
        ({"rows": 1, "cols": 2, "entries": [[[1, 0, 0, 0]]]}, "$.entries[0]"),
        ({"rows": 1, "cols": 1, "entries": [[[1, 0, 0]]]}, "$.entries[0][0]"),
        ({"rows": 1, "cols": 1, "entries": [[[1, "x", 0, 0]]]}, "$.entries[0][0][1]"),
        ({"rows": 1, "cols": 1, "entries": [[[1, True, 0, 0]]]}, "$.entries[0][0][1]"),
    ],
)
def test_json_errors_located(obj, where):
    with pytest.raises(MatrixFormatError) as info:
        loads(json.dumps(obj))
    assert info.value.location == where


def test_json_syntax_error_line_col():
    with pytest.raises(MatrixFormatError) as info:
        loads('{"rows": 1,\n "cols": 1,\n "entries": [[[1, 0, 0, 0]]\n}')
    assert info.value.location == "4:1"
