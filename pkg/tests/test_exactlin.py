from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from kinj import exactlin as el
from kinj.exactlin import Matrix
from oracles import rank_mod

small = st.integers(-4, 4)


@st.composite
def matrices(draw, max_rows=5, max_cols=5):
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(0, max_cols))
    rows = draw(st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r))
    return Matrix.from_rows(rows, c)


def test_rref_example():
    red, piv, _ = el.rref(Matrix.from_rows([[1, 2], [2, 4]]))
    assert red.tolist() == [[1, 2], [0, 0]]
    assert piv == [0]


def test_kernel_and_solve_examples():
    assert el.kernel_basis(Matrix.from_rows([[1, 1, 1]])).cols == 2
    x = el.solve(Matrix.from_rows([[1, 1], [0, 1]]), Matrix.from_rows([[2], [1]]))
    assert x.tolist() == [[1], [1]]
    assert el.solve(Matrix.from_rows([[1], [1]]), Matrix.from_rows([[1], [2]])) is None


def test_fraction_arithmetic_exact():
    m = Matrix.from_rows([[1, 3], [2, 7]])
    inv = el.inverse(m)
    assert inv.tolist() == [[7, -3], [-2, 1]]
    assert (m @ inv) == Matrix.identity(2)
    h = Matrix.from_rows([[Fraction(1, 3)]])
    assert el.inverse(h)[0, 0] == 3


def test_singular_inverse_raises():
    with pytest.raises(ZeroDivisionError):
        el.inverse(Matrix.from_rows([[1, 2], [2, 4]]))


def test_shape_errors():
    with pytest.raises(ValueError):
        Matrix.from_rows([[1, 2]]) @ Matrix.from_rows([[1, 2]])
    with pytest.raises(ValueError):
        el.solve(Matrix.from_rows([[1]]), Matrix.from_rows([[1], [2]]))


def test_prime_field_arithmetic():
    with el.use_field("fp:5"):
        m = Matrix.from_rows([[2, 0], [0, 3]])
        assert el.inverse(m).tolist() == [[3, 0], [0, 2]]
        assert el.rank(Matrix.from_rows([[1, 2], [2, 4]])) == 1
        assert Matrix.from_rows([[7]])[0, 0] == 2


def test_field_parsing():
    assert el.parse_field("rational") == el.QQ
    assert el.parse_field("fp:7") == el.PrimeField(7)
    for bad in ("fp:4", "fp:x", "reals"):
        with pytest.raises(ValueError):
            el.parse_field(bad)


def test_mixed_fields_rejected():
    a = Matrix.from_rows([[1]])
    with el.use_field("fp:3"):
        b = Matrix.from_rows([[1]])
    with pytest.raises(ValueError):
        a + b


def test_json_roundtrip():
    m = Matrix.from_rows([[Fraction(1, 2), -3], [0, 4]])
    assert Matrix.from_json(m.to_json()) == m
    assert m.to_json() == [["1/2", -3], [0, 4]]


@given(matrices())
def test_rank_matches_sympy(m):
    assert el.rank(m) == sympy.Matrix(m.rows, m.cols, [m[i, j] for i in range(m.rows) for j in range(m.cols)]).rank()


@given(matrices())
def test_rank_mod_p_matches_oracle(m):
    with el.use_field("fp:7"):
        mp = Matrix.from_rows(m.tolist(), m.cols)
        assert el.rank(mp) == rank_mod([[int(v) for v in r] for r in mp.tolist()], m.cols, 7)


@given(matrices())
def test_rank_nullity_and_transform(m):
    k = el.kernel_basis(m)
    assert el.rank(m) + k.cols == m.cols
    assert (m @ k).is_zero()
    red, piv, t = el.rref(m)
    assert t @ m == red
    assert len(piv) == el.rank(m)


@given(matrices(), st.lists(small, min_size=5, max_size=5))
def test_solve_consistent_systems(m, coeffs):
    x = Matrix.from_rows([[c] for c in coeffs[: m.cols]], 1)
    b = m @ x
    sol = el.solve(m, b)
    assert sol is not None and m @ sol == b


@given(matrices())
def test_complement_columns_complete_a_basis(m):
    basis = el.column_space(m)
    comp = el.complement_columns(basis)
    both = basis.hstack(comp)
    assert both.cols == m.rows and el.rank(both) == m.rows
    if basis.cols:
        coords = el.coordinates(basis, basis)
        assert coords == Matrix.identity(basis.cols)
