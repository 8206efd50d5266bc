import io
import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from diamondlab.construct import loop_nottingham
from diamondlab.errors import DomainError, ModulusError, SchemaError, TruncationError, UnknownGeneratorError
from diamondlab.liecore import (GradedLieAlgebra, HomogeneousElement, LeftNormedWord, bracket, bracket_seq,
                                dumps, eval_word, from_dict, gen_jacobi_coefficients, gen_jacobi_expand,
                                jacobi_audit, load, loads, save, to_dict)
from diamondlab.nilquot import graded_quotient, parse_presentation


@pytest.fixture(scope="module")
def loop7():
    return loop_nottingham(7, 1, 60)


@pytest.fixture(scope="module")
def free7():
    return graded_quotient(parse_presentation("p = 7\ngenerators = x, y\n"), 7)


def heisenberg(p=5):
    """L_1 = <x, y>, L_2 = <z>, [x, y] = z: the smallest non-abelian example."""
    T = np.zeros((2, 2, 1), dtype=np.int64)
    T[0, 1, 0], T[1, 0, 0] = 1, p - 1
    return GradedLieAlgebra(p, [2, 1], {(1, 1): T}, generators={"x": (1, 0), "y": (0, 1)})


def elements(alg, m):
    return st.lists(st.integers(0, alg.p - 1), min_size=alg.dim(m), max_size=alg.dim(m)).map(
        lambda c: alg.element(m, c))


def test_heisenberg_brackets():
    H = heisenberg()
    x, y = H.generator("x"), H.generator("y")
    assert bracket(H, x, y).coords == (1,)
    assert bracket(H, y, x).coords == (4,)
    assert bracket(H, x, x).is_zero
    with pytest.raises(TruncationError):
        bracket(H, bracket(H, x, y), x)
    assert jacobi_audit(H) == []


def test_element_arithmetic():
    u = HomogeneousElement(3, (5, 9), 7)
    assert u.coords == (5, 2)
    assert (u + u).coords == (3, 4)
    assert (-u).coords == (2, 5)
    assert (3 * u).coords == (1, 6)
    assert (u - u).is_zero
    with pytest.raises(DomainError):
        u + HomogeneousElement(4, (1, 1), 7)


@given(st.data())
def test_antisymmetry_loop(data):
    alg = loop_nottingham(7, 1, 30)
    i = data.draw(st.integers(1, 14))
    j = data.draw(st.integers(1, 30 - i))
    u = data.draw(elements(alg, i))
    v = data.draw(elements(alg, j))
    assert bracket(alg, u, v) == -bracket(alg, v, u)
    assert bracket(alg, u, u).is_zero if i == j else True


@given(st.data())
def test_jacobi_on_random_elements_free(data):
    alg = graded_quotient(parse_presentation("p = 7\ngenerators = x, y\n"), 7)
    i = data.draw(st.integers(1, 3))
    j = data.draw(st.integers(1, 2))
    k = data.draw(st.integers(1, 7 - i - j))
    a, b, c = data.draw(elements(alg, i)), data.draw(elements(alg, j)), data.draw(elements(alg, k))
    total = bracket(alg, a, bracket(alg, b, c)) + bracket(alg, b, bracket(alg, c, a)) + bracket(alg, c, bracket(alg, a, b))
    assert total.is_zero


def test_words(loop7):
    w = LeftNormedWord("y", (("x", 2), "y"))
    assert w.letters == (("x", 2), ("y", 1))
    assert w.expanded() == ["x", "x", "y"]
    assert str(w) == "[y,x^2,y]"
    with pytest.raises(DomainError):
        LeftNormedWord("y", (("x", 0),))
    assert eval_word(loop7, w) == eval_word(loop7, ("y", "x", "x", "y"))
    y, x = loop7.generator("y"), loop7.generator("x")
    assert eval_word(loop7, ("y", ("x", 5))) == bracket_seq(loop7, y, x, x, x, x, x)
    with pytest.raises(UnknownGeneratorError):
        eval_word(loop7, ("z", "x"))
    with pytest.raises(TruncationError):
        eval_word(loop7, ("y", ("x", 60)))


def test_table_transposition(loop7):
    T = loop7.table(3, 1)
    U = loop7.table(1, 3)
    assert np.array_equal(T, (-np.transpose(U, (1, 0, 2))) % 7)
    with pytest.raises(TruncationError):
        loop7.table(40, 30)


@pytest.mark.parametrize("n", [7, 6])
def test_generalized_jacobi(loop7, free7, n):
    assert gen_jacobi_coefficients(7, 7) == [1, 0, 0, 0, 0, 0, 0, 6]
    for alg in (loop7, free7) if n == 6 else (loop7,):
        for a, b, c in [("y", "x", "x"), ("x", "y", "x"), ("y", "x", "y")]:
            if 1 + 1 + n <= alg.max_degree:
                assert gen_jacobi_expand(alg, a, b, c, n).equal
    # with a = [y x] in the loop algebra
    a = eval_word(loop7, ("y", "x"))
    res = gen_jacobi_expand(loop7, a, "y", "x", n)
    assert res.equal


def test_generalized_jacobi_q_power_collapses(loop7):
    # [a [b x^7]] = [a b x^7] - [a x^7 b] since the middle binomials vanish mod 7
    res = gen_jacobi_expand(loop7, eval_word(loop7, ("y", ("x", 3))), "y", "x", 7)
    assert res.equal and res.coefficients[1:7] == [0] * 6


def test_audit_catches_corruption(loop7):
    assert jacobi_audit(loop7) == []
    # [e^1_1, e^6_0] sits in many Jacobi triples
    bad = loop7.with_entry(6, 1, 0, 1, [3, 3])
    found = jacobi_audit(bad)
    assert found
    assert found == sorted(found)
    assert all(len(t) == 3 for t in found)


def test_roundtrip(loop7, tmp_path):
    path = tmp_path / "alg.json"
    save(loop7, path)
    back = load(path)
    assert back == loop7
    assert dumps(back) == path.read_text()
    buf = io.StringIO()
    save(loop7, buf)
    assert loads(buf.getvalue()) == loop7


def test_roundtrip_heisenberg():
    H = heisenberg()
    d = to_dict(H)
    assert d["brackets"] == [{"i": 1, "j": 1, "a": 0, "b": 1, "out": [[0, 1]]}]
    assert from_dict(json.loads(json.dumps(d))) == H


def _base():
    return to_dict(heisenberg())


@pytest.mark.parametrize("mutate,err", [
    (lambda d: d.update(p=4), ModulusError),
    (lambda d: d.update(dims=[2]), SchemaError),
    (lambda d: d.update(dims=[2, -1]), SchemaError),
    (lambda d: d["brackets"][0].update(out=[[0, 5]]), SchemaError),
    (lambda d: d["brackets"][0].update(out=[[1, 1]]), SchemaError),
    (lambda d: d["brackets"][0].update(b=0), SchemaError),
    (lambda d: d["brackets"][0].update(j=2), SchemaError),
    (lambda d: d["brackets"].append(dict(d["brackets"][0])), SchemaError),
    (lambda d: d.pop("brackets"), SchemaError),
    (lambda d: d.update(generators={"x": [1]}), SchemaError),
])
def test_schema_errors(mutate, err):
    d = _base()
    mutate(d)
    with pytest.raises(err):
        from_dict(d)


def test_invalid_json():
    with pytest.raises(SchemaError):
        loads("{not json")


def test_load_with_audit_rejects_corrupted(loop7):
    text = dumps(loop7.with_entry(6, 1, 0, 1, [3, 3]))
    loads(text)
    with pytest.raises(SchemaError):
        loads(text, audit=True)


def test_constructor_validation():
    T = np.zeros((2, 2, 1), dtype=np.int64)
    T[0, 1, 0] = 1  # not alternating
    with pytest.raises(SchemaError):
        GradedLieAlgebra(5, [2, 1], {(1, 1): T})
    with pytest.raises(SchemaError):
        GradedLieAlgebra(5, [2, 1], {(1, 1): np.zeros((2, 2, 2))})
    with pytest.raises(ModulusError):
        GradedLieAlgebra(9, [2, 1], {})
