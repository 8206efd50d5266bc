import numpy as np
import pytest

from diamondlab.construct import loop_nottingham
from diamondlab.errors import DomainError, PresentationSyntaxError
from diamondlab.liecore import dumps, eval_word, jacobi_audit, loads
from diamondlab.linalg import rank
from diamondlab.nilquot import Presentation, Relator, evaluate_relator, graded_quotient, parse_presentation, parse_word
from helpers import LOOP_RELATORS, MATRIX, necklace_dims

@pytest.fixture(scope="module")
def outputs():
    return {name: (parse_presentation(text), graded_quotient(parse_presentation(text), N)) for name, text, N in MATRIX}


def test_witt_oracle_self_check():
    assert necklace_dims(2, 8) == (2, 1, 2, 3, 6, 9, 18, 30)
    assert necklace_dims(3, 4) == (3, 3, 8, 18)


@pytest.mark.parametrize("r,N,p", [(2, 12, 7), (3, 7, 5), (2, 9, 5)])
def test_free_dims_match_witt(r, N, p):
    gens = ", ".join("xyzw"[:r])
    alg = graded_quotient(parse_presentation(f"p = {p}\ngenerators = {gens}\n"), N)
    assert alg.dims == necklace_dims(r, N)


@pytest.mark.parametrize("name", [m[0] for m in MATRIX])
def test_contract_jacobi_and_relators(outputs, name):
    pres, alg = outputs[name]
    assert jacobi_audit(alg) == []
    for r in pres.relators:
        if r.degree <= alg.max_degree:
            assert evaluate_relator(alg, r).is_zero


@pytest.mark.parametrize("name", [m[0] for m in MATRIX])
def test_contract_generated_in_degree_one(outputs, name):
    _, alg = outputs[name]
    gens = alg.basis_elements(1)
    for m in range(1, alg.max_degree):
        if alg.dim(m + 1) == 0:
            continue
        M = np.concatenate([alg.right_action(m, g) for g in gens], axis=0)
        assert rank(M, alg.p) == alg.dim(m + 1), m


@pytest.mark.parametrize("name", [m[0] for m in MATRIX])
def test_contract_monotone_under_extra_relator(outputs, name):
    pres, alg = outputs[name]
    extra = parse_presentation(f"p = {pres.p}\ngenerators = {' '.join(pres.generators)}\nrelator = [{pres.generators[1]},{pres.generators[0]},{pres.generators[0]},{pres.generators[1]}]\n").relators
    smaller = graded_quotient(Presentation(pres.p, pres.generators, pres.relators + extra), alg.max_degree)
    assert all(a <= b for a, b in zip(smaller.dims, alg.dims))
    free = necklace_dims(len(pres.generators), alg.max_degree)
    assert all(a <= b for a, b in zip(alg.dims, free))


def test_known_dims(outputs):
    assert outputs["abelian"][1].dims == (2, 0, 0, 0, 0)
    assert outputs["two_relators"][1].dims == (2, 1, 1, 0, 0, 0, 0, 0)
    assert outputs["free2"][1].dims[:8] == (2, 1, 2, 3, 6, 9, 18, 30)


def test_loop_algebra_is_a_quotient(outputs):
    # the loop algebra satisfies every loop relator, so the maximal quotient is at least as big
    _, alg = outputs["loop7"]
    L = loop_nottingham(7, 1, 40)
    pres = parse_presentation("p = 7\ngenerators = x, y\n" + LOOP_RELATORS)
    for r in pres.relators:
        assert evaluate_relator(L, r).is_zero
        assert evaluate_relator(loads(dumps(L)), r).is_zero
    assert all(alg.dim(m) >= L.dim(m) for m in range(1, alg.max_degree + 1))


def test_evaluate_relator_examples(outputs):
    _, free = outputs["free2"]
    r = parse_presentation("p = 7\ngenerators = x, y\nrelator = [y,x,y]\n").relators[0]
    assert not evaluate_relator(free, r).is_zero
    seven = Relator(((7, parse_word("[y,x,y]")),))
    assert evaluate_relator(free, seven).is_zero


def test_determinism():
    text = MATRIX[3][1]
    a = dumps(graded_quotient(parse_presentation(text), 12))
    b = dumps(graded_quotient(parse_presentation(text), 12))
    assert a == b


def test_parse_examples():
    pres = parse_presentation("p=7\ngenerators = x y\nrelator = [y,x,y]")
    assert pres.p == 7 and pres.generators == ("x", "y") and len(pres.relators) == 1
    assert pres.relators[0].degree == 3
    r = parse_presentation("p = 7\ngenerators = x, y\nrelator = [y,x^2,y] + 2*[y,x,y,x]").relators[0]
    assert len(r.terms) == 2 and r.degree == 4
    assert r.terms[0][1].expanded() == ["x", "x", "y"]
    w = parse_word("[y^2,x]")
    assert w.expanded() == ["y", "x"]


@pytest.mark.parametrize("text,line,column", [
    ("p = 7\ngenerators = x, y\nrelator = [y,x] + [y,x,x]", 3, None),
    ("p = 7\ngenerators = x, y\nrelator = [y,z,x]", 3, 14),
    ("p = 7\ngenerators = x, y\nrelator = [y,x,,y]", 3, 16),
    ("p = 7\ngenerators = x, y\nfoo = 3", 3, 1),
    ("p = 7\ngenerators = x, x", 2, 17),
    ("p = 7\ngenerators = x, 9y", 2, 17),
    ("p = 7\ngenerators = x, y\nrelator = [x]", 3, None),
    ("p = 7\ngenerators = x, y\nrelator = ", 3, 10),
    ("generators = x", None, None),
    ("p = 8\ngenerators = x", None, None),
])
def test_parse_errors(text, line, column):
    with pytest.raises(PresentationSyntaxError) as info:
        parse_presentation(text)
    assert info.value.line == line
    if column is not None:
        assert info.value.column == column


def test_engine_domain_errors():
    pres = parse_presentation("p = 7\ngenerators = x, y\n")
    with pytest.raises(DomainError):
        graded_quotient(pres, 1)
    with pytest.raises(DomainError):
        graded_quotient(Presentation(7, (), []), 4)


def test_relator_of_high_degree_cut_off():
    alg = graded_quotient(parse_presentation("p = 7\ngenerators = x, y\nrelator = [y,x^6]\n"), 5)
    assert alg.dims == necklace_dims(2, 5)
    assert eval_word(alg, ("y", ("x", 4))).degree == 5
