import pytest

from pircons.poset import build_poset


@pytest.fixture
def chain3():
    return build_poset(["a", "b", "c"], [("a", "b"), ("b", "c")], name="chain3")


@pytest.fixture
def diamond():
    return build_poset(
        ["bot", "x", "y", "top"],
        [("bot", "x"), ("bot", "y"), ("x", "top"), ("y", "top")],
        name="diamond",
    )


@pytest.fixture
def nongraded():
    # one maximal chain of length 3 and one of length 2
    return build_poset(
        ["bot", "a", "b", "c", "top"],
        [("bot", "a"), ("a", "b"), ("b", "top"), ("bot", "c"), ("c", "top")],
        name="nongraded",
    )


@pytest.fixture
def cube():
    # boolean lattice on three atoms, elements named by their subsets
    names = ["", "1", "2", "3", "12", "13", "23", "123"]
    rel = [
        (a, b)
        for a in names
        for b in names
        if a != b and set(a) <= set(b)
    ]
    return build_poset(names, rel, name="cube")
