import pytest

from findim.algebra import Arrow, Quiver, Relation, build_algebra


def rel(*term_specs):
    """Relation from (coeff, function-order arrow names) pairs.

    `rel("b,b")` is the single squared-loop term; function order means the
    rightmost listed arrow acts first, so names are reversed into
    application order here.
    """
    terms = []
    for spec in term_specs:
        if isinstance(spec, str):
            coeff, names = 1, spec
        else:
            coeff, names = spec
        terms.append((coeff, tuple(reversed(names.split(",")))))
    return Relation(tuple(terms))


def two_vertex_loops():
    """Two vertices, a:1->2 with loops b at 1 and g at 2; rad^2 = 0."""
    q = Quiver(2, (Arrow("a", 1, 2), Arrow("b", 1, 1), Arrow("g", 2, 2)))
    rels = [rel("b,b"), rel("a,b"), rel("g,a"), rel("g,g")]
    return q, rels


def three_vertex_cycle():
    """Three vertices with a cycle through vertex 3; rad^3 = 0."""
    q = Quiver(3, (Arrow("a", 1, 2), Arrow("b", 2, 3),
                   Arrow("g", 1, 3), Arrow("d", 3, 1)))
    rels = [rel("g,d,b"), rel("d,g"), rel("a,d"), rel("d,b,a")]
    return q, rels


@pytest.fixture(scope="session")
def alg23():
    q, rels = two_vertex_loops()
    return build_algebra(q, rels)


@pytest.fixture(scope="session")
def alg53():
    q, rels = three_vertex_cycle()
    return build_algebra(q, rels)
