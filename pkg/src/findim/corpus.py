"""The built-in regression algebras and their special modules.

Three bound quiver algebras exercised throughout the test suite:

* ex23 -- two vertices with loops on both and an arrow between them;
  every length-2 path vanishes.
* ex53 -- three vertices with a cycle through vertex 3; rad^3 = 0.
* ex54 -- three vertices with a loop at 2 and a doubled arrow 3 -> 1;
  all length-4 paths vanish except b*b*b*a, plus g*a = g*b*a.  The
  length-4 monomials are materialized below (the one exemption is noted
  inline) so the relation list is auditable.
"""

from __future__ import annotations

import numpy as np

from . import gfp
from .algebra import DEFAULT_PRIME
from .errors import UnknownCorpusName
from .modules import Module
from .parser import AlgebraSpec, build_from_spec, parse_algebra_file

EX23 = """\
# two loops joined by an arrow; the radical squares to zero
field 32003
vertices 1 2
arrow a 1 2
arrow b 1 1
arrow g 2 2
rel b*b
rel a*b
rel g*a
rel g*g
"""

EX53 = """\
# cycle through vertex 3; rad^3 = 0
field 32003
vertices 1 2 3
arrow a 1 2
arrow b 2 3
arrow g 1 3
arrow d 3 1
rel g*d*b
rel d*g
rel a*d
rel d*b*a
"""

EX54 = """\
# loop at 2, doubled arrow 3 -> 1; all 24 length-4 paths vanish except
# b*b*b*a (exempt), together with the binomial g*a = g*b*a
field 32003
vertices 1 2 3
arrow a 1 2
arrow b 2 2
arrow g 2 3
arrow l 3 1
arrow d 3 1
# b*b*b*a exempt
rel g*b*b*a
rel d*g*b*a
rel l*g*b*a
rel a*d*g*a
rel a*l*g*a
rel b*b*b*b
rel g*b*b*b
rel d*g*b*b
rel l*g*b*b
rel a*d*g*b
rel a*l*g*b
rel b*b*a*d
rel g*b*a*d
rel d*g*a*d
rel l*g*a*d
rel b*a*d*g
rel g*a*d*g
rel b*a*l*g
rel g*a*l*g
rel b*b*a*l
rel g*b*a*l
rel d*g*a*l
rel l*g*a*l
rel g*a - g*b*a
"""

_CORPUS = {"ex23": EX23, "ex53": EX53, "ex54": EX54}


def corpus_names() -> list[str]:
    return sorted(_CORPUS)


def corpus_algebra(name: str, prime: int | None = None) -> AlgebraSpec:
    text = _CORPUS.get(name)
    if text is None:
        raise UnknownCorpusName(
            f"unknown corpus algebra {name!r}; choose from {corpus_names()}")
    spec = parse_algebra_file(text)
    if prime is not None and prime != spec.prime:
        spec = spec.with_prime(prime)
    return spec


def build_corpus_algebra(name: str, prime: int | None = None):
    return build_from_spec(corpus_algebra(name, prime))


def corpus_mt(algebra, t: int) -> Module:
    """The one-parameter family of indecomposables over ex54.

    dims (4, 8, 0); the loop acts as a double shift and the arrow from
    vertex 1 hits both shift chains, with the parameter in the corner.
    """
    if algebra.quiver.vertex_count != 3 or len(algebra.quiver.arrows) != 5:
        raise UnknownCorpusName("mt(t) is only defined over ex54")
    p = algebra.p
    ma = np.zeros((8, 4), dtype=np.int64)
    ma[0, 0] = 1
    ma[3, 1] = 1
    ma[4, 2] = 1
    ma[5, 2] = 1
    ma[6, 3] = 1
    ma[7, 3] = t % p
    mb = np.zeros((8, 8), dtype=np.int64)
    for i in range(6):
        mb[i + 2, i] = 1
    mats = {
        "a": ma,
        "b": mb,
        "g": gfp.zeros(0, 8),
        "l": gfp.zeros(4, 0),
        "d": gfp.zeros(4, 0),
    }
    return Module(algebra, (4, 8, 0), mats, label=f"M_{t}")
