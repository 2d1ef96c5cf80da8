"""Bound quiver algebras over a prime field.

A path is stored as a tuple of arrow indices in *application order*: the
path written ``g*d*b`` (rightmost arrow applied first) is the tuple
``(b, d, g)``.  The algebra basis consists of residue paths: the ideal
generated by the relations is closed under multiplication by arrows
inside a length-truncated path space, echelonized with pivots on the
longest paths, and the surviving (non-pivot) paths form the basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import gfp
from .errors import BadRelation, NotFiniteDimensional, NotPrime
from .modules import Module, direct_sum

DEFAULT_PRIME = 32003
DEFAULT_LENGTH_CAP = 32


@dataclass(frozen=True)
class Arrow:
    name: str
    source: int
    target: int


@dataclass(frozen=True)
class Quiver:
    vertex_count: int
    arrows: tuple[Arrow, ...]

    def __post_init__(self):
        if self.vertex_count < 1:
            raise ValueError("quiver needs at least one vertex")
        names = set()
        for a in self.arrows:
            if not (1 <= a.source <= self.vertex_count
                    and 1 <= a.target <= self.vertex_count):
                raise ValueError(f"arrow {a.name}: endpoint out of range")
            if a.name in names:
                raise ValueError(f"duplicate arrow name {a.name!r}")
            names.add(a.name)

    @property
    def vertices(self) -> range:
        return range(1, self.vertex_count + 1)


@dataclass(frozen=True)
class Relation:
    """Linear combination of parallel paths of length >= 2.

    Each term is (coefficient, arrow-name tuple in application order).
    """

    terms: tuple[tuple[int, tuple[str, ...]], ...]

    def __post_init__(self):
        if not self.terms:
            raise BadRelation("empty relation")


def _path_endpoints(quiver: Quiver, names: tuple[str, ...],
                    by_name: dict[str, int]) -> tuple[int, int]:
    """(source, target) of an application-order arrow-name path."""
    for k, name in enumerate(names):
        if name not in by_name:
            raise BadRelation(f"unknown arrow {name!r}")
        if k > 0:
            prev = quiver.arrows[by_name[names[k - 1]]]
            if prev.target != quiver.arrows[by_name[name]].source:
                raise BadRelation(
                    f"path {'*'.join(reversed(names))} is not composable")
    return (quiver.arrows[by_name[names[0]]].source,
            quiver.arrows[by_name[names[-1]]].target)


class _TrailingEchelon:
    """Row echelon with pivots on the *largest* coordinate.

    Coordinates are global path indices ordered by (length, lex), so the
    pivot preference selects the longest paths; the surviving non-pivot
    coordinates are the shortest possible residue paths.
    """

    def __init__(self, ncols: int, p: int):
        self.ncols = ncols
        self.p = p
        self.rows: list[np.ndarray] = []
        self.pivot_row: dict[int, int] = {}

    def reduce(self, v: np.ndarray) -> np.ndarray:
        v = v % self.p
        while True:
            nz = np.nonzero(v)[0]
            hits = [int(c) for c in nz if int(c) in self.pivot_row]
            if not hits:
                return v
            c = hits[-1]
            v = (v - v[c] * self.rows[self.pivot_row[c]]) % self.p

    def add(self, v: np.ndarray) -> bool:
        """Insert a vector; True if it enlarges the row space."""
        v = self.reduce(v)
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return False
        lead = int(nz[-1])
        v = (v * gfp.inv_scalar(int(v[lead]), self.p)) % self.p
        for i, row in enumerate(self.rows):
            if row[lead]:
                self.rows[i] = (row - row[lead] * v) % self.p
        self.pivot_row[lead] = len(self.rows)
        self.rows.append(v)
        return True

    def contains(self, v: np.ndarray) -> bool:
        return not np.any(self.reduce(v))


class PathAlgebra:
    """Finite dimensional quotient of a path algebra by an admissible ideal."""

    def __init__(self, quiver: Quiver, relations: list[Relation], p: int,
                 basis_paths: list[tuple[int, ...]],
                 mult: np.ndarray, nilpotency: int):
        self.quiver = quiver
        self.relations = tuple(relations)
        self.p = p
        self.basis_paths = basis_paths
        self.mult = mult
        self.nilpotency = nilpotency

        self.arrow_by_name = {a.name: i for i, a in enumerate(quiver.arrows)}
        # trivial paths come first, one per vertex, in vertex order
        self._trivial = {k + 1: k for k, t in enumerate(basis_paths) if not t}
        assert list(self._trivial) == list(quiver.vertices)
        self.basis_index = {t: k for k, t in enumerate(basis_paths) if t}

    def _trivial_vertex(self, k: int) -> int:
        # trivial paths are enumerated in vertex order before everything else
        return k + 1

    @property
    def dim(self) -> int:
        return len(self.basis_paths)

    @property
    def n(self) -> int:
        return self.quiver.vertex_count

    def source_of(self, k: int) -> int:
        t = self.basis_paths[k]
        if not t:
            return self._trivial_vertex(k)
        return self.quiver.arrows[t[0]].source

    def target_of(self, k: int) -> int:
        t = self.basis_paths[k]
        if not t:
            return self._trivial_vertex(k)
        return self.quiver.arrows[t[-1]].target

    def length_of(self, k: int) -> int:
        return len(self.basis_paths[k])

    def display_path(self, k: int) -> str:
        t = self.basis_paths[k]
        if not t:
            return f"e{self._trivial_vertex(k)}"
        return "*".join(self.quiver.arrows[i].name for i in reversed(t))

    def arrow_basis_index(self, name: str) -> int:
        return self.basis_index[(self.arrow_by_name[name],)]

    def __repr__(self):
        return (f"PathAlgebra(n={self.n}, arrows={len(self.quiver.arrows)}, "
                f"dim={self.dim}, p={self.p}, rad^{self.nilpotency}=0)")


def _enumerate_paths(quiver: Quiver, cap: int,
                     max_paths: int) -> list[list[tuple[int, ...]]]:
    """Paths of length 0..cap-1, grouped by length, lex-sorted per length."""
    arrows = quiver.arrows
    by_source: dict[int, list[int]] = {v: [] for v in quiver.vertices}
    for i, a in enumerate(arrows):
        by_source[a.source].append(i)
    levels: list[list[tuple[int, ...]]] = [[() for _ in quiver.vertices]]
    # represent trivial paths as empty tuples; their order matches vertices
    total = quiver.vertex_count
    for length in range(1, cap):
        prev = levels[-1]
        cur: list[tuple[int, ...]] = []
        for k, t in enumerate(prev):
            tail_vertex = (k + 1) if length == 1 else arrows[t[-1]].target
            for i in by_source.get(tail_vertex, []):
                cur.append(t + (i,))
        cur.sort()
        total += len(cur)
        if total > max_paths:
            raise NotFiniteDimensional(
                f"path count exceeded {max_paths} at length {length}; "
                "the relation ideal does not look admissible")
        levels.append(cur)
        if not cur:
            break
    return levels


def build_algebra(quiver: Quiver, relations: list[Relation], p: int = DEFAULT_PRIME,
                  length_cap: int = DEFAULT_LENGTH_CAP,
                  max_paths: int = 200_000) -> PathAlgebra:
    """Construct the quotient algebra, its residue-path basis and products.

    Raises NotFiniteDimensional if no length L <= length_cap has all
    length-L paths inside the relation ideal.
    """
    if not gfp.is_prime(p):
        raise NotPrime(f"{p} is not prime")
    by_name = {a.name: i for i, a in enumerate(quiver.arrows)}

    checked: list[Relation] = []
    max_rel_len = 2
    for rel in relations:
        ends = None
        for coeff, names in rel.terms:
            if len(names) < 2:
                raise BadRelation(
                    f"relation term {'*'.join(reversed(names))} has length "
                    f"{len(names)} < 2 (not admissible)")
            if coeff % p == 0:
                raise BadRelation("relation coefficient is 0 mod p")
            e = _path_endpoints(quiver, names, by_name)
            if ends is None:
                ends = e
            elif ends != e:
                raise BadRelation("relation terms are not parallel")
            max_rel_len = max(max_rel_len, len(names))
        checked.append(rel)

    start = max(4, max_rel_len + 1)
    caps = sorted({min(c, length_cap + 1)
                   for c in (start, start + 2, start + 4, start + 8,
                             start + 16, length_cap + 1)})
    last_error = None
    for cap in caps:
        result = _try_build(quiver, checked, p, cap, by_name, max_paths)
        if result is not None:
            return result
        last_error = cap
    raise NotFiniteDimensional(
        f"no nilpotency degree <= {length_cap} found (tried cap {last_error}); "
        "the ideal is not admissible or the cap is too low")


def _try_build(quiver: Quiver, relations: list[Relation], p: int, cap: int,
               by_name: dict[str, int], max_paths: int) -> PathAlgebra | None:
    levels = _enumerate_paths(quiver, cap, max_paths)
    paths: list[tuple[int, ...]] = [t for level in levels for t in level]
    index = {}
    # trivial paths of different vertices share the empty tuple; key by slot
    offset = quiver.vertex_count
    for k, t in enumerate(paths[offset:], start=offset):
        index[t] = k
    npaths = len(paths)
    arrows = quiver.arrows

    # coordinate maps for left/right composition with each arrow
    left = np.full((len(arrows), npaths), -1, dtype=np.int64)
    right = np.full((len(arrows), npaths), -1, dtype=np.int64)
    for k, t in enumerate(paths):
        if not t:
            v = k + 1
            for i, a in enumerate(arrows):
                if a.source == v:
                    left[i, k] = index.get((i,), -1)
                if a.target == v:
                    right[i, k] = index.get((i,), -1)
            continue
        tgt = arrows[t[-1]].target
        src = arrows[t[0]].source
        for i, a in enumerate(arrows):
            if a.source == tgt:
                left[i, k] = index.get(t + (i,), -1)
            if a.target == src:
                right[i, k] = index.get((i,) + t, -1)

    ech = _TrailingEchelon(npaths, p)
    queue: list[np.ndarray] = []
    for rel in relations:
        v = np.zeros(npaths, dtype=np.int64)
        for coeff, names in rel.terms:
            t = tuple(by_name[nm] for nm in names)
            if len(t) < cap:
                v[index[t]] = (v[index[t]] + coeff) % p
        if ech.add(v):
            queue.append(ech.rows[-1].copy())

    while queue:
        v = queue.pop()
        nz = np.nonzero(v)[0]
        for maps in (left, right):
            for i in range(len(arrows)):
                m = maps[i, nz]
                ok = m >= 0
                if not np.any(ok):
                    continue
                w = np.zeros(npaths, dtype=np.int64)
                w[m[ok]] = v[nz[ok]]
                if ech.add(w):
                    queue.append(ech.rows[-1].copy())

    # least length with every path of that length inside the ideal
    length_starts = []
    pos = 0
    for level in levels:
        length_starts.append(pos)
        pos += len(level)
    nilpotency = None
    for m in range(1, len(levels)):
        lo = length_starts[m]
        hi = length_starts[m + 1] if m + 1 < len(length_starts) else npaths
        good = True
        for k in range(lo, hi):
            e = np.zeros(npaths, dtype=np.int64)
            e[k] = 1
            if not ech.contains(e):
                good = False
                break
        if good:
            nilpotency = m
            break
    if nilpotency is None or nilpotency >= cap:
        return None

    pivots = set(ech.pivot_row)
    basis_global = [k for k in range(npaths)
                    if k not in pivots and len(paths[k]) < nilpotency]
    assert all(len(paths[k]) < nilpotency
               for k in range(npaths) if k not in pivots), \
        "non-pivot path at or beyond the nilpotency length"
    basis_paths = [paths[k] for k in basis_global]
    pos_of_global = {g: i for i, g in enumerate(basis_global)}

    dim = len(basis_paths)
    mult = np.zeros((dim, dim, dim), dtype=np.int64)
    for i, u in enumerate(basis_paths):
        src_u = arrows[u[0]].source if u else basis_global[i] + 1
        for j, v in enumerate(basis_paths):
            tgt_v = arrows[v[-1]].target if v else basis_global[j] + 1
            if src_u != tgt_v:
                continue
            w = v + u
            if len(w) >= nilpotency:
                continue
            if not w:
                mult[i, j, i] = 1  # e_v * e_v
                continue
            g = index[w]
            e = np.zeros(npaths, dtype=np.int64)
            e[g] = 1
            r = ech.reduce(e)
            for c in np.nonzero(r)[0]:
                mult[i, j, pos_of_global[int(c)]] = r[c]

    alg = PathAlgebra(quiver, relations, p, basis_paths, mult, nilpotency)

    # sanity: every relation lands in the ideal, so it reduces to zero
    for rel in relations:
        v = np.zeros(npaths, dtype=np.int64)
        for coeff, names in rel.terms:
            t = tuple(by_name[nm] for nm in names)
            if len(t) < cap:
                v[index[t]] = (v[index[t]] + coeff) % p
        assert ech.contains(v)
    return alg


# --- canonical modules ---

def projective(algebra: PathAlgebra, i: int) -> Module:
    """Indecomposable projective P(i): residue paths with source i."""
    if not 1 <= i <= algebra.n:
        raise ValueError(f"vertex {i} out of range")
    loc = [k for k in range(algebra.dim) if algebra.source_of(k) == i]
    per_vertex: dict[int, list[int]] = {v: [] for v in algebra.quiver.vertices}
    for k in loc:
        per_vertex[algebra.target_of(k)].append(k)
    coord: dict[int, tuple[int, int]] = {}
    dims = []
    for v in algebra.quiver.vertices:
        for c, k in enumerate(per_vertex[v]):
            coord[k] = (v, c)
        dims.append(len(per_vertex[v]))
    mats = {}
    for a in algebra.quiver.arrows:
        src_dim = dims[a.source - 1]
        tgt_dim = dims[a.target - 1]
        m = gfp.zeros(tgt_dim, src_dim)
        ai = algebra.arrow_basis_index(a.name)
        for k in per_vertex[a.source]:
            col = coord[k][1]
            # coefficient vector of (arrow a) composed after path k
            prod = algebra.mult[ai, k]
            for b in np.nonzero(prod)[0]:
                b = int(b)
                assert algebra.source_of(b) == i and algebra.target_of(b) == a.target
                m[coord[b][1], col] = prod[b]
        mats[a.name] = m
    return Module(algebra, tuple(dims), mats, label=f"P({i})")


def simple(algebra: PathAlgebra, i: int) -> Module:
    if not 1 <= i <= algebra.n:
        raise ValueError(f"vertex {i} out of range")
    dims = tuple(1 if v == i else 0 for v in algebra.quiver.vertices)
    mats = {a.name: gfp.zeros(dims[a.target - 1], dims[a.source - 1])
            for a in algebra.quiver.arrows}
    return Module(algebra, dims, mats, label=f"S({i})")


def regular(algebra: PathAlgebra) -> Module:
    m = direct_sum([projective(algebra, i) for i in algebra.quiver.vertices])
    return m.with_label("R")


def radical_power_quotient(algebra: PathAlgebra, k: int) -> Module:
    """Direct sum over i of P(i)/rad^k P(i)."""
    from .modules import radical_submodule, quotient

    if k < 1:
        raise ValueError("k must be >= 1")
    parts = []
    for i in algebra.quiver.vertices:
        m = projective(algebra, i)
        cur, total_incl = m, None
        for _ in range(k):
            cur, step = radical_submodule(cur)
            total_incl = step if total_incl is None else total_incl.compose(step)
            if cur.total_dim == 0:
                break
        if cur.total_dim == 0:
            parts.append(m)
        else:
            parts.append(quotient(m, total_incl)[0])
    out = direct_sum(parts, algebra=algebra)
    return out.with_label(f"R/rad^{k}" if k > 1 else "R/rad")
