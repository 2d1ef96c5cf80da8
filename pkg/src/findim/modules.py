"""Modules over a bound quiver algebra and their linear-algebra calculus.

A module is a representation: one vector space per vertex (dimensions
only; coordinates are implicit) and one matrix per arrow, mapping the
source-vertex space to the target-vertex space (column convention).
Everything here is exact arithmetic over F_p.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gfp
from .errors import AlgebraMismatch, NotInjective


class Module:
    """A finite dimensional representation of a PathAlgebra."""

    def __init__(self, algebra, dims, mats, label=None, validate=True):
        self.algebra = algebra
        self.dims = tuple(int(d) for d in dims)
        self.mats = {name: gfp.asmod(m, algebra.p) for name, m in mats.items()}
        self.label = label
        if validate:
            self._validate()

    def _validate(self):
        q = self.algebra.quiver
        if len(self.dims) != q.vertex_count:
            raise ValueError("dimension vector has wrong length")
        if any(d < 0 for d in self.dims):
            raise ValueError("negative dimension")
        for a in q.arrows:
            m = self.mats.get(a.name)
            if m is None:
                raise ValueError(f"missing matrix for arrow {a.name}")
            want = (self.dims[a.target - 1], self.dims[a.source - 1])
            if m.shape != want:
                raise ValueError(
                    f"arrow {a.name}: matrix shape {m.shape} != {want}")
        for rel in self.algebra.relations:
            acc = None
            for coeff, names in rel.terms:
                term = self.path_action_names(names)
                acc = (coeff * term) if acc is None else (acc + coeff * term)
            if acc is not None and np.any(acc % self.algebra.p):
                raise ValueError("a relation does not vanish on this module")

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    @property
    def is_zero(self) -> bool:
        return self.total_dim == 0

    def with_label(self, label: str) -> "Module":
        m = Module.__new__(Module)
        m.algebra = self.algebra
        m.dims = self.dims
        m.mats = self.mats
        m.label = label
        return m

    def path_action_names(self, names) -> np.ndarray:
        """Matrix of a path given by arrow names in application order."""
        q = self.algebra.quiver
        by_name = self.algebra.arrow_by_name
        src = q.arrows[by_name[names[0]]].source
        acc = gfp.eye(self.dims[src - 1])
        for nm in names:
            acc = gfp.matmul(self.mats[nm], acc, self.algebra.p)
        return acc

    def path_action(self, path: tuple[int, ...], source_vertex: int) -> np.ndarray:
        """Matrix of a path given by arrow indices in application order."""
        arrows = self.algebra.quiver.arrows
        acc = gfp.eye(self.dims[source_vertex - 1])
        for i in path:
            acc = gfp.matmul(self.mats[arrows[i].name], acc, self.algebra.p)
        return acc

    def describe(self) -> str:
        lbl = self.label or "module"
        return f"{lbl}{self.dims}"

    def __repr__(self):
        return f"Module({self.describe()})"


class Morphism:
    """A module morphism, one matrix per vertex (target dim x source dim)."""

    def __init__(self, source: Module, target: Module, mats, check=True):
        if source.algebra is not target.algebra:
            raise AlgebraMismatch("morphism between different algebras")
        self.source = source
        self.target = target
        self.mats = [gfp.asmod(m, source.algebra.p) for m in mats]
        if check:
            for v in range(len(source.dims)):
                want = (target.dims[v], source.dims[v])
                if self.mats[v].shape != want:
                    raise ValueError(f"vertex {v + 1}: shape {self.mats[v].shape} != {want}")
            if not self.commutes():
                raise ValueError("matrices do not commute with the arrow action")

    def commutes(self) -> bool:
        p = self.source.algebra.p
        for a in self.source.algebra.quiver.arrows:
            i, j = a.source - 1, a.target - 1
            lhs = gfp.matmul(self.mats[j], self.source.mats[a.name], p)
            rhs = gfp.matmul(self.target.mats[a.name], self.mats[i], p)
            if not np.array_equal(lhs, rhs):
                return False
        return True

    def compose(self, first: "Morphism") -> "Morphism":
        """self o first (apply ``first``, then ``self``)."""
        if first.target is not self.source and first.target.dims != self.source.dims:
            raise ValueError("composition mismatch")
        p = self.source.algebra.p
        mats = [gfp.matmul(self.mats[v], first.mats[v], p)
                for v in range(len(self.mats))]
        return Morphism(first.source, self.target, mats, check=False)

    def is_injective(self) -> bool:
        p = self.source.algebra.p
        return all(gfp.rank(m, p) == m.shape[1] for m in self.mats)

    def is_surjective(self) -> bool:
        p = self.source.algebra.p
        return all(gfp.rank(m, p) == m.shape[0] for m in self.mats)

    def is_isomorphism(self) -> bool:
        return (self.source.dims == self.target.dims
                and all(gfp.is_invertible(m, self.source.algebra.p)
                        for m in self.mats if m.shape[0]))

    def flatten(self) -> np.ndarray:
        """Concatenated row-major entries, the coordinate vector used by
        hom-space computations."""
        parts = [m.ravel() for m in self.mats]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)

    def __repr__(self):
        return f"Morphism({self.source.describe()} -> {self.target.describe()})"


def zero_module(algebra) -> Module:
    dims = tuple(0 for _ in algebra.quiver.vertices)
    mats = {a.name: gfp.zeros(0, 0) for a in algebra.quiver.arrows}
    return Module(algebra, dims, mats, label="0", validate=False)


def zero_morphism(source: Module, target: Module) -> Morphism:
    mats = [gfp.zeros(target.dims[v], source.dims[v])
            for v in range(len(source.dims))]
    return Morphism(source, target, mats, check=False)


def identity_morphism(m: Module) -> Morphism:
    return Morphism(m, m, [gfp.eye(d) for d in m.dims], check=False)


def morphism_from_flat(source: Module, target: Module, flat: np.ndarray) -> Morphism:
    mats = []
    pos = 0
    for v in range(len(source.dims)):
        t, s = target.dims[v], source.dims[v]
        mats.append(flat[pos:pos + t * s].reshape(t, s))
        pos += t * s
    return Morphism(source, target, mats, check=False)


# --- direct sums ---

def direct_sum_with_maps(mods: list[Module], algebra=None):
    """Block-diagonal sum with canonical inclusions and projections."""
    if not mods:
        if algebra is None:
            raise ValueError("empty direct sum needs an algebra")
        return zero_module(algebra), [], []
    algebra = mods[0].algebra
    for m in mods[1:]:
        if m.algebra is not algebra:
            raise AlgebraMismatch("direct sum across algebras")
    nv = len(mods[0].dims)
    dims = tuple(sum(m.dims[v] for m in mods) for v in range(nv))
    mats = {}
    for a in algebra.quiver.arrows:
        i, j = a.source - 1, a.target - 1
        blocks = [m.mats[a.name] for m in mods]
        big = gfp.zeros(dims[j], dims[i])
        ro = co = 0
        for b in blocks:
            big[ro:ro + b.shape[0], co:co + b.shape[1]] = b
            ro += b.shape[0]
            co += b.shape[1]
        mats[a.name] = big
    total = Module(algebra, dims, mats, validate=False)
    inclusions, projections = [], []
    offsets = [0] * nv
    for m in mods:
        inc, prj = [], []
        for v in range(nv):
            e = gfp.zeros(dims[v], m.dims[v])
            e[offsets[v]:offsets[v] + m.dims[v], :] = gfp.eye(m.dims[v])
            inc.append(e)
            prj.append(e.T.copy())
        inclusions.append(Morphism(m, total, inc, check=False))
        projections.append(Morphism(total, m, prj, check=False))
        for v in range(nv):
            offsets[v] += m.dims[v]
    return total, inclusions, projections


def direct_sum(mods: list[Module], algebra=None) -> Module:
    return direct_sum_with_maps(mods, algebra=algebra)[0]


def direct_power(m: Module, k: int) -> Module:
    return direct_sum([m] * k, algebra=m.algebra)


# --- hom and ext ---

def hom_basis(m: Module, n: Module) -> list[Morphism]:
    """Basis of Hom(m, n), solving the commutation equations."""
    if m.algebra is not n.algebra:
        raise AlgebraMismatch("hom between different algebras")
    p = m.algebra.p
    nv = len(m.dims)
    widths = [n.dims[v] * m.dims[v] for v in range(nv)]
    offsets = np.concatenate([[0], np.cumsum(widths)])
    total = int(offsets[-1])
    if total == 0:
        return []
    blocks = []
    for a in m.algebra.quiver.arrows:
        i, j = a.source - 1, a.target - 1
        rows = n.dims[j] * m.dims[i]
        if rows == 0:
            continue
        blk = gfp.zeros(rows, total)
        if widths[j]:
            blk[:, offsets[j]:offsets[j] + widths[j]] = np.kron(
                gfp.eye(n.dims[j]), m.mats[a.name].T)
        if widths[i]:
            blk[:, offsets[i]:offsets[i] + widths[i]] -= np.kron(
                n.mats[a.name], gfp.eye(m.dims[i]))
        blocks.append(blk % p)
    if blocks:
        mat = np.concatenate(blocks, axis=0)
    else:
        mat = gfp.zeros(0, total)
    null = gfp.nullspace(mat, p)
    return [morphism_from_flat(m, n, null[:, k]) for k in range(null.shape[1])]


def hom_dim(m: Module, n: Module) -> int:
    return len(hom_basis(m, n))


def ext1_dim(m: Module, n: Module) -> int:
    """dim Ext^1(m, n) from the cover exact sequence of m.

    Hom(-, n) applied to 0 -> K -> P0 -> m -> 0 gives
    dim Ext^1 = dim Hom(K, n) - dim Hom(P0, n) + dim Hom(m, n),
    and Hom(P0, n) = sum_j d_j * dim n_j for P0 = (+) P(j)^{d_j}.
    """
    if m.algebra is not n.algebra:
        raise AlgebraMismatch("ext between different algebras")
    cov = projective_cover(m)
    hom_p0 = sum(mult * n.dims[v - 1] for v, mult in cov.multiplicities)
    return hom_dim(cov.kernel, n) - hom_p0 + hom_dim(m, n)


# --- submodules, quotients, kernels ---

def submodule_from_bases(m: Module, bases: list[np.ndarray],
                         label=None) -> tuple[Module, Morphism]:
    """Module structure on per-vertex subspaces closed under the arrows."""
    p = m.algebra.p
    dims = tuple(b.shape[1] for b in bases)
    mats = {}
    for a in m.algebra.quiver.arrows:
        i, j = a.source - 1, a.target - 1
        img = gfp.matmul(m.mats[a.name], bases[i], p)
        x = gfp.solve(bases[j], img, p)
        if x is None:
            raise ValueError("subspaces are not closed under the arrow action")
        mats[a.name] = x
    sub = Module(m.algebra, dims, mats, label=label, validate=False)
    incl = Morphism(sub, m, bases, check=False)
    return sub, incl


def submodule_generated(m: Module, vectors) -> tuple[Module, Morphism]:
    """Smallest submodule containing the given elements.

    Each element is a sequence of per-vertex coordinate vectors.
    """
    p = m.algebra.p
    nv = len(m.dims)
    bases = [gfp.zeros(m.dims[v], 0) for v in range(nv)]
    ranks = [0] * nv
    queue: list[tuple[int, np.ndarray]] = []

    def try_add(v: int, vec: np.ndarray):
        vec = gfp.asmod(vec, p).reshape(-1)
        if not np.any(vec):
            return
        cand = np.concatenate([bases[v], vec.reshape(-1, 1)], axis=1)
        if gfp.rank(cand, p) > ranks[v]:
            bases[v] = cand
            ranks[v] += 1
            queue.append((v, vec))

    for elem in vectors:
        for v in range(nv):
            comp = np.asarray(elem[v], dtype=np.int64).reshape(-1)
            if comp.size != m.dims[v]:
                raise ValueError("element component has wrong dimension")
            try_add(v, comp)
    out_arrows: dict[int, list] = {v: [] for v in range(nv)}
    for a in m.algebra.quiver.arrows:
        out_arrows[a.source - 1].append(a)
    while queue:
        v, vec = queue.pop()
        for a in out_arrows[v]:
            try_add(a.target - 1, gfp.matmul(m.mats[a.name], vec.reshape(-1, 1), p))
    return submodule_from_bases(m, bases)


def kernel(f: Morphism) -> tuple[Module, Morphism]:
    p = f.source.algebra.p
    bases = [gfp.nullspace(f.mats[v], p) for v in range(len(f.source.dims))]
    return submodule_from_bases(f.source, bases)


def image(f: Morphism) -> tuple[Module, Morphism]:
    p = f.source.algebra.p
    bases = [gfp.column_space(f.mats[v], p) for v in range(len(f.source.dims))]
    return submodule_from_bases(f.target, bases)


def quotient_with_section(m: Module, incl: Morphism):
    """Quotient of m by the image of an injective morphism.

    Returns (quotient, projection, sections) where sections[v] embeds the
    chosen complement coordinates back into m (a linear, not module, map).
    """
    if incl.target is not m and incl.target.dims != m.dims:
        raise ValueError("inclusion does not land in the module")
    if not incl.is_injective():
        raise NotInjective("quotient along a non-injective morphism")
    p = m.algebra.p
    nv = len(m.dims)
    projs, sections = [], []
    for v in range(nv):
        u = incl.mats[v]
        comp = gfp.complement_coords(u, p)
        s = gfp.zeros(m.dims[v], len(comp))
        for c, r in enumerate(comp):
            s[r, c] = 1
        full = np.concatenate([u, s], axis=1)
        finv = gfp.inv(full, p)
        assert finv is not None
        projs.append(finv[u.shape[1]:, :])
        sections.append(s)
    dims = tuple(projs[v].shape[0] for v in range(nv))
    mats = {}
    for a in m.algebra.quiver.arrows:
        i, j = a.source - 1, a.target - 1
        mats[a.name] = gfp.matmul(
            gfp.matmul(projs[j], m.mats[a.name], p), sections[i], p)
    q = Module(m.algebra, dims, mats, validate=False)
    proj = Morphism(m, q, projs, check=False)
    return q, proj, sections


def quotient(m: Module, incl: Morphism) -> tuple[Module, Morphism]:
    q, proj, _ = quotient_with_section(m, incl)
    return q, proj


def radical_bases(m: Module) -> list[np.ndarray]:
    """Per-vertex bases of rad(m) = sum of images of all arrow maps."""
    p = m.algebra.p
    nv = len(m.dims)
    into: dict[int, list[np.ndarray]] = {v: [] for v in range(nv)}
    for a in m.algebra.quiver.arrows:
        if m.dims[a.source - 1] and m.dims[a.target - 1]:
            into[a.target - 1].append(m.mats[a.name])
    bases = []
    for v in range(nv):
        if into[v]:
            bases.append(gfp.column_space(np.concatenate(into[v], axis=1), p))
        else:
            bases.append(gfp.zeros(m.dims[v], 0))
    return bases


def radical_submodule(m: Module) -> tuple[Module, Morphism]:
    return submodule_from_bases(m, radical_bases(m))


def radical(m: Module) -> Module:
    return radical_submodule(m)[0]


def top(m: Module) -> Module:
    """m / rad m: semisimple, so all arrow matrices vanish."""
    bases = radical_bases(m)
    dims = tuple(m.dims[v] - bases[v].shape[1] for v in range(len(m.dims)))
    mats = {a.name: gfp.zeros(dims[a.target - 1], dims[a.source - 1])
            for a in m.algebra.quiver.arrows}
    return Module(m.algebra, dims, mats, validate=False)


def trace_quotient(m: Module, vertex_set) -> Module:
    """Quotient by the submodule generated by all components at the given
    vertices; the largest quotient supported away from them."""
    vset = {v for v in vertex_set}
    gens = []
    for v in vset:
        for c in range(m.dims[v - 1]):
            elem = [np.zeros(m.dims[w], dtype=np.int64)
                    for w in range(len(m.dims))]
            elem[v - 1][c] = 1
            gens.append(elem)
    if not gens:
        return m
    sub, incl = submodule_generated(m, gens)
    if sub.total_dim == 0:
        return m
    return quotient(m, incl)[0]


# --- projective covers and syzygies ---

@dataclass
class CoverData:
    cover: Module
    epi: Morphism
    kernel: Module
    kernel_inclusion: Morphism
    multiplicities: list[tuple[int, int]]  # (vertex, count) of P(vertex)


def projective_cover(m: Module) -> CoverData:
    """Minimal projective cover, deterministic given the coordinate order.

    Top lifts are the standard basis vectors at the complement coordinates
    of rad(m), taken in index order.
    """
    cached = getattr(m, "_cover", None)
    if cached is not None:
        return cached
    from .algebra import projective

    algebra = m.algebra
    p = algebra.p
    nv = len(m.dims)
    rad = radical_bases(m)
    lifts: list[tuple[int, np.ndarray]] = []  # (vertex0, column vector in m)
    mult: list[tuple[int, int]] = []
    for v in range(nv):
        comp = gfp.complement_coords(rad[v], p) if m.dims[v] else []
        if comp:
            mult.append((v + 1, len(comp)))
        for c in comp:
            e = np.zeros((m.dims[v], 1), dtype=np.int64)
            e[c, 0] = 1
            lifts.append((v, e))

    parts = [projective(algebra, v + 1) for v, _ in lifts]
    cover, inclusions, _ = direct_sum_with_maps(parts, algebra=algebra)

    epi_mats = [gfp.zeros(m.dims[v], cover.dims[v]) for v in range(nv)]
    for (v, e), part, inc in zip(lifts, parts, inclusions):
        # basis paths of P(v+1), grouped by target vertex
        loc = [k for k in range(algebra.dim) if algebra.source_of(k) == v + 1]
        per_vertex: dict[int, list[int]] = {w: [] for w in algebra.quiver.vertices}
        for k in loc:
            per_vertex[algebra.target_of(k)].append(k)
        for w in algebra.quiver.vertices:
            for c, k in enumerate(per_vertex[w]):
                img = gfp.matmul(m.path_action(algebra.basis_paths[k], v + 1), e, p)
                # column of this P-basis vector inside the big cover
                col = int(np.nonzero(inc.mats[w - 1][:, c])[0][0])
                epi_mats[w - 1][:, col] = img[:, 0]
    epi = Morphism(cover, m, epi_mats, check=False)
    assert epi.commutes(), "cover epi does not commute"
    assert epi.is_surjective(), "cover map is not surjective"

    ker, ker_incl = kernel(epi)
    data = CoverData(cover, epi, ker, ker_incl, mult)
    m._cover = data
    return data


def syzygy(m: Module, k: int = 1) -> Module:
    """k-fold kernel of minimal covers; projective summands are kept."""
    if k < 0:
        raise ValueError("k must be >= 0")
    cur = m
    for _ in range(k):
        if cur.total_dim == 0:
            return cur
        cur = projective_cover(cur).kernel
    return cur


# --- universal extensions ---

@dataclass
class UniversalExtension:
    middle: Module
    count: int  # number of copies of y glued below x
    inclusion: Morphism  # y^count -> middle
    epi: Morphism  # middle -> x


def universal_extension(x: Module, y: Module) -> UniversalExtension:
    """Extension 0 -> y^d -> E -> x -> 0 killing a basis of Ext^1(x, y).

    Realized as the pushout of the cover sequence of x along a morphism
    Omega(x) -> y^d whose components represent an Ext-basis.
    """
    if x.algebra is not y.algebra:
        raise AlgebraMismatch("extension between different algebras")
    p = x.algebra.p
    cov = projective_cover(x)
    k, incl_k = cov.kernel, cov.kernel_inclusion
    hk = hom_basis(k, y)
    if not hk:
        return UniversalExtension(
            x, 0, zero_morphism(zero_module(x.algebra), x), identity_morphism(x))
    hp = hom_basis(cov.cover, y)
    flat_len = hk[0].flatten().shape[0]
    rho = gfp.zeros(flat_len, len(hp))
    for idx, h in enumerate(hp):
        rho[:, idx] = h.compose(incl_k).flatten()
    chosen: list[Morphism] = []
    cur = rho
    cur_rank = gfp.rank(cur, p)
    for h in hk:
        col = h.flatten().reshape(-1, 1)
        cand = np.concatenate([cur, col], axis=1)
        r = gfp.rank(cand, p)
        if r > cur_rank:
            chosen.append(h)
            cur, cur_rank = cand, r
    d = len(chosen)
    if d == 0:
        return UniversalExtension(
            x, 0, zero_morphism(zero_module(x.algebra), x), identity_morphism(x))

    yd, _, _ = direct_sum_with_maps([y] * d)
    g_mats = [np.concatenate([h.mats[v] for h in chosen], axis=0)
              for v in range(len(x.dims))]
    big, incs, _ = direct_sum_with_maps([yd, cov.cover])
    i_y, i_p = incs
    w_mats = [np.concatenate([g_mats[v], (-incl_k.mats[v]) % p], axis=0)
              for v in range(len(x.dims))]
    w = Morphism(k, big, w_mats, check=False)
    assert w.commutes()
    e, proj, sections = quotient_with_section(big, w)
    incl_ye = proj.compose(i_y)
    assert incl_ye.is_injective()
    phi_mats = [np.concatenate(
        [gfp.zeros(x.dims[v], yd.dims[v]), cov.epi.mats[v]], axis=1)
        for v in range(len(x.dims))]
    eps_mats = [gfp.matmul(phi_mats[v], sections[v], p)
                for v in range(len(x.dims))]
    eps = Morphism(e, x, eps_mats, check=False)
    assert eps.commutes(), "induced epi does not commute"
    assert eps.is_surjective()
    assert e.total_dim == x.total_dim + d * y.total_dim
    return UniversalExtension(e, d, incl_ye, eps)
