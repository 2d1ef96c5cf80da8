"""Krull-Schmidt decomposition, isomorphism testing and the class registry.

The splitting strategy analyses End(M):

* the radical of End(M) is the kernel of the trace form of its regular
  representation (valid because p exceeds dim End(M); smaller primes
  raise FieldTooSmall);
* a nontrivial idempotent of the semisimple quotient is located through
  Frobenius fixed spaces (Berlekamp): first in the centre, then inside
  F_p[x] for probe elements x when the quotient is simple;
* the idempotent is lifted to an exact idempotent endomorphism with the
  iteration e <- 3e^2 - 2e^3 and splits M into image and kernel.

A quotient that is a proper field extension of F_p means the module
would only decompose further after a base change; that raises NonSplit
instead of silently registering a class the ground field cannot see.
"""

from __future__ import annotations

import warnings
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import gfp
from .errors import (AlgebraMismatch, FieldTooSmall, NonSplit,
                     NonSplitWarning, NotIndecomposable, SplittingFailed)
from .modules import (Module, Morphism, direct_sum_with_maps, hom_basis,
                      identity_morphism, morphism_from_flat,
                      submodule_from_bases)


# --- small exact helpers on structure-constant algebras ---

def _mul(table: np.ndarray, u: np.ndarray, v: np.ndarray, p: int) -> np.ndarray:
    return np.einsum("i,j,ijk->k", u % p, v % p, table) % p


def _left_mult_matrix(table: np.ndarray, x: np.ndarray, p: int) -> np.ndarray:
    return np.einsum("i,ijk->kj", x % p, table) % p


def _mat_pow(a: np.ndarray, e: int, p: int) -> np.ndarray:
    result = gfp.eye(a.shape[0])
    base = a % p
    while e:
        if e & 1:
            result = gfp.matmul(result, base, p)
        base = gfp.matmul(base, base, p)
        e >>= 1
    return result


def _min_poly(table: np.ndarray, identity: np.ndarray, x: np.ndarray,
              p: int) -> np.ndarray:
    """Monic minimal polynomial of x, ascending coefficients."""
    powers = [identity % p]
    mat = identity.reshape(-1, 1) % p
    cur = identity % p
    while True:
        cur = _mul(table, x, cur, p)
        sol = gfp.solve(mat, cur, p)
        if sol is not None:
            k = len(powers)
            coeffs = np.zeros(k + 1, dtype=np.int64)
            coeffs[:k] = (-sol) % p
            coeffs[k] = 1
            return coeffs
        powers.append(cur)
        mat = np.concatenate([mat, cur.reshape(-1, 1)], axis=1)


def _poly_mod(a: np.ndarray, mu: np.ndarray, p: int) -> np.ndarray:
    a = a % p
    deg_mu = len(mu) - 1
    a = a.copy()
    for i in range(len(a) - 1, deg_mu - 1, -1):
        c = a[i]
        if c:
            a[i - deg_mu:i + 1] = (a[i - deg_mu:i + 1] - c * mu) % p
    return a[:deg_mu] if len(a) > deg_mu else np.concatenate(
        [a, np.zeros(deg_mu - len(a), dtype=np.int64)])


def _poly_mul_mod(a: np.ndarray, b: np.ndarray, mu: np.ndarray, p: int) -> np.ndarray:
    return _poly_mod(np.convolve(a, b) % p, mu, p)


def _frobenius_fixed_polys(mu: np.ndarray, p: int) -> np.ndarray:
    """Basis (columns) of {g in F_p[T]/(mu) : g^p = g}."""
    m = len(mu) - 1
    base = _poly_mod(np.array([0, 1], dtype=np.int64), mu, p)  # T
    result = np.zeros(max(m, 1), dtype=np.int64)
    result[0] = 1
    e = p
    while e:
        if e & 1:
            result = _poly_mul_mod(result, base, mu, p)
        base = _poly_mul_mod(base, base, mu, p)
        e >>= 1
    xp = result
    frob = gfp.zeros(m, m)
    cur = np.zeros(m, dtype=np.int64)
    cur[0] = 1
    for i in range(m):
        frob[:, i] = cur[:m]
        cur = _poly_mul_mod(cur, xp, mu, p)
    fixed = gfp.nullspace((frob - gfp.eye(m)) % p, p)
    return fixed


def _roots_by_scan(mu: np.ndarray, p: int) -> list[int]:
    """All roots in F_p, by vectorized Horner over the whole field."""
    ts = np.arange(p, dtype=np.int64)
    vals = np.zeros(p, dtype=np.int64)
    for c in mu[::-1]:
        vals = (vals * ts + int(c)) % p
    return [int(t) for t in np.nonzero(vals == 0)[0]]


# --- endomorphism algebra data ---

@dataclass
class SemisimpleQuotient:
    dim: int
    table: np.ndarray          # structure constants (s, s, s)
    identity: np.ndarray
    project: np.ndarray        # End coords -> quotient coords
    lift: np.ndarray           # quotient coords -> End coords (linear section)
    commutative: bool


@dataclass
class EndAlgebraData:
    module: Module
    basis: list[Morphism]
    table: np.ndarray          # structure constants (n, n, n)
    identity: np.ndarray
    radical_basis: np.ndarray  # columns, End coords
    quotient: SemisimpleQuotient

    @property
    def dim(self) -> int:
        return len(self.basis)


def end_algebra(m: Module) -> EndAlgebraData:
    """End(M) with multiplication table, trace-form radical and quotient."""
    cached = getattr(m, "_end_algebra", None)
    if cached is not None:
        return cached
    p = m.algebra.p
    basis = hom_basis(m, m)
    n = len(basis)
    if n == 0:
        raise ValueError("end_algebra of the zero module")
    if p <= n:
        raise FieldTooSmall(
            f"p = {p} <= dim End(M) = {n}: the trace-form radical "
            "criterion needs a larger prime")
    flat = np.stack([b.flatten() for b in basis], axis=1)
    prods = gfp.zeros(flat.shape[0], n * n)
    for i in range(n):
        for j in range(n):
            prods[:, i * n + j] = basis[i].compose(basis[j]).flatten()
    coords = gfp.solve(flat, prods, p)
    assert coords is not None, "product left the hom space"
    table = coords.T.reshape(n, n, n)

    ident = gfp.solve(flat, identity_morphism(m).flatten(), p)
    assert ident is not None

    lmats = [_left_mult_matrix(table, np.eye(n, dtype=np.int64)[i], p)
             for i in range(n)]
    gram = gfp.zeros(n, n)
    for i in range(n):
        for j in range(i, n):
            t = int(np.trace(gfp.matmul(lmats[i], lmats[j], p)) % p)
            gram[i, j] = gram[j, i] = t
    rad = gfp.nullspace(gram, p)

    comp = gfp.complement_coords(rad, p)
    lift = gfp.zeros(n, len(comp))
    for c, r in enumerate(comp):
        lift[r, c] = 1
    full = np.concatenate([rad, lift], axis=1)
    finv = gfp.inv(full, p)
    assert finv is not None
    project = finv[rad.shape[1]:, :]

    s = len(comp)
    qtable = np.zeros((s, s, s), dtype=np.int64)
    for i in range(s):
        for j in range(s):
            prod = _mul(table, lift[:, i], lift[:, j], p)
            qtable[i, j] = gfp.matmul(project, prod.reshape(-1, 1), p)[:, 0]
    commutative = all(
        np.array_equal(qtable[i, j], qtable[j, i])
        for i in range(s) for j in range(i + 1, s))
    quotient = SemisimpleQuotient(
        dim=s, table=qtable,
        identity=gfp.matmul(project, ident.reshape(-1, 1), p)[:, 0],
        project=project, lift=lift, commutative=commutative)
    data = EndAlgebraData(m, basis, table, ident, rad, quotient)
    m._end_algebra = data
    return data


def _frobenius_fixed_dim(q: SemisimpleQuotient, basis_coords: np.ndarray,
                         p: int) -> tuple[int, np.ndarray]:
    """Fixed space of x -> x^p on the commutative span of the given columns.

    Returns (dimension, basis columns in quotient coordinates).
    """
    k = basis_coords.shape[1]
    images = gfp.zeros(basis_coords.shape[0], k)
    for i in range(k):
        lx = _left_mult_matrix(q.table, basis_coords[:, i], p)
        images[:, i] = gfp.matmul(_mat_pow(lx, p, p),
                                  q.identity.reshape(-1, 1), p)[:, 0]
    # solve basis * c = image to express x^p inside the span
    rep = gfp.solve(basis_coords, images, p)
    assert rep is not None, "span not closed under Frobenius"
    fixed = gfp.nullspace((rep - gfp.eye(k)) % p, p)
    return fixed.shape[1], gfp.matmul(basis_coords, fixed, p)


def is_indecomposable(m: Module) -> bool:
    """End(M)/rad is a division algebra test (Frobenius fixed dimension).

    Over F_p the quotient is a field iff it is commutative with a
    1-dimensional Frobenius fixed space; a noncommutative quotient always
    contains idempotents (finite division rings are fields).
    """
    if m.total_dim == 0:
        raise ValueError("the zero module is neither")
    q = end_algebra(m).quotient
    if not q.commutative:
        return False
    fixed_dim, _ = _frobenius_fixed_dim(q, gfp.eye(q.dim), m.algebra.p)
    if fixed_dim == 1:
        if q.dim > 1:
            warnings.warn(
                f"End/rad of {m.describe()} is a field of dimension {q.dim} "
                "over F_p: indecomposable here, but not absolutely",
                NonSplitWarning, stacklevel=2)
        return True
    return False


def _center(q: SemisimpleQuotient, p: int) -> np.ndarray:
    s = q.dim
    blocks = []
    for i in range(s):
        li = _left_mult_matrix(q.table, np.eye(s, dtype=np.int64)[i], p)
        ri = np.einsum("j,ijk->ki", np.eye(s, dtype=np.int64)[i], q.table) % p
        blocks.append((li - ri) % p)
    return gfp.nullspace(np.concatenate(blocks, axis=0), p)


def _lagrange_idempotent(q: SemisimpleQuotient, z: np.ndarray,
                         p: int) -> np.ndarray:
    """Idempotent from a Frobenius-fixed non-scalar element z of the
    quotient: its minimal polynomial splits into distinct linear factors."""
    mu = _min_poly(q.table, q.identity, z, p)
    roots = _roots_by_scan(mu, p)
    assert len(roots) == len(mu) - 1 >= 2, "fixed element should split"
    lam0 = roots[0]
    e = q.identity.copy()
    denom = 1
    for lam in roots[1:]:
        e = _mul(q.table, e, (z - lam * q.identity) % p, p)
        denom = denom * (lam0 - lam) % p
    e = (e * gfp.inv_scalar(denom, p)) % p
    assert np.array_equal(_mul(q.table, e, e, p), e)
    assert np.any(e) and not np.array_equal(e, q.identity)
    return e


def _find_quotient_idempotent(m: Module, data: EndAlgebraData) -> np.ndarray:
    """Nontrivial idempotent of End/rad, or NonSplit if the quotient is a
    proper field extension."""
    p = m.algebra.p
    q = data.quotient
    center = _center(q, p)
    fixed_dim, fixed = _frobenius_fixed_dim(q, center, p)
    if fixed_dim >= 2:
        ident = q.identity.reshape(-1, 1)
        for i in range(fixed.shape[1]):
            z = fixed[:, i]
            cand = np.concatenate([ident, z.reshape(-1, 1)], axis=1)
            if gfp.rank(cand, p) == 2:
                return _lagrange_idempotent(q, z, p)
        raise SplittingFailed("fixed space of the centre is degenerate")
    # the quotient is simple: M_k(F_{p^d}) with d = dim of the centre
    if q.dim == center.shape[1]:
        raise NonSplit(
            f"End/rad of {m.describe()} is a field of dimension {q.dim} "
            "over F_p; decomposition needs a base field extension")
    # k >= 2: probe commutative subalgebras F_p[x] for a Berlekamp split
    probes = []
    eye_s = gfp.eye(q.dim)
    for i in range(q.dim):
        probes.append(eye_s[:, i])
    for i in range(q.dim):
        for j in range(i + 1, q.dim):
            probes.append((eye_s[:, i] + eye_s[:, j]) % p)
    rng = np.random.default_rng(q.dim * 7919 + m.total_dim)
    for _ in range(200):
        probes.append(rng.integers(0, p, size=q.dim, dtype=np.int64))
    ident = q.identity.reshape(-1, 1)
    for x in probes:
        if gfp.rank(np.concatenate([ident, x.reshape(-1, 1)], axis=1), p) < 2:
            continue
        mu = _min_poly(q.table, q.identity, x, p)
        if len(mu) - 1 < 2:
            continue
        fixed_polys = _frobenius_fixed_polys(mu, p)
        if fixed_polys.shape[1] < 2:
            continue
        for i in range(fixed_polys.shape[1]):
            g = fixed_polys[:, i]
            if not np.any(g[1:]):
                continue  # constant polynomial
            # evaluate g at x inside the quotient (Horner)
            z = np.zeros(q.dim, dtype=np.int64)
            for c in g[::-1]:
                z = (_mul(q.table, z, x, p) + int(c) * q.identity) % p
            return _lagrange_idempotent(q, z, p)
    raise SplittingFailed(
        "no splitting idempotent found although End/rad is not a division "
        "algebra")


def _lift_idempotent(data: EndAlgebraData, e_quot: np.ndarray,
                     p: int) -> np.ndarray:
    e = gfp.matmul(data.quotient.lift, e_quot.reshape(-1, 1), p)[:, 0]
    for _ in range(data.dim + 5):
        e2 = _mul(data.table, e, e, p)
        if np.array_equal(e2, e):
            return e
        e3 = _mul(data.table, e2, e, p)
        e = (3 * e2 - 2 * e3) % p
    raise SplittingFailed("idempotent lifting did not converge")


def _coords_to_morphism(data: EndAlgebraData, coords: np.ndarray) -> Morphism:
    flat = np.zeros_like(data.basis[0].flatten())
    for i, c in enumerate(coords):
        if c:
            flat = (flat + int(c) * data.basis[i].flatten())
    flat %= data.module.algebra.p
    return morphism_from_flat(data.module, data.module, flat)


# --- decomposition ---

@dataclass
class DecompositionResult:
    module: Module
    summands: list[tuple[int, int, Module]]     # (class id, multiplicity, witness)
    projective_part: list[tuple[int, int]]      # (vertex, multiplicity)
    registry: "ClassRegistry"
    leaves: list[tuple[Module, Morphism]] = field(default_factory=list)

    def class_multiset(self) -> Counter:
        return Counter({cid: mult for cid, mult, _ in self.summands})

    def assembly(self) -> Morphism:
        """Explicit isomorphism (+)_leaves -> module."""
        mods = [m for m, _ in self.leaves]
        total, _, _ = direct_sum_with_maps(mods, algebra=self.module.algebra)
        nv = len(self.module.dims)
        mats = []
        for v in range(nv):
            cols = [incl.mats[v] for _, incl in self.leaves]
            mats.append(np.concatenate(cols, axis=1) if cols
                        else gfp.zeros(self.module.dims[v], 0))
        return Morphism(total, self.module, mats, check=False)


def _split_leaves(m: Module, incl: Morphism) -> list[tuple[Module, Morphism]]:
    if m.total_dim == 0:
        return []
    data = end_algebra(m)
    if data.quotient.dim == 1:
        return [(m, incl)]
    e_quot = _find_quotient_idempotent(m, data)
    e = _lift_idempotent(data, e_quot, m.algebra.p)
    h = _coords_to_morphism(data, e)
    p = m.algebra.p
    img_bases = [gfp.column_space(h.mats[v], p) for v in range(len(m.dims))]
    ker_bases = [gfp.nullspace(h.mats[v], p) for v in range(len(m.dims))]
    part1, incl1 = submodule_from_bases(m, img_bases)
    part2, incl2 = submodule_from_bases(m, ker_bases)
    assert part1.total_dim + part2.total_dim == m.total_dim
    assert part1.total_dim and part2.total_dim, "idempotent split was trivial"
    return (_split_leaves(part1, incl.compose(incl1))
            + _split_leaves(part2, incl.compose(incl2)))


def _iso_indecomposable(m: Module, n: Module) -> bool:
    """Isomorphism test for indecomposables: non-isomorphisms span a proper
    subspace of Hom, so any basis contains an iso whenever one exists."""
    if m.dims != n.dims:
        return False
    if m.total_dim == 0:
        return True
    p = m.algebra.p
    for f in hom_basis(m, n):
        if all(gfp.is_invertible(f.mats[v], p) for v in range(len(m.dims))
               if m.dims[v]):
            return True
    return False


class ClassRegistry:
    """Ordered registry of isomorphism classes of indecomposables.

    Mutable; one registry per computation thread (access is not
    synchronized internally).
    """

    def __init__(self, algebra):
        self.algebra = algebra
        self.classes: list[tuple[Module, bool]] = []  # (witness, is_projective)
        self._by_dims: dict[tuple, list[int]] = {}
        self._projective_dims = None

    def __len__(self):
        return len(self.classes)

    def witness(self, cid: int) -> Module:
        return self.classes[cid][0]

    def is_projective(self, cid: int) -> bool:
        return self.classes[cid][1]

    def label(self, cid: int) -> str:
        w = self.witness(cid)
        return w.label or f"cls{cid}{w.dims}"

    def _match_projective(self, m: Module) -> int | None:
        from .algebra import projective

        if self._projective_dims is None:
            self._projective_dims = {
                i: projective(self.algebra, i).dims
                for i in self.algebra.quiver.vertices}
        for i, dims in self._projective_dims.items():
            if m.dims == dims and _iso_indecomposable(m, projective(self.algebra, i)):
                return i
        return None

    def find(self, m: Module) -> int | None:
        for cid in self._by_dims.get(m.dims, []):
            if _iso_indecomposable(m, self.witness(cid)):
                return cid
        return None

    def register(self, m: Module, *, check: bool = True) -> int:
        """Id of the class of an indecomposable, appending when new."""
        if check and not is_indecomposable(m):
            raise NotIndecomposable(m.describe())
        cid = self.find(m)
        if cid is not None:
            return cid
        is_proj = self._match_projective(m) is not None
        cid = len(self.classes)
        self.classes.append((m, is_proj))
        self._by_dims.setdefault(m.dims, []).append(cid)
        return cid

    def projective_vertex(self, m: Module) -> int | None:
        return self._match_projective(m)


def decompose(m: Module, registry: ClassRegistry | None = None) -> DecompositionResult:
    """Full direct-sum decomposition with class matching.

    Non-projective summands are registered (and counted) in the registry;
    projective summands are matched to their vertex.
    """
    if registry is None:
        registry = ClassRegistry(m.algebra)
    leaves = _split_leaves(m, identity_morphism(m))
    counts: Counter[int] = Counter()
    proj: Counter[int] = Counter()
    witnesses: dict[int, Module] = {}
    for leaf, _ in leaves:
        v = registry.projective_vertex(leaf)
        if v is not None:
            proj[v] += 1
            continue
        cid = registry.register(leaf, check=False)
        counts[cid] += 1
        witnesses.setdefault(cid, registry.witness(cid))
    summands = [(cid, counts[cid], witnesses[cid]) for cid in sorted(counts)]
    projective_part = [(v, proj[v]) for v in sorted(proj)]
    return DecompositionResult(m, summands, projective_part, registry, leaves)


def is_isomorphic(m: Module, n: Module) -> bool:
    if m.algebra is not n.algebra:
        raise AlgebraMismatch("isomorphism across algebras")
    if m.dims != n.dims:
        return False
    if m.total_dim == 0:
        return True
    registry = ClassRegistry(m.algebra)
    dm = decompose(m, registry)
    dn = decompose(n, registry)
    return (dm.class_multiset() == dn.class_multiset()
            and sorted(dm.projective_part) == sorted(dn.projective_part))
