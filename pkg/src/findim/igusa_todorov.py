"""The syzygy lattice: projective dimension, phi, psi and derived bounds.

K is the free abelian group on iso-classes of non-projective
indecomposables; the syzygy operator acts on it by integer matrices.
The lattice object wraps a class registry, memoizes the class-level
syzygy transition of every registered class, and answers pd/phi/psi
queries from the transition graph:

* pd is decided exactly once the orbit of a module's classes closes:
  a reachable cycle certifies infinite pd, otherwise the transition
  graph is acyclic and the chain length is read off;
* phi is the stabilization index of the rank of the transition matrix
  powers applied to the generator lattice, exact because integer matrix
  ranks stabilize within |orbit| steps once the orbit is closed;
* an unclosed orbit at the depth budget yields Unknown, never a guess.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import gfp
from .decompose import ClassRegistry, decompose
from .errors import RadCubeNotZero, Undecided
from .modules import Module, direct_sum, projective_cover

DEFAULT_DEPTH = 64


@dataclass
class PdResult:
    status: str                       # "finite" | "infinite" | "unknown"
    value: int | None = None
    cycle_witness: list[int] | None = None
    depth_reached: int | None = None

    @property
    def is_finite(self) -> bool:
        return self.status == "finite"

    @property
    def decided(self) -> bool:
        return self.status != "unknown"


@dataclass
class KVector:
    """Element of the free group on non-projective classes."""

    registry: ClassRegistry
    coeffs: dict[int, int]

    def __post_init__(self):
        self.coeffs = {c: int(v) for c, v in self.coeffs.items() if v}

    def __add__(self, other: "KVector") -> "KVector":
        assert self.registry is other.registry
        out = Counter(self.coeffs)
        out.update(other.coeffs)
        return KVector(self.registry, dict(out))

    def scale(self, k: int) -> "KVector":
        return KVector(self.registry, {c: k * v for c, v in self.coeffs.items()})

    @property
    def is_zero(self) -> bool:
        return not self.coeffs


@dataclass
class PhiResult:
    value: int | None                 # None = unknown at the depth budget
    rank_trace: list[int]
    orbit_closed_at: int | None      # closure step, None if not closed

    @property
    def decided(self) -> bool:
        return self.value is not None


@dataclass
class PsiReport:
    phi: int
    c_m: list[int]                    # class ids of the summands of Omega^phi M
    pfd_c_m: int
    psi: int
    rank_trace: list[int] = field(default_factory=list)


class SyzygyLattice:
    """Registry plus memoized class-level syzygy transitions.

    Not internally synchronized: use one lattice per thread, or serialize
    access externally.
    """

    def __init__(self, algebra, registry: ClassRegistry | None = None):
        self.algebra = algebra
        self.registry = registry if registry is not None else ClassRegistry(algebra)
        self._omega: dict[int, Counter] = {}

    # --- class plumbing ---

    def class_multiset(self, m: Module) -> Counter:
        """Non-projective class multiplicities of a module."""
        return decompose(m, self.registry).class_multiset()

    def omega_of(self, cid: int) -> Counter:
        got = self._omega.get(cid)
        if got is None:
            witness = self.registry.witness(cid)
            ker = projective_cover(witness).kernel
            got = self.class_multiset(ker)
            self._omega[cid] = got
        return got

    def closure(self, seeds: set[int], max_depth: int) -> tuple[bool, set[int], int]:
        """Explore transitions breadth-first; (closed, reached, depth)."""
        seen = set(seeds)
        frontier = set(seeds)
        depth = 0
        while frontier:
            if depth >= max_depth:
                return False, seen, depth
            nxt: set[int] = set()
            for c in frontier:
                nxt.update(self.omega_of(c))
            frontier = nxt - seen
            seen |= frontier
            depth += 1
        return True, seen, depth

    def _resolve_graph(self, orbit: set[int]) -> dict[int, int | None]:
        """pd per class over a closed orbit; None marks infinite pd."""
        values: dict[int, int | None] = {}
        pending = set(orbit)
        changed = True
        while changed:
            changed = False
            for c in sorted(pending):
                succ = self.omega_of(c)
                if all(s in values and values[s] is not None for s in succ):
                    values[c] = 1 + max(
                        (values[s] for s in succ), default=0)
                    pending.discard(c)
                    changed = True
        for c in pending:
            values[c] = None
        return values

    def _cycle_classes(self, orbit: set[int]) -> list[int]:
        """Classes that reappear among their own iterated syzygies."""
        out = []
        for c in sorted(orbit):
            frontier = set(self.omega_of(c))
            seen = set(frontier)
            while frontier:
                if c in frontier:
                    out.append(c)
                    break
                nxt = set()
                for d in frontier:
                    nxt.update(self.omega_of(d))
                frontier = nxt - seen
                seen |= frontier
        return out

    # --- public invariants ---

    def pd(self, m: Module, max_depth: int = DEFAULT_DEPTH) -> PdResult:
        if max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        seeds = set(self.class_multiset(m))
        if not seeds:
            return PdResult("finite", 0)
        closed, orbit, depth = self.closure(seeds, max_depth)
        if not closed:
            return PdResult("unknown", depth_reached=depth)
        values = self._resolve_graph(orbit)
        if all(values[c] is not None for c in seeds):
            return PdResult("finite", max(values[c] for c in seeds))
        cycles = [c for c in self._cycle_classes(orbit)]
        return PdResult("infinite", cycle_witness=cycles)

    def pd_class(self, cid: int, max_depth: int = DEFAULT_DEPTH) -> PdResult:
        return self.pd(self.registry.witness(cid), max_depth)

    def k_class(self, m: Module) -> KVector:
        return KVector(self.registry, dict(self.class_multiset(m)))

    def span_generators(self, m: Module) -> list[KVector]:
        return [KVector(self.registry, {c: 1})
                for c in sorted(self.class_multiset(m))]

    def phi(self, m: Module, max_depth: int = DEFAULT_DEPTH) -> PhiResult:
        if max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        gens = sorted(set(self.class_multiset(m)))
        if not gens:
            return PhiResult(0, [0], 0)
        closed, orbit, depth = self.closure(set(gens), max_depth)
        if not closed:
            return PhiResult(None, self._partial_trace(gens, depth), None)
        order = sorted(orbit)
        idx = {c: i for i, c in enumerate(order)}
        size = len(order)
        w = np.zeros((size, size), dtype=object)
        for c in order:
            for d, mult in self.omega_of(c).items():
                w[idx[d], idx[c]] = mult
        v = np.zeros((size, len(gens)), dtype=object)
        for k, g in enumerate(gens):
            v[idx[g], k] = 1
        # integer matrix rank powers stabilize within |orbit| steps
        trace = [gfp.rank_int(v)]
        for _ in range(size + 1):
            v = w @ v
            trace.append(gfp.rank_int(v))
        assert all(a >= b for a, b in zip(trace, trace[1:])), \
            "rank trace must be non-increasing"
        tail = trace[-1]
        value = next(i for i, r in enumerate(trace) if r == tail)
        return PhiResult(value, trace, depth)

    def _partial_trace(self, gens: list[int], depth: int) -> list[int]:
        """Ranks computable before orbit closure (transition data exists
        for every class reachable in fewer than ``depth`` steps)."""
        trace = []
        vectors: Counter | None = None
        cols = [Counter({g: 1}) for g in gens]
        for step in range(depth + 1):
            support = sorted({c for col in cols for c in col})
            idx = {c: i for i, c in enumerate(support)}
            mat = np.zeros((len(support), len(cols)), dtype=object)
            for k, col in enumerate(cols):
                for c, mult in col.items():
                    mat[idx[c], k] = mult
            trace.append(gfp.rank_int(mat) if support else 0)
            if step == depth:
                break
            nxt_cols = []
            for col in cols:
                out: Counter = Counter()
                for c, mult in col.items():
                    for d, m2 in self.omega_of(c).items():
                        out[d] += mult * m2
                nxt_cols.append(out)
            cols = nxt_cols
        return trace

    def psi(self, m: Module, max_depth: int = DEFAULT_DEPTH) -> PsiReport:
        ph = self.phi(m, max_depth)
        if not ph.decided:
            raise Undecided(
                f"phi of {m.describe()} did not close its syzygy orbit "
                f"within depth {max_depth}")
        current = self.class_multiset(m)
        for _ in range(ph.value):
            nxt: Counter = Counter()
            for c, mult in current.items():
                for d, m2 in self.omega_of(c).items():
                    nxt[d] += mult * m2
            current = nxt
        c_m = sorted(current)
        closed, orbit, _ = self.closure(set(c_m), max_depth)
        assert closed, "orbit closed for phi must stay closed"
        values = self._resolve_graph(orbit)
        finite = [values[c] for c in c_m if values[c] is not None]
        pfd = max(finite, default=0)
        return PsiReport(ph.value, c_m, pfd, ph.value + pfd, ph.rank_trace)

    def psi_dim_finite_family(self, mods: list[Module],
                              max_depth: int = DEFAULT_DEPTH) -> int:
        if not mods:
            raise ValueError("empty family")
        return max(self.psi(m, max_depth).psi for m in mods)


def radcube_pfd_bound(algebra, lattice: SyzygyLattice | None = None,
                      max_depth: int = DEFAULT_DEPTH) -> int:
    """2 + psi(R/rad + R/rad^2), valid whenever rad^3 = 0."""
    from .algebra import radical_power_quotient

    if algebra.nilpotency > 3:
        raise RadCubeNotZero(
            f"rad^3 != 0 (nilpotency degree is {algebra.nilpotency})")
    if lattice is None:
        lattice = SyzygyLattice(algebra)
    m = direct_sum([radical_power_quotient(algebra, 1),
                    radical_power_quotient(algebra, 2)])
    return 2 + lattice.psi(m, max_depth).psi


# module-level conveniences matching the one-shot call shape

def pd(m: Module, max_depth: int = DEFAULT_DEPTH,
       lattice: SyzygyLattice | None = None) -> PdResult:
    return (lattice or SyzygyLattice(m.algebra)).pd(m, max_depth)


def phi(m: Module, max_depth: int = DEFAULT_DEPTH,
        lattice: SyzygyLattice | None = None) -> PhiResult:
    return (lattice or SyzygyLattice(m.algebra)).phi(m, max_depth)


def psi(m: Module, max_depth: int = DEFAULT_DEPTH,
        lattice: SyzygyLattice | None = None) -> PsiReport:
    return (lattice or SyzygyLattice(m.algebra)).psi(m, max_depth)
