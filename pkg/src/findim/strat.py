"""Stratifying systems, filtrations, Ext-projective covers and the
finitistic-dimension bounds.

Membership in the filtered category is semi-decidable: a Member verdict
carries an explicit peel certificate, NonMember is certified by integer
infeasibility of the dimension vectors, and everything else is Unknown.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import gfp
from .decompose import is_indecomposable
from .errors import (CoverNotFound, EpssNotConverged, MissingAssumption,
                     MissingEpss, NotVerified, Undecided, ValidationFailed)
from .igusa_todorov import DEFAULT_DEPTH, SyzygyLattice
from .modules import (Module, Morphism, direct_power, direct_sum,
                      direct_sum_with_maps, ext1_dim, hom_basis, kernel,
                      syzygy, trace_quotient, universal_extension,
                      zero_module)

ASSUMPTION_FINITISTIC = "3-finitistic"
ASSUMPTION_CARDINAL = "3-cardinal"


# --- verification ---

@dataclass
class ConditionCheck:
    kind: str            # "indecomposable" | "hom-vanishing" | "ext-vanishing"
    i: int
    j: int | None
    value: int
    ok: bool


@dataclass
class StratSystem:
    theta: list[Module]
    checks: list[ConditionCheck]

    @property
    def size(self) -> int:
        return len(self.theta)

    @property
    def verified(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[ConditionCheck]:
        return [c for c in self.checks if not c.ok]

    def module(self, i: int) -> Module:
        return self.theta[i - 1]


def standard_modules(algebra) -> list[Module]:
    """Largest quotients of the projectives with composition factors at
    vertices below them (the canonical system candidates)."""
    from .algebra import projective

    n = algebra.quiver.vertex_count
    out = []
    for i in range(1, n + 1):
        m = trace_quotient(projective(algebra, i), range(i + 1, n + 1))
        out.append(m.with_label(f"D({i})"))
    return out


def verify_stratifying_system(theta: list[Module]) -> StratSystem:
    """Run the indecomposability, hom-vanishing and ext-vanishing checks."""
    if not theta:
        raise ValueError("empty system")
    checks: list[ConditionCheck] = []
    t = len(theta)
    for i in range(1, t + 1):
        ok = is_indecomposable(theta[i - 1])
        checks.append(ConditionCheck("indecomposable", i, None, int(ok), ok))
    for j in range(1, t + 1):
        for i in range(1, t + 1):
            if j > i:
                d = len(hom_basis(theta[j - 1], theta[i - 1]))
                checks.append(ConditionCheck("hom-vanishing", i, j, d, d == 0))
            if j >= i:
                d = ext1_dim(theta[j - 1], theta[i - 1])
                checks.append(ConditionCheck("ext-vanishing", i, j, d, d == 0))
    return StratSystem(list(theta), checks)


# --- dimension-vector feasibility ---

def feasible_multiplicities(m: Module, theta: list[Module],
                            cap: int = 20000) -> list[tuple[int, ...]]:
    """All nonnegative integer solutions of sum m_i dim(theta_i) = dim(m)."""
    target = list(m.dims)
    vecs = [list(t.dims) for t in theta]
    out: list[tuple[int, ...]] = []

    def rec(idx: int, remaining: list[int], acc: list[int]):
        if len(out) >= cap:
            return
        if idx == len(vecs):
            if all(r == 0 for r in remaining):
                out.append(tuple(acc))
            return
        v = vecs[idx]
        bound = min((r // d for r, d in zip(remaining, v) if d), default=None)
        if bound is None:
            # zero module in the system cannot happen; guard anyway
            rec(idx + 1, remaining, acc + [0])
            return
        for k in range(bound + 1):
            rec(idx + 1, [r - k * d for r, d in zip(remaining, v)], acc + [k])

    rec(0, target, [])
    return out


# --- filtration certificates ---

@dataclass
class FiltrationLayer:
    index: int                    # 1-based index into the system
    mult: int
    epi: Morphism                 # current stage -> theta(index)^mult
    kernel: Module
    kernel_inclusion: Morphism


@dataclass
class FiltrationCertificate:
    module: Module
    layers: list[FiltrationLayer]

    def multiplicities(self, size: int) -> tuple[int, ...]:
        counts = Counter()
        for layer in self.layers:
            counts[layer.index] += layer.mult
        return tuple(counts.get(i, 0) for i in range(1, size + 1))

    def verify(self, system: StratSystem) -> bool:
        from .decompose import is_isomorphic

        cur = self.module
        p = cur.algebra.p
        for layer in self.layers:
            if layer.epi.source.dims != cur.dims:
                return False
            if not layer.epi.is_surjective():
                return False
            want = direct_power(system.module(layer.index), layer.mult)
            if layer.epi.target.dims != want.dims:
                return False
            if not is_isomorphic(layer.epi.target, want):
                return False
            ker, _ = kernel(layer.epi)
            if ker.dims != layer.kernel.dims:
                return False
            cur = layer.kernel
        return cur.total_dim == 0


@dataclass
class MembershipResult:
    status: str                   # "member" | "non-member" | "unknown"
    certificate: FiltrationCertificate | None = None

    @property
    def is_member(self) -> bool:
        return self.status == "member"


class _BudgetExhausted(Exception):
    pass


def _stacked_epi(m: Module, target_one: Module, homs) -> Morphism:
    k = len(homs)
    target = direct_power(target_one, k)
    mats = []
    for v in range(len(m.dims)):
        if k:
            mats.append(np.concatenate([h.mats[v] for h in homs], axis=0))
        else:
            mats.append(gfp.zeros(0, m.dims[v]))
    return Morphism(m, target, mats, check=False)


def filtration_search(m: Module, system: StratSystem,
                      budget: int = 4000, seed: int = 0,
                      indices: list[int] | None = None,
                      random_tries: int = 3) -> MembershipResult:
    """Top-down peel search for a filtration of m by the system.

    Peels candidate indices in ascending order; epimorphisms are sought
    by greedily stacking hom-basis elements, then a bounded number of
    seeded random recombinations.
    """
    if not system.verified:
        raise NotVerified("filtration search needs a verified system")
    theta = system.theta
    allowed = indices if indices is not None else list(range(1, system.size + 1))
    sub = [theta[i - 1] for i in allowed]
    if not feasible_multiplicities(m, sub):
        return MembershipResult("non-member")
    rng = np.random.default_rng(seed)
    p = m.algebra.p
    state = {"budget": budget}

    def spend():
        state["budget"] -= 1
        if state["budget"] <= 0:
            raise _BudgetExhausted

    def search(cur: Module) -> list[FiltrationLayer] | None:
        if cur.total_dim == 0:
            return []
        spend()
        feas = feasible_multiplicities(cur, sub)
        if not feas:
            return None
        for pos, i in enumerate(allowed):
            max_m = max(sol[pos] for sol in feas)
            if max_m == 0:
                continue
            homs = hom_basis(cur, theta[i - 1])
            if not homs:
                continue
            greedy: list = []
            for h in homs:
                trial = greedy + [h]
                if _stacked_epi(cur, theta[i - 1], trial).is_surjective():
                    greedy = trial
                if len(greedy) == max_m:
                    break
            for count in range(min(len(greedy), max_m), 0, -1):
                families = [greedy[:count]]
                for _ in range(random_tries):
                    coeff = rng.integers(0, p, size=(count, len(homs)),
                                         dtype=np.int64)
                    fam = []
                    for r in range(count):
                        flat = np.zeros_like(homs[0].flatten())
                        for c, h in zip(coeff[r], homs):
                            if c:
                                flat = (flat + int(c) * h.flatten()) % p
                        from .modules import morphism_from_flat
                        fam.append(morphism_from_flat(cur, theta[i - 1], flat))
                    families.append(fam)
                for fam in families:
                    spend()
                    epi = _stacked_epi(cur, theta[i - 1], fam)
                    if not epi.is_surjective():
                        continue
                    ker, incl = kernel(epi)
                    rest = search(ker)
                    if rest is not None:
                        return [FiltrationLayer(i, count, epi, ker, incl)] + rest
        return None

    try:
        layers = search(m)
    except _BudgetExhausted:
        return MembershipResult("unknown")
    if layers is None:
        return MembershipResult("unknown")
    return MembershipResult("member", FiltrationCertificate(m, layers))


# --- supports ---

@dataclass
class SupportData:
    support: set[int]
    multiplicities: tuple[int, ...]
    min_index: float              # int or +inf for the zero module
    max_index: float              # int or -inf


def support_data(cert: FiltrationCertificate, size: int) -> SupportData:
    mults = cert.multiplicities(size)
    supp = {i + 1 for i, m in enumerate(mults) if m}
    return SupportData(
        supp, mults,
        min(supp) if supp else math.inf,
        max(supp) if supp else -math.inf)


def restrict_system(system: StratSystem,
                    cert: FiltrationCertificate) -> StratSystem:
    supp = sorted(support_data(cert, system.size).support)
    return verify_stratifying_system([system.module(i) for i in supp])


# --- ext-projective systems ---

@dataclass
class Epss:
    system: StratSystem
    q: list[Module]
    epis: list[Morphism]                       # Q(i) -> theta(i)
    kernels: list[Module]
    kernel_certs: list[FiltrationCertificate]

    @property
    def q_sum(self) -> Module:
        return direct_sum(self.q, algebra=self.system.theta[0].algebra)

    def module(self, i: int) -> Module:
        return self.q[i - 1]


def _minimize_approximation(x: Module, eps: Morphism, system: StratSystem,
                            i: int, budget: int, seed: int
                            ) -> tuple[Module, Morphism]:
    """Right-minimal version of an approximation onto theta(i).

    The iterated universal extension can overshoot by Ext-projective
    summands; the minimal approximation (the actual cover) is reached by
    dropping indecomposable summands while the composite stays surjective
    with a kernel filtered by the higher part of the system.
    """
    from .decompose import decompose

    target = eps.target
    higher = list(range(i + 1, system.size + 1))
    leaves = decompose(x).leaves
    if len(leaves) <= 1:
        return x, eps
    kept = list(range(len(leaves)))

    def assemble(subset):
        mods = [leaves[k][0] for k in subset]
        total = direct_sum(mods, algebra=x.algebra)
        mats = []
        for v in range(len(x.dims)):
            cols = [gfp.matmul(eps.mats[v], leaves[k][1].mats[v], x.algebra.p)
                    for k in subset]
            mats.append(np.concatenate(cols, axis=1) if cols
                        else gfp.zeros(target.dims[v], 0))
        return total, Morphism(total, target, mats, check=False)

    def acceptable(subset):
        total, f = assemble(subset)
        if not f.is_surjective():
            return None
        ker, _ = kernel(f)
        if ker.total_dim == 0:
            return total, f
        res = filtration_search(ker, system, budget=budget, seed=seed,
                                indices=higher)
        return (total, f) if res.is_member else None

    changed = True
    while changed and len(kept) > 1:
        changed = False
        for pos in range(len(kept)):
            trial = kept[:pos] + kept[pos + 1:]
            if acceptable(trial) is not None:
                kept = trial
                changed = True
                break
    if len(kept) == len(leaves):
        return x, eps
    total, f = acceptable(kept)
    return total, f


def build_epss(system: StratSystem, iter_cap: int = 8,
               budget: int = 4000, seed: int = 0) -> Epss:
    """Universal-extension construction of the Ext-projective system.

    For each i (descending) the base theta(i) is repeatedly extended by
    theta(j), j > i, until every Ext^1 vanishes; vanishing for j <= i
    follows from the filtration and is re-checked at the end.
    """
    if not system.verified:
        raise NotVerified("epss needs a verified system")
    t = system.size
    theta = system.theta
    from .modules import identity_morphism

    q: list[Module | None] = [None] * t
    epis: list[Morphism | None] = [None] * t
    q[t - 1] = theta[t - 1]
    epis[t - 1] = identity_morphism(theta[t - 1])
    for i in range(t - 1, 0, -1):
        x = theta[i - 1]
        eps = identity_morphism(x)
        converged = False
        for _ in range(iter_cap):
            extended = False
            for j in range(t, i, -1):
                d = ext1_dim(x, theta[j - 1])
                if d:
                    ue = universal_extension(x, theta[j - 1])
                    x = ue.middle
                    eps = eps.compose(ue.epi)
                    extended = True
            if not extended:
                converged = True
                break
        if not converged:
            raise EpssNotConverged(
                f"index {i}: extensions kept appearing after {iter_cap} passes")
        x, eps = _minimize_approximation(x, eps, system, i,
                                         budget=budget, seed=seed)
        q[i - 1] = x
        epis[i - 1] = eps

    kernels, certs = [], []
    for i in range(1, t + 1):
        ker, _ = kernel(epis[i - 1])
        res = filtration_search(
            ker, system, budget=budget, seed=seed,
            indices=list(range(i + 1, t + 1)))
        if not res.is_member:
            raise ValidationFailed(
                f"kernel of Q({i}) -> theta({i}) has no certified filtration "
                f"over the higher part of the system")
        kernels.append(ker)
        certs.append(res.certificate)

    q_sum = direct_sum(q, algebra=theta[0].algebra)
    for j in range(1, t + 1):
        d = ext1_dim(q_sum, theta[j - 1])
        if d:
            raise ValidationFailed(
                f"Ext^1(Q, theta({j})) = {d} after construction")
    for i in range(1, t + 1):
        if not is_indecomposable(q[i - 1]):
            raise ValidationFailed(f"Q({i}) is not indecomposable")
    return Epss(system, [m.with_label(f"Q({i+1})") for i, m in enumerate(q)],
                epis, kernels, certs)


def is_ext_projective(x: Module, system: StratSystem) -> bool:
    if not system.verified:
        raise NotVerified("needs a verified system")
    return all(ext1_dim(x, th) == 0 for th in system.theta)


def is_ext_injective(x: Module, system: StratSystem) -> bool:
    if not system.verified:
        raise NotVerified("needs a verified system")
    return all(ext1_dim(th, x) == 0 for th in system.theta)


@dataclass
class ExtProjectiveCover:
    q0: Module
    epsilon: Morphism
    kernel: Module
    kernel_cert: FiltrationCertificate
    parts: list[int]              # indices j of the Q(j) copies kept


def ext_projective_cover(m: Module, cert: FiltrationCertificate,
                         epss: Epss, budget: int = 4000,
                         seed: int = 0) -> ExtProjectiveCover:
    """Right minimal approximation by add(Q), greedily trimmed.

    Starts from the stacked map (+)_j Q(j)^{dim Hom(Q(j), m)} -> m and
    removes copies (descending j) while the map stays surjective and the
    kernel stays filtered.
    """
    system = epss.system
    t = system.size
    if m.total_dim == 0:
        z = zero_module(m.algebra)
        from .modules import zero_morphism
        return ExtProjectiveCover(z, zero_morphism(z, m), z,
                                  FiltrationCertificate(z, []), [])
    sup = support_data(cert, t)
    i_min = int(sup.min_index)
    copies: list[tuple[int, Morphism]] = []
    for j in range(t, i_min - 1, -1):
        for h in hom_basis(epss.module(j), m):
            copies.append((j, h))

    def assemble(active: list[tuple[int, Morphism]]):
        mods = [epss.module(j) for j, _ in active]
        total, _, _ = direct_sum_with_maps(mods, algebra=m.algebra)
        mats = []
        for v in range(len(m.dims)):
            cols = [h.mats[v] for _, h in active]
            mats.append(np.concatenate(cols, axis=1) if cols
                        else gfp.zeros(m.dims[v], 0))
        return total, Morphism(total, m, mats, check=False)

    def acceptable(active):
        if not active:
            return None
        total, f = assemble(active)
        if not f.is_surjective():
            return None
        ker, _ = kernel(f)
        res = filtration_search(ker, system, budget=budget, seed=seed)
        if not res.is_member:
            return None
        return total, f, ker, res.certificate

    current = list(copies)
    best = acceptable(current)
    if best is None:
        raise CoverNotFound(
            "stacked approximation is not surjective with filtered kernel")
    pos = 0
    while pos < len(current):
        trial = current[:pos] + current[pos + 1:]
        got = acceptable(trial)
        if got is not None:
            current = trial
            best = got
        else:
            pos += 1
    total, f, ker, ker_cert = best
    ker_sup = support_data(ker_cert, t)
    if not ker_sup.min_index > sup.min_index:
        raise CoverNotFound(
            f"postcondition failed: min of the kernel ({ker_sup.min_index}) "
            f"does not exceed min of the module ({sup.min_index})")
    return ExtProjectiveCover(total, f, ker, ker_cert,
                              [j for j, _ in current])


# --- the bounds ---

@dataclass
class InfinitePart:
    infinite: list[int]
    s: int
    pd_values: dict[int, int | None]   # None = infinite


def infinite_part(system: StratSystem, lattice: SyzygyLattice,
                  max_depth: int = DEFAULT_DEPTH) -> InfinitePart:
    values: dict[int, int | None] = {}
    for i in range(1, system.size + 1):
        res = lattice.pd(system.module(i), max_depth)
        if not res.decided:
            raise Undecided(f"pd of member {i} undecided at depth {max_depth}")
        values[i] = res.value if res.is_finite else None
    infinite = sorted(i for i, v in values.items() if v is None)
    finite = [v for v in values.values() if v is not None]
    s = max(finite, default=0)
    return InfinitePart(infinite, s, values)


@dataclass
class BoundReport:
    card_infinity: int
    supported: bool
    infinity_set: list[int]
    s: int
    theorem: str
    bound: int | None
    alpha: int | None = None
    beta: int | None = None
    epsilon0: int | None = None
    psi_dim_bound: int | None = None
    assumptions_used: list[str] = field(default_factory=list)
    bound_by_assumption: dict[str, int] = field(default_factory=dict)


def finitistic_bound(system: StratSystem, lattice: SyzygyLattice,
                     epss: Epss | None = None,
                     max_depth: int = DEFAULT_DEPTH,
                     assumptions: frozenset[str] | set[str] = frozenset()
                     ) -> BoundReport:
    """Bound on the finitistic dimension of the filtered category,
    dispatched on how many system members have infinite pd."""
    if not system.verified:
        raise NotVerified("bounds need a verified system")
    part = infinite_part(system, lattice, max_depth)
    inf_set, s = part.infinite, part.s
    card = len(inf_set)

    def psi_of(mod: Module) -> int:
        return lattice.psi(mod, max_depth).psi

    if card == 0:
        bound = max((v for v in part.pd_values.values() if v is not None),
                    default=0)
        return BoundReport(0, True, [], s, "finite-projective-dimension",
                           bound)
    if card == 1:
        i0 = inf_set[0]
        psi_dim = 1 + s + psi_of(syzygy(system.module(i0), s + 1))
        return BoundReport(1, True, inf_set, s, "single-infinite-index",
                           s, psi_dim_bound=psi_dim)
    if card == 2:
        if epss is None:
            raise MissingEpss("the two-index bound needs the epss (for beta)")
        i0, i1 = inf_set
        alpha = psi_of(direct_sum([syzygy(system.module(i1), s + 1),
                                   syzygy(system.module(i0), s + 2)]))
        beta = psi_of(syzygy(
            direct_sum([epss.q_sum, system.module(i1)]), s + 1))
        return BoundReport(2, True, inf_set, s, "double-infinite-index",
                           s + 2 + min(alpha, beta), alpha=alpha, beta=beta)
    if card == 3:
        if epss is None:
            raise MissingEpss("the three-index bounds need the epss")
        wanted = set(assumptions)
        known = {ASSUMPTION_FINITISTIC, ASSUMPTION_CARDINAL}
        if not wanted:
            raise MissingAssumption(
                "card 3 needs '3-finitistic' or '3-cardinal'")
        if not wanted <= known:
            raise MissingAssumption(f"unknown assumptions: {wanted - known}")
        i0, i1, i2 = inf_set
        th = system.module
        q_sum = epss.q_sum
        theta12 = direct_sum([th(i1), th(i2)])
        theta01 = direct_sum([th(i0), th(i1)])
        eps0 = psi_of(direct_sum([syzygy(th(i2), s + 1),
                                  syzygy(th(i1), s + 2)]))
        by_assumption: dict[str, int] = {}
        if ASSUMPTION_FINITISTIC in wanted:
            tail = psi_of(direct_sum([
                syzygy(direct_sum([theta12, q_sum]), s + eps0 + 3),
                syzygy(theta01, s + eps0 + 4)]))
            by_assumption[ASSUMPTION_FINITISTIC] = s + 4 + eps0 + tail
        if ASSUMPTION_CARDINAL in wanted:
            first = psi_of(direct_sum([syzygy(th(i2), s + 1),
                                       syzygy(q_sum, s + 2)]))
            second = psi_of(direct_sum([
                syzygy(direct_sum([theta12, q_sum]), s + 1),
                syzygy(theta01, s + 2)]))
            by_assumption[ASSUMPTION_CARDINAL] = s + 2 + max(first, second)
        return BoundReport(3, True, inf_set, s, "triple-infinite-index",
                           min(by_assumption.values()), epsilon0=eps0,
                           assumptions_used=sorted(wanted),
                           bound_by_assumption=by_assumption)
    return BoundReport(card, False, inf_set, s, "unsupported", None)


# --- sample-based checks of the two 3-properties ---

@dataclass
class PropertySampleVerdict:
    label: str
    cardinal_applicable: bool
    cardinal_ok: bool | None
    finitistic_applicable: bool
    finitistic_ok: bool | None
    note: str = ""


@dataclass
class ThreePropertyReport:
    verdicts: list[PropertySampleVerdict]

    @property
    def counterexample(self) -> bool:
        return any(v.cardinal_ok is False or v.finitistic_ok is False
                   for v in self.verdicts)


def check_three_properties(system: StratSystem, epss: Epss,
                           samples: list[tuple[Module, FiltrationCertificate]],
                           lattice: SyzygyLattice,
                           max_depth: int = DEFAULT_DEPTH,
                           budget: int = 4000) -> ThreePropertyReport:
    """Evaluate both card-3 hypotheses on explicit samples.

    Never claims the universally quantified property; reports per-sample
    verdicts and whether a counterexample appeared.
    """
    part = infinite_part(system, lattice, max_depth)
    if len(part.infinite) != 3:
        raise ValueError("the 3-properties only apply when card = 3")
    i0, i1, i2 = part.infinite
    verdicts = []
    for mod, cert in samples:
        label = mod.label or mod.describe()
        try:
            cover = ext_projective_cover(mod, cert, epss, budget=budget)
        except CoverNotFound as exc:
            verdicts.append(PropertySampleVerdict(
                label, False, None, False, None, f"cover not found: {exc}"))
            continue
        supp_m = support_data(cert, system.size).support
        supp_k = support_data(cover.kernel_cert, system.size).support
        inf_set = set(part.infinite)

        card_applicable = (supp_m & inf_set) == {i0, i1}
        card_ok = None
        if card_applicable:
            card_ok = len(supp_k & inf_set) <= 1

        fin_applicable = {i1, i2} <= supp_k
        fin_ok = None
        note = ""
        if fin_applicable:
            pd_m = lattice.pd(mod, max_depth)
            if not pd_m.decided:
                note = "pd of the sample undecided"
            elif pd_m.is_finite:
                pd_k = lattice.pd(cover.kernel, max_depth)
                if not pd_k.decided:
                    note = "pd of the kernel undecided"
                else:
                    fin_ok = pd_k.is_finite
            else:
                fin_ok = True  # vacuous: premise needs pd M finite
        verdicts.append(PropertySampleVerdict(
            label, card_applicable, card_ok, fin_applicable, fin_ok, note))
    return ThreePropertyReport(verdicts)


def is_standardly_stratified(algebra, system: StratSystem | None = None,
                             budget: int = 4000, seed: int = 0
                             ) -> MembershipResult:
    """Do all projectives filter through the canonical system?"""
    from .algebra import projective

    if system is None:
        system = verify_stratifying_system(standard_modules(algebra))
    layers_all = []
    any_unknown = False
    for i in algebra.quiver.vertices:
        res = filtration_search(projective(algebra, i), system,
                                budget=budget, seed=seed)
        if res.status == "non-member":
            return MembershipResult("non-member")
        if res.status == "unknown":
            any_unknown = True
        else:
            layers_all.extend(res.certificate.layers)
    if any_unknown:
        return MembershipResult("unknown")
    from .algebra import regular
    return MembershipResult("member",
                            FiltrationCertificate(regular(algebra), layers_all))
