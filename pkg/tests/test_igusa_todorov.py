import numpy as np
import pytest

from findim.algebra import projective, radical_power_quotient, simple
from findim.errors import RadCubeNotZero, Undecided
from findim.igusa_todorov import SyzygyLattice, radcube_pfd_bound
from findim.modules import direct_sum, syzygy, trace_quotient


@pytest.fixture()
def lat53(alg53):
    return SyzygyLattice(alg53)


@pytest.fixture()
def lat23(alg23):
    return SyzygyLattice(alg23)


def deltas(alg):
    n = alg.quiver.vertex_count
    return [trace_quotient(projective(alg, i), range(i + 1, n + 1))
            for i in range(1, n + 1)]


# --- pd ---

def test_pd_of_projectives_is_zero(lat53, alg53):
    for i in alg53.quiver.vertices:
        res = lat53.pd(projective(alg53, i))
        assert res.status == "finite" and res.value == 0


def test_pd_simples_infinite(lat53, alg53):
    for i in alg53.quiver.vertices:
        assert lat53.pd(simple(alg53, i)).status == "infinite"


def test_pd_delta1_ex23_cycle_witness_s2(lat23, alg23):
    d1 = deltas(alg23)[0]
    res = lat23.pd(d1)
    assert res.status == "infinite"
    witness_dims = {lat23.registry.witness(c).dims for c in res.cycle_witness}
    assert witness_dims == {(0, 1)}  # S(2), whose syzygy is itself


def test_pd_zero_module(lat53, alg53):
    from findim.modules import zero_module
    res = lat53.pd(zero_module(alg53))
    assert res.status == "finite" and res.value == 0


# --- k classes ---

def test_k_class_of_projectives_is_zero(lat53, alg53):
    kv = lat53.k_class(direct_sum([projective(alg53, 1), projective(alg53, 2)]))
    assert kv.is_zero


def test_k_class_additive(lat53, alg53):
    m = direct_sum([simple(alg53, 1), syzygy(simple(alg53, 2), 1)])
    k1 = lat53.k_class(m)
    k2 = lat53.k_class(direct_sum([m, m]))
    assert k2.coeffs == {c: 2 * v for c, v in k1.coeffs.items()}


def test_span_generators_of_m_prime(lat53, alg53):
    # M' = Omega Delta(2) + Omega^2 Delta(1) has three distinct classes
    d = deltas(alg53)
    m_prime = direct_sum([syzygy(d[1], 1), syzygy(d[0], 2)])
    assert len(lat53.span_generators(m_prime)) == 3


# --- phi ---

def test_phi_of_projective_is_zero(lat53, alg53):
    res = lat53.phi(projective(alg53, 1))
    assert res.value == 0
    assert res.rank_trace[0] == 0


def test_phi_m_prime_rank_trace(lat53, alg53):
    # hand-computed on the 6-class closed orbit: ranks 3, 2, 2, ...
    d = deltas(alg53)
    m_prime = direct_sum([syzygy(d[1], 1), syzygy(d[0], 2)])
    res = lat53.phi(m_prime)
    assert res.value == 1
    assert res.rank_trace[:3] == [3, 2, 2]
    assert res.orbit_closed_at is not None


def test_phi_omega_q_sum_is_zero(lat53, alg53):
    # S(3)^2 + (3/1)^2: the syzygy permutes the two generator classes
    m = direct_sum([simple(alg53, 3), simple(alg53, 3),
                    syzygy(simple(alg53, 2), 1), syzygy(simple(alg53, 2), 1)])
    res = lat53.phi(m)
    assert res.value == 0
    assert all(r == 2 for r in res.rank_trace)


# --- psi ---

def test_psi_m_prime_is_one(lat53, alg53):
    d = deltas(alg53)
    m_prime = direct_sum([syzygy(d[1], 1), syzygy(d[0], 2)])
    rep = lat53.psi(m_prime)
    assert rep.phi == 1
    assert rep.pfd_c_m == 0   # every class in the orbit has infinite pd
    assert rep.psi == 1


def test_psi_omega_q_sum_is_zero(lat53, alg53):
    m = direct_sum([simple(alg53, 3), simple(alg53, 3),
                    syzygy(simple(alg53, 2), 1), syzygy(simple(alg53, 2), 1)])
    assert lat53.psi(m).psi == 0


def test_psi_radical_quotients(lat53, alg53):
    m = direct_sum([radical_power_quotient(alg53, 1),
                    radical_power_quotient(alg53, 2)])
    assert lat53.psi(m).psi == 2


def test_psi_equals_pd_for_projective_sums(lat53, alg53):
    m = direct_sum([projective(alg53, 1), projective(alg53, 3)])
    assert lat53.psi(m).psi == 0
    assert lat53.pd(m).value == 0


def test_psi_dim_finite_family(lat53, alg53):
    d = deltas(alg53)
    m_prime = direct_sum([syzygy(d[1], 1), syzygy(d[0], 2)])
    m = direct_sum([simple(alg53, 3), simple(alg53, 3),
                    syzygy(simple(alg53, 2), 1), syzygy(simple(alg53, 2), 1)])
    assert lat53.psi_dim_finite_family([m, m_prime]) == 1
    assert lat53.psi_dim_finite_family([projective(alg53, 1)]) == 0


# --- rad-cube bound ---

def test_radcube_bound_ex53(alg53):
    assert radcube_pfd_bound(alg53) == 4


def test_radcube_bound_semisimple():
    from findim.algebra import Quiver, build_algebra
    alg = build_algebra(Quiver(2, ()), [])
    assert radcube_pfd_bound(alg) == 2


def test_radcube_bound_rejects_deep_radical():
    from conftest import rel
    from findim.algebra import Arrow, Quiver, build_algebra
    q = Quiver(1, (Arrow("x", 1, 1),))
    alg = build_algebra(q, [rel("x,x,x,x")])
    assert alg.nilpotency == 4
    with pytest.raises(RadCubeNotZero):
        radcube_pfd_bound(alg)


# --- inequalities from the lattice on corpus modules ---

def test_phi_psi_syzygy_inequalities(lat53, alg53):
    mods = [simple(alg53, i) for i in alg53.quiver.vertices]
    mods += [syzygy(simple(alg53, i), 1) for i in alg53.quiver.vertices]
    mods += [radical_power_quotient(alg53, 2)]
    for m in mods:
        om = syzygy(m, 1)
        assert lat53.phi(m).value <= 1 + lat53.phi(om).value
        assert lat53.psi(m).psi <= 1 + lat53.psi(om).psi


def test_rank_trace_non_increasing_and_phi_zero_when_constant(lat53, alg53):
    m = direct_sum([simple(alg53, 3), syzygy(simple(alg53, 2), 1)])
    res = lat53.phi(m)
    assert all(a >= b for a, b in zip(res.rank_trace, res.rank_trace[1:]))
    if len(set(res.rank_trace)) == 1:
        assert res.value == 0
