import cmath
import math

import pytest

import cph

mpmath = pytest.importorskip("mpmath")


def close(a, b, tol):
    return abs(a - b) <= tol * (1 + abs(b))


@pytest.mark.parametrize("z,m", [(0.3 + 0.2j, 0.4), (1.1 - 0.5j, 0.8 + 0.3j), (-0.7 + 0.9j, -1.5)])
def test_jacobi_against_mpmath(z, m):
    e = cph.jacobi_elliptic(z, m)
    assert close(e.sn, complex(mpmath.ellipfun("sn", z, m)), 1e-12)
    assert close(e.cn, complex(mpmath.ellipfun("cn", z, m)), 1e-12)
    assert close(e.dn, complex(mpmath.ellipfun("dn", z, m)), 1e-12)


def test_elliptic_f_against_mpmath():
    # elliptic_f takes sin(phi); mpmath.ellipf takes the amplitude phi.
    for z, m in [(0.4 + 0.1j, 0.5), (0.2 - 0.3j, 2.0 + 1.0j)]:
        assert close(cph.elliptic_f(z, m), complex(mpmath.ellipf(mpmath.asin(z), m)), 1e-12)


def test_classify_and_integrals():
    g = cph.Germ(1, 2, 1, 1)
    c = cph.classify(g)
    assert c.tag == cph.GermClass.Generic
    fi = cph.first_integrals(g)
    # A = x y / (alpha^2 + beta^2), B = alpha / x + beta / y
    assert close(fi.A, 1 / 5, 1e-15)
    assert close(fi.B, 3, 1e-15)
    assert cph.classify(cph.Germ(0, 1, 1, 0)).tag == cph.GermClass.NullVConst
    assert cph.classify(cph.Germ(1, 1, 1, 1)).tag == cph.GermClass.Exponential


def test_dilation_keeps_invariants():
    g = cph.Germ(1 + 0.5j, 2 - 0.1j, 0.3 + 0.2j, 1.1)
    fi = cph.first_integrals(g)
    for k in (-3, 1, 4):
        h = cph.dilate(g, k)
        assert cph.classify(h).tag == cph.classify(g).tag
        assert close(cph.first_integrals(h).A, fi.A, 1e-12)
        assert close(cph.first_integrals(h).B, fi.B, 1e-12)


def test_closed_forms():
    t = 0.3 + 0.2j
    assert close(cph.solve(cph.Germ(0, 1, 1, 0)).sample(t).u, cmath.tan(t), 1e-12)
    assert close(cph.solve(cph.Germ(1, 0, 1, 0)).sample(t).u, 1 / (1 - t), 1e-12)
    assert close(cph.solve(cph.Germ(1, 1, 1, 1)).sample(t).u, cmath.exp(t), 1e-12)
    with pytest.raises(cph.PoleError):
        cph.solve(cph.Germ(1, 0, 1, 0)).sample(1.0)


def test_continuation_matches_closed_form():
    g = cph.Germ(1, 2, 1, 1)
    sampler = cph.solve(g)
    assert sampler.family == cph.Family.GenericElliptic
    t = 0.4 + 0.3j
    trace = cph.continue_path(g, [0, t])
    assert trace.status == cph.TraceStatus.Completed
    assert cph.state_distance(trace.end, sampler(t)) < 1e-8
    assert trace.times[0] == 0 and trace.times[-1] == t
    assert len(trace.states) == len(trace)


def test_pole_and_bypass():
    g = cph.Germ(1, 0, 1, 0)
    straight = cph.continue_path(g, [0, 2])
    assert straight.status == cph.TraceStatus.Obstructed
    assert abs(straight.obstruction.t_star - 1) < 1e-8
    detour = cph.continue_path(g, [0, 0.5 + 0.5j, 2])
    assert detour.status == cph.TraceStatus.Completed
    assert abs(detour.end.u + 1) < 1e-8


def test_probe_on_tan():
    r = cph.completeness_probe(cph.Germ(0, 1, 1, 0), radius=5, rays=64)
    assert r.converged
    assert len(r.obstructions) == 4
    for p in (math.pi / 2, -math.pi / 2, 3 * math.pi / 2, -3 * math.pi / 2):
        assert min(abs(z - p) for z in r.obstructions) < 1e-4
    assert len(r.per_ray) == 64


def test_loop_monodromy_is_trivial_around_a_pole():
    res = cph.loop_monodromy(cph.Germ(-1, 0, 1, 0, t0=2), center=1, radius=0.5)
    assert not res.branch_changed


def test_errors():
    with pytest.raises(cph.OutOfDomainError):
        cph.classify(cph.Germ(1, 1j, 1, 1))
    with pytest.raises(cph.Error):
        cph.classify(cph.Germ(1, 1j, 1, 1))
    with pytest.raises(ValueError):
        cph.completeness_probe(cph.Germ(1, 2, 1, 1), rays=2)
