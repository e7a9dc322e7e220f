import numpy as np
import pytest
from hypothesis import given, strategies as st

from obcalc.contact_verify import (
    GridTooCoarse,
    ProfileError,
    PushOffProfile,
    default_lutz_pair,
    default_profile,
    dflat,
    dstep,
    flat,
    framing_vector,
    pushoff_terms,
    step,
    tangency_distance,
    validate_lutz_pair,
    validate_profile,
    verify_f1_nontangent,
    verify_framing_homotopy,
    verify_pushoff_contact,
)


def numeric_derivative(fn, x, h=1e-6):
    return (fn(x + h) - fn(x - h)) / (2 * h)


def test_step_is_smooth_transition():
    x = np.array([-1.0, 0.0, 0.5, 1.0, 2.0])
    assert np.allclose(step(x), [0, 0, 0.5, 1, 1])


@pytest.mark.parametrize("fn, dfn", [(flat, dflat), (step, dstep)])
def test_derivatives_match_finite_differences(fn, dfn):
    x = np.linspace(0.05, 0.95, 50)
    assert np.allclose(dfn(x), numeric_derivative(fn, x), atol=1e-6)


def test_flat_has_no_nans_near_zero():
    x = np.array([0.0, 1e-300, 1e-200, 1e-3])
    assert np.all(np.isfinite(flat(x))) and np.all(np.isfinite(dflat(x)))


def test_default_lutz_pair_valid():
    failures = [c.name for c in validate_lutz_pair(default_lutz_pair()) if not c.passed]
    assert failures == []


def test_default_profile_valid():
    failures = [c.name for c in validate_profile(default_profile()) if not c.passed]
    assert failures == []


def test_lambda_mu_derivatives_match_finite_differences():
    pair, prof = default_lutz_pair(), default_profile()
    rp = np.linspace(0.01, 1.19, 300)
    t = pushoff_terms(pair, pair, prof, rp)
    for name in ("lambda", "mu"):
        num = numeric_derivative(lambda x: pushoff_terms(pair, pair, prof, x)[name], rp)
        assert np.allclose(t["d" + name], num, atol=1e-5)


def test_contact_report_passes_with_defaults():
    rep = verify_pushoff_contact()
    assert rep.passed and rep.all_passed
    assert rep.minimum > 0 and rep.margin == pytest.approx(rep.minimum - rep.tol)
    assert 0 < rep.argmin["r'"] < 0.01


def test_refinement_never_raises_the_minimum():
    # grids with N and 2N points are nested, so the finer minimum cannot be larger
    coarse = verify_pushoff_contact(grid=2000)
    fine = verify_pushoff_contact(grid=4000)
    assert fine.minimum <= coarse.minimum + 1e-15


def test_coarse_grid_refused():
    with pytest.raises(GridTooCoarse, match="at least"):
        verify_pushoff_contact(grid=50)
    with pytest.raises(GridTooCoarse):
        verify_f1_nontangent(n_rp=40)


@pytest.mark.parametrize("kw", [dict(eps2=0.6, eps3=0.6), dict(eps1=0.0), dict(eps_u=0.5),
                                dict(r_max=0.85)])
def test_degenerate_profiles_rejected(kw):
    with pytest.raises(ProfileError):
        PushOffProfile(**kw)


def test_profile_override_needs_derivative():
    with pytest.raises(ProfileError):
        PushOffProfile(h=lambda x: x)


def broken_profile():
    base = default_profile()

    def bump(x):
        return step((x - 0.08) / 0.02) * (1 - step((x - 0.14) / 0.02))

    def dbump(x):
        return dstep((x - 0.08) / 0.02) / 0.02 * (1 - step((x - 0.14) / 0.02)) \
            - step((x - 0.08) / 0.02) * dstep((x - 0.14) / 0.02) / 0.02

    return PushOffProfile(h=lambda x: base.h_(x) - 0.1 * bump(x),
                          dh=lambda x: base.dh_(x) - 0.1 * dbump(x))


def test_broken_profile_fails_at_located_point():
    prof = broken_profile()
    assert not all(c.passed for c in validate_profile(prof))
    rep = verify_pushoff_contact(prof=prof)
    assert not rep.passed
    assert rep.minimum < 0
    assert 0.08 <= rep.argmin["r'"] <= 0.1
    assert "FAIL" in rep.to_text()


def test_report_serialisation():
    rep = verify_pushoff_contact(grid=2000)
    d = rep.to_dict()
    for key in ("min", "argmin", "margin", "grid", "pass"):
        assert key in d
    assert rep.to_text().splitlines()[0] == "report pushoff-contact: PASS"


@given(st.floats(0, 2 * np.pi), st.floats(0, 1), st.floats(0, 1), st.floats(0.05, 1.2),
       st.floats(0.05, 1.2))
def test_tangency_distance_is_a_projection(theta, t, h, r, rp):
    v = np.array(framing_vector(theta, t, h, r, rp))
    if t > 0.5:
        basis = np.array([[0, 1, 0, 0], [0, 0, 1, 1]], float)
    elif t < 0.5:
        basis = np.array([[1, 1, 0, 0], [0, 0, 1, 1]], float)
    else:
        return
    coef, *_ = np.linalg.lstsq(basis.T, v, rcond=None)
    want = np.linalg.norm(v - basis.T @ coef)
    assert float(tangency_distance(tuple(v), t)) == pytest.approx(want, abs=1e-9)


@given(st.floats(0.5, 1), st.floats(0, 1), st.floats(0.05, 1.2), st.floats(0.05, 1.2))
def test_quarter_turn_reduction(t, h, r, rp):
    # at theta = pi/2 and t >= 1/2 the distance is ((1-h)/r + h/r') / sqrt 2
    v = framing_vector(np.pi / 2, t, h, r, rp)
    want = ((1 - h) / r + h / rp) / np.sqrt(2)
    d = float(tangency_distance(v, t if t > 0.5 else 0.75))
    assert d == pytest.approx(want, rel=1e-9)


def test_framing_report_passes():
    rep = verify_framing_homotopy()
    assert rep.passed and rep.all_passed
    assert rep.grid["samples"] >= 100_000
    cases = [c["case"] for c in rep.certificates]
    assert any("pi/2" in c for c in cases) and any("sin" in c for c in cases)


def test_f1_report_passes():
    rep = verify_f1_nontangent()
    assert rep.passed and rep.all_passed
    assert rep.minimum > 0.5
