import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rhmsp.model import (HurstRangeError, HurstSyntaxError, KernelVariant,
                         ProcessSpec, StabilityIndex, eval_kernel,
                         kernel_hat_Y, parse_hurst)

from conftest import make_spec


# ---------------------------------------------------------------------------
# StabilityIndex
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("bad", [1.0, 2.0, 0.5, 2.5, float("nan"), float("inf")])
def test_alpha_domain_rejected(bad):
    with pytest.raises(ValueError):
        StabilityIndex(bad)


def test_beta_is_conjugate_exponent():
    for a in (1.2, 1.5, 1.8):
        idx = StabilityIndex(a)
        assert 1.0 / a + 1.0 / idx.beta == pytest.approx(1.0, abs=1e-15)


# ---------------------------------------------------------------------------
# Hurst mini-language
# ---------------------------------------------------------------------------

def test_parse_const():
    h = parse_hurst("const:0.5", 4.0)
    assert h(0.0) == 0.5 and h(3.0) == 0.5
    assert h.h_hat == h.h_check == 0.5
    assert h.holder_const == 0.0


def test_parse_affine():
    h = parse_hurst("affine:0.3,0.05", 4.0)
    assert h(2.0) == pytest.approx(0.4)
    assert h.h_hat == pytest.approx(0.3)
    assert h.h_check == pytest.approx(0.5)
    assert h.holder_const == pytest.approx(0.05)


def test_parse_sine_with_phase():
    h = parse_hurst("sine:0.5,0.2,2,0.7", 10.0)
    assert h(1.3) == pytest.approx(0.5 + 0.2 * math.sin(2 * 1.3 + 0.7))
    # long horizon reaches both extremes
    assert h.h_hat == pytest.approx(0.3)
    assert h.h_check == pytest.approx(0.7)


def test_parse_logistic_monotone():
    h = parse_hurst("logistic:0.3,0.7,2,3", 4.0)
    ts = np.linspace(0.0, 4.0, 50)
    vals = h(ts)
    assert np.all(np.diff(vals) > 0)
    assert h.h_hat == pytest.approx(float(vals[0]))
    assert h.h_check == pytest.approx(float(vals[-1]))


@pytest.mark.parametrize("text,pos", [
    ("const", 5),          # no separator
    ("parab:0.5", 0),      # unknown form
    ("const:0.5,0.6", 6),  # wrong arity
    ("const:x", 6),        # bad literal
    ("const: 0.5", 6),     # padded token
])
def test_syntax_errors_carry_position(text, pos):
    with pytest.raises(HurstSyntaxError) as err:
        parse_hurst(text, 4.0)
    assert err.value.position == pos


def test_range_error_when_leaving_unit_interval():
    with pytest.raises(HurstRangeError):
        parse_hurst("affine:0.5,0.2", 4.0)   # reaches 1.3 at t=4
    with pytest.raises(HurstRangeError):
        parse_hurst("sine:0.1,0.2,1", 4.0)   # dips below 0


@given(base=st.floats(0.35, 0.65), amp=st.floats(0.01, 0.3),
       freq=st.floats(0.1, 6.0), phase=st.floats(0.0, 6.0),
       a=st.floats(0.0, 3.0), width=st.floats(0.01, 1.0))
@settings(max_examples=60, deadline=None)
def test_range_on_bounds_dense_samples(base, amp, freq, phase, a, width):
    try:
        h = parse_hurst("sine:%r,%r,%r,%r" % (base, amp, freq, phase), 4.0)
    except HurstRangeError:
        return
    b = min(a + width, 4.0)
    lo, hi = h.range_on(a, b)
    vals = h(np.linspace(a, b, 400))
    assert lo <= np.min(vals) + 1e-12
    assert hi >= np.max(vals) - 1e-12
    # endpoints and interior critical points are the only candidates, so the
    # analytic range is attained up to sampling resolution
    assert np.min(vals) - lo <= amp * (freq * width / 399.0) ** 2 + 1e-12
    assert hi - np.max(vals) <= amp * (freq * width / 399.0) ** 2 + 1e-12


def test_spec_text_roundtrip():
    h = parse_hurst("sine:0.5,0.2,2", 4.0)
    h2 = parse_hurst(h.spec_text(), 4.0)
    assert h2.params == h.params and h2.form == h.form


# ---------------------------------------------------------------------------
# ProcessSpec
# ---------------------------------------------------------------------------

def test_process_spec_config_roundtrip():
    spec = make_spec(alpha=1.7, hurst="sine:0.5,0.1,1", kernel="Y", horizon=2.0)
    again = ProcessSpec.from_config(spec.to_config())
    assert again == spec


def test_process_spec_horizon_mismatch():
    h = parse_hurst("const:0.5", 1.0)
    with pytest.raises(ValueError):
        ProcessSpec(alpha=StabilityIndex(1.5), hurst=h,
                    kernel=KernelVariant.X, horizon=4.0)


# ---------------------------------------------------------------------------
# kernels
# ---------------------------------------------------------------------------

def test_kernel_x_matches_formula():
    spec = make_spec()
    t, x = 0.7, 1.3
    p = 0.5 + 1.0 / 1.5
    want = (np.exp(1j * t * x) - 1.0) * abs(x) ** (-p)
    assert eval_kernel(spec, t, x) == pytest.approx(want)


def test_kernel_hermitian_symmetry():
    for kern in ("X", "Y", "F1"):
        spec = make_spec(kernel=kern)
        xs = np.array([0.3, 1.0, 2.7])
        assert np.allclose(eval_kernel(spec, 0.9, -xs),
                           np.conj(eval_kernel(spec, 0.9, xs)))


def test_kernel_f1_is_minus_y_reflected():
    spec_y = make_spec(kernel="Y")
    spec_f1 = make_spec(kernel="F1")
    xs = np.array([0.4, 1.1, 3.0, -0.8])
    assert np.allclose(eval_kernel(spec_f1, 0.6, xs),
                       -eval_kernel(spec_y, 0.6, -xs))


def test_kernel_variants_share_modulus():
    xs = np.array([0.2, 0.9, 4.0])
    mods = [np.abs(eval_kernel(make_spec(kernel=k), 1.3, xs))
            for k in ("X", "Y", "F1")]
    assert np.allclose(mods[0], mods[1]) and np.allclose(mods[0], mods[2])


def test_kernel_rejects_origin_and_bad_t():
    spec = make_spec()
    with pytest.raises(ValueError):
        eval_kernel(spec, 1.0, 0.0)
    with pytest.raises(ValueError):
        eval_kernel(spec, -0.1, 1.0)
    with pytest.raises(ValueError):
        eval_kernel(spec, 5.0, 1.0)


# ---------------------------------------------------------------------------
# closed-form transform of the Y kernel
# ---------------------------------------------------------------------------

def test_kernel_hat_y_support_and_value():
    spec = make_spec(kernel="Y")
    t = 1.0
    p = 0.5 + 1.0 / 1.5
    # vanishes beyond t
    assert kernel_hat_Y(spec, t, 1.5) == 0.0
    # on (0, t): only the -(t-u)_+^{p-1} term is active
    u = 0.4
    want = -2.0 * math.pi / math.gamma(p) * (t - u) ** (p - 1.0)
    assert kernel_hat_Y(spec, t, u) == pytest.approx(want, rel=1e-14)
    # on (-inf, 0): both terms active
    u = -0.3
    want = 2.0 * math.pi / math.gamma(p) * ((-u) ** (p - 1.0)
                                            - (t - u) ** (p - 1.0))
    assert kernel_hat_Y(spec, t, u) == pytest.approx(want, rel=1e-14)


def test_kernel_hat_y_requires_y():
    with pytest.raises(ValueError):
        kernel_hat_Y(make_spec(kernel="X"), 1.0, 0.5)
