import numpy as np
import pytest

from qgraph import backend
from qgraph.oscint.real import CHECK_RULE, DEFAULT_RULE

pytestmark = pytest.mark.skipif(backend.compiled_kernels is None, reason="compiled kernels not built")

py = backend.get("python")


def cy():
    return backend.get("cython")


def test_get_rejects_unknown():
    with pytest.raises(ValueError):
        backend.get("fortran")


@pytest.mark.parametrize("rule", [DEFAULT_RULE, CHECK_RULE])
def test_mu_hat_many_agree(rule):
    rng = np.random.default_rng(0)
    xs = np.concatenate([rng.uniform(-50, 50, 200), rng.uniform(-1e4, 1e4, 20), [0.0]])
    ys = np.concatenate([rng.uniform(-50, 50, 200), rng.uniform(-1e4, 1e4, 20), [0.0]])
    for T in (1.0, 10.0, 20.0):
        a = py.mu_hat_many(xs, ys, T, *rule.args())
        b = cy().mu_hat_many(xs, ys, T, *rule.args())
        assert np.max(np.abs(a - b)) < 1e-12


def test_point_grid_and_integral_agree():
    args = DEFAULT_RULE.args()
    xs = np.linspace(-5, 5, 7)
    assert np.allclose(py.mu_hat_grid(xs, xs, 3.0, *args), cy().mu_hat_grid(xs, xs, 3.0, *args), atol=1e-12)
    assert py.mu_hat_point(1.5, -2.0, 4.0, *args) == pytest.approx(cy().mu_hat_point(1.5, -2.0, 4.0, *args), abs=1e-12)
    za, na = py.osc_integral(3.0, 0.5, -1.0, 2.0, *args)
    zb, nb = cy().osc_integral(3.0, 0.5, -1.0, 2.0, *args)
    assert abs(za - zb) < 1e-12 and na == nb


@pytest.mark.parametrize("case", [
    (3, 4, 1, 4, 2, 2, -1), (5, 3, 2, 3, 0, 0, 1), (7, 2, 3, 1, 5, 2, -1), (3, 6, 1, 3, 2, 5, 1),
])
def test_unit_phase_counts_agree(case):
    assert np.array_equal(py.unit_phase_counts(*case), cy().unit_phase_counts(*case))
