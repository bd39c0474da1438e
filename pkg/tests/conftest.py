import numpy as np
import pytest

import qgmaps


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # touch every jitted kernel once so compile time never lands inside a
    # timed acceptance criterion
    d = qgmaps.make_qgaussian(5.0 / 3.0)
    d.cdf(0.7)
    d.quantile(0.7)
    d.sample(4, 0)
    d.cdf_array(np.array([0.1, 2.0]))
    dc = qgmaps.make_qgaussian(0.0)
    dc.cdf(0.5)
    dc.quantile(0.7)
    m = qgmaps.make_map(2.0, 5.0 / 3.0)
    m.eval(0.5)
    m.eval_array(np.array([0.3, 0.9]))
    qgmaps.make_map(0.0, 2.0).eval(1.0)
    qgmaps.gauss_2f1_restricted(0.5, 1.0, 1.5, -1.0)
    qgmaps.inv_erf(0.3)
    qgmaps.inv_reg_inc_beta(0.25, qgmaps.BetaParams(0.5, 0.5))
