"""End-to-end checks against the TypeScript bridge in frontend/.

Skipped unless the bridge has been built (frontend/dist/main.js) and node is
on PATH; the primary suite never needs it.
"""

import shutil
from pathlib import Path

import numpy as np
import pytest

from pnpdeblur.bridge import BridgeSession, external_denoise
from pnpdeblur.grid import Problem, Psf
from pnpdeblur.linops import psf_to_otf
from pnpdeblur.proximal import dct_l1_prox, identity_denoiser
from pnpdeblur.solver import GammaSchedule, RunConfig, run

BRIDGE_MAIN = Path(__file__).parent.parent / "frontend" / "dist" / "main.js"
NODE = shutil.which("node")

pytestmark = pytest.mark.skipif(
    NODE is None or not BRIDGE_MAIN.exists(),
    reason="frontend bridge not built (cd frontend && npm install && npm run build)",
)


def bridge_cmd(*args):
    return [NODE, str(BRIDGE_MAIN), "serve", *args]


def test_identity_bridge_echo_bitwise(rng):
    v = rng.standard_normal((9, 14))
    out = external_denoise(bridge_cmd("--model", "identity"), v, 0.3)
    assert np.array_equal(out, v)


def test_dct_bridge_matches_in_process_prox(rng):
    v = rng.standard_normal((12, 16))
    out = external_denoise(bridge_cmd("--model", "dct"), v, 0.4)
    assert np.abs(out - dct_l1_prox(v, 0.4)).max() <= 1e-6


def test_solver_run_through_bridge_matches_in_process(rng):
    kernel = np.zeros((3, 3))
    kernel[1, 1] = 1.0
    otf = psf_to_otf(Psf(kernel=kernel, anchor=(1, 1)), 8, 8)
    prob = Problem(g=rng.random((8, 8)), otf=otf)

    cfg_inproc = RunConfig(
        max_iter=20, gamma0=1.0, denoiser=identity_denoiser(),
        schedule=GammaSchedule(mode="fixed"),
    )
    expected = run(prob, cfg_inproc).restored

    from pnpdeblur.bridge import external_bridge_denoiser

    denoiser, session = external_bridge_denoiser(bridge_cmd("--model", "identity"))
    try:
        cfg_bridge = RunConfig(
            max_iter=20, gamma0=1.0, denoiser=denoiser,
            schedule=GammaSchedule(mode="fixed"),
        )
        got = run(prob, cfg_bridge).restored
    finally:
        session.close()
    assert np.array_equal(got, expected)


def test_session_reuse_many_exchanges(rng):
    with BridgeSession(bridge_cmd("--model", "blur:1.0")) as session:
        for _ in range(4):
            v = rng.random((16, 16))
            out = session.denoise(v, 0.1)
            assert out.shape == v.shape
            assert np.isfinite(out).all()
