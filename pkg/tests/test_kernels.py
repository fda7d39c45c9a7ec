import numpy as np
import pytest

from billiard_zeta import kernels
from billiard_zeta.realize import realize_window
from billiard_zeta.symbolic import random_word


def _args(scene, word):
    w = realize_window(scene, word)
    idx = np.asarray(word) - 1
    return w, (w.points[:, 0].copy(), w.points[:, 1].copy(), scene.centers[idx, 0].copy(),
               scene.centers[idx, 1].copy(), scene.radii[idx].copy())


@pytest.mark.skipif(kernels.backend != "cython", reason="compiled extension unavailable")
def test_front_chain_backends_agree(three):
    rng = np.random.default_rng(7)
    py, cy = kernels.get_backend("python"), kernels.get_backend("cython")
    for _ in range(5):
        word = tuple(random_word(3, 15, rng))
        _, a = _args(three, word)
        for k0 in (0.0, 1.5):
            r1 = py.front_chain(*a, k0, 0.5)
            r2 = cy.front_chain(*a, k0, 0.5)
            for u, v in zip(r1, r2):
                np.testing.assert_allclose(u, v, rtol=1e-13, atol=1e-15)


def test_backend_selection():
    assert kernels.get_backend("python").__name__.endswith("_pykernels")
    with pytest.raises(ValueError):
        kernels.get_backend("fortran")
    assert kernels.backend in ("python", "cython")


@pytest.mark.skipif(kernels.backend != "cython", reason="compiled extension unavailable")
def test_solve_chain_backends_agree(three, monkeypatch):
    rng = np.random.default_rng(11)
    words = [tuple(random_word(3, 12, rng)) for _ in range(4)]
    ref = [realize_window(three, w).points for w in words]
    monkeypatch.setattr(kernels, "solve_chain", kernels.get_backend("python").solve_chain)
    monkeypatch.setattr(kernels, "front_chain", kernels.get_backend("python").front_chain)
    for w, p in zip(words, ref):
        np.testing.assert_allclose(realize_window(three, w).points, p, atol=1e-12)
