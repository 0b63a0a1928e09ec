"""Smoke test of the python bindings: shapes, invariants, and error mapping."""

import math

import numpy as np

import fig


def check_distance_matrix(D, n):
    assert D.shape == (n, n)
    assert np.all(np.isfinite(D))
    assert np.array_equal(D, D.T)
    assert np.all(np.diag(D) == 0.0)
    assert D.min() >= 0.0


def main():
    theta, clean, noisy = fig.simulate_sphere_walk(n=120, sigma_noise=0.1, seed=3)
    assert theta.shape == (120, 2)
    assert clean.shape == (120, 3)
    assert noisy.shape == (120, 3)
    assert np.allclose(np.linalg.norm(clean, axis=1), 1.0)

    F = fig.fourier_features(noisy, b=7, l1=10)
    assert F.shape == (120, 21)
    assert np.allclose(F[:, 0], 1.0)  # constant basis function averages to 1

    D_fig = fig.fig_distance_matrix(noisy)
    check_distance_matrix(D_fig, 120)
    assert np.array_equal(D_fig, fig.fig_distance_matrix(noisy))  # deterministic

    D_dig = fig.dig_distance_matrix(noisy, bins=8)
    check_distance_matrix(D_dig, 120)

    D_raw = fig.euclidean_distance_matrix(noisy)
    check_distance_matrix(D_raw, 120)

    Y, meta, stress = fig.embed(D_fig, t_max=20)
    assert Y.shape == (120, 2)
    assert meta["embed.t_max"] == "20"
    assert int(meta["embed.t_selected"]) >= 1
    assert len(stress) >= 1
    assert all(b <= a + 1e-12 for a, b in zip(stress, stress[1:]))

    r, p = fig.mantel(D_fig, D_fig)
    assert abs(r - 1.0) < 1e-12
    assert math.isnan(p)
    r_theta, p_theta = fig.mantel(
        fig.euclidean_distance_matrix(Y), fig.euclidean_distance_matrix(theta), n_perm=99, seed=1
    )
    assert -1.0 <= r_theta <= 1.0
    assert 0.0 < p_theta <= 1.0

    values, labels, stage = fig.simulate_staged_surrogate(n_segments=40, segment_length=8, d=3)
    assert values.shape == (320, 3)
    assert len(labels) == 320
    assert len(stage) == 320
    assert stage[0] == 0
    assert set(labels) <= {"Awake", "REM", "S-1", "S-2"}

    try:
        fig.fig_distance_matrix(noisy[:1])
    except fig.FigError:
        pass
    else:
        raise AssertionError("single-row input should raise FigError")

    try:
        fig.embed(np.zeros((3, 4)))
    except fig.FigError:
        pass
    else:
        raise AssertionError("non-square distance input should raise FigError")

    print("python smoke test passed")


if __name__ == "__main__":
    main()
