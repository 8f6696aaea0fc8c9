import clat as cl
import numpy as np
import pytest
import scipy.stats
from numpy.testing import (
    assert_allclose,
    assert_array_equal,
)

from clat._errors import NumericalError


@pytest.fixture
def mapping():
    mapping, _ = cl.tl.init_models(z_dim=4, c_dim=3, w_dim=8, seed=0)
    return mapping


def _random_spd(rng, n):
    A = rng.standard_normal((n, n))
    return A @ A.T + 0.1 * np.eye(n)


def _fd_oracle(mu1, S1, mu2, S2):
    eig = np.linalg.eigvals(S1 @ S2)
    tr = np.sum(np.sqrt(np.abs(eig.real)))
    d = mu1 - mu2
    return np.sqrt(max(d @ d + np.trace(S1) + np.trace(S2) - 2 * tr, 0))


def test_sample_condition_points(mapping):
    c = np.eye(3)[0]
    X = cl.tl.sample_condition_points(mapping, c, 50, rng=3)
    assert X.shape == (50, 8)
    assert_array_equal(X, cl.tl.sample_condition_points(mapping, c, 50,
                                                         rng=3))
    X_w = cl.tl.sample_condition_points(mapping, c, 50, space='W', rng=3)
    assert_allclose(X, cl.tl.p_transform(X_w, 'W->P').data, rtol=1e-15)
    with pytest.raises(ValueError):
        cl.tl.sample_condition_points(mapping, c, 0, rng=3)
    with pytest.raises(ValueError):
        cl.tl.sample_condition_points(mapping, c, 5, space='Z', rng=3)
    with pytest.raises(ValueError):
        cl.tl.sample_condition_points(mapping, c, 5)


def test_sample_latents(mapping):
    conditions = {'A': np.eye(3)[0], 'B': np.eye(3)[1]}
    adata = cl.tl.sample_latents(mapping, conditions, 20, seed=1)
    assert adata.shape == (40, 8)
    assert list(adata.obs['condition'].cat.categories) == ['A', 'B']
    assert (adata.obs['condition'][:20] == 'A').all()
    assert adata.uns['space'] == 'P'
    adata_2 = cl.tl.sample_latents(mapping, conditions, 20, seed=1)
    assert_array_equal(adata.X, adata_2.X)
    # each condition draws from its own stream
    adata_3 = cl.tl.sample_latents(mapping, {'B': np.eye(3)[1]}, 20, seed=1)
    assert_array_equal(adata.X[20:], adata_3.X)


def test_fit_gaussian_small():
    g = cl.tl.fit_gaussian(np.array([[0.0, 0.0], [2.0, 2.0]]),
                           condition='A')
    assert_array_equal(g.mu, [1, 1])
    assert_allclose(g.sigma, [[2, 2], [2, 2]])
    assert g.sample_count == 2
    assert g.degenerate
    with pytest.raises(ValueError):
        cl.tl.fit_gaussian(np.zeros((1, 3)))
    with pytest.raises(NumericalError):
        cl.tl.fit_gaussian(np.array([[0.0, np.nan], [1.0, 1.0]]))
    with pytest.raises(ValueError):
        cl.tl.ConditionGaussian(mu=np.zeros(2),
                                sigma=np.array([[1.0, 0.5], [0.0, 1.0]]))


def test_fit_gaussian_recovers_parameters():
    rng = np.random.default_rng(0)
    N = 50000
    mu = np.array([1.0, -2.0, 0.5])
    sd = np.array([1.0, 2.0, 0.5])
    X = mu + sd * rng.standard_normal((N, 3))
    g = cl.tl.fit_gaussian(X)
    assert not g.degenerate
    assert (np.abs(g.mu - mu) < 4 * sd / np.sqrt(N)).all()
    assert (np.abs(np.diag(g.sigma) - sd ** 2)
            < 4 * sd ** 2 * np.sqrt(2 / (N - 1))).all()
    off = ~np.eye(3, dtype=bool)
    assert (np.abs(g.sigma[off])
            < 4 * np.outer(sd, sd)[off] / np.sqrt(N)).all()


def test_log_pdf():
    g1 = cl.tl.ConditionGaussian(mu=np.zeros(1), sigma=np.eye(1))
    assert cl.tl.log_pdf(np.zeros(1), g1, ridge=0.0) \
        == pytest.approx(-0.5 * np.log(2 * np.pi), rel=1e-12)

    g3 = cl.tl.ConditionGaussian(mu=np.zeros(3), sigma=np.eye(3))
    x = np.array([1.0, -2.0, 0.5])
    assert cl.tl.log_pdf(x, g3, ridge=0.0) == pytest.approx(
        -1.5 * np.log(2 * np.pi) - 0.5 * x @ x, rel=1e-12)

    rng = np.random.default_rng(4)
    S = _random_spd(rng, 5)
    mu = rng.standard_normal(5)
    g5 = cl.tl.ConditionGaussian(mu=mu, sigma=S)
    points = rng.standard_normal((20, 5))
    assert_allclose(cl.tl.log_pdf(points, g5, ridge=0.0),
                    scipy.stats.multivariate_normal(mu, S).logpdf(points),
                    rtol=1e-10)

    with pytest.raises(ValueError):
        cl.tl.log_pdf(np.zeros(4), g3)
    g_bad = cl.tl.ConditionGaussian(mu=np.zeros(2), sigma=-np.eye(2))
    with pytest.raises(NumericalError):
        cl.tl.log_pdf(np.zeros(2), g_bad, ridge=0.0)


def test_classify():
    g0 = cl.tl.ConditionGaussian(mu=np.zeros(2), sigma=np.eye(2),
                                 condition='A')
    g1 = cl.tl.ConditionGaussian(mu=np.full(2, 5.0), sigma=np.eye(2),
                                 condition='B')
    assert cl.tl.classify(np.array([0.1, -0.2]), [g0, g1]) == 0
    assert cl.tl.classify(np.array([4.8, 5.5]), [g0, g1]) == 1
    assert_array_equal(cl.tl.classify(np.array([[5.0, 5.0], [0.0, 0.0]]),
                                      [g0, g1]), [1, 0])
    # ties go to the first condition
    assert cl.tl.classify(np.array([2.5, 2.5]), [g0, g1]) == 0
    assert cl.tl.classify(np.array([3.0, 1.0]), [g1, g1]) == 0

    with pytest.raises(ValueError):
        cl.tl.classify(np.zeros(2), [])
    g_small = cl.tl.fit_gaussian(np.random.default_rng(0).normal(
        size=(2, 2)), condition='C')
    with pytest.raises(NumericalError):
        cl.tl.classify(np.zeros(2), [g0, g_small])


def test_frechet_distance():
    g1 = cl.tl.ConditionGaussian(mu=np.zeros(2), sigma=np.eye(2))
    g2 = cl.tl.ConditionGaussian(mu=np.array([1.0, 3.0]), sigma=np.eye(2))
    assert cl.tl.frechet_distance(g1, g2) == pytest.approx(np.sqrt(10),
                                                           rel=1e-12)
    assert cl.tl.frechet_distance(g1, g1) == 0
    # 1-D: (3 - 0)^2 + (2 - 1)^2
    assert cl.tl.frechet_distance(
        cl.tl.ConditionGaussian(mu=np.zeros(1), sigma=np.eye(1)),
        cl.tl.ConditionGaussian(mu=np.full(1, 3.0), sigma=4 * np.eye(1))) \
        == pytest.approx(np.sqrt(10), rel=1e-12)
    g3 = cl.tl.ConditionGaussian(mu=np.zeros(2), sigma=4 * np.eye(2))
    # sqrt(2 + 8 - 2 * 4)
    assert cl.tl.frechet_distance(g1, g3) == pytest.approx(np.sqrt(2),
                                                           rel=1e-12)

    with pytest.raises(ValueError):
        cl.tl.frechet_distance(g1, cl.tl.ConditionGaussian(
            mu=np.zeros(3), sigma=np.eye(3)))
    g_bad = cl.tl.ConditionGaussian(mu=np.zeros(2),
                                    sigma=np.diag([1.0, -1.0]))
    with pytest.raises(NumericalError):
        cl.tl.frechet_distance(g_bad, g1)


def test_frechet_distance_random_pairs():
    rng = np.random.default_rng(0)
    for _ in range(100):
        n = int(rng.integers(2, 8))
        S1 = _random_spd(rng, n)
        S2 = _random_spd(rng, n)
        mu1 = rng.standard_normal(n)
        mu2 = rng.standard_normal(n)
        g1 = cl.tl.ConditionGaussian(mu=mu1, sigma=S1)
        g2 = cl.tl.ConditionGaussian(mu=mu2, sigma=S2)
        fd = cl.tl.frechet_distance(g1, g2)
        assert fd == pytest.approx(_fd_oracle(mu1, S1, mu2, S2), rel=1e-6)
        assert fd == pytest.approx(cl.tl.frechet_distance(g2, g1),
                                   rel=1e-8)

        S3 = _random_spd(rng, n)
        g3 = cl.tl.ConditionGaussian(mu=rng.standard_normal(n), sigma=S3)
        assert fd <= cl.tl.frechet_distance(g1, g3) \
            + cl.tl.frechet_distance(g3, g2) + 1e-9


def test_fd_matrix():
    rng = np.random.default_rng(1)
    gaussians = [cl.tl.ConditionGaussian(mu=rng.standard_normal(3) * 3,
                                         sigma=_random_spd(rng, 3),
                                         condition=name)
                 for name in 'ABCD']
    fdm = cl.tl.fd_matrix(gaussians)
    assert fdm.conditions == ('A', 'B', 'C', 'D')
    assert_array_equal(np.diag(fdm.values), np.zeros(4))
    assert_array_equal(fdm.values, fdm.values.T)
    assert (fdm.values[~np.eye(4, dtype=bool)] > 0).all()

    perm = [2, 0, 3, 1]
    fdm_perm = cl.tl.fd_matrix([gaussians[i] for i in perm])
    assert fdm_perm.conditions == ('C', 'A', 'D', 'B')
    assert_allclose(fdm_perm.values, fdm.values[np.ix_(perm, perm)],
                    rtol=1e-8)

    nearest = fdm.nearest
    for i, name in enumerate(fdm.conditions):
        d = fdm.values[i].copy()
        d[i] = np.inf
        assert nearest[name] == fdm.conditions[int(np.argmin(d))]
    df = fdm.to_frame()
    assert list(df.index) == ['A', 'B', 'C', 'D']
    assert df.loc['B', 'C'] == fdm.values[1, 2]
    df_table = fdm.to_table()
    assert list(df_table.columns) == ['condition_a', 'condition_b', 'fd']
    assert len(df_table) == 16
    assert df_table.iloc[6].tolist() == ['B', 'C', fdm.values[1, 2]]

    assert cl.tl.fd_matrix(gaussians[:2], conditions=['x', 'y']).conditions \
        == ('x', 'y')
    with pytest.raises(ValueError):
        cl.tl.fd_matrix(gaussians[:1])


def test_pca_project():
    rng = np.random.default_rng(0)
    X = rng.standard_normal((20000, 4)) * np.array([4.0, 2.0, 1.0, 1.0])
    proj, X_pca = cl.tl.pca_project(X, k=2)
    assert X_pca.shape == (20000, 2)
    assert_allclose(proj.explained_variance_ratio, [16 / 22, 4 / 22],
                    atol=0.01)
    assert_allclose(proj.components @ proj.components.T, np.eye(2),
                    atol=1e-12)
    assert_allclose(proj.transform(X), X_pca, atol=1e-9)
    assert abs(proj.components[0, 0]) > 0.99

    X_iso = rng.standard_normal((100000, 5))
    proj_iso, _ = cl.tl.pca_project(X_iso, k=5)
    assert_allclose(proj_iso.explained_variance_ratio, np.full(5, 0.2),
                    atol=0.02)
    assert proj_iso.explained_variance_ratio.sum() == pytest.approx(1)

    with pytest.raises(ValueError):
        cl.tl.pca_project(X, k=5)
    with pytest.raises(ValueError):
        cl.tl.pca_project(X[:3], k=3)


def test_confidence_ellipse():
    rng = np.random.default_rng(2)
    P = rng.standard_normal((100000, 2)) * np.array([3.0, 1.0]) \
        + np.array([1.0, -1.0])
    ellipse = cl.tl.confidence_ellipse(P, k_sigma=3)
    assert ellipse['center_x'] == pytest.approx(1, abs=0.05)
    assert ellipse['center_y'] == pytest.approx(-1, abs=0.05)
    assert ellipse['width'] == pytest.approx(18, rel=0.02)
    assert ellipse['height'] == pytest.approx(6, rel=0.02)
    assert abs(np.sin(np.radians(ellipse['angle']))) < 0.05
    with pytest.raises(ValueError):
        cl.tl.confidence_ellipse(np.zeros((5, 3)))


def test_pca(mapping):
    conditions = {name: np.eye(3)[i] for i, name in enumerate('ABC')}
    adata = cl.tl.sample_latents(mapping, conditions, 100, seed=0)
    cl.tl.pca(adata, n_components=2)
    assert adata.obsm['X_pca'].shape == (300, 2)
    assert adata.uns['pca']['PCs'].shape == (8, 2)
    assert adata.uns['pca']['variance_ratio'][0] \
        >= adata.uns['pca']['variance_ratio'][1]
