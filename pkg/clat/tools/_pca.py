"""Principal component analysis of latent samples"""

import numpy as np
import attr
from sklearn.decomposition import PCA


@attr.s(frozen=True, eq=False)
class PCAProjection:
    """Fitted principal components

    Attributes
    ----------
    components: `numpy.ndarray`
        k orthonormal rows of shape (k, n).
    explained_variance: `numpy.ndarray`
    explained_variance_ratio: `numpy.ndarray`
    mean: `numpy.ndarray`
    """
    components = attr.ib()
    explained_variance = attr.ib()
    explained_variance_ratio = attr.ib()
    mean = attr.ib()

    def transform(self, X):
        return (np.asarray(X, dtype=np.float64) - self.mean) \
            @ self.components.T


def pca_project(X, k=2):
    """Project samples onto their top-k principal components

    Parameters
    ----------
    X: `numpy.ndarray`
        Sample matrix of shape (N, n).
    k: `int`, optional (default: 2)
        Number of components, 1 <= k <= min(N-1, n).

    Returns
    -------
    proj: `PCAProjection`
    X_pca: `numpy.ndarray`
        Centered projection of shape (N, k).
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError(f"`X` must be 2-D, got shape {X.shape}")
    k_max = min(X.shape[0] - 1, X.shape[1])
    if not 1 <= k <= k_max:
        raise ValueError(f"`k` must lie in [1, {k_max}], got {k}")
    model = PCA(n_components=k, svd_solver='full')
    X_pca = model.fit_transform(X)
    proj = PCAProjection(components=model.components_,
                         explained_variance=model.explained_variance_,
                         explained_variance_ratio=(
                             model.explained_variance_ratio_),
                         mean=model.mean_)
    return proj, X_pca


def pca(adata,
        n_components=2,
        ):
    """perform Principal Component Analysis (PCA) on latent samples

    Parameters
    ----------
    adata: AnnData
        Latent samples, e.g. from `tl.sample_latents()`.
    n_components: `int`, optional (default: 2)
        Desired dimensionality of output data

    Returns
    -------
    updates `adata` with the following fields:
    `.obsm['X_pca']` : `array`
        PCA transformed X.
    `.uns['pca']['PCs']` : `array`
        Principal components in latent space.
    `.uns['pca']['variance']` : `array`
        Variance explained by each of the selected components.
    `.uns['pca']['variance_ratio']` : `array`
        Percentage of variance explained by each of the selected components.
    `.uns['pca']['mean']` : `array`
        Mean subtracted before projecting.
    """
    proj, X_pca = pca_project(adata.X, k=n_components)
    adata.obsm['X_pca'] = X_pca
    adata.uns['pca'] = dict()
    adata.uns['pca']['n_pcs'] = n_components
    adata.uns['pca']['PCs'] = proj.components.T
    adata.uns['pca']['variance'] = proj.explained_variance
    adata.uns['pca']['variance_ratio'] = proj.explained_variance_ratio
    adata.uns['pca']['mean'] = proj.mean


def confidence_ellipse(projected, k_sigma=3):
    """Covariance confidence ellipse of a 2-D point cloud

    Parameters
    ----------
    projected: `numpy.ndarray`
        Points of shape (N, 2), N >= 2.
    k_sigma: `float`, optional (default: 3)
        Number of standard deviations spanned by each half-axis.

    Returns
    -------
    ellipse: `dict`
        'center_x', 'center_y', 'width', 'height' (full axis lengths)
        and 'angle' of the major axis in degrees.
    """
    projected = np.asarray(projected, dtype=np.float64)
    if projected.ndim != 2 or projected.shape[1] != 2 \
            or projected.shape[0] < 2:
        raise ValueError(f"expected at least 2 points of width 2, "
                         f"got shape {projected.shape}")
    center = projected.mean(axis=0)
    cov = np.cov(projected, rowvar=False)
    eig, vecs = np.linalg.eigh(cov)
    eig = np.clip(eig, 0, None)
    major = vecs[:, 1]
    return {'center_x': float(center[0]),
            'center_y': float(center[1]),
            'width': float(2 * k_sigma * np.sqrt(eig[1])),
            'height': float(2 * k_sigma * np.sqrt(eig[0])),
            'angle': float(np.degrees(np.arctan2(major[1], major[0])))}
