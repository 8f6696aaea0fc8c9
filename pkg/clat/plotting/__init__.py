"""Plotting"""

from ._plot import (
    pca_scatter,
    fd_heatmap,
    truncation_sweep,
    fid_convergence,
)
