"""plotting functions"""

import os
import numpy as np
import pandas as pd
import matplotlib.pyplot as plt
import matplotlib as mpl
from matplotlib.patches import Ellipse
import seaborn as sns

from .._settings import settings


def _fig_params(fig_size, save_fig, fig_path):
    if fig_size is None:
        fig_size = mpl.rcParams['figure.figsize']
    if save_fig is None:
        save_fig = settings.save_fig
    if fig_path is None:
        fig_path = os.path.join(settings.workdir, 'figures')
    return fig_size, save_fig, fig_path


def _save(fig, save_fig, fig_path, fig_name, pad=1.08):
    if save_fig:
        if not os.path.exists(fig_path):
            os.makedirs(fig_path)
        fig.tight_layout(pad=pad)
        fig.savefig(os.path.join(fig_path, fig_name),
                    pad_inches=1,
                    bbox_inches='tight')
        plt.close(fig)


def _as_frame(x, name):
    if isinstance(x, str):
        return pd.read_csv(x)
    if not isinstance(x, pd.DataFrame):
        raise ValueError(f"`{name}` must be a DataFrame or a CSV path")
    return x


def pca_scatter(df_scatter,
                df_ellipses=None,
                size=4,
                alpha=0.6,
                fig_size=None,
                save_fig=None,
                fig_path=None,
                fig_name='plot_pca_scatter.pdf',
                **kwargs):
    """Scatter plot of latent samples on their first two PCs

    Parameters
    ----------
    df_scatter: `pandas.DataFrame` or `str`
        Columns ['condition', 'pc1', 'pc2'], e.g. 'pca_scatter.csv'
        (extra columns such as 'sample_id' are ignored).
    df_ellipses: `pandas.DataFrame` or `str`, optional (default: None)
        Confidence ellipses per condition, e.g. 'pca_ellipses.csv'.
    size: `int`, optional (default: 4)
        The marker size
    alpha: `float`, optional (default: 0.6)
        Marker opacity.
    fig_size: `tuple`, optional (default: None)
        figure size.
    save_fig: `bool`, optional (default: None)
        if True,save the figure.
    fig_path: `str`, optional (default: None)
        If save_fig is True, specify figure path.
    fig_name: `str`, optional (default: 'plot_pca_scatter.pdf')
        if `save_fig` is True, specify figure name.
    **kwargs: `dict`, optional
        Other keyword arguments are passed through to ``sns.scatterplot``

    Returns
    -------
    None
    """
    fig_size, save_fig, fig_path = _fig_params(fig_size, save_fig, fig_path)
    df_scatter = _as_frame(df_scatter, 'df_scatter')
    conditions = list(pd.unique(df_scatter['condition']))
    palette = dict(zip(conditions,
                       sns.color_palette(n_colors=len(conditions))))
    fig, ax = plt.subplots(figsize=fig_size)
    sns.scatterplot(ax=ax,
                    data=df_scatter,
                    x='pc1',
                    y='pc2',
                    hue='condition',
                    palette=palette,
                    s=size,
                    alpha=alpha,
                    linewidth=0,
                    **kwargs)
    if df_ellipses is not None:
        df_ellipses = _as_frame(df_ellipses, 'df_ellipses')
        for _, row in df_ellipses.iterrows():
            ax.add_patch(Ellipse((row['center_x'], row['center_y']),
                                 width=row['width'],
                                 height=row['height'],
                                 angle=row['angle'],
                                 fill=False,
                                 edgecolor=palette.get(row['condition'],
                                                       'black')))
    ax.set_xlabel('PC1')
    ax.set_ylabel('PC2')
    ax.legend(bbox_to_anchor=(1, 0.5), loc='center left', frameon=False)
    _save(fig, save_fig, fig_path, fig_name)


def fd_heatmap(df_fd,
               annot=True,
               cmap='viridis',
               fig_size=None,
               save_fig=None,
               fig_path=None,
               fig_name='plot_fd_heatmap.pdf',
               **kwargs):
    """Heatmap of pairwise Frechet distances between conditions

    Parameters
    ----------
    df_fd: `pandas.DataFrame` or `str`
        Square matrix indexed by condition (`FDMatrix.to_frame()`), or
        a table with columns ['condition_a', 'condition_b', 'fd']
        (`FDMatrix.to_table()`, 'fd_matrix.csv').
    annot: `bool`, optional (default: True)
        Write the distances into the cells.
    cmap: `str`, optional (default: 'viridis')
    fig_size: `tuple`, optional (default: None)
        figure size.
    save_fig: `bool`, optional (default: None)
        if True,save the figure.
    fig_path: `str`, optional (default: None)
        If save_fig is True, specify figure path.
    fig_name: `str`, optional (default: 'plot_fd_heatmap.pdf')
        if `save_fig` is True, specify figure name.

    Returns
    -------
    None
    """
    fig_size, save_fig, fig_path = _fig_params(fig_size, save_fig, fig_path)
    if isinstance(df_fd, str):
        df_fd = pd.read_csv(df_fd)
    if 'condition_a' in df_fd.columns:
        order = list(pd.unique(df_fd['condition_a']))
        df_fd = df_fd.pivot(index='condition_a', columns='condition_b',
                            values='fd').loc[order, order]
        df_fd.index.name = None
        df_fd.columns.name = None
    fig, ax = plt.subplots(figsize=fig_size)
    sns.heatmap(df_fd, ax=ax, annot=annot, fmt='.2f', cmap=cmap,
                square=True, **kwargs)
    _save(fig, save_fig, fig_path, fig_name)


def truncation_sweep(df_retention,
                     fig_size=None,
                     save_fig=None,
                     fig_path=None,
                     fig_name='plot_truncation_sweep.pdf',
                     **kwargs):
    """Classification accuracy under truncation for both centers

    Parameters
    ----------
    df_retention: `pandas.DataFrame` or `str`
        Columns ['variant', 'psi', 'accuracy'],
        e.g. 'truncation_retention.csv'.
    fig_size: `tuple`, optional (default: None)
        figure size.
    save_fig: `bool`, optional (default: None)
        if True,save the figure.
    fig_path: `str`, optional (default: None)
        If save_fig is True, specify figure path.
    fig_name: `str`, optional (default: 'plot_truncation_sweep.pdf')
        if `save_fig` is True, specify figure name.

    Returns
    -------
    None
    """
    fig_size, save_fig, fig_path = _fig_params(fig_size, save_fig, fig_path)
    df_retention = _as_frame(df_retention, 'df_retention')
    fig, ax = plt.subplots(figsize=fig_size)
    sns.lineplot(ax=ax, data=df_retention, x='psi', y='accuracy',
                 hue='variant', marker='o', **kwargs)
    ax.set_xlabel(r'$\psi$')
    ax.set_ylim(-0.05, 1.05)
    ax.invert_xaxis()
    _save(fig, save_fig, fig_path, fig_name)


def fid_convergence(df_fid,
                    log=True,
                    fig_size=None,
                    save_fig=None,
                    fig_path=None,
                    fig_name='plot_fid_convergence.pdf'):
    """FID against the number of samples

    Parameters
    ----------
    df_fid: `pandas.DataFrame`
        Output of `tl.fid_convergence()`.
    log: `bool`, optional (default: True)
        Logarithmic sample-size axis.
    fig_size: `tuple`, optional (default: None)
        figure size.
    save_fig: `bool`, optional (default: None)
        if True,save the figure.
    fig_path: `str`, optional (default: None)
        If save_fig is True, specify figure path.
    fig_name: `str`, optional (default: 'plot_fid_convergence.pdf')
        if `save_fig` is True, specify figure name.

    Returns
    -------
    None
    """
    fig_size, save_fig, fig_path = _fig_params(fig_size, save_fig, fig_path)
    df_fid = _as_frame(df_fid, 'df_fid')
    fig, ax = plt.subplots(figsize=fig_size)
    ax.plot(df_fid['size'], df_fid['fid'], marker='o')
    if log:
        ax.set_xscale('log')
    ax.set_xlabel('Number of samples')
    ax.set_ylabel('FID')
    ax.set_ylim(bottom=np.minimum(0, df_fid['fid'].min()))
    _save(fig, save_fig, fig_path, fig_name)
