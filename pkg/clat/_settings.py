"""Configuration for clat"""

import os
import attr
import seaborn as sns
import matplotlib as mpl


def _positive(instance, attribute, value):
    if value is not None and value < 1:
        raise ValueError(f"`{attribute.name}` must be >= 1, got {value}")


@attr.s(auto_attribs=True, kw_only=True)
class RunConfig:
    """Parameters of one end-to-end run

    Attributes
    ----------
    z_dim, w_dim, image_dim, text_dim: `int`
        Widths of the noise, intermediate latent, image and text spaces.
    mapping_depth, synthesis_depth: `int`
        Number of layers of the mapping and synthesis networks.
    n_fit: `int`, (default: 10000)
        Latent samples per condition used to fit a Gaussian.
    n_classify: `int`, (default: 100000)
        Held-out latent samples per condition to classify.
    n_center: `int`, (default: 100000)
        Samples behind every center of mass.
    n_generate: `int`, (default: 2000)
        Generated images per condition for evaluation.
    psi: `list`
        Truncation factors of the sweep.
    mask_k, mask_p:
        Stochastic masking parameters. `mask_k` None means ceil(|S|/2).
    alpha: `float`, (default: 0.5)
        Weight of the condition embedding in the FJD.
    min_count: `int`, (default: 100)
        Labels with lower support are folded into Unknown.
    intra_fid_fraction: `float`, (default: 0.5)
        Fraction of condition entries kept for the I-FID.
    embedding_kind: `str`
        One of {'random-projection', 'identity', 'external-file'}.
    embedding_dim: `int`
        Output width of the random-projection embedding.
    ridge: `float`, (default: None)
        Covariance ridge for classification; None applies 1e-9*trace/n.
    invert_steps: `int`
        Gradient steps of latent inversion.
    seed: `int`
        Root seed of the run.
    data_dir, out_dir: `str`
        Dataset directory and output directory.
        `out_dir` None means `settings.workdir`.
    """
    z_dim: int = attr.ib(default=4, validator=_positive)
    w_dim: int = attr.ib(default=64, validator=_positive)
    image_dim: int = attr.ib(default=192, validator=_positive)
    text_dim: int = attr.ib(default=32, validator=_positive)
    mapping_depth: int = attr.ib(default=8, validator=_positive)
    synthesis_depth: int = attr.ib(default=3, validator=_positive)
    n_fit: int = attr.ib(default=10000, validator=_positive)
    n_classify: int = attr.ib(default=100000, validator=_positive)
    n_center: int = attr.ib(default=100000, validator=_positive)
    n_generate: int = attr.ib(default=2000, validator=_positive)
    psi: list = attr.ib(factory=lambda: [1.0, 0.75, 0.5, 0.25, 0.0])
    mask_k: int = None
    mask_p: float = 0.5
    alpha: float = 0.5
    min_count: int = attr.ib(default=100, validator=_positive)
    intra_fid_fraction: float = 0.5
    embedding_kind: str = 'random-projection'
    embedding_dim: int = attr.ib(default=64, validator=_positive)
    ridge: float = None
    invert_steps: int = 2000
    seed: int = 0
    data_dir: str = None
    out_dir: str = None

    def to_dict(self):
        return attr.asdict(self)


class ClatConfig:
    """configuration class for clat"""

    def __init__(self,
                 workdir='./result_clat',
                 save_fig=False,
                 verbose=False):
        self.workdir = workdir
        self.save_fig = save_fig
        self.verbose = verbose
        self.set_run_config()

    def set_figure_params(self,
                          style='white',
                          font_scale=1.1,
                          dpi=80,
                          dpi_save=150,
                          fig_size=(5.4, 4.8),
                          cmap='viridis',
                          rc=None):
        """Set global parameters of the `pl` figures

        Parameters
        ----------
        style: `str`, optional (default: 'white')
            Axes style, see `seaborn.axes_style`
        font_scale: `float`, optional (default: 1.1)
        dpi: `int`, optional (default: 80)
            Resolution of rendered figures.
        dpi_save: `int`, optional (default: 150)
            Resolution of saved figures.
        fig_size: `tuple`, optional (default: (5.4, 4.8))
            Default size of scatter plots, heatmaps and sweeps.
        cmap: `str`, optional (default: 'viridis')
            Colormap of the FD heatmap.
        rc: `dict`, optional (default: None)
            Matplotlib rc parameters overriding the preset.
        """
        sns.set_theme(context='notebook',
                      style=style,
                      font_scale=font_scale,
                      rc={'figure.dpi': dpi,
                          'savefig.dpi': dpi_save,
                          'figure.figsize': list(fig_size),
                          'image.cmap': cmap,
                          'legend.frameon': False,
                          'pdf.fonttype': 42})
        if rc is not None:
            unknown = [x for x in rc if x not in mpl.rcParams]
            if len(unknown) > 0:
                raise ValueError(f"unrecognized rc parameters {unknown}")
            mpl.rcParams.update(rc)

    def set_workdir(self, workdir=None):
        """Set the working directory

        Datasets are generated into 'data/' and figures saved into
        'figures/' below it. Run outputs go there too unless
        `RunConfig.out_dir` is set.

        Parameters
        ----------
        workdir: `str`, optional (default: None)
            By default the current working directory setting.
        """
        if workdir is None:
            workdir = self.workdir
        os.makedirs(workdir, exist_ok=True)
        self.workdir = str(workdir)
        print(f'Saving results in: {self.workdir}')

    def set_run_config(self, config=None):
        """Set run parameters

        Parameters
        ----------
        config : `RunConfig` or `dict`, optional (default: None)
            Run configuration.
            By default it resets parameters to the default setting.
        """
        if config is None:
            config = RunConfig()
        elif isinstance(config, dict):
            config = RunConfig(**config)
        if not isinstance(config, RunConfig):
            raise ValueError("`config` must be RunConfig or dict")
        self.run_config = config


settings = ClatConfig()
