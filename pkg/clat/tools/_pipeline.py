"""End-to-end runs over a dataset directory"""

import os
import warnings
import numpy as np
import pandas as pd
from anndata import AnnData

from .._errors import DataFormatError
from .._settings import settings
from .._utils import stage_rng
from .. import readwrite as rw
from ..preprocessing import (
    WILDCARD,
    UNKNOWN,
    ingest_metadata,
    make_condition,
    record_to_condition,
    assemble_condition_vector,
    assemble_condition_matrix,
    apply_wildcard,
    stochastic_mask,
    condition_shape,
)
from ._mapping import (
    init_models,
    map_conditional,
    p_transform,
    synthesize,
)
from ._gaussian import (
    sample_condition_points,
    fit_gaussian,
    classify,
    fd_matrix,
)
from ._pca import (
    pca_project,
    confidence_ellipse,
)
from ._latent_ops import (
    center_of_mass,
    truncate,
    distance_to_center,
    transformation_vector,
    apply_transformation,
    conditional_interpolate,
    invert,
)
from ._metrics import (
    EmbeddingFunction,
    MetricReport,
    fid,
    fjd,
    intra_fid,
    e_qual,
    n_qual,
    e_art,
    qualitative_plan,
)

N_SCATTER = 500
N_SWEEP = 200


def _config(config):
    return settings.run_config if config is None else config


def _out_dir(config, *sub):
    path = os.path.join(config.out_dir if config.out_dir is not None
                        else settings.workdir, *sub)
    os.makedirs(path, exist_ok=True)
    return path


def _data_dir(config):
    if config.data_dir is None:
        raise ValueError("no dataset directory: set `data_dir`")
    return config.data_dir


def dataset_conditions(records, schema):
    """Named conditions of a dataset

    Every condition name found in the records maps to the categorical
    labels of its first record; other sub-conditions are wildcards.

    Returns
    -------
    dict_cond: `dict`
        condition name -> `MultiCondition`
    """
    dict_cond = dict()
    for r in records:
        if r.condition is None or r.condition in dict_cond:
            continue
        dict_cond[r.condition] = make_condition(
            schema, {name: (UNKNOWN if label is None else label)
                     for name, label in r.categorical.items()
                     if name in schema.names})
    if len(dict_cond) == 0:
        raise DataFormatError("the records name no condition")
    return dict_cond


def run_fit(config=None, model_dir=None):
    """Ingest a dataset and initialize the models

    Writes 'schema.json', 'frequencies.csv' and 'models.mdl'.

    Parameters
    ----------
    config: `RunConfig`, optional (default: None)
        By default `settings.run_config`.
    model_dir: `str`, optional (default: None)
        By default the output directory.

    Returns
    -------
    schema: `ConditionSchema`
    mapping: `MappingModel`
    synthesis: `SynthesisModel`
    """
    config = _config(config)
    if model_dir is None:
        model_dir = _out_dir(config)
    os.makedirs(model_dir, exist_ok=True)
    records = rw.read_metadata(os.path.join(_data_dir(config),
                                            'metadata.jsonl'))
    schema, df_freq = ingest_metadata(records,
                                      min_count=config.min_count,
                                      text_dim=config.text_dim,
                                      text_seed=config.seed)
    mapping, synthesis = init_models(z_dim=config.z_dim,
                                     c_dim=schema.total_dim,
                                     w_dim=config.w_dim,
                                     image_dim=config.image_dim,
                                     depth=config.mapping_depth,
                                     seed=config.seed,
                                     synthesis_depth=config.synthesis_depth)
    rw.write_schema(schema, os.path.join(model_dir, 'schema.json'))
    df_freq.to_csv(os.path.join(model_dir, 'frequencies.csv'), index=False)
    rw.write_model(mapping, synthesis, os.path.join(model_dir, 'models.mdl'))
    print(f'Schema and models were written to "{model_dir}".')
    return schema, mapping, synthesis


def load_fit(model_dir):
    """Read the schema and models written by `run_fit()`"""
    for x in ['schema.json', 'models.mdl']:
        if not os.path.exists(os.path.join(model_dir, x)):
            raise FileNotFoundError(f"could not find '{x}' in '{model_dir}'; "
                                    "run `fit` first")
    schema = rw.read_schema(os.path.join(model_dir, 'schema.json'))
    mapping, synthesis = rw.read_model(os.path.join(model_dir, 'models.mdl'))
    if mapping.c_dim != schema.total_dim:
        raise DataFormatError(f"models expect c_dim {mapping.c_dim}, the "
                              f"schema has {schema.total_dim}")
    return schema, mapping, synthesis


def _stage(name, func, *args, **kwargs):
    try:
        return func(*args, **kwargs)
    except ArithmeticError as e:
        raise type(e)(f"stage '{name}': {e}")


def run_analysis(config=None, model_dir=None):
    """Gaussian analysis of the latent space of every dataset condition

    Writes, into the output directory:
    'gaussians.clat', 'classification.csv', 'fd_matrix.csv',
    'fd_nearest.csv', 'pca_scatter.csv', 'pca_ellipses.csv',
    'pca_variance.csv', 'truncation_sweep.csv',
    'truncation_retention.csv' and the centers of mass in 'centers/'.

    Parameters
    ----------
    config: `RunConfig`, optional (default: None)
    model_dir: `str`, optional (default: None)
        Directory of `run_fit()` outputs. By default the output directory.

    Returns
    -------
    bundle: `dict`
        'gaussians', 'classification', 'fd_matrix', 'pca_scatter',
        'pca_ellipses', 'truncation_sweep', 'truncation_retention'.
    """
    config = _config(config)
    out_dir = _out_dir(config)
    if model_dir is None:
        model_dir = out_dir
    schema, mapping, _ = load_fit(model_dir)
    records = rw.read_metadata(os.path.join(_data_dir(config),
                                            'metadata.jsonl'))
    dict_cond = dataset_conditions(records, schema)
    names = list(dict_cond.keys())
    dict_c = {x: assemble_condition_vector(dict_cond[x], schema)
              for x in names}

    gaussians = []
    dict_fit = dict()
    for x in names:
        print(f'Fitting Gaussian for condition {x} ...')
        dict_fit[x] = sample_condition_points(
            mapping, dict_c[x], config.n_fit, space='P',
            rng=stage_rng(config.seed, f'fit:{x}'))
        gaussians.append(_stage(f'fit:{x}', fit_gaussian, dict_fit[x],
                                condition=x))
    rw.write_gaussians(gaussians, os.path.join(out_dir, 'gaussians.clat'))

    list_acc = []
    for i, x in enumerate(names):
        X = sample_condition_points(
            mapping, dict_c[x], config.n_classify, space='P',
            rng=stage_rng(config.seed, f'classify:{x}'))
        pred = _stage(f'classify:{x}', classify, X, gaussians,
                      ridge=config.ridge)
        n_correct = int(np.sum(pred == i))
        list_acc.append([x, X.shape[0], n_correct, n_correct / X.shape[0]])
    df_acc = pd.DataFrame(list_acc, columns=['condition', 'n_classified',
                                             'n_correct', 'accuracy'])
    overall = df_acc['n_correct'].sum() / df_acc['n_classified'].sum()
    df_acc.loc[len(df_acc)] = ['overall', df_acc['n_classified'].sum(),
                               df_acc['n_correct'].sum(), overall]
    df_acc.to_csv(os.path.join(out_dir, 'classification.csv'), index=False)
    print(f'Classification accuracy: {overall:.4f}')

    fdm = _stage('fd_matrix', fd_matrix, gaussians, conditions=names)
    fdm.to_table().to_csv(os.path.join(out_dir, 'fd_matrix.csv'),
                          index=False)
    pd.DataFrame([[x, y, fdm.values[i, names.index(y)]]
                  for i, (x, y) in enumerate(fdm.nearest.items())],
                 columns=['condition', 'nearest', 'fd']).to_csv(
        os.path.join(out_dir, 'fd_nearest.csv'), index=False)

    n_scatter = min(N_SCATTER, config.n_fit)
    X_all = np.vstack([dict_fit[x][:n_scatter] for x in names])
    proj, X_pca = pca_project(X_all, k=2)
    df_scatter = pd.DataFrame(X_pca, columns=['pc1', 'pc2'])
    df_scatter.insert(0, 'condition', np.repeat(names, n_scatter))
    df_scatter.insert(0, 'sample_id', [f'{x}_{i}' for x in names
                                       for i in range(n_scatter)])
    df_scatter.to_csv(os.path.join(out_dir, 'pca_scatter.csv'), index=False)
    df_ellipses = pd.DataFrame(
        [dict(condition=x, **confidence_ellipse(
            X_pca[i * n_scatter:(i + 1) * n_scatter], k_sigma=3))
         for i, x in enumerate(names)])
    df_ellipses.to_csv(os.path.join(out_dir, 'pca_ellipses.csv'),
                       index=False)
    pd.DataFrame({'component': ['pc1', 'pc2'],
                  'variance_ratio': proj.explained_variance_ratio}).to_csv(
        os.path.join(out_dir, 'pca_variance.csv'), index=False)

    center_dir = _out_dir(config, 'centers')
    print('Computing centers of mass ...')
    center_global = center_of_mass(
        mapping, None, n_samples=config.n_center,
        rng=stage_rng(config.seed, 'center:global'))
    rw.write_center(center_global, os.path.join(center_dir, 'global.clat'),
                    name='global')
    dict_center = dict()
    for x in names:
        dict_center[x] = center_of_mass(
            mapping, dict_c[x], n_samples=config.n_center,
            rng=stage_rng(config.seed, f'center:{x}'))
        rw.write_center(dict_center[x],
                        os.path.join(center_dir, f'{x}.clat'), name=x)

    df_sweep = _truncation_sweep(config, mapping, gaussians, names, dict_c,
                                 center_global, dict_center)
    df_sweep.to_csv(os.path.join(out_dir, 'truncation_sweep.csv'),
                    index=False)
    df_sweep['correct'] = df_sweep['classified_condition'] \
        == df_sweep['condition']
    df_retention = df_sweep.groupby(['variant', 'psi'], sort=False)[
        'correct'].mean().reset_index().rename(
        columns={'correct': 'accuracy'})
    df_retention.to_csv(os.path.join(out_dir, 'truncation_retention.csv'),
                        index=False)
    print(f'Analysis results were written to "{out_dir}".')
    return {'gaussians': gaussians,
            'classification': df_acc,
            'fd_matrix': fdm,
            'pca_scatter': df_scatter,
            'pca_ellipses': df_ellipses,
            'truncation_sweep': df_sweep.drop(columns='correct'),
            'truncation_retention': df_retention}


def _truncation_sweep(config, mapping, gaussians, names, dict_c,
                      center_global, dict_center):
    rng = stage_rng(config.seed, 'sweep')
    dict_w = {x: map_conditional(
        mapping, rng.standard_normal((N_SWEEP, mapping.z_dim)),
        dict_c[x]).data for x in names}
    list_df = []
    for variant in ['conditional', 'global']:
        for psi in config.psi:
            for x in names:
                center = dict_center[x] if variant == 'conditional' \
                    else center_global
                w_trunc = truncate(dict_w[x], center, psi)
                pred = classify(p_transform(w_trunc, 'W->P').data,
                                gaussians, ridge=config.ridge)
                list_df.append(pd.DataFrame({
                    'variant': variant,
                    'psi': float(psi),
                    'sample_id': [f'{x}_{i}' for i in range(N_SWEEP)],
                    'condition': x,
                    'classified_condition': [names[i] for i in pred],
                    'distance_to_center': distance_to_center(w_trunc,
                                                             center)}))
    return pd.concat(list_df, ignore_index=True)


def _entry_groups(adata, schema, X):
    dict_groups = dict()
    for desc in schema:
        if desc.kind != 'categorical' or desc.name not in adata.obs:
            continue
        labels = adata.obs[desc.name].to_numpy()
        dict_groups[desc.name] = {
            x: X[labels == x] for x in desc.vocab
            if x != UNKNOWN and (labels == x).any()}
    return dict_groups


def _read_labels(path, n_expected, d_expected):
    df_b = pd.read_csv(path, index_col=0)
    if df_b.shape != (n_expected, d_expected):
        raise DataFormatError(f"qualitative labels of shape {df_b.shape} "
                              f"do not match the plan of shape "
                              f"({n_expected}, {d_expected})")
    return df_b.to_numpy()


def run_evaluate(config=None,
                 qualitative_labels=None,
                 model_dir=None,
                 fake_dir=None,
                 real_embeddings=None,
                 fake_embeddings=None):
    """Evaluate generated samples against a real dataset

    Writes 'report.json' and 'qualitative_plan.csv'.

    Parameters
    ----------
    config: `RunConfig`, optional (default: None)
    qualitative_labels: `str`, optional (default: None)
        CSV b-matrix with one row per planned sample and one column per
        categorical sub-condition. Without it e_qual and e_art are omitted.
    model_dir: `str`, optional (default: None)
    fake_dir: `str`, optional (default: None)
        Dataset directory of generated samples. By default `n_generate`
        samples are synthesized for conditions drawn from the real records.
    real_embeddings, fake_embeddings: `str`, optional (default: None)
        Precomputed embeddings, required by the 'external-file' embedding.

    Returns
    -------
    report: `MetricReport`
    """
    config = _config(config)
    out_dir = _out_dir(config)
    if model_dir is None:
        model_dir = out_dir
    schema, mapping, synthesis = load_fit(model_dir)
    data_dir = _data_dir(config)
    adata_real = rw.read_dataset(data_dir)
    records_real = rw.read_metadata(os.path.join(data_dir, 'metadata.jsonl'))
    C_real = assemble_condition_matrix(
        [record_to_condition(r, schema) for r in records_real], schema)

    if fake_dir is not None:
        adata_fake = rw.read_dataset(fake_dir)
        records_fake = rw.read_metadata(os.path.join(fake_dir,
                                                     'metadata.jsonl'))
        C_fake = assemble_condition_matrix(
            [record_to_condition(r, schema) for r in records_fake], schema)
    else:
        print(f'Generating {config.n_generate} samples ...')
        rng = stage_rng(config.seed, 'generate')
        idx = rng.integers(len(records_real), size=config.n_generate)
        C_fake = C_real[idx]
        z = rng.standard_normal((config.n_generate, mapping.z_dim))
        images = synthesize(synthesis, map_conditional(mapping, z, C_fake))
        obs = adata_real.obs.iloc[idx].reset_index(drop=True)
        obs.index = [f'generated_{i}' for i in range(len(idx))]
        adata_fake = AnnData(X=images, obs=obs)
    if adata_fake.n_vars != adata_real.n_vars:
        raise DataFormatError(f"generated images have width "
                              f"{adata_fake.n_vars}, real images "
                              f"{adata_real.n_vars}")

    if config.embedding_kind == 'external-file':
        missing = [name for name, x in [('real_embeddings', real_embeddings),
                                        ('fake_embeddings', fake_embeddings)]
                   if x is None]
        if len(missing) > 0:
            raise ValueError(f"the 'external-file' embedding needs "
                             f"{', '.join(missing)}")
        E_real = rw.read_embeddings(real_embeddings)
        E_fake = rw.read_embeddings(fake_embeddings)
        for E, adata, name in [(E_real, adata_real, 'real'),
                               (E_fake, adata_fake, 'generated')]:
            if E.shape[0] != adata.n_obs:
                raise DataFormatError(f"{E.shape[0]} {name} embeddings for "
                                      f"{adata.n_obs} samples")
        embed = EmbeddingFunction(kind='external-file',
                                  input_dim=E_real.shape[1],
                                  output_dim=E_real.shape[1])
        E_real, E_fake = embed(E_real), embed(E_fake)
    else:
        output_dim = config.embedding_dim \
            if config.embedding_kind == 'random-projection' \
            else config.image_dim
        embed = EmbeddingFunction(kind=config.embedding_kind,
                                  input_dim=adata_real.n_vars,
                                  output_dim=output_dim,
                                  seed=config.seed)
        E_real = embed(adata_real.X)
        E_fake = embed(np.asarray(adata_fake.X))

    c_shape = condition_shape(schema)
    n_samples_qual = n_qual(c_shape)
    df_plan = qualitative_plan(schema, n_samples_qual, seed=config.seed)
    df_plan.to_csv(os.path.join(out_dir, 'qualitative_plan.csv'))

    with warnings.catch_warnings(record=True) as list_warn:
        warnings.simplefilter('always')
        value_fid = fid(E_real, E_fake)
        value_fjd = fjd((E_real, C_real), (E_fake, C_fake),
                        alpha=config.alpha)
        per_entry, per_condition, average = intra_fid(
            _entry_groups(adata_real, schema, E_real),
            _entry_groups(adata_fake, schema, E_fake),
            fraction=config.intra_fid_fraction)
    list_msg = [str(x.message) for x in list_warn]

    value_e_qual = None
    value_e_art = None
    if qualitative_labels is not None:
        b = _read_labels(qualitative_labels, *df_plan.shape)
        value_e_qual = e_qual(b)
        value_e_art = e_art(average, value_fjd, value_e_qual)
    else:
        list_msg.append('e_qual and e_art omitted: no qualitative labels '
                        'were supplied')
    report = MetricReport(fid=value_fid,
                          fjd_alpha=float(config.alpha),
                          fjd=value_fjd,
                          intra_fid_per_condition=per_condition,
                          intra_fid_average=average,
                          intra_fid_per_entry=per_entry,
                          n_qual=n_samples_qual,
                          e_qual=value_e_qual,
                          e_art=value_e_art,
                          sample_counts={'real': int(adata_real.n_obs),
                                         'generated': int(adata_fake.n_obs)},
                          warnings=list_msg)
    rw.write_report(report, os.path.join(out_dir, 'report.json'))
    return report


LATENT_TOOLS = ('truncate', 'arithmetic', 'interpolate', 'invert',
                'wildcard-sample')


def _sampled_w(mapping, c, count, seed, stage):
    rng = stage_rng(seed, stage)
    return map_conditional(mapping,
                           rng.standard_normal((count, mapping.z_dim)),
                           c).data


def _input_w(args, mapping, c, config, stage):
    if args.get('w') is not None:
        w = rw.read_matrix(args['w'])
        return np.atleast_2d(w)
    return _sampled_w(mapping, c, int(args.get('count', 16)), config.seed,
                      stage)


def _condition(dict_cond, name, flag):
    if name not in dict_cond:
        raise ValueError(f"unknown condition '{name}' for `{flag}`. "
                         f"Available conditions are: {list(dict_cond)}")
    return dict_cond[name]


def run_latent_tools(subcommand, args, config=None, model_dir=None):
    """Latent-space tools

    Parameters
    ----------
    subcommand: `str`
        Choose from {'truncate', 'arithmetic', 'interpolate', 'invert',
        'wildcard-sample'}.
    args: `dict`
        truncate: 'condition', 'psi', optional 'center'
        ('conditional' or 'global'), 'w', 'count'.
        arithmetic: 'from', 'to', optional 'w', 'count'.
        interpolate: 'from', 'to', 'lam' (list), optional 'count'.
        invert: 'target', optional 'init', 'steps', 'step_size'.
        wildcard-sample: 'condition', 'mask' (list) or 'stochastic',
        optional 'count'.
    config: `RunConfig`, optional (default: None)
    model_dir: `str`, optional (default: None)

    Returns
    -------
    dict_files: `dict`
        Written files, including 'manifest' for the command line.
    """
    if subcommand not in LATENT_TOOLS:
        raise ValueError(f"unknown subcommand '{subcommand}'. "
                         f"Choose from {LATENT_TOOLS}")
    config = _config(config)
    out_dir = _out_dir(config, subcommand)
    if model_dir is None:
        model_dir = _out_dir(config)
    schema, mapping, synthesis = load_fit(model_dir)
    records = rw.read_metadata(os.path.join(_data_dir(config),
                                            'metadata.jsonl'))
    dict_cond = dataset_conditions(records, schema)

    def vec(name, flag):
        return assemble_condition_vector(_condition(dict_cond, name, flag),
                                         schema)

    dict_files = dict()
    parameters = dict()
    if subcommand == 'truncate':
        c = vec(args['condition'], '--condition')
        w = _input_w(args, mapping, c, config, f"sample:{args['condition']}")
        variant = args.get('center') or 'conditional'
        if variant == 'conditional':
            center = center_of_mass(
                mapping, c, n_samples=config.n_center,
                rng=stage_rng(config.seed, f"center:{args['condition']}"))
        elif variant == 'global':
            center = center_of_mass(
                mapping, None, n_samples=config.n_center,
                rng=stage_rng(config.seed, 'center:global'))
        else:
            raise ValueError(f"unrecognized center '{variant}'. "
                             "Choose from {'conditional', 'global'}")
        w_out = truncate(w, center, float(args['psi'])).data
        dict_files['center'] = os.path.join(out_dir, 'center.clat')
        rw.write_center(center, dict_files['center'], name=variant)
        parameters = {'condition': args['condition'],
                      'psi': float(args['psi']), 'center': variant}
    elif subcommand == 'arithmetic':
        c1 = vec(args['from'], '--from')
        c2 = vec(args['to'], '--to')
        w = _input_w(args, mapping, c1, config, f"sample:{args['from']}")
        t = transformation_vector(
            mapping, c1, c2, n_samples=config.n_center,
            rng=stage_rng(config.seed, 'transformation'))
        w_out = apply_transformation(w, t).data
        dict_files['transformation'] = os.path.join(out_dir,
                                                    'transformation.clat')
        rw.write_transformation(t, dict_files['transformation'],
                                source=args['from'], target=args['to'])
        parameters = {'from': args['from'], 'to': args['to']}
    elif subcommand == 'interpolate':
        c1 = vec(args['from'], '--from')
        c2 = vec(args['to'], '--to')
        rng = stage_rng(config.seed, 'interpolate')
        z = rng.standard_normal((int(args.get('count', 16)), mapping.z_dim))
        lams = [float(x) for x in args['lam']]
        w = map_conditional(mapping, z, c1).data
        w_out = np.vstack([conditional_interpolate(mapping, z, c1, c2,
                                                   lam).data
                           for lam in lams])
        parameters = {'from': args['from'], 'to': args['to'],
                      'lam': lams}
    elif subcommand == 'invert':
        target = np.atleast_2d(rw.read_matrix(args['target']))
        if args.get('init') is not None:
            w_init = np.atleast_2d(rw.read_matrix(args['init']))
        else:
            center = center_of_mass(
                mapping, None, n_samples=config.n_center,
                rng=stage_rng(config.seed, 'center:global'))
            w_init = np.broadcast_to(center.w_bar, (target.shape[0],
                                                    mapping.w_dim))
        steps = int(args.get('steps') or config.invert_steps)
        list_w = []
        list_loss = []
        for i, x in enumerate(target):
            w_hat, losses = invert(synthesis, x, w_init[i % len(w_init)],
                                   steps=steps,
                                   step_size=args.get('step_size'))
            list_w.append(w_hat.data)
            list_loss.append(pd.DataFrame({'target': i,
                                           'step': np.arange(len(losses)),
                                           'loss': losses}))
        w = w_init
        w_out = np.vstack(list_w)
        dict_files['losses'] = os.path.join(out_dir, 'losses.csv')
        pd.concat(list_loss, ignore_index=True).to_csv(dict_files['losses'],
                                                       index=False)
        parameters = {'steps': steps, 'step_size': args.get('step_size')}
    else:
        zeta = _condition(dict_cond, args['condition'], '--condition')
        count = int(args.get('count', 16))
        if args.get('stochastic'):
            rng = stage_rng(config.seed, 'mask')
            list_zeta = [stochastic_mask(zeta, k=config.mask_k,
                                         p=config.mask_p, rng=rng)
                         for _ in range(count)]
        else:
            list_zeta = [apply_wildcard(zeta, args['mask'])] * count
        C = assemble_condition_matrix(list_zeta, schema)
        w = None
        w_out = _sampled_w(mapping, C, count, config.seed,
                           f"sample:{args['condition']}")
        dict_files['conditions'] = os.path.join(out_dir, 'conditions.clat')
        rw.write_matrix(C, dict_files['conditions'], kind='conditions')
        slices = schema.slices
        parameters = {
            'condition': args['condition'],
            'mask': None if args.get('stochastic') else list(args['mask']),
            'stochastic': bool(args.get('stochastic')),
            'masked_blocks': [{name: [slices[name].start, slices[name].stop]
                               for name in x.wildcards}
                              for x in list_zeta]}

    if w is not None:
        dict_files['w_input'] = os.path.join(out_dir, 'w_input.clat')
        rw.write_matrix(w, dict_files['w_input'], kind='latents', space='W')
    dict_files['w'] = os.path.join(out_dir, 'w.clat')
    rw.write_matrix(w_out, dict_files['w'], kind='latents', space='W')
    dict_files['images'] = os.path.join(out_dir, 'images.clat')
    rw.write_matrix(synthesize(synthesis, w_out), dict_files['images'],
                    kind='images')
    dict_files['manifest'] = os.path.join(out_dir, 'manifest.json')
    rw.write_manifest(dict_files['manifest'],
                      command=subcommand,
                      seed=config.seed,
                      inputs={'model_dir': model_dir,
                              'data_dir': config.data_dir,
                              **{k: v for k, v in args.items()
                                 if k in ('w', 'target', 'init')
                                 and v is not None}},
                      outputs={k: v for k, v in dict_files.items()
                               if k != 'manifest'},
                      parameters=parameters)
    print(f'Results of `{subcommand}` were written to "{out_dir}".')
    return dict_files
