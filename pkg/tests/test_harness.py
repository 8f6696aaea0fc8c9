import os
import json
import attr
import clat as cl
import numpy as np
import pandas as pd
import pytest
from numpy.testing import (
    assert_allclose,
    assert_array_equal,
)

from clat._errors import DataFormatError
from clat.cli import main


@pytest.fixture(scope='module')
def pipeline(tmp_path_factory):
    path = tmp_path_factory.mktemp('pipeline')
    data_dir = str(path / 'data')
    cl.datasets.gen_dataset(cl.datasets.default_scenario(), data_dir)
    config = cl.RunConfig(data_dir=data_dir, out_dir=str(path / 'out'))
    cl.tl.run_fit(config)
    bundle = cl.tl.run_analysis(config)
    return config, bundle


@pytest.fixture(scope='module')
def cli_run(tmp_path_factory):
    path = tmp_path_factory.mktemp('cli')
    out = str(path / 'out')
    config_file = str(path / 'config.json')
    with open(config_file, 'w') as f:
        json.dump({'n_fit': 2000, 'n_classify': 1000, 'n_center': 5000,
                   'n_generate': 500, 'invert_steps': 50}, f)
    for command in [['gen-dataset', '--count', '120'], ['fit'],
                    ['analyze']]:
        assert main(command + ['--out', out, '--config', config_file]) == 0
    return out, config_file


def _snapshot(path):
    dict_bytes = dict()
    for root, _, files in os.walk(path):
        for fn in files:
            if fn.startswith('manifest'):
                continue
            fp = os.path.join(root, fn)
            with open(fp, 'rb') as f:
                dict_bytes[os.path.relpath(fp, path)] = f.read()
    return dict_bytes


def test_gen_dataset(tmp_path):
    spec = cl.datasets.default_scenario(image_dim=16, seed=1)
    spec = attr.evolve(spec,
                       conditions={x: spec.conditions[x] for x in 'ABC'},
                       counts={x: 100 for x in 'ABC'})
    dict_files = cl.datasets.gen_dataset(spec, str(tmp_path / 'a'))
    adata = cl.read_dataset(str(tmp_path / 'a'))
    assert adata.shape == (300, 16)
    assert adata.obs['condition'].value_counts().to_dict() \
        == {'A': 100, 'B': 100, 'C': 100}
    assert adata.obs.loc['B_00007', 'style'] == 'style_1'

    cl.datasets.gen_dataset(spec, str(tmp_path / 'b'))
    for key in ['metadata', 'images']:
        with open(dict_files[key], 'rb') as f_a, \
                open(str(tmp_path / 'b' / os.path.basename(dict_files[key])),
                     'rb') as f_b:
            assert f_a.read() == f_b.read()

    for x in 'ABC':
        X = adata[adata.obs['condition'] == x].X
        z = (X.mean(axis=0) - spec.mean(x)) / (spec.spread(x) / np.sqrt(100))
        assert np.abs(z).max() < 5

    records = cl.read_metadata(dict_files['metadata'])
    assert set(records[0].distribution['emotion']) \
        == set(cl.datasets.EMOTIONS)
    assert sum(records[0].distribution['emotion'].values()) == 5

    with pytest.raises(ValueError):
        attr.evolve(spec, counts={'A': 100, 'B': 100})
    offsets = dict(spec.offsets)
    offsets['style'] = {'style_0': np.zeros(16)}
    with pytest.raises(ValueError):
        attr.evolve(spec, offsets=offsets)


def test_dataset_conditions(pipeline):
    config, _ = pipeline
    schema, _, _ = cl.tl.load_fit(config.out_dir)
    records = cl.read_metadata(os.path.join(config.data_dir,
                                            'metadata.jsonl'))
    dict_cond = cl.tl.dataset_conditions(records, schema)
    assert list(dict_cond) == ['A', 'B', 'C', 'D', 'E']
    assert dict_cond['B']['genre'] == schema['genre'].index('genre_1')
    assert dict_cond['B'].wildcards == ('emotion', )
    assert schema.total_dim == 37


def test_analysis(pipeline):
    config, bundle = pipeline
    out = config.out_dir
    df_acc = pd.read_csv(os.path.join(out, 'classification.csv'))
    assert list(df_acc['condition']) == ['A', 'B', 'C', 'D', 'E', 'overall']
    assert (df_acc['accuracy'] == 1.0).all()
    assert df_acc['n_classified'].iloc[0] == config.n_classify

    df_fd = pd.read_csv(os.path.join(out, 'fd_matrix.csv'))
    assert list(df_fd.columns) == ['condition_a', 'condition_b', 'fd']
    assert len(df_fd) == 25
    fd = df_fd.set_index(['condition_a', 'condition_b'])['fd']
    for a in 'ABCDE':
        assert fd[(a, a)] == 0
        for b in 'ABCDE':
            assert fd[(a, b)] == fd[(b, a)]
    nearest = bundle['fd_matrix'].nearest
    assert nearest['A'] == 'B' and nearest['B'] == 'A'
    assert nearest['C'] == 'D' and nearest['D'] == 'C'
    d_e = min(fd[('E', x)] for x in 'ABCD')
    assert d_e > fd[('A', 'B')]
    assert d_e > fd[('C', 'D')]

    df_scatter = pd.read_csv(os.path.join(out, 'pca_scatter.csv'))
    assert list(df_scatter.columns) == ['sample_id', 'condition', 'pc1',
                                        'pc2']
    assert df_scatter['sample_id'].is_unique
    assert df_scatter['sample_id'].iloc[501] == 'B_1'
    assert len(df_scatter) == 5 * 500
    df_ellipses = pd.read_csv(os.path.join(out, 'pca_ellipses.csv'))
    assert (df_ellipses['width'] >= df_ellipses['height']).all()

    df_retention = pd.read_csv(os.path.join(out,
                                            'truncation_retention.csv'))
    conditional = df_retention[df_retention['variant'] == 'conditional']
    assert (conditional['accuracy'] == 1.0).all()
    global_ = df_retention[df_retention['variant'] == 'global'] \
        .sort_values('psi', ascending=False)
    assert global_['accuracy'].iloc[-1] < 0.6
    assert global_['psi'].iloc[-1] == 0
    assert (np.diff(global_['accuracy'].to_numpy()) <= 0.02).all()

    df_sweep = pd.read_csv(os.path.join(out, 'truncation_sweep.csv'))
    assert len(df_sweep) == 2 * 5 * 5 * 200
    assert os.path.exists(os.path.join(out, 'centers', 'global.clat'))
    center = cl.read_center(os.path.join(out, 'centers', 'A.clat'))
    assert center.sample_count == config.n_center


def test_analysis_is_reproducible(pipeline):
    config, bundle = pipeline
    gaussians = cl.read_gaussians(os.path.join(config.out_dir,
                                               'gaussians.clat'))
    bundle_2 = cl.tl.run_analysis(config)
    for g, g_file, g_2 in zip(bundle['gaussians'], gaussians,
                              bundle_2['gaussians']):
        assert g.condition == g_file.condition == g_2.condition
        assert_allclose(g_2.mu, g.mu, rtol=0, atol=1e-12)
        assert_allclose(g_2.sigma, g.sigma, rtol=0, atol=1e-12)
        assert_array_equal(g_file.sigma, g.sigma)


def test_evaluate(pipeline, tmp_path):
    config, _ = pipeline
    out = config.out_dir
    report = cl.tl.run_evaluate(config, fake_dir=config.data_dir)
    assert report.fid == 0
    assert report.fjd == 0
    assert report.intra_fid_average == 0
    assert report.n_qual == 100
    assert report.e_qual is None and report.e_art is None
    assert any('no qualitative labels' in x for x in report.warnings)
    with open(os.path.join(out, 'report.json')) as f:
        dict_report = json.load(f)
    assert list(dict_report)[:6] == ['fid', 'fjd', 'intra_fid', 'e_qual',
                                     'n_qual', 'e_art']

    df_plan = pd.read_csv(os.path.join(out, 'qualitative_plan.csv'),
                          index_col=0)
    assert df_plan.shape == (100, 8)
    df_b = pd.DataFrame(1, index=df_plan.index, columns=df_plan.columns)
    df_b.to_csv(tmp_path / 'labels.csv')
    report = cl.tl.run_evaluate(config,
                                qualitative_labels=str(tmp_path /
                                                       'labels.csv'),
                                fake_dir=config.data_dir)
    assert report.e_qual == 1
    assert report.e_art == pytest.approx(
        (report.intra_fid_average + report.fjd) / 2 * (2 - report.e_qual),
        abs=1e-12)

    df_b.iloc[:99].to_csv(tmp_path / 'short.csv')
    with pytest.raises(DataFormatError):
        cl.tl.run_evaluate(config,
                           qualitative_labels=str(tmp_path / 'short.csv'),
                           fake_dir=config.data_dir)

    report = cl.tl.run_evaluate(config)
    assert report.fid > 0
    assert report.sample_counts == {'real': 1500,
                                    'generated': config.n_generate}
    assert set(report.intra_fid_per_condition) <= set(
        cl.datasets.SUBCONDITIONS)
    assert {x for x, v in report.intra_fid_per_entry.items() if v} \
        == set(report.intra_fid_per_condition)
    for name in report.intra_fid_per_condition:
        dict_entry = report.intra_fid_per_entry[name]
        assert report.intra_fid_per_condition[name] == pytest.approx(
            np.mean(list(dict_entry.values())))
    assert cl.read_report(os.path.join(out, 'report.json')) == report


def test_plotting(pipeline, tmp_path):
    config, bundle = pipeline
    out = config.out_dir
    cl.pl.fd_heatmap(bundle['fd_matrix'].to_frame(), save_fig=True,
                     fig_path=str(tmp_path), fig_name='fd.png')
    cl.pl.fd_heatmap(os.path.join(out, 'fd_matrix.csv'), save_fig=True,
                     fig_path=str(tmp_path), fig_name='fd_table.png')
    cl.pl.pca_scatter(os.path.join(out, 'pca_scatter.csv'),
                      os.path.join(out, 'pca_ellipses.csv'),
                      save_fig=True, fig_path=str(tmp_path),
                      fig_name='pca.png')
    cl.pl.truncation_sweep(bundle['truncation_retention'], save_fig=True,
                           fig_path=str(tmp_path), fig_name='sweep.png')
    for fn in ['fd.png', 'fd_table.png', 'pca.png', 'sweep.png']:
        assert os.path.exists(tmp_path / fn)


def test_cli_is_deterministic(tmp_path):
    out = str(tmp_path / 'out')
    config_file = str(tmp_path / 'config.json')
    with open(config_file, 'w') as f:
        json.dump({'n_fit': 1000, 'n_classify': 500, 'n_center': 2000,
                   'n_generate': 300}, f)
    commands = [['gen-dataset', '--count', '110'], ['fit'], ['analyze'],
                ['evaluate'], ['truncate', '--condition', 'B', '--psi',
                               '0.5']]
    snapshots = []
    for _ in range(2):
        for command in commands:
            assert main(command + ['--out', out, '--seed', '3',
                                   '--config', config_file]) == 0
        snapshots.append(_snapshot(out))
    assert 'models.mdl' in snapshots[0]
    assert os.path.join('truncate', 'w.clat') in snapshots[0]
    assert snapshots[0] == snapshots[1]
    with open(os.path.join(out, 'manifest_fit.json')) as f:
        assert json.load(f)['seed'] == 3


def test_cli_truncate(cli_run, tmp_path):
    out, config_file = cli_run
    w = np.random.default_rng(0).standard_normal((5, 64))
    cl.write_matrix(w, str(tmp_path / 'w.clat'))
    assert main(['truncate', '--condition', 'A', '--psi', '1', '--w',
                 str(tmp_path / 'w.clat'), '--out', out,
                 '--config', config_file]) == 0
    assert_array_equal(cl.read_matrix(os.path.join(out, 'truncate',
                                                   'w.clat')), w)
    images = cl.read_matrix(os.path.join(out, 'truncate', 'images.clat'))
    assert images.shape == (5, 192)

    assert main(['truncate', '--condition', 'A', '--psi', '0', '--center',
                 'global', '--out', out, '--config', config_file]) == 0
    w_out = cl.read_matrix(os.path.join(out, 'truncate', 'w.clat'))
    center = cl.read_center(os.path.join(out, 'truncate', 'center.clat'))
    assert center.condition is None
    assert_allclose(w_out, np.broadcast_to(center.w_bar, w_out.shape))
    with open(os.path.join(out, 'truncate', 'manifest.json')) as f:
        manifest = json.load(f)
    assert manifest['parameters'] == {'condition': 'A', 'psi': 0.0,
                                      'center': 'global'}


def test_cli_arithmetic(cli_run):
    out, config_file = cli_run
    dict_t = dict()
    for source, target in [('A', 'E'), ('E', 'A')]:
        assert main(['arithmetic', '--from', source, '--to', target,
                     '--count', '4', '--out', out,
                     '--config', config_file]) == 0
        dict_t[source] = cl.read_transformation(
            os.path.join(out, 'arithmetic', 'transformation.clat'))
    assert_array_equal(dict_t['A'].t, -dict_t['E'].t)
    w_in = cl.read_matrix(os.path.join(out, 'arithmetic', 'w_input.clat'))
    w_out = cl.read_matrix(os.path.join(out, 'arithmetic', 'w.clat'))
    assert_allclose(w_out - w_in, np.broadcast_to(dict_t['E'].t,
                                                  w_in.shape),
                    atol=1e-12)


def test_cli_interpolate(cli_run):
    out, config_file = cli_run
    assert main(['interpolate', '--from', 'C', '--to', 'D', '--lam',
                 '0,0.5,1', '--count', '4', '--out', out,
                 '--config', config_file]) == 0
    w_in = cl.read_matrix(os.path.join(out, 'interpolate', 'w_input.clat'))
    w_out = cl.read_matrix(os.path.join(out, 'interpolate', 'w.clat'))
    assert w_out.shape == (12, 64)
    assert_array_equal(w_out[:4], w_in)
    assert_allclose(w_out[4:8], (w_out[:4] + w_out[8:]) / 2, atol=1e-12)


def test_cli_invert(cli_run):
    out, config_file = cli_run
    assert main(['truncate', '--condition', 'D', '--psi', '0.7', '--count',
                 '2', '--out', out, '--config', config_file]) == 0
    assert main(['invert', '--target',
                 os.path.join(out, 'truncate', 'images.clat'),
                 '--steps', '30', '--out', out,
                 '--config', config_file]) == 0
    df_loss = pd.read_csv(os.path.join(out, 'invert', 'losses.csv'))
    assert set(df_loss['target']) == {0, 1}
    for _, df in df_loss.groupby('target'):
        losses = df.sort_values('step')['loss'].to_numpy()
        assert 1 < len(losses) <= 31
        assert (np.diff(losses) <= 0).all()
    assert cl.read_matrix(os.path.join(out, 'invert', 'w.clat')).shape \
        == (2, 64)


def test_cli_wildcard_sample(cli_run):
    out, config_file = cli_run
    assert main(['wildcard-sample', '--condition', 'A', '--mask',
                 'style,painter', '--count', '3', '--out', out,
                 '--config', config_file]) == 0
    schema = cl.read_schema(os.path.join(out, 'schema.json'))
    slices = schema.slices
    C = cl.read_matrix(os.path.join(out, 'wildcard-sample',
                                    'conditions.clat'))
    assert C.shape == (3, schema.total_dim)
    for name in ['style', 'painter', 'emotion']:
        assert_array_equal(C[:, slices[name]], 0)
    assert (C[:, slices['genre']].argmax(axis=1)
            == schema['genre'].index('genre_0')).all()
    with open(os.path.join(out, 'wildcard-sample', 'manifest.json')) as f:
        manifest = json.load(f)
    masked = manifest['parameters']['masked_blocks']
    assert len(masked) == 3
    assert masked[0] == {name: [slices[name].start, slices[name].stop]
                         for name in ['style', 'painter', 'emotion']}

    assert main(['wildcard-sample', '--condition', 'A', '--stochastic',
                 '--count', '20', '--out', out,
                 '--config', config_file]) == 0
    C = cl.read_matrix(os.path.join(out, 'wildcard-sample',
                                    'conditions.clat'))
    assert C.shape == (20, schema.total_dim)
    assert 0 < (C == 0).sum() < C.size


def test_cli_usage_errors(cli_run, capsys):
    out, config_file = cli_run
    assert main(['arithmetic', '--out', out]) == 2
    err = capsys.readouterr().err
    assert '--from' in err and '--to' in err
    assert main(['transmogrify', '--out', out]) == 2
    assert main(['wildcard-sample', '--condition', 'A', '--mask', 'style',
                 '--stochastic', '--out', out]) == 2
    assert main(['truncate', '--condition', 'Z', '--psi', '0.5',
                 '--out', out, '--config', config_file]) == 2
    assert 'unknown condition' in capsys.readouterr().err
    assert main(['--version']) == 0


def test_cli_data_errors(cli_run, tmp_path):
    out, config_file = cli_run
    data_dir = os.path.join(out, 'data')
    assert main(['analyze', '--out', str(tmp_path / 'empty'), '--data',
                 data_dir, '--config', config_file]) == 3

    broken = tmp_path / 'broken'
    broken.mkdir()
    with open(os.path.join(out, 'schema.json')) as f:
        (broken / 'schema.json').write_text(f.read())
    (broken / 'models.mdl').write_bytes(b'NOTCLAT!' + bytes(16))
    assert main(['truncate', '--condition', 'A', '--psi', '0.5',
                 '--out', str(broken), '--data', data_dir,
                 '--config', config_file]) == 3


def test_cli_numerical_failure(tmp_path):
    out = str(tmp_path / 'out')
    config_file = str(tmp_path / 'config.json')
    with open(config_file, 'w') as f:
        json.dump({'n_fit': 10, 'n_classify': 100, 'n_center': 100}, f)
    for command in [['gen-dataset', '--count', '100'], ['fit']]:
        assert main(command + ['--out', out, '--config', config_file]) == 0
    assert main(['analyze', '--out', out, '--config', config_file]) == 4


def test_cli_bad_labels(cli_run, tmp_path, capsys):
    out, config_file = cli_run
    pd.DataFrame([[1, 0]]).to_csv(tmp_path / 'b.csv')
    assert main(['evaluate', '--labels', str(tmp_path / 'b.csv'),
                 '--out', out, '--config', config_file]) == 3
    assert 'qualitative labels of shape (1, 2)' in capsys.readouterr().err


def test_cli_restores_verbosity(cli_run):
    out, config_file = cli_run
    verbose = cl.settings.verbose
    cl.settings.verbose = False
    try:
        assert main(['truncate', '--condition', 'B', '--psi', '0.5',
                     '--count', '2', '--out', out,
                     '--config', config_file]) == 0
        assert cl.settings.verbose is False
        assert main(['truncate', '--condition', 'Z', '--psi', '0.5',
                     '--out', out, '--config', config_file]) == 2
        assert cl.settings.verbose is False
    finally:
        cl.settings.verbose = verbose
