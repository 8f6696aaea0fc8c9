import clat as cl
import numpy as np
import pytest
from numpy.testing import (
    assert_allclose,
    assert_array_equal,
)


@pytest.fixture
def schema():
    return cl.pp.ConditionSchema([
        cl.pp.SubConditionDescriptor(
            name='style', kind='categorical', dim=3,
            vocab=['cubism', 'impressionism', 'Unknown']),
        cl.pp.SubConditionDescriptor(
            name='genre', kind='categorical', dim=4,
            vocab=['landscape', 'portrait', 'still_life', 'Unknown']),
        cl.pp.SubConditionDescriptor(
            name='emotion', kind='distribution', dim=2,
            vocab=['awe', 'fear']),
    ])


def test_fid():
    rng = np.random.default_rng(0)
    real = rng.standard_normal((1000, 2))
    with pytest.warns(UserWarning, match='50000'):
        assert cl.tl.fid(real, real) == 0
    fake = real + np.array([1.0, 3.0])
    assert cl.tl.fid(real, fake, warn=False) == pytest.approx(np.sqrt(10),
                                                              rel=1e-9)
    assert cl.tl.fid(real, rng.standard_normal((1000, 2)), warn=False) > 0
    with pytest.raises(ValueError):
        cl.tl.fid(real, np.zeros((10, 3)), warn=False)


def test_fjd():
    rng = np.random.default_rng(1)
    images_real = rng.standard_normal((500, 3))
    images_fake = rng.standard_normal((500, 3)) + 0.5
    cond_real = np.eye(4)[rng.integers(4, size=500)]
    cond_fake = np.eye(4)[rng.integers(4, size=500)]
    real = (images_real, cond_real)
    fake = (images_fake, cond_fake)

    assert cl.tl.fjd(real, fake, alpha=0, warn=False) == pytest.approx(
        cl.tl.fid(images_real, images_fake, warn=False), rel=1e-6)
    assert cl.tl.fjd(real, real, warn=False) == 0

    value = cl.tl.fjd(real, fake, alpha=0.5, warn=False)
    samples_real = cl.tl.joint_samples(images_real, cond_real, alpha=0.5)
    samples_fake = cl.tl.joint_samples(images_fake, cond_fake, alpha=0.5)
    assert cl.tl.fjd(samples_real, samples_fake, alpha=0.5, warn=False) \
        == pytest.approx(value, rel=1e-12)
    assert_array_equal(samples_real[0].vector(),
                       np.concatenate([images_real[0], 0.5 * cond_real[0]]))

    with pytest.raises(ValueError):
        cl.tl.fjd(real, fake, alpha=-1)
    with pytest.raises(ValueError):
        cl.tl.fjd((images_real, cond_real[:10]), fake, warn=False)


def test_select_entries():
    assert cl.tl.select_entries({'a': 50, 'b': 30, 'c': 20}) == ['a', 'b']
    assert cl.tl.select_entries({'a': 50, 'b': 30, 'c': 20},
                                fraction=1) == ['a', 'b', 'c']
    assert cl.tl.select_entries({'b': 5, 'a': 5, 'c': 1, 'd': 0}) \
        == ['a', 'b']
    with pytest.raises(ValueError):
        cl.tl.select_entries({'a': 1}, fraction=0)


def test_intra_fid():
    rng = np.random.default_rng(2)
    real = {'style': {x: rng.standard_normal((n, 2))
                      for x, n in [('a', 50), ('b', 30), ('c', 20)]}}
    fake = {'style': {x: rng.standard_normal((n, 2)) + 0.3
                      for x, n in [('a', 50), ('b', 30), ('c', 20)]}}

    per_entry, per_condition, average = cl.tl.intra_fid(real, real)
    assert average == 0
    assert set(per_entry['style']) == {'a', 'b'}

    per_entry, per_condition, average = cl.tl.intra_fid(real, fake)
    assert set(per_entry['style']) == {'a', 'b'}
    assert per_entry['style']['a'] == pytest.approx(
        cl.tl.fid(real['style']['a'], fake['style']['a'], warn=False))
    assert average == pytest.approx(per_condition['style'])

    per_entry, per_condition, _ = cl.tl.intra_fid(real, fake, fraction=1)
    assert per_condition['style'] == pytest.approx(
        np.mean([cl.tl.fid(real['style'][x], fake['style'][x], warn=False)
                 for x in 'abc']))

    support = {'style': {'a': 1, 'b': 2, 'c': 100}}
    per_entry, _, _ = cl.tl.intra_fid(real, fake, support=support)
    assert set(per_entry['style']) == {'c', 'b'}

    fake_partial = {'style': {'a': fake['style']['a']}}
    with pytest.warns(UserWarning, match="skipping entry 'b'"):
        per_entry, _, _ = cl.tl.intra_fid(real, fake_partial)
    assert set(per_entry['style']) == {'a'}
    with pytest.raises(ValueError):
        cl.tl.intra_fid({}, fake)


def test_e_qual():
    assert cl.tl.e_qual(np.ones((10, 3))) == 1
    assert cl.tl.e_qual(np.array([[1, 0], [0, 0]])) == 0.25
    assert cl.tl.e_qual(np.zeros((4, 8))) == 0
    with pytest.raises(ValueError):
        cl.tl.e_qual(np.array([[0.5, 1]]))
    with pytest.raises(ValueError):
        cl.tl.e_qual(np.zeros((0, 3)))


def test_n_qual():
    assert cl.tl.n_qual([9, 30, 31]) == 100
    assert cl.tl.n_qual([2]) == 11
    assert cl.tl.n_qual([768]) == 87
    assert cl.tl.n_qual([10]) == 11
    assert cl.tl.n_qual([9, 30, 31], n_max=500) == 847
    for shape in [[1, 1], [3, 5], [7, 9], [20, 40]]:
        base = cl.tl.n_qual(shape)
        assert base <= 100
        for i in range(len(shape)):
            bigger = list(shape)
            bigger[i] += 1
            assert cl.tl.n_qual(bigger) >= base
    with pytest.raises(ValueError):
        cl.tl.n_qual([])
    with pytest.raises(ValueError):
        cl.tl.n_qual([3, 0])


def test_e_art():
    assert cl.tl.e_art(5.46, 9.42, 0.91) == pytest.approx(8.11, abs=0.005)
    assert cl.tl.e_art(9.31, 9.29, 0.88) == pytest.approx(10.42, abs=0.005)
    assert cl.tl.e_art(8.10, 8.47, 0.83) == pytest.approx(9.69, abs=0.005)

    grid = np.linspace(0, 10, 6)
    qual = np.linspace(0, 1, 6)
    for i in grid:
        for j in grid:
            for q in qual:
                value = cl.tl.e_art(i, j, q)
                assert cl.tl.e_art(i + 1, j, q) > value
                assert cl.tl.e_art(i, j + 1, q) > value
                if q < 1 and i + j > 0:
                    assert cl.tl.e_art(i, j, q + 0.1 * (1 - q)) < value
    with pytest.raises(ValueError):
        cl.tl.e_art(1, 1, 1.5)
    with pytest.raises(ValueError):
        cl.tl.e_art(-1, 1, 0.5)


def test_metric_report():
    report = cl.tl.MetricReport(fid=1.0, fjd_alpha=0.5, fjd=2.0,
                                intra_fid_per_condition={'style': 3.0},
                                intra_fid_average=3.0, n_qual=11,
                                intra_fid_per_entry={'style': {'a': 2.0,
                                                               'b': 4.0}},
                                warnings=['few samples'])
    dict_report = report.to_json()
    assert list(dict_report) == ['fid', 'fjd', 'intra_fid', 'e_qual',
                                 'n_qual', 'e_art', 'warnings',
                                 'sample_counts']
    assert dict_report['fjd'] == {'alpha': 0.5, 'value': 2.0}
    assert list(dict_report['intra_fid']) == ['per_condition', 'average',
                                              'per_entry']
    assert dict_report['intra_fid']['per_entry'] == {'style': {'a': 2.0,
                                                               'b': 4.0}}
    assert dict_report['e_qual'] is None


def test_fid_convergence():
    rng = np.random.default_rng(3)
    df_fid = cl.tl.fid_convergence(rng.standard_normal((20000, 4)),
                                   sizes=(100, 1000, 10000))
    assert list(df_fid.columns) == ['size', 'fid']
    values = df_fid['fid'].to_numpy()
    assert (values[1:] <= 1.1 * values[:-1]).all()
    assert values[-1] < values[0]
    with pytest.raises(ValueError):
        cl.tl.fid_convergence(rng.standard_normal((100, 4)), sizes=(60, ))


def test_fid_self_convergence():
    rng = np.random.default_rng(5)
    sizes = (500, 2500, 12500, 50000)
    df_fid = cl.tl.fid_convergence(rng.standard_normal((100000, 4)),
                                   sizes=sizes, seed=1)
    assert list(df_fid['size']) == list(sizes)
    values = df_fid['fid'].to_numpy()
    assert (values[1:] <= 1.1 * values[:-1]).all()
    assert values[-1] < values[0] / 4


def test_embedding_function():
    rng = np.random.default_rng(4)
    X = rng.standard_normal((10, 12))
    embed = cl.tl.EmbeddingFunction('random-projection', input_dim=12,
                                    output_dim=6, seed=1)
    Y = embed(X)
    assert Y.shape == (10, 6)
    assert_array_equal(Y, cl.tl.EmbeddingFunction(
        'random-projection', input_dim=12, output_dim=6, seed=1)(X))
    projected = embed._projection.transform(X)
    assert_allclose(Y, np.where(projected >= 0, projected, 0.2 * projected))

    identity = cl.tl.EmbeddingFunction('identity', input_dim=12,
                                       output_dim=12)
    assert_allclose(identity(X), X)
    with pytest.raises(ValueError):
        embed(X[:, :5])
    with pytest.raises(ValueError):
        cl.tl.EmbeddingFunction('identity', input_dim=12, output_dim=6)
    with pytest.raises(ValueError):
        cl.tl.EmbeddingFunction('inception', input_dim=12)


def test_qualitative_plan(schema):
    n = cl.tl.n_qual(cl.pp.condition_shape(schema))
    df_plan = cl.tl.qualitative_plan(schema, n, seed=0)
    assert df_plan.shape == (n, 2)
    assert list(df_plan.columns) == ['style', 'genre']
    assert not (df_plan == 'Unknown').any().any()
    assert df_plan.equals(cl.tl.qualitative_plan(schema, n, seed=0))
