"""reading and writing"""

import os
import json
import struct
import datetime
import numpy as np
import pandas as pd
from anndata import AnnData

from ._errors import DataFormatError
from ._settings import RunConfig
from ._version import __version__
from .preprocessing._schema import (
    UNKNOWN,
    ConditionSchema,
    DatasetRecord,
)
from .tools._mapping import (
    MappingModel,
    SynthesisModel,
)
from .tools._gaussian import ConditionGaussian
from .tools._metrics import MetricReport
from .tools._latent_ops import (
    CenterOfMass,
    TransformationVector,
)

MAGIC = b'CLATMDL1'


def _print_written(filename):
    fp, fn = os.path.split(os.path.abspath(filename))
    print(f'"{fn}" was written to "{fp}".')


def write_container(filename, kind, blocks, **header):
    """Write float64 blocks into a binary container

    Layout: 8-byte magic 'CLATMDL1', u32 little-endian header length,
    UTF-8 JSON header, then the raw little-endian float64 blocks
    in the order listed by the header.

    Parameters
    ----------
    filename: `str`
    kind: `str`
        Content type, e.g. 'models' or 'gaussians'.
    blocks: `list` of (`str`, `numpy.ndarray`)
        Named arrays, written row-major.
    header:
        Extra JSON-serializable header fields.
    """
    header = dict(header)
    header['kind'] = kind
    header['blocks'] = [{'name': name, 'shape': list(np.shape(x))}
                        for name, x in blocks]
    raw = json.dumps(header, sort_keys=True).encode('utf-8')
    with open(filename, 'wb') as f:
        f.write(MAGIC)
        f.write(struct.pack('<I', len(raw)))
        f.write(raw)
        for _, x in blocks:
            f.write(np.ascontiguousarray(x, dtype='<f8').tobytes())


def read_container(filename, kind=None):
    """Read a binary container

    Parameters
    ----------
    filename: `str`
    kind: `str`, optional (default: None)
        Expected content type.

    Returns
    -------
    header: `dict`
    arrays: `dict`
        block name -> `numpy.ndarray`
    """
    with open(filename, 'rb') as f:
        data = f.read()
    if data[:8] != MAGIC:
        raise DataFormatError(f"'{filename}' is not a clat container")
    try:
        (n_header, ) = struct.unpack('<I', data[8:12])
        header = json.loads(data[12:12 + n_header].decode('utf-8'))
        list_blocks = header['blocks']
    except (struct.error, ValueError, KeyError) as e:
        raise DataFormatError(f"'{filename}' has a malformed header: {e}")
    if kind is not None and header.get('kind') != kind:
        raise DataFormatError(f"'{filename}' holds '{header.get('kind')}', "
                              f"expected '{kind}'")
    offset = 12 + n_header
    arrays = dict()
    for block in list_blocks:
        shape = tuple(block['shape'])
        count = int(np.prod(shape, dtype=np.int64))
        if offset + 8 * count > len(data):
            raise DataFormatError(f"'{filename}' is truncated in block "
                                  f"'{block['name']}'")
        arrays[block['name']] = np.frombuffer(
            data, dtype='<f8', count=count, offset=offset
        ).reshape(shape).astype(np.float64)
        offset += 8 * count
    if offset != len(data):
        raise DataFormatError(f"'{filename}' has {len(data) - offset} "
                              "trailing bytes")
    return header, arrays


def _layer_blocks(prefix, model):
    blocks = []
    for i, (W, b) in enumerate(zip(model.weights, model.biases)):
        blocks += [(f'{prefix}/W{i}', W), (f'{prefix}/b{i}', b)]
    return blocks


def _layers(prefix, arrays, depth):
    try:
        weights = [arrays[f'{prefix}/W{i}'] for i in range(depth)]
        biases = [arrays[f'{prefix}/b{i}'] for i in range(depth)]
    except KeyError as e:
        raise DataFormatError(f"missing layer block {e}")
    return weights, biases


def write_model(mapping, synthesis, filename):
    """Write the mapping and synthesis networks into one `.mdl` file"""
    write_container(
        filename, 'models',
        _layer_blocks('mapping', mapping)
        + _layer_blocks('synthesis', synthesis),
        mapping={'z_dim': mapping.z_dim, 'c_dim': mapping.c_dim,
                 'w_dim': mapping.w_dim, 'depth': mapping.depth,
                 'seed': mapping.seed, 'leaky_slope': mapping.leaky_slope},
        synthesis={'w_dim': synthesis.w_dim,
                   'image_dim': synthesis.image_dim,
                   'depth': synthesis.depth, 'seed': synthesis.seed,
                   'leaky_slope': synthesis.leaky_slope})


def read_model(filename):
    """Read networks written by `write_model()`

    Returns
    -------
    mapping: `MappingModel`
    synthesis: `SynthesisModel`
    """
    header, arrays = read_container(filename, kind='models')
    try:
        h_map = header['mapping']
        h_syn = header['synthesis']
        weights, biases = _layers('mapping', arrays, h_map['depth'])
        mapping = MappingModel(weights=weights, biases=biases, **h_map)
        weights, biases = _layers('synthesis', arrays, h_syn['depth'])
        synthesis = SynthesisModel(weights=weights, biases=biases, **h_syn)
    except (KeyError, TypeError, ValueError) as e:
        raise DataFormatError(f"'{filename}' holds malformed models: {e}")
    return mapping, synthesis


def write_gaussians(gaussians, filename):
    """Write per-condition Gaussians"""
    blocks = []
    for g in gaussians:
        blocks += [(f'mu/{g.condition}', g.mu), (f'sigma/{g.condition}',
                                                  g.sigma)]
    write_container(filename, 'gaussians', blocks,
                    conditions=[str(g.condition) for g in gaussians],
                    sample_counts=[g.sample_count for g in gaussians],
                    spaces=[g.space for g in gaussians])


def read_gaussians(filename):
    """Read Gaussians written by `write_gaussians()`"""
    header, arrays = read_container(filename, kind='gaussians')
    list_g = []
    for cond, count, space in zip(header['conditions'],
                                  header['sample_counts'],
                                  header['spaces']):
        list_g.append(ConditionGaussian(mu=arrays[f'mu/{cond}'],
                                        sigma=arrays[f'sigma/{cond}'],
                                        sample_count=count,
                                        condition=cond,
                                        space=space))
    return list_g


def write_center(center, filename, name=None):
    """Write a center of mass"""
    blocks = [('w_bar', center.w_bar)]
    if center.condition is not None:
        blocks.append(('condition', center.condition))
    write_container(filename, 'center', blocks,
                    name=name,
                    sample_count=center.sample_count,
                    seed=center.seed)


def read_center(filename):
    """Read a center of mass written by `write_center()`"""
    header, arrays = read_container(filename, kind='center')
    return CenterOfMass(w_bar=arrays['w_bar'],
                        condition=arrays.get('condition'),
                        sample_count=header['sample_count'],
                        seed=header['seed'])


def write_transformation(t, filename, source=None, target=None):
    """Write a transformation vector"""
    write_container(filename, 'transformation',
                    [('t', t.t), ('source', t.source), ('target', t.target)],
                    source=source,
                    target=target,
                    sample_count=t.sample_count)


def read_transformation(filename):
    """Read a transformation vector written by `write_transformation()`"""
    header, arrays = read_container(filename, kind='transformation')
    return TransformationVector(t=arrays['t'],
                                source=arrays['source'],
                                target=arrays['target'],
                                sample_count=header['sample_count'])


def write_matrix(X, filename, kind='matrix', **header):
    """Write a matrix, e.g. latents or image vectors"""
    write_container(filename, kind, [('X', np.asarray(X))], **header)


def read_matrix(filename, kind=None):
    """Read a matrix written by `write_matrix()`"""
    header, arrays = read_container(filename, kind=kind)
    if 'X' not in arrays:
        raise DataFormatError(f"'{filename}' holds no matrix")
    return arrays['X']


def write_embeddings(X, filename):
    """Write an embedding matrix as CSV with a header row of dims"""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    pd.DataFrame(X, columns=[f'd{i}' for i in range(X.shape[1])]).to_csv(
        filename, index=False, float_format='%.17g')


def read_embeddings(filename):
    """Read an embedding matrix from CSV or from a binary container"""
    with open(filename, 'rb') as f:
        is_container = f.read(8) == MAGIC
    if is_container:
        return read_matrix(filename)
    try:
        df = pd.read_csv(filename, header=0)
        X = df.to_numpy(dtype=np.float64)
    except (ValueError, pd.errors.ParserError) as e:
        raise DataFormatError(f"'{filename}' is not a valid embedding "
                              f"CSV: {e}")
    if X.ndim != 2 or X.shape[0] == 0:
        raise DataFormatError(f"'{filename}' holds no embeddings")
    return X


def write_metadata(records, filename):
    """Write dataset records as JSON Lines"""
    with open(filename, 'w') as f:
        for record in records:
            f.write(json.dumps(record.to_json()) + '\n')


def read_metadata(filename):
    """Read dataset records from JSON Lines

    Returns
    -------
    records: `list` of `DatasetRecord`
    """
    records = []
    with open(filename) as f:
        for i, line in enumerate(f):
            if line.strip() == '':
                continue
            try:
                records.append(DatasetRecord.from_json(json.loads(line)))
            except (ValueError, KeyError, TypeError, AttributeError) as e:
                raise DataFormatError(f"'{filename}', line {i + 1}: {e}")
    return records


def write_schema(schema, filename):
    """Write a condition schema as JSON"""
    with open(filename, 'w') as f:
        json.dump(schema.to_dict(), f, indent=2)


def read_schema(filename):
    """Read a condition schema written by `write_schema()`"""
    with open(filename) as f:
        try:
            dict_schema = json.load(f)
        except ValueError as e:
            raise DataFormatError(f"'{filename}' is not valid JSON: {e}")
    return ConditionSchema.from_dict(dict_schema)


def write_run_config(config, filename):
    """Write a run configuration as JSON"""
    with open(filename, 'w') as f:
        json.dump(config.to_dict(), f, indent=2)


def read_run_config(filename):
    """Read a run configuration

    Returns
    -------
    config: `RunConfig`
    """
    with open(filename) as f:
        try:
            dict_config = json.load(f)
        except ValueError as e:
            raise DataFormatError(f"'{filename}' is not valid JSON: {e}")
    if not isinstance(dict_config, dict):
        raise DataFormatError(f"'{filename}' must hold a JSON object")
    try:
        return RunConfig(**dict_config)
    except TypeError as e:
        raise DataFormatError(f"'{filename}': {e}")


def write_json(obj, filename):
    with open(filename, 'w') as f:
        json.dump(obj, f, indent=2)


def write_report(report, filename):
    """Write a `MetricReport` as JSON with a stable key order"""
    write_json(report.to_json(), filename)
    _print_written(filename)


def read_report(filename):
    """Read a report written by `write_report()`

    Returns
    -------
    report: `MetricReport`
    """
    with open(filename) as f:
        try:
            dict_report = json.load(f)
        except ValueError as e:
            raise DataFormatError(f"'{filename}' is not valid JSON: {e}")
    try:
        dict_ifid = dict_report['intra_fid']
        return MetricReport(
            fid=dict_report['fid'],
            fjd_alpha=dict_report['fjd']['alpha'],
            fjd=dict_report['fjd']['value'],
            intra_fid_per_condition=dict_ifid['per_condition'],
            intra_fid_average=dict_ifid['average'],
            intra_fid_per_entry=dict_ifid.get('per_entry', dict()),
            e_qual=dict_report['e_qual'],
            n_qual=dict_report['n_qual'],
            e_art=dict_report['e_art'],
            warnings=dict_report['warnings'],
            sample_counts=dict_report.get('sample_counts', dict()))
    except (KeyError, TypeError) as e:
        raise DataFormatError(f"'{filename}' is not a metric report: {e}")


def write_manifest(filename,
                   command,
                   seed,
                   inputs=None,
                   outputs=None,
                   parameters=None):
    """Write the manifest of a command line run

    The timestamp is the only field that differs between two runs
    with the same seed.
    """
    dict_manifest = {
        'command': command,
        'version': __version__,
        'seed': int(seed),
        'inputs': inputs if inputs is not None else dict(),
        'outputs': outputs if outputs is not None else dict(),
        'parameters': parameters if parameters is not None else dict(),
        'timestamp': datetime.datetime.now(
            datetime.timezone.utc).isoformat(),
    }
    write_json(dict_manifest, filename)


def read_dataset(path):
    """Read a dataset directory written by `datasets.gen_dataset()`

    Parameters
    ----------
    path: `str`
        Directory holding 'metadata.jsonl' and 'images.clat'.

    Returns
    -------
    adata: `AnnData`
        Image vectors as `.X`, one `.obs` column per categorical
        sub-condition plus 'condition' when the records name one.
    """
    records = read_metadata(os.path.join(path, 'metadata.jsonl'))
    X = read_matrix(os.path.join(path, 'images.clat'), kind='images')
    rows = [r.image if r.image is not None else i
            for i, r in enumerate(records)]
    if len(rows) > 0 and max(rows) >= X.shape[0]:
        raise DataFormatError(f"metadata references image {max(rows)} but "
                              f"only {X.shape[0]} images exist")
    names = []
    for r in records:
        for name in r.categorical:
            if name not in names:
                names.append(name)
    obs = pd.DataFrame(index=[r.sample_id for r in records])
    for name in names:
        obs[name] = [UNKNOWN if r.categorical.get(name) is None
                     else str(r.categorical[name]) for r in records]
    if any(r.condition is not None for r in records):
        obs['condition'] = [r.condition for r in records]
    return AnnData(X=X[rows], obs=obs)
