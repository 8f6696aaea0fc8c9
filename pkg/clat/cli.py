"""Command line interface

    clat gen-dataset [--count N] [--image-dim D] [--no-emotion]
    clat fit | analyze
    clat evaluate [--labels b.csv] [--fake DIR]
    clat truncate --condition C --psi PSI [--center global]
    clat arithmetic --from C1 --to C2
    clat interpolate --from C1 --to C2 --lam 0,0.5,1
    clat invert --target image.clat [--init w.clat]
    clat wildcard-sample --condition C (--mask a,b | --stochastic)

Every command accepts --config, --seed, --out and --data.
"""

import os
import sys
import argparse
import attr

from ._errors import (
    SchemaError,
    DataFormatError,
    LatentSpaceError,
    NumericalError,
)
from ._settings import settings
from ._version import __version__
from . import readwrite as rw
from . import tools as tl
from .datasets import (
    default_scenario,
    gen_dataset,
)

EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERICAL = 4


def _floats(text):
    try:
        return [float(x) for x in text.split(',') if x.strip() != '']
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, "
                                         f"got '{text}'")


def _names(text):
    return [x.strip() for x in text.split(',') if x.strip() != '']


def _global_parser():
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument('--config', default=argparse.SUPPRESS,
                        help='run configuration JSON')
    parser.add_argument('--seed', type=int, default=argparse.SUPPRESS,
                        help='root seed')
    parser.add_argument('--out', default=argparse.SUPPRESS,
                        help='output directory')
    parser.add_argument('--data', default=argparse.SUPPRESS,
                        help='dataset directory (default: <out>/data)')
    return parser


def build_parser():
    parent = _global_parser()
    parser = argparse.ArgumentParser(
        prog='clat', parents=[parent],
        description='Analysis and manipulation of conditional latent spaces')
    parser.add_argument('--version', action='version',
                        version=f'%(prog)s {__version__}')
    subparsers = parser.add_subparsers(dest='command', metavar='command')
    subparsers.required = True

    p = subparsers.add_parser('gen-dataset', parents=[parent],
                              help='generate the bundled synthetic scenario')
    p.add_argument('--count', type=int, default=300,
                   help='samples per condition')
    p.add_argument('--image-dim', type=int, default=None)
    p.add_argument('--spread', type=float, default=1.0)
    p.add_argument('--offset-scale', type=float, default=3.0)
    p.add_argument('--no-emotion', action='store_true')

    subparsers.add_parser('fit', parents=[parent],
                          help='ingest metadata and initialize the models')
    subparsers.add_parser('analyze', parents=[parent],
                          help='Gaussian analysis of the latent space')

    p = subparsers.add_parser('evaluate', parents=[parent],
                              help='FID, FJD, I-FID and hybrid scores')
    p.add_argument('--labels', default=None,
                   help='qualitative b-matrix CSV')
    p.add_argument('--fake', default=None,
                   help='dataset directory of generated samples')
    p.add_argument('--real-embeddings', default=None)
    p.add_argument('--fake-embeddings', default=None)

    p = subparsers.add_parser('truncate', parents=[parent],
                              help='(conditional) truncation trick')
    p.add_argument('--condition', required=True)
    p.add_argument('--psi', type=float, required=True)
    p.add_argument('--center', choices=['conditional', 'global'],
                   default='conditional')
    p.add_argument('--w', default=None, help='input latents in W')
    p.add_argument('--count', type=int, default=16)

    p = subparsers.add_parser('arithmetic', parents=[parent],
                              help='apply a transformation vector')
    p.add_argument('--from', dest='from_', required=True)
    p.add_argument('--to', required=True)
    p.add_argument('--w', default=None, help='input latents in W')
    p.add_argument('--count', type=int, default=16)

    p = subparsers.add_parser('interpolate', parents=[parent],
                              help='interpolate between two conditions')
    p.add_argument('--from', dest='from_', required=True)
    p.add_argument('--to', required=True)
    p.add_argument('--lam', type=_floats, required=True,
                   help='comma-separated positions in [0, 1]')
    p.add_argument('--count', type=int, default=16)

    p = subparsers.add_parser('invert', parents=[parent],
                              help='project image vectors into W')
    p.add_argument('--target', required=True)
    p.add_argument('--init', default=None)
    p.add_argument('--steps', type=int, default=None)
    p.add_argument('--step-size', type=float, default=None)

    p = subparsers.add_parser('wildcard-sample', parents=[parent],
                              help='sample with unspecified sub-conditions')
    p.add_argument('--condition', required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument('--mask', type=_names)
    group.add_argument('--stochastic', action='store_true')
    p.add_argument('--count', type=int, default=16)
    return parser


def load_config(args):
    """Run configuration from --config, overridden by --seed and --out"""
    if getattr(args, 'config', None) is not None:
        config = rw.read_run_config(args.config)
    else:
        config = settings.run_config
    changes = dict()
    if getattr(args, 'seed', None) is not None:
        changes['seed'] = args.seed
    if getattr(args, 'out', None) is not None:
        changes['out_dir'] = args.out
    out_dir = changes.get('out_dir', config.out_dir) or settings.workdir
    if getattr(args, 'data', None) is not None:
        changes['data_dir'] = args.data
    elif config.data_dir is None:
        changes['data_dir'] = os.path.join(out_dir, 'data')
    return attr.evolve(config, **changes)


def _manifest(config, command, path, inputs, outputs, parameters=None):
    rw.write_manifest(os.path.join(path, f"manifest_{command}.json"),
                      command=command,
                      seed=config.seed,
                      inputs=inputs,
                      outputs=outputs,
                      parameters=parameters)


def _run(args, config):
    out_dir = config.out_dir or settings.workdir
    os.makedirs(out_dir, exist_ok=True)
    if args.command == 'gen-dataset':
        image_dim = config.image_dim if args.image_dim is None \
            else args.image_dim
        spec = default_scenario(image_dim=image_dim,
                                count=args.count,
                                spread=args.spread,
                                offset_scale=args.offset_scale,
                                with_emotion=not args.no_emotion,
                                seed=config.seed)
        dict_files = gen_dataset(spec, config.data_dir)
        _manifest(config, 'gen-dataset', config.data_dir, {}, dict_files,
                  {'count': args.count, 'image_dim': image_dim,
                   'spread': args.spread,
                   'offset_scale': args.offset_scale,
                   'with_emotion': not args.no_emotion})
    elif args.command == 'fit':
        tl.run_fit(config)
        rw.write_run_config(config, os.path.join(out_dir, 'run_config.json'))
        _manifest(config, 'fit', out_dir, {'data_dir': config.data_dir},
                  {x: os.path.join(out_dir, x)
                   for x in ['schema.json', 'frequencies.csv', 'models.mdl',
                             'run_config.json']},
                  config.to_dict())
    elif args.command == 'analyze':
        tl.run_analysis(config)
        _manifest(config, 'analyze', out_dir,
                  {'data_dir': config.data_dir, 'model_dir': out_dir},
                  {x: os.path.join(out_dir, x)
                   for x in ['gaussians.clat', 'classification.csv',
                             'fd_matrix.csv', 'fd_nearest.csv',
                             'pca_scatter.csv', 'pca_ellipses.csv',
                             'pca_variance.csv', 'truncation_sweep.csv',
                             'truncation_retention.csv', 'centers']},
                  config.to_dict())
    elif args.command == 'evaluate':
        tl.run_evaluate(config,
                        qualitative_labels=args.labels,
                        fake_dir=args.fake,
                        real_embeddings=args.real_embeddings,
                        fake_embeddings=args.fake_embeddings)
        _manifest(config, 'evaluate', out_dir,
                  {'data_dir': config.data_dir, 'model_dir': out_dir,
                   'labels': args.labels, 'fake_dir': args.fake,
                   'real_embeddings': args.real_embeddings,
                   'fake_embeddings': args.fake_embeddings},
                  {x: os.path.join(out_dir, x)
                   for x in ['report.json', 'qualitative_plan.csv']},
                  config.to_dict())
    else:
        dict_args = {k: v for k, v in vars(args).items()
                     if k not in ('command', 'config', 'seed', 'out',
                                  'data')}
        if 'from_' in dict_args:
            dict_args['from'] = dict_args.pop('from_')
        tl.run_latent_tools(args.command, dict_args, config)


def main(argv=None):
    """Entry point of the `clat` command

    Returns
    -------
    code: `int`
        0 on success, 2 for usage errors, 3 for data or format errors
        and 4 for numerical failures.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else 0
    verbose = settings.verbose
    settings.verbose = True
    try:
        config = load_config(args)
        _run(args, config)
    except NumericalError as e:
        print(f'clat: numerical failure: {e}', file=sys.stderr)
        return EXIT_NUMERICAL
    except (SchemaError, DataFormatError, LatentSpaceError,
            FileNotFoundError) as e:
        print(f'clat: {e}', file=sys.stderr)
        return EXIT_DATA
    except ValueError as e:
        print(f'clat: error: {e}', file=sys.stderr)
        return EXIT_USAGE
    finally:
        settings.verbose = verbose
    return 0


if __name__ == '__main__':
    sys.exit(main())
