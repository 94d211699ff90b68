"""
Argument parsing and exit codes of the `hmdp` command.

Exit codes: 0 on success, 1 when a computation fails or a checked property
does not hold, 2 for invalid inputs and usage errors.
"""
import argparse
import sys

from . import commands
from .. import __version__, logger
from ..logger import LOG_LEVELS, set_log_level

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2


def _common_options():
    """
    Options accepted before or after the command name.
    """
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--seed', type=int, default=argparse.SUPPRESS,
                        help='base seed of every random stream (overrides the spec file)')
    common.add_argument('--parallelism', type=int, default=argparse.SUPPRESS,
                        help='number of workers (default: spec value, else all cores)')
    common.add_argument('--verbosity', choices=list(LOG_LEVELS), default=argparse.SUPPRESS,
                        help='log level on stderr (overrides HARDMDP_LOG)')
    return common


def _class_flags(parser):
    parser.add_argument('--family', help='tree | tree-stationary | s3 | s4 | s4-bpi')
    parser.add_argument('--S', type=int)
    parser.add_argument('--A', type=int)
    parser.add_argument('--H', type=int)
    parser.add_argument('--Hbar', type=int)
    parser.add_argument('--eps', type=float)
    parser.add_argument('--relaxed', action='store_true')
    parser.add_argument('--ref-arm', type=int, nargs=2, metavar=('H0', 'A0'))


def build_parser():
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog='hmdp', parents=[common],
        description='Hard episodic MDP instances, exact analysis and lower-bound checks.')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    sub = parser.add_subparsers(dest='command', metavar='command')
    sub.required = True

    gen = sub.add_parser('gen', parents=[common], help='write the instances of a class')
    gen.add_argument('--spec', help='JSON spec with a "class" object')
    _class_flags(gen)
    gen.add_argument('--out', help='output directory (default: instances)')
    gen.set_defaults(func=commands.cmd_gen)

    plan = sub.add_parser('plan', parents=[common], help='optimal values of an instance file')
    plan.add_argument('instance')
    plan.add_argument('--format', choices=('json', 'table'), default='json')
    plan.set_defaults(func=commands.cmd_plan)

    kl = sub.add_parser('kl', parents=[common], help='trajectory KL between two instances')
    kl.add_argument('--spec', help='JSON spec with m0, m1 and T; flags override it')
    kl.add_argument('--m0')
    kl.add_argument('--m1')
    kl.add_argument('--policy', help='"uniform" (default) or a policy file')
    kl.add_argument('--T', type=int)
    kl.add_argument('--method', choices=commands.KL_METHODS, help='default: exact')
    kl.add_argument('--n-reps', type=int, help='Monte Carlo replications (default: 100)')
    kl.add_argument('--format', choices=('json', 'table'), default='table')
    kl.set_defaults(func=commands.cmd_kl)

    bound = sub.add_parser('bound', parents=[common], help='evaluate a lower bound')
    bound.add_argument('--theorem')
    bound.add_argument('--H', type=int)
    bound.add_argument('--S', type=int)
    bound.add_argument('--A', type=int)
    bound.add_argument('--T', type=int)
    bound.add_argument('--eps', type=float)
    bound.add_argument('--delta', type=float)
    bound.add_argument('--batch', help='JSON array of input objects; CSV output')
    bound.add_argument('--format', choices=('json', 'table'), default='json')
    bound.set_defaults(func=commands.cmd_bound)

    for name, func, text in (('regret-sweep', commands.cmd_regret_sweep,
                              'regret of a learner over a class'),
                             ('bpi-sweep', commands.cmd_bpi_sweep,
                              'stopping times of bpi-uniform over a class')):
        sweep = sub.add_parser(name, parents=[common], help=text)
        sweep.add_argument('--spec', required=True, help='JSON experiment spec')
        sweep.add_argument('--out', help='output directory (overrides the spec file)')
        sweep.set_defaults(func=func)

    verify = sub.add_parser('verify', parents=[common], help='run the oracle suite')
    verify.add_argument('--checks', nargs='*', help='subset of checks')
    verify.set_defaults(func=commands.cmd_verify)

    return parser


def main(argv=None):
    """
    Entry point of the `hmdp` command.

    Returns
    -------
    int : The exit code.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_OK if err.code in (0, None) else EXIT_USAGE

    if getattr(args, 'verbosity', None) is not None:
        set_log_level(logger, args.verbosity)

    try:
        return args.func(args)
    except commands.InputError:
        return EXIT_USAGE
    except (ValueError, RuntimeError, IOError, ArithmeticError):
        return EXIT_DOMAIN


if __name__ == '__main__':
    sys.exit(main())
