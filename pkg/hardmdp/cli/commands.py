"""
One function per `hmdp` command. Data goes to stdout, diagnostics to the
logger (stderr).
"""
import sys
from contextlib import contextmanager
from datetime import datetime, timezone
from pathlib import Path

from ..bounds import THEOREM_IDS, evaluate_bound
from ..config import CRITICAL_VARS, OPTIONAL_VARS, check_config
from ..harness import (BPI_CSV_COLUMNS, REGRET_CSV_COLUMNS, LearnerSpec,
                       optimal_class_eps, run_bpi_sweep, run_regret_sweep)
from ..info import trajectory_kl_brute_force, trajectory_kl_exact, \
    trajectory_kl_monte_carlo, markov_agent_factory
from ..instances import ClassSpec, build_instance, enumerate_class
from ..mdp import (mdp_from_dict, mdp_to_dict, optimal_values, policy_from_dict,
                   uniform_policy, validate)
from ..utils.io import dumps_json, format_csv, get_file_list, load_config, load_json, \
    make_dirs, save_json, write_csv
from ..verify import CHECKS, run_checks
from .. import logger

SCHEMA_VERSION = 1

BOUND_CSV_COLUMNS = ['theorem_id', 'H', 'S', 'A', 'T', 'eps', 'delta', 'value', 'valid',
                     'failed']

KL_METHODS = ('exact', 'brute-force', 'monte-carlo')


class InputError(Exception):
    """
    Raised when the inputs of a command cannot be read or are invalid.
    """


@contextmanager
def reading_inputs():
    """
    Turn the errors raised while loading and checking inputs into InputError.
    """
    try:
        yield
    except (IOError, ValueError, KeyError, TypeError, RuntimeError) as err:
        raise InputError(str(err)) from err


def _emit(text):
    sys.stdout.write(text)
    sys.stdout.flush()


def format_table(header, rows):
    """
    Left-aligned plain text table.
    """
    cells = [[str(h) for h in header]] + [[_text(v) for v in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(header))]
    lines = ['  '.join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells]
    return '\n'.join(lines) + '\n'


def _text(value):
    if isinstance(value, float):
        return f'{value:.6g}'
    if value is None:
        return '-'
    return str(value)


def _seed(args, cfg=None):
    seed = getattr(args, 'seed', None)
    if seed is None:
        seed = cfg.get('seed', 0) if cfg else 0
    if seed < 0:
        logger.error(f'The seed must be nonnegative, got {seed}.')
        raise InputError
    return int(seed)


def _parallelism(args, cfg=None):
    n_jobs = getattr(args, 'parallelism', None)
    if n_jobs is None and cfg:
        n_jobs = cfg.get('parallelism')
    return n_jobs


def _summary(result):
    summary = {'schema_version': SCHEMA_VERSION,
               'generated_at': datetime.now(timezone.utc).isoformat()}
    summary.update(result.to_dict())
    return summary


def _class_from_flags(args):
    if args.family is None or args.A is None or args.H is None:
        logger.error('gen needs --spec or at least --family, --A and --H.')
        raise ValueError
    data = {'family': args.family, 'A': args.A, 'H': args.H, 'S': args.S,
            'Hbar': args.Hbar, 'eps': args.eps if args.eps is not None else 0.0,
            'relaxed': args.relaxed}
    if args.ref_arm is not None:
        data['ref_arm'] = list(args.ref_arm)
    return data


def cmd_gen(args):
    """
    Write one JSON file per class member and a manifest.
    """
    with reading_inputs():
        if args.spec is not None:
            cfg = check_config(load_config(args.spec), 'gen')
            data, out = cfg['class'], args.out or cfg['out']
        else:
            data, out = _class_from_flags(args), args.out or 'instances'
        spec = ClassSpec.from_dict(data)
        members = enumerate_class(spec)

    out = Path(out)
    make_dirs(out)
    stale = get_file_list(out, prefix='instance_', suffix='.json')
    if stale:
        logger.warning(f'Removing {len(stale)} instance files of an earlier run in {out}')
        for path in stale:
            Path(path).unlink()
    entries = []
    for i, params in enumerate(members):
        instance = build_instance(params)
        doc = mdp_to_dict(instance.mdp)
        doc['params'] = params.to_dict()
        name = f'instance_{i:03d}.json'
        save_json(doc, out / name)
        entries.append({'file': name, 'arm': doc['params']['arm'],
                        'site': list(instance.site) if instance.site is not None else None})

    manifest = {'schema_version': SCHEMA_VERSION, 'class': spec.to_dict(),
                'arm_sites': [list(site) for site in build_instance(members[0]).arm_sites],
                'instances': entries}
    save_json(manifest, out / 'manifest.json')
    logger.info(f'Wrote {len(entries)} instances and the manifest to {out}')
    _emit(dumps_json(manifest))
    return 0


def _load_mdp(path):
    with reading_inputs():
        m = mdp_from_dict(load_json(path))
        report = validate(m)
        if not report.valid:
            logger.error(f'{path}: {report.summary()}')
            raise ValueError
    return m


def cmd_plan(args):
    """
    Print rho*, the optimal values and the greedy policy of an instance.
    """
    m = _load_mdp(args.instance)
    values, pol = optimal_values(m)
    actions = pol.actions()
    if args.format == 'json':
        _emit(dumps_json({'rho_star': values.rho, 'V': values.V.tolist(),
                          'policy': actions.tolist()}))
        return 0

    header = ['stage'] + [f'V(s={s})' for s in range(m.S)] + [f'a(s={s})' for s in range(m.S)]
    rows = [[h + 1] + list(values.V[h]) + list(actions[h]) for h in range(m.H)]
    _emit(f'rho* = {values.rho:.12g}\n' + format_table(header, rows))
    return 0


def _kl_spec(args):
    """
    The kl inputs: the spec file if any, completed by check_config, with the
    flags given on the command line taking precedence.
    """
    flags = {'m0': args.m0, 'm1': args.m1, 'T': args.T, 'policy': args.policy,
             'method': args.method, 'n_reps': args.n_reps}
    given = {key: val for key, val in flags.items() if val is not None}
    with reading_inputs():
        if args.spec is not None:
            cfg = load_config(args.spec)
            if isinstance(cfg, dict):
                cfg.update(given)
            cfg = check_config(cfg, 'kl')
        else:
            missing = [key for key in CRITICAL_VARS['kl'] if key not in given]
            if missing:
                logger.error(f"kl needs --spec or {', '.join('--' + key for key in missing)}.")
                raise ValueError
            cfg = {key: val for key, val in OPTIONAL_VARS['kl'].items()
                   if key in ('policy', 'method', 'n_reps')}
            cfg.update(given)
        if cfg['method'] not in KL_METHODS:
            logger.error(f"Unknown method '{cfg['method']}'. Supported: {', '.join(KL_METHODS)}.")
            raise ValueError
    return cfg


def cmd_kl(args):
    """
    KL divergence between the T-episode history laws of two instances.
    """
    cfg = _kl_spec(args)
    m0, m1 = _load_mdp(cfg['m0']), _load_mdp(cfg['m1'])
    T = cfg['T']
    with reading_inputs():
        if cfg['policy'] == 'uniform':
            pol = uniform_policy(m0.S, m0.A, m0.H)
        else:
            pol = policy_from_dict(load_json(cfg['policy']))
        pol.check_matches(m0)
        if not m0.same_structure(m1):
            logger.error('The two instances must share S, A, H, mu and r.')
            raise ValueError
        if T < 0:
            logger.error(f'T must be nonnegative, got {T}.')
            raise ValueError

    if cfg['method'] == 'exact':
        breakdown = trajectory_kl_exact(m0, m1, pol, T)
        if args.format == 'json':
            _emit(dumps_json(breakdown.to_dict()))
        else:
            rows = [[e.h, e.s, e.a, e.expected_count, e.row_kl, e.contribution]
                    for e in breakdown.entries]
            _emit(format_table(['h', 's', 'a', 'E[N]', 'KL(row)', 'E[N] KL'], rows)
                  + f'total = {breakdown.total:.10g}\n')
        return 0

    if cfg['method'] == 'brute-force':
        result = {'method': cfg['method'], 'total': trajectory_kl_brute_force(m0, m1, pol, T)}
    else:
        mean, stderr = trajectory_kl_monte_carlo(m0, m1, markov_agent_factory(pol), T,
                                                 cfg['n_reps'], _seed(args, cfg),
                                                 n_jobs=_parallelism(args, cfg))
        result = {'method': cfg['method'], 'total': mean, 'stderr': stderr,
                  'n_reps': cfg['n_reps']}
    if args.format == 'json':
        _emit(dumps_json(result))
    else:
        _emit(format_table(list(result), [list(result.values())]))
    return 0


def _bound_inputs(data):
    theorem = data.get('theorem', data.get('theorem_id'))
    if theorem not in THEOREM_IDS:
        logger.error(f"Unknown theorem '{theorem}'. Supported: {', '.join(THEOREM_IDS)}.")
        raise ValueError
    inputs = {key: data.get(key) for key in ('H', 'S', 'A', 'T', 'eps', 'delta')}
    return theorem, inputs


def _bound_row(report):
    inputs = report.inputs
    return [report.theorem_id] + [inputs.get(key) for key in ('H', 'S', 'A', 'T', 'eps', 'delta')] \
        + [report.value, report.valid, ';'.join(report.failed)]


def cmd_bound(args):
    """
    Evaluate one bound, or a batch of them as CSV.
    """
    if args.batch is not None:
        with reading_inputs():
            batch = load_config(args.batch)
            if not isinstance(batch, list):
                logger.error('A bound batch must be a JSON array.')
                raise ValueError
            items = [_bound_inputs(data) for data in batch]
            reports = [evaluate_bound(theorem, **inputs) for theorem, inputs in items]
        _emit(format_csv(BOUND_CSV_COLUMNS, [_bound_row(r) for r in reports]))
        return 0

    with reading_inputs():
        theorem, inputs = _bound_inputs({'theorem': args.theorem, 'H': args.H, 'S': args.S,
                                         'A': args.A, 'T': args.T, 'eps': args.eps,
                                         'delta': args.delta})
        report = evaluate_bound(theorem, **inputs)
    if args.format == 'json':
        _emit(dumps_json(report.to_dict()))
    else:
        rows = [[c.name, 'pass' if c.passed else 'FAIL', c.detail] for c in report.preconditions]
        _emit(f'{report.theorem_id}: {report.value:.10g}  [{report.formula}]\n'
              + format_table(['precondition', 'status', 'detail'], rows))
    return 0


def _write_sweep(result, columns, out, csv_name):
    if out is None:
        _emit(format_csv(columns, result.csv_rows()))
        return
    out = Path(out)
    make_dirs(out)
    write_csv(out / csv_name, columns, result.csv_rows())
    summary = _summary(result)
    save_json(summary, out / 'summary.json')
    logger.info(f'Wrote {out / csv_name} and {out / "summary.json"}')
    _emit(dumps_json(summary))


def cmd_regret_sweep(args):
    """
    Run a regret sweep described by a JSON spec.
    """
    with reading_inputs():
        cfg = check_config(load_config(args.spec), 'regret-sweep')
        class_data = dict(cfg['class'])
        if class_data.get('eps') == 'optimal':
            class_data['eps'] = 0.0
            class_data['eps'] = optimal_class_eps(class_data, cfg['T'])
            logger.info(f"Optimal gap at T={cfg['T']}: eps = {class_data['eps']:.6g}")
        class_spec = ClassSpec.from_dict(class_data)
        learner = LearnerSpec.from_dict(cfg['learner'])

    result = run_regret_sweep(learner, class_spec, cfg['T'], cfg['n_seeds'],
                              seed=_seed(args, cfg), n_jobs=_parallelism(args, cfg))
    if not all(rec.agree for rec in result.records):
        logger.warning('Identity and reward regrets disagree on some instance.')
    _write_sweep(result, REGRET_CSV_COLUMNS, args.out or cfg['out'], 'regret_cells.csv')
    return 0


def cmd_bpi_sweep(args):
    """
    Run a best-policy-identification sweep described by a JSON spec.
    """
    with reading_inputs():
        cfg = check_config(load_config(args.spec), 'bpi-sweep')
        class_spec = ClassSpec.from_dict(cfg['class'])
        learner = LearnerSpec.from_dict(cfg['learner'])

    result = run_bpi_sweep(learner, class_spec, cfg['eps'], cfg['delta'], cfg['n_seeds'],
                           seed=_seed(args, cfg), n_jobs=_parallelism(args, cfg))
    _write_sweep(result, BPI_CSV_COLUMNS, args.out or cfg['out'], 'bpi_cells.csv')
    return 0


def cmd_verify(args):
    """
    Run the oracle suite; exit code 1 when any check fails.
    """
    with reading_inputs():
        names = args.checks or None
        unknown = sorted(set(names or ()) - {name for name, _ in CHECKS})
        if unknown:
            logger.error(f"Unknown checks {unknown}. "
                         f"Supported: {', '.join(name for name, _ in CHECKS)}.")
            raise ValueError
        seed = _seed(args)
    results = run_checks(seed=seed, names=names)
    rows = [[r.name, 'pass' if r.passed else 'FAIL', r.cases, r.failures, r.detail]
            for r in results]
    _emit(format_table(['check', 'status', 'cases', 'failures', 'detail'], rows))
    return 0 if all(r.passed for r in results) else 1
