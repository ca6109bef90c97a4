"""spingreen command line.

    python main.py spectrum --variant R --kappa 1 --b 1 --nmax 5 --out levels.csv
    python main.py green --variant D --kappa 0.5 --z " -2+0.5i" --r0 0,0 --r 1,0 --out k.json
    python main.py green-ren --variant R --kappa 1 --b 1 --z-range "0.5+0.1i:4+0.1i:50"
    python main.py verify --suite susy --trials 100 --out report.json
    python main.py rerun k.json.manifest.json

Exit status: 0 success, 1 usage error, 2 domain error (pole, branch cut,
wrong case), 3 accuracy error or failed verification.
"""

import itertools
import json
import sys
from pathlib import Path

import click
from dotenv import load_dotenv

from core.app_functions import AppFunctions, JobSpec, parse_complex_range, parse_range
from core.config_manager import ConfigManager
from core.data_manager import SUPPORTED_FORMATS, DataManager
from core.errors import ParameterError, SpinGreenError
from core.logger import cleanup_old_logs, get_logger, log_exception, log_system_info, setup_logging
from core.model import ComplexEnergy, ModelParams, Point2, parse_complex, parse_point
from core.verify import SUITES

logger = get_logger(__name__)


def model_options(func):
    """Inline model flags shared by the computing subcommands"""
    options = [
        click.option('--params', 'params_file', type=click.Path(dir_okay=False),
                     help='JSON parameter file (dimensionless or with a "physical" block)'),
        click.option('--variant', type=click.Choice(['R', 'D'], case_sensitive=False), help='Rashba or Dresselhaus'),
        click.option('--kappa', type=float, help='Spin-orbit coupling'),
        click.option('--b', 'field', type=float, default=None, help='Magnetic field (0 = free case)'),
        click.option('--gamma', type=float, default=None, help='Zeeman ratio'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def output_options(func):
    options = [
        click.option('--out', 'output', type=click.Path(dir_okay=False), help='Output file; stdout CSV if omitted'),
        click.option('--format', 'fmt', type=click.Choice(SUPPORTED_FORMATS), help='Output format (default: from suffix)'),
        click.option('--rel-tol', type=float, help='Series relative tolerance'),
        click.option('--max-terms', type=int, help='Series term cap'),
        click.option('--threads', type=int, help='Worker threads (overrides SPINGREEN_THREADS)'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def resolve_params(ctx, params_file, variant, kappa, field, gamma):
    """Parameters from --params or the inline flags, never both"""
    data_manager = ctx.obj['data_manager']
    units = ctx.obj['config'].get_units_config().get('system', 'si')
    inline = any(v is not None for v in (variant, kappa, field, gamma))
    if params_file:
        if inline:
            raise ParameterError("Use either --params or the inline --variant/--kappa/--b/--gamma flags")
        return data_manager.load_params(params_file, units)
    if variant is None or kappa is None:
        raise ParameterError("--variant and --kappa are required (or pass --params)")
    return ModelParams(variant.upper(), kappa, field or 0.0, gamma or 0.0), None


def build_job(ctx, command, params_pair=None, output=None, fmt=None, rel_tol=None, max_terms=None,
              threads=None, **fields) -> JobSpec:
    config = ctx.obj['config']
    numerics = config.get_numerics_config()
    if output and fmt is None and Path(output).suffix.lstrip('.').lower() not in SUPPORTED_FORMATS:
        fmt = config.get_output_config().get('default_format', 'csv')
    params, physical = params_pair or (None, None)
    if threads is not None:
        if threads < 1:
            raise ParameterError("--threads must be >= 1")
        ctx.obj['threads'] = threads
    return JobSpec(
        command=command,
        params=params,
        physical=physical,
        output=output,
        format=fmt,
        rel_tol=float(rel_tol if rel_tol is not None else numerics.get('rel_tol', 1e-14)),
        max_terms=int(max_terms if max_terms is not None else numerics.get('max_terms', 10000)),
        pole_distance=float(numerics.get('pole_distance', 1e-10)),
        on_axis_tolerance=float(numerics.get('on_axis_tolerance', 1e-12)),
        **fields,
    )


def execute(ctx, job: JobSpec) -> int:
    """Run a job and report; the return value is the process exit status"""
    app = AppFunctions(ctx.obj['data_manager'], ctx.obj['threads'])
    result = app.run(job)
    if not result['success'] and 'frame' not in result:
        click.echo(f"Error: {result['message']}", err=True)
        return result['exit_code']
    if job.output:
        click.echo(f"{result['message']} -> {result['output']}", err=True)
    else:
        click.echo(result['frame'].to_csv(index=False, lineterminator='\n'), nl=False)
        click.echo(result['message'], err=True)
    return result['exit_code']


@click.group()
@click.option('--config', 'config_path', type=click.Path(dir_okay=False), help='YAML configuration file')
@click.option('--log-level', type=click.Choice(['DEBUG', 'INFO', 'WARNING', 'ERROR'], case_sensitive=False),
              help='Overrides the configured log level')
@click.pass_context
def cli(ctx, config_path, log_level):
    """Green functions, spectra and renormalized Green functions of Rashba and
    Dresselhaus Hamiltonians, with and without a magnetic field."""
    load_dotenv()
    config = ConfigManager(Path(config_path) if config_path else None)
    logging_config = config.get_logging_config()
    setup_logging(
        log_level=log_level or logging_config.get('level', 'WARNING'),
        log_to_file=logging_config.get('to_file', False),
        log_to_console=logging_config.get('to_console', True),
    )
    log_system_info(logger)
    if logging_config.get('to_file', False):
        cleanup_old_logs(logging_config.get('max_age_days', 30))
    ctx.obj = {'config': config, 'data_manager': DataManager(), 'threads': config.get_threads()}


@cli.command()
@model_options
@output_options
@click.option('--nmax', 'n_max', type=int, default=10, show_default=True, help='Highest Landau index n')
@click.option('--include-spurious', is_flag=True, help='Keep the non-admissible k = 0 roots in the table')
@click.pass_context
def spectrum(ctx, params_file, variant, kappa, field, gamma, n_max, include_spurious, **options):
    """Spectrum table (energies with level indices) or the free threshold."""
    params_pair = resolve_params(ctx, params_file, variant, kappa, field, gamma)
    job = build_job(ctx, 'spectrum', params_pair, n_max=n_max, include_spurious=include_spurious, **options)
    return execute(ctx, job)


@cli.command()
@model_options
@output_options
@click.option('--z', 'energy', required=True, help='Complex energy, e.g. " -2+0.5i"')
@click.option('--r', 'points', multiple=True, help='Field point x,y (repeatable)')
@click.option('--r0', 'sources', multiple=True, help="Source point x',y' (repeatable, default 0,0)")
@click.option('--xs', help='x grid start:stop:count (combined with --ys)')
@click.option('--ys', help='y grid start:stop:count (combined with --xs)')
@click.option('--path', type=click.Choice(['operator', 'entrywise']), default='operator', show_default=True,
              help='Kernel assembly route')
@click.pass_context
def green(ctx, params_file, variant, kappa, field, gamma, energy, points, sources, xs, ys, path, **options):
    """Green-function kernel G(r, r'; z) on a set of points."""
    params_pair = resolve_params(ctx, params_file, variant, kappa, field, gamma)
    grid = [parse_point(p) for p in points]
    if xs or ys:
        if not (xs and ys):
            raise ParameterError("--xs and --ys must be given together")
        grid.extend(Point2(x, y) for y, x in itertools.product(parse_range(ys), parse_range(xs)))
    job = build_job(ctx, 'green', params_pair, points=grid,
                    sources=[parse_point(p) for p in sources] or [Point2(0.0, 0.0)],
                    energies=[ComplexEnergy.parse(energy).z], path=path, **options)
    return execute(ctx, job)


@cli.command('green-ren')
@model_options
@output_options
@click.option('--z', 'energies', multiple=True, help='Complex energy (repeatable)')
@click.option('--z-range', help='Energy segment z0:z1:count')
@click.pass_context
def green_ren(ctx, params_file, variant, kappa, field, gamma, energies, z_range, **options):
    """Renormalized Green function over a list or segment of energies."""
    params_pair = resolve_params(ctx, params_file, variant, kappa, field, gamma)
    grid = [parse_complex(z) for z in energies]
    if z_range:
        grid.extend(parse_complex_range(z_range))
    job = build_job(ctx, 'green-ren', params_pair, energies=grid, **options)
    return execute(ctx, job)


@cli.command()
@click.option('--suite', type=click.Choice(sorted(SUITES) + ['all']), default='all', show_default=True)
@click.option('--trials', type=int, default=10, show_default=True, help='Random trials per check')
@click.option('--seed', type=int, default=0, show_default=True)
@click.option('--out', 'output', type=click.Path(dir_okay=False), help='Report file (JSON or CSV)')
@click.option('--format', 'fmt', type=click.Choice(SUPPORTED_FORMATS))
@click.pass_context
def verify(ctx, suite, trials, seed, output, fmt):
    """Run identity and oracle checks; exit 3 if any check fails."""
    job = build_job(ctx, 'verify', output=output, fmt=fmt, suite=suite, trials=trials, seed=seed)
    return execute(ctx, job)


@cli.command()
@click.argument('manifest', type=click.Path(exists=True, dir_okay=False))
@click.option('--out', 'output', type=click.Path(dir_okay=False), help='Write somewhere other than the recorded output')
@click.pass_context
def rerun(ctx, manifest, output):
    """Repeat the job recorded in a .manifest.json file."""
    try:
        with open(manifest, 'r', encoding='utf-8') as f:
            job = JobSpec.from_manifest(json.load(f)['job'])
    except (json.JSONDecodeError, KeyError) as e:
        raise ParameterError(f"Cannot read manifest {manifest}: {e}")
    if output:
        job.output = output
    return execute(ctx, job)


def main(argv=None) -> int:
    try:
        status = cli.main(args=argv, prog_name='spingreen', standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("Aborted", err=True)
        return 1
    except click.ClickException as e:
        e.show()
        return 1
    except SpinGreenError as e:
        click.echo(f"Error: {e}", err=True)
        return e.exit_code
    except Exception:
        click.echo(f"Internal error: {log_exception(logger, 'Unexpected failure')}", err=True)
        return 1
    return status if isinstance(status, int) else 0


if __name__ == "__main__":
    sys.exit(main())
