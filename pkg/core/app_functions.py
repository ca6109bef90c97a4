"""
Central App Functions Component

Single entry point for every job the command line can run:
1. spectrum tables
2. Green-function kernels on point grids
3. renormalized Green functions on energy grids
4. verification suites

Every function returns a result dict with 'success', 'message' and the exit
status the command line should report.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from .data_manager import DataManager
from .errors import AccuracyError, ParameterError, SpinGreenError
from .green import KernelRequest, PATHS, green_function
from .logger import get_logger
from .model import ComplexEnergy, ModelParams, Point2, parse_complex
from .renorm import green_ren
from .specfun import SeriesControl
from .spectrum import free_spectrum, spin_orbit_levels, zeeman_levels
from .verify import SUITES, run_suite

COMMANDS = ('spectrum', 'green', 'green-ren', 'verify')


def parse_range(text: str) -> List[float]:
    """'start:stop:count' -> count evenly spaced reals (both ends included)."""
    parts = str(text).replace(" ", "").split(":")
    if len(parts) != 3:
        raise ParameterError(f"Range must be 'start:stop:count', got {text!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ParameterError(f"Range must be 'start:stop:count', got {text!r}")
    if count < 1 or not (np.isfinite(start) and np.isfinite(stop)):
        raise ParameterError(f"Range needs finite ends and count >= 1, got {text!r}")
    return [float(v) for v in np.linspace(start, stop, count)]


def parse_complex_range(text: str) -> List[complex]:
    """'z0:z1:count' with complex end points -> points on the segment."""
    parts = str(text).split(":")
    if len(parts) != 3:
        raise ParameterError(f"Energy range must be 'z0:z1:count', got {text!r}")
    start, stop = parse_complex(parts[0]), parse_complex(parts[1])
    try:
        count = int(parts[2])
    except ValueError:
        raise ParameterError(f"Energy range count must be an integer, got {parts[2]!r}")
    if count < 1:
        raise ParameterError("Energy range count must be >= 1")
    if count == 1:
        return [start]
    return [start + (stop - start) * k / (count - 1) for k in range(count)]


@dataclass
class JobSpec:
    """A fully resolved job: what the manifest records."""

    command: str
    params: Optional[ModelParams] = None
    output: Optional[str] = None
    format: Optional[str] = None
    points: List[Point2] = field(default_factory=list)
    sources: List[Point2] = field(default_factory=list)
    energies: List[complex] = field(default_factory=list)
    n_max: int = 10
    include_spurious: bool = False
    path: str = "operator"
    suite: str = "all"
    trials: int = 10
    seed: int = 0
    rel_tol: float = 1e-14
    max_terms: int = 10000
    pole_distance: float = 1e-10
    on_axis_tolerance: float = 1e-12
    physical: Optional[Dict[str, Any]] = None

    def validate(self):
        if self.command not in COMMANDS:
            raise ParameterError(f"Unknown command {self.command!r}; expected one of {COMMANDS}")
        if self.command != 'verify' and self.params is None:
            raise ParameterError(f"'{self.command}' needs model parameters")
        if self.command == 'green' and (not self.points or not self.sources or len(self.energies) != 1):
            raise ParameterError("'green' needs at least one r, at least one r' and exactly one z")
        if self.command == 'green-ren' and not self.energies:
            raise ParameterError("'green-ren' needs at least one z")
        if self.path not in PATHS:
            raise ParameterError(f"path must be one of {PATHS}, got {self.path!r}")
        if self.command == 'verify' and self.suite != 'all' and self.suite not in SUITES:
            raise ParameterError(f"Unknown suite {self.suite!r}")
        if self.n_max < 0 or self.trials < 1:
            raise ParameterError("n_max must be >= 0 and trials >= 1")
        return self

    def series_control(self) -> SeriesControl:
        return SeriesControl(self.rel_tol, self.max_terms)

    def to_manifest(self) -> Dict[str, Any]:
        data = asdict(self)
        data['params'] = self.params.to_dict() if self.params else None
        data['points'] = [list(p.as_tuple()) for p in self.points]
        data['sources'] = [list(p.as_tuple()) for p in self.sources]
        data['energies'] = [[z.real, z.imag] for z in self.energies]
        return data

    @classmethod
    def from_manifest(cls, data: Dict[str, Any]) -> "JobSpec":
        """Inverse of to_manifest; accepts the manifest file's 'job' object."""
        try:
            fields = dict(data)
            params = fields.pop('params', None)
            job = cls(
                params=ModelParams(**params) if params else None,
                points=[Point2(*p) for p in fields.pop('points', [])],
                sources=[Point2(*p) for p in fields.pop('sources', [])],
                energies=[complex(re, im) for re, im in fields.pop('energies', [])],
                **fields,
            )
        except (TypeError, ValueError) as e:
            raise ParameterError(f"Malformed manifest: {e}")
        return job


class AppFunctions:
    """Central hub for all job operations"""

    def __init__(self, data_manager: Optional[DataManager] = None, threads: int = 1):
        self.data_manager = data_manager or DataManager()
        self.threads = max(1, int(threads))
        self.logger = get_logger(__name__)

    def _ordered_map(self, func: Callable, items: Sequence) -> List:
        """Parallel map; results come back in input order"""
        if self.threads == 1 or len(items) <= 1:
            return [func(item) for item in items]
        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            return list(pool.map(func, items))

    @staticmethod
    def _failure(error: SpinGreenError) -> Dict[str, Any]:
        return {'success': False, 'message': str(error), 'exit_code': error.exit_code,
                'error_type': type(error).__name__}

    # =============================================================================
    # JOB DISPATCH
    # =============================================================================

    def run(self, job: JobSpec) -> Dict[str, Any]:
        """Run a job, export its result and manifest, report the exit status"""
        try:
            job.validate()
            self.logger.info(f"Running '{job.command}' job")
            handler = {
                'spectrum': self.compute_spectrum,
                'green': self.compute_green,
                'green-ren': self.compute_green_ren,
                'verify': self.run_verification,
            }[job.command]
            result = handler(job)
            if job.output:
                self.data_manager.export_result(result['result_name'], job.output, job.format)
                self.data_manager.write_manifest(job.output, job.to_manifest())
                result['output'] = job.output
            return result
        except SpinGreenError as e:
            self.logger.error(f"Job '{job.command}' failed: {e}")
            return self._failure(e)

    def _parameters_header(self, job: JobSpec) -> Dict[str, Any]:
        header = job.params.to_dict() if job.params else {}
        if job.params and job.params.b != 0.0 and job.params.kappa != 0.0:
            header['beta'] = job.params.beta
        if job.physical:
            header.update(job.physical)
        return header

    # =============================================================================
    # SPECTRUM
    # =============================================================================

    def compute_spectrum(self, job: JobSpec) -> Dict[str, Any]:
        params = job.params
        if params.b == 0.0:
            half_line = free_spectrum(params)
            frame = pd.DataFrame([{'threshold': half_line.threshold, 'purely_continuous': half_line.purely_continuous}])
            message = f"Continuous spectrum [{half_line.threshold:g}, inf)"
        else:
            table = zeeman_levels(params, job.n_max) if params.kappa == 0.0 else spin_orbit_levels(params, job.n_max)
            frame = table.to_frame()
            if not job.include_spurious:
                frame = frame[frame['admissible']].reset_index(drop=True)
            message = f"{len(table.energies())} distinct levels for n <= {job.n_max}"
        name = self.data_manager.add_result('spectrum', frame, self._parameters_header(job))
        return {'success': True, 'message': message, 'exit_code': 0, 'result_name': name, 'frame': frame}

    # =============================================================================
    # KERNELS
    # =============================================================================

    def compute_green(self, job: JobSpec) -> Dict[str, Any]:
        params, z = job.params, ComplexEnergy(job.energies[0])
        ctl = job.series_control()
        pairs = [(r, rp) for rp in job.sources for r in job.points]

        def evaluate(pair):
            r, rp = pair
            kernel = green_function(KernelRequest(params, r, rp, z), job.path, ctl,
                                    job.on_axis_tolerance, job.pole_distance)
            return {'x': r.x, 'y': r.y, 'x_prime': rp.x, 'y_prime': rp.y,
                    'z_re': z.z.real, 'z_im': z.z.imag, **kernel.to_record()}

        records = self._ordered_map(evaluate, pairs)
        frame = pd.DataFrame(records)
        frame.insert(0, 'index', range(len(frame)))
        name = self.data_manager.add_result('green', frame, self._parameters_header(job), {'path': job.path})
        return {'success': True, 'message': f"Evaluated {len(frame)} kernel values", 'exit_code': 0,
                'result_name': name, 'frame': frame}

    def compute_green_ren(self, job: JobSpec) -> Dict[str, Any]:
        params = job.params

        def evaluate(z):
            value = green_ren(params, z, job.pole_distance)
            return {'z_re': z.real, 'z_im': z.imag, **value.to_record()}

        frame = pd.DataFrame(self._ordered_map(evaluate, job.energies))
        frame.insert(0, 'index', range(len(frame)))
        name = self.data_manager.add_result('green_ren', frame, self._parameters_header(job))
        return {'success': True, 'message': f"Evaluated {len(frame)} renormalized values", 'exit_code': 0,
                'result_name': name, 'frame': frame}

    # =============================================================================
    # VERIFICATION
    # =============================================================================

    def run_verification(self, job: JobSpec) -> Dict[str, Any]:
        reports = run_suite(job.suite, job.trials, job.seed)
        frame = pd.DataFrame([report.to_dict() for report in reports],
                             columns=['residual_max', 'tolerance', 'passed', 'context', 'details'])
        failed = [r for r in reports if not r.passed]
        name = self.data_manager.add_result('verify', frame, {'suite': job.suite, 'trials': job.trials, 'seed': job.seed})
        if failed:
            worst = max(failed, key=lambda r: r.residual_max / r.tolerance if r.tolerance else np.inf)
            message = f"{len(failed)}/{len(reports)} checks failed; worst: {worst.context} ({worst.residual_max:.3e})"
            self.logger.warning(message)
            return {'success': False, 'message': message, 'exit_code': AccuracyError.exit_code,
                    'result_name': name, 'frame': frame}
        return {'success': True, 'message': f"All {len(reports)} checks passed", 'exit_code': 0,
                'result_name': name, 'frame': frame}
