import json
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import pandas as pd

from .errors import ParameterError, SpinGreenError
from .logger import get_logger
from .model import CONVENTIONS, ModelParams, PhysicalParams, dimensionless_from_physical, energy_scale

SUPPORTED_FORMATS = ('csv', 'json')
PARAM_KEYS = {'variant', 'kappa', 'b', 'gamma'}


class DataManager:
    """Manages parameter files and tabular results without requiring a database"""

    def __init__(self):
        self.results = {}  # {name: {'frame': DataFrame, 'parameters': dict, 'extra': dict}}
        self.logger = get_logger(__name__)

    # =============================================================================
    # PARAMETER FILES
    # =============================================================================

    def load_params(self, file_path, default_units: str = "si") -> Tuple[ModelParams, Optional[Dict[str, Any]]]:
        """Load dimensionless parameters from a JSON file.

        Accepts either {"variant", "kappa", "b", "gamma"} or
        {"variant", "physical": {...PhysicalParams fields...}}.  Returns the
        parameters and, for physical input, a dict with the physical values and
        the energy scale.
        """
        file_path = Path(file_path)
        self.logger.info(f"Loading parameters from: {file_path}")
        try:
            with open(file_path, 'r', encoding='utf-8') as f:
                data = json.load(f)
        except OSError as e:
            raise ParameterError(f"Cannot read parameter file {file_path}: {e}")
        except json.JSONDecodeError as e:
            raise ParameterError(f"Parameter file {file_path} is not valid JSON: {e}")
        return self.params_from_dict(data, default_units)

    def params_from_dict(self, data: Dict[str, Any], default_units: str = "si") -> Tuple[ModelParams, Optional[Dict[str, Any]]]:
        if not isinstance(data, dict) or 'variant' not in data:
            raise ParameterError("Parameter object must contain 'variant'")
        if 'physical' in data:
            unknown = set(data) - {'variant', 'physical'}
            if unknown:
                raise ParameterError(f"Unexpected keys next to 'physical': {sorted(unknown)}")
            try:
                physical = PhysicalParams(**{"units": default_units, **data["physical"]})
            except TypeError as e:
                raise ParameterError(f"Invalid 'physical' block: {e}")
            params = dimensionless_from_physical(physical, data['variant'])
            self.logger.debug(f"Converted physical parameters to {params.to_dict()}")
            return params, {'physical': physical.to_dict(), 'energy_scale': energy_scale(physical)}

        unknown = set(data) - PARAM_KEYS
        if unknown:
            raise ParameterError(f"Unknown parameter keys: {sorted(unknown)}")
        if 'kappa' not in data:
            raise ParameterError("Parameter object must contain 'kappa'")
        return ModelParams(data['variant'], data['kappa'], data.get('b', 0.0), data.get('gamma', 0.0)), None

    # =============================================================================
    # RESULTS
    # =============================================================================

    def add_result(self, name: str, frame: pd.DataFrame, parameters: Dict[str, Any],
                   extra: Optional[Dict[str, Any]] = None) -> str:
        """Store a result table; duplicate names get a numeric suffix"""
        counter = 1
        original_name = name
        while name in self.results:
            name = f"{original_name}_{counter}"
            counter += 1
        self.results[name] = {'frame': frame, 'parameters': parameters, 'extra': extra or {}}
        self.logger.debug(f"Stored result '{name}' with {len(frame)} rows")
        return name

    # =============================================================================
    # EXPORT
    # =============================================================================

    @staticmethod
    def infer_format(file_path, format: Optional[str] = None) -> str:
        fmt = (format or Path(file_path).suffix.lstrip('.')).lower()
        if fmt not in SUPPORTED_FORMATS:
            raise ParameterError(f"Unsupported output format {fmt!r}; expected one of {SUPPORTED_FORMATS}")
        return fmt

    def export_result(self, name: str, file_path, format: Optional[str] = None) -> Path:
        """Write a stored result as CSV (with '#' header lines) or JSON"""
        if name not in self.results:
            raise ParameterError(f"No result named {name!r}")
        file_path = Path(file_path)
        fmt = self.infer_format(file_path, format)
        entry = self.results[name]
        header = {'parameters': entry['parameters'], 'conventions': CONVENTIONS, **entry['extra']}
        try:
            if file_path.parent and not file_path.parent.exists():
                file_path.parent.mkdir(parents=True, exist_ok=True)
            if fmt == 'csv':
                with open(file_path, 'w', encoding='utf-8', newline='') as f:
                    for key in sorted(header):
                        f.write(f"# {key}: {json.dumps(header[key], sort_keys=True)}\n")
                    entry['frame'].to_csv(f, index=False, lineterminator='\n')
            else:
                payload = dict(header)
                payload['records'] = entry['frame'].to_dict(orient='records')
                self._write_json(file_path, payload)
        except OSError as e:
            raise SpinGreenError(f"Cannot write {file_path}: {e}")
        self.logger.info(f"Exported result '{name}' to {file_path} ({fmt}, {len(entry['frame'])} rows)")
        return file_path

    def write_manifest(self, output_path, job: Dict[str, Any]) -> Path:
        """<output>.manifest.json with the fully resolved job; no timestamps"""
        manifest_path = Path(f"{output_path}.manifest.json")
        self._write_json(manifest_path, {'job': job, 'conventions': CONVENTIONS})
        self.logger.debug(f"Wrote manifest {manifest_path}")
        return manifest_path

    @staticmethod
    def _write_json(file_path: Path, payload: Dict[str, Any]):
        with open(file_path, 'w', encoding='utf-8', newline='\n') as f:
            json.dump(payload, f, indent=2, sort_keys=True)
            f.write('\n')
