"""Experiment records and the dispatcher behind the command line.

An :class:`ExperimentSpec` names a subcommand, its parameters and the master seed.
:func:`run` validates it, calls the owning module and returns an :class:`ExperimentResult`
whose rows depend only on the spec. Results are written as CSV, one row per record
with the spec echoed in the last column, or as compas JSON.
"""

import csv
import io
import json
import logging
import time
from enum import Enum
from typing import Dict
from typing import List
from typing import Optional
from typing import TextIO
from typing import Union

import compas
from compas.data import Data

import compas_fpp
from compas_fpp.correspondence import verify_coupling
from compas_fpp.correspondence import verify_coupling_exhaustive
from compas_fpp.correspondence import verify_coupling_replicas
from compas_fpp.estimators.events import check_standard_bound
from compas_fpp.estimators.events import event_a_probability
from compas_fpp.estimators.strip import expected_distance_exact
from compas_fpp.estimators.strip import lower_bound_check
from compas_fpp.estimators.strip import monte_carlo_distance
from compas_fpp.estimators.strip import stationary_start_expectation
from compas_fpp.estimators.strip import strip_lower_bound
from compas_fpp.exceptions import ParameterError
from compas_fpp.exceptions import VerificationFailure
from compas_fpp.plane.mu import MIN_REPLICAS
from compas_fpp.plane.mu import estimate_mu
from compas_fpp.rng import make_rng
from compas_fpp.strip.edgeio import dump_edges
from compas_fpp.strip.edgeio import load_edges
from compas_fpp.strip.geometry import StripGeometry
from compas_fpp.strip.sampling import sample_configuration
from compas_fpp.tasep.formulas import nu_compare
from compas_fpp.tasep.formulas import nu_pair_formula
from compas_fpp.tasep.stationary import EXACT_MAX_K
from compas_fpp.tasep.stationary import DEFAULT_BATCH_SIZE
from compas_fpp.tasep.stationary import StationaryDistribution
from compas_fpp.tasep.stationary import nu_pair_simulated
from compas_fpp.tasep.stationary import stationary_exact

LOG = logging.getLogger(__name__)

SEED_LIMIT = 1 << 64


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


# name: (type, default); REQUIRED has no default
REQUIRED = object()

PARAMETERS: Dict[str, Dict[str, tuple]] = {
    "strip-distance": {
        "K": (int, REQUIRED),
        "eps": (float, REQUIRED),
        "n": (int, REQUIRED),
        "method": (str, "exact"),
        "replicas": (int, 10000),
    },
    "tasep-stationary": {
        "K": (int, REQUIRED),
        "eps": (float, REQUIRED),
        "method": (str, "exact"),
        "burn_in": (int, 10000),
        "samples": (int, 1000000),
        "batch_size": (int, DEFAULT_BATCH_SIZE),
    },
    "nu-compare": {
        "eps": (float, REQUIRED),
        "K_max": (int, 6),
    },
    "verify-correspondence": {
        "K": (int, REQUIRED),
        "eps": (float, REQUIRED),
        "columns": (int, 10000),
        "replicas": (int, 1),
        "exhaustive": (bool, False),
        "dump_edges": (str, None),
        "replay_edges": (str, None),
    },
    "mu-estimate": {
        "eps": (float, REQUIRED),
        "n": (int, REQUIRED),
        "margin": (int, None),
        "replicas": (int, 400),
    },
    "event-a-bound": {
        "K": (int, REQUIRED),
        "n": (int, REQUIRED),
        "eps": (float, REQUIRED),
        "samples": (int, 100000),
        "accepted": (int, 0),
    },
    "lower-bound-check": {
        "k": (int, REQUIRED),
        "eps": (float, REQUIRED),
        "replicas": (int, 1000),
        "strip_K": (int, 3),
    },
}

METHODS = {
    "strip-distance": ("exact", "mc", "stationary"),
    "tasep-stationary": ("exact", "simulation", "formula"),
}

COLUMNS: Dict[str, List[str]] = {
    "strip-distance": ["K", "eps", "n", "method", "value", "stderr", "nu_exact", "lower_gap", "upper_gap", "seed"],
    "tasep-stationary": ["K", "eps", "method", "nu_pair", "stderr", "residual", "samples", "seed"],
    "nu-compare": ["K", "eps", "formula", "exact", "difference", "residual", "status"],
    "verify-correspondence": ["K", "eps", "seed", "columns", "replicas", "steps_checked", "mismatches", "passed", "first_mismatch"],
    "mu-estimate": ["eps", "n", "margin", "replicas", "admissible_fraction", "mu_hat", "stderr", "seed"],
    "event-a-bound": ["K", "n", "eps", "samples", "failures", "probability", "stderr", "bound", "sharp_bound", "within_bound", "accepted", "standard_violations", "seed"],
    "lower-bound-check": ["k", "eps", "replicas", "equality_violations", "bound_violations", "monotonicity_violations", "finite", "mean_ratio", "strip_K", "strip_bound", "seed"],
}

SUBCOMMANDS = tuple(PARAMETERS)


class ExperimentSpec(Data):
    """A fully determined experiment: subcommand, parameters, master seed and output.

    Missing parameters are filled with their defaults, so the echo of a spec
    names every value the run used.

    Parameters
    ----------
    subcommand : str
    parameters : dict
    seed : int, optional
        Master seed in ``[0, 2**64)``.
    output : str, optional
        Output path. None writes to standard output.
    format : :class:`OutputFormat`, optional

    """

    @property
    def __data__(self):
        return {
            "subcommand": self.subcommand,
            "parameters": self.parameters,
            "seed": self.seed,
            "output": self.output,
            "format": self.format.value,
        }

    def __init__(
        self,
        subcommand: str,
        parameters: Optional[dict] = None,
        seed: int = 0,
        output: Optional[str] = None,
        format: Union[OutputFormat, str] = OutputFormat.CSV,
        name: Optional[str] = None,
    ):
        super(ExperimentSpec, self).__init__(name=name)
        self.subcommand = subcommand
        self.parameters = dict(parameters or {})
        for key, (_, default) in PARAMETERS.get(subcommand, {}).items():
            if default is not REQUIRED:
                self.parameters.setdefault(key, default)
        self.seed = seed
        self.output = output
        self.format = OutputFormat(format)

    def __repr__(self):
        return "ExperimentSpec({}, {}, seed={})".format(self.subcommand, self.parameters, self.seed)

    def __getitem__(self, key):
        return self.parameters[key]

    def validate(self) -> None:
        """Check the parameter ranges.

        Raises
        ------
        ParameterError
            Listing every offending field.

        """
        errors = []
        if self.subcommand not in PARAMETERS:
            raise ParameterError("unknown subcommand {!r}, expected one of {}".format(self.subcommand, ", ".join(SUBCOMMANDS)))
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or not 0 <= self.seed < SEED_LIMIT:
            errors.append("seed: must be an integer in [0, 2**64), got {!r}".format(self.seed))

        schema = PARAMETERS[self.subcommand]
        malformed = []
        for key in self.parameters:
            if key not in schema:
                malformed.append("{}: unknown parameter".format(key))
        for key, (kind, default) in schema.items():
            value = self.parameters.get(key, default)
            if value is REQUIRED:
                malformed.append("{}: required".format(key))
            elif value is not None and not _has_type(value, kind):
                malformed.append("{}: expected {}, got {!r}".format(key, kind.__name__, value))
        # range checks need every value present and typed
        if malformed:
            raise ParameterError("invalid {} spec: {}".format(self.subcommand, "; ".join(errors + malformed)))

        p = self.parameters
        if "eps" in p and not 0 <= p["eps"] <= 1:
            errors.append("eps: must lie in [0, 1], got {}".format(p["eps"]))
        for key in ("K", "k", "K_max", "strip_K"):
            if key in p and p[key] < 1:
                errors.append("{}: must be a positive integer, got {}".format(key, p[key]))
        if "n" in p:
            minimum = 0 if self.subcommand == "strip-distance" else 1
            if p["n"] < minimum:
                errors.append("n: must be at least {}, got {}".format(minimum, p["n"]))
        if "method" in p and p["method"] not in METHODS[self.subcommand]:
            errors.append("method: expected one of {}, got {!r}".format(", ".join(METHODS[self.subcommand]), p["method"]))
        for key in ("burn_in", "accepted", "columns"):
            if key in p and p[key] < 0:
                errors.append("{}: must be non-negative, got {}".format(key, p[key]))
        for key in ("samples", "batch_size"):
            if key in p and p[key] < 1:
                errors.append("{}: must be positive, got {}".format(key, p[key]))
        if "replicas" in p:
            minimum = {"strip-distance": 2, "mu-estimate": MIN_REPLICAS}.get(self.subcommand, 1)
            if p["replicas"] < minimum:
                errors.append("replicas: must be at least {}, got {}".format(minimum, p["replicas"]))
        if p.get("margin") is not None:
            if 2 * p["margin"] < p["n"]:
                errors.append("margin: must be at least n / 2 = {}, got {}".format(p["n"] / 2, p["margin"]))
        if self.subcommand == "verify-correspondence":
            if p["exhaustive"] and (p["dump_edges"] or p["replay_edges"]):
                errors.append("exhaustive: cannot be combined with dump_edges or replay_edges")
            if p["dump_edges"] and p["replay_edges"]:
                errors.append("dump_edges: cannot be combined with replay_edges")
        if errors:
            raise ParameterError("invalid {} spec: {}".format(self.subcommand, "; ".join(errors)))


def _has_type(value, kind) -> bool:
    if kind is float:
        return isinstance(value, (int, float)) and not isinstance(value, bool)
    if kind is int:
        return isinstance(value, int) and not isinstance(value, bool)
    return isinstance(value, kind)


class ExperimentResult(Data):
    """The records of one run with the spec that produced them.

    Parameters
    ----------
    spec : :class:`ExperimentSpec`
    rows : list[dict]
        One record per output row. Values are JSON scalars.
    passed : bool, optional
        Outcome of a verification. None for plain estimates.
    wall_time : float, optional
    version : str, optional

    """

    @property
    def __data__(self):
        return {
            "spec": self.spec.__data__,
            "rows": self.rows,
            "passed": self.passed,
            "wall_time": self.wall_time,
            "version": self.version,
        }

    @classmethod
    def __from_data__(cls, data):
        return cls(
            ExperimentSpec.__from_data__(data["spec"]),
            data["rows"],
            passed=data.get("passed"),
            wall_time=data.get("wall_time", 0.0),
            version=data.get("version"),
        )

    def __init__(
        self,
        spec: ExperimentSpec,
        rows: List[dict],
        passed: Optional[bool] = None,
        wall_time: float = 0.0,
        version: Optional[str] = None,
        name: Optional[str] = None,
    ):
        super(ExperimentResult, self).__init__(name=name)
        self.spec = spec
        self.rows = [{key: _scalar(value) for key, value in row.items()} for row in rows]
        self.passed = passed
        self.wall_time = wall_time
        self.version = version or compas_fpp.__version__

    def __repr__(self):
        return "ExperimentResult({}, rows={}, passed={})".format(self.spec.subcommand, len(self.rows), self.passed)

    @property
    def columns(self) -> List[str]:
        """The columns of the subcommand, then any further row keys in sorted order."""
        columns = list(COLUMNS[self.spec.subcommand])
        known = set(columns)
        columns += sorted({key for row in self.rows for key in row if key not in known})
        return columns

    def raise_for_failure(self) -> None:
        if self.passed is False:
            raise VerificationFailure("{} failed: {}".format(self.spec.subcommand, self.rows))

    def dumps(self, format: Union[OutputFormat, str, None] = None) -> str:
        """CSV or pretty JSON text of the result. Defaults to the format of the spec."""
        format = OutputFormat(format or self.spec.format)
        if format == OutputFormat.JSON:
            return compas.json_dumps(self, pretty=True)
        stream = io.StringIO()
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(self.columns + ["version", "spec"])
        echo = json.dumps(self.spec.__data__, sort_keys=True)
        for row in self.rows:
            writer.writerow([_cell(row.get(column)) for column in self.columns] + [self.version, echo])
        return stream.getvalue()

    def dump(self, target: Union[str, TextIO, None] = None, format: Union[OutputFormat, str, None] = None) -> None:
        text = self.dumps(format)
        if target is None:
            target = self.spec.output
        if target is None:
            raise ParameterError("no output target")
        if hasattr(target, "write"):
            target.write(text)
            return
        with open(target, "w", newline="") as handle:
            handle.write(text)

    @classmethod
    def loads(cls, text: str, format: Union[OutputFormat, str] = OutputFormat.CSV) -> "ExperimentResult":
        """Parse :meth:`dumps` output.

        CSV has no wall time. The verdict is rebuilt from the ``passed`` column, when there is one.
        """
        if OutputFormat(format) == OutputFormat.JSON:
            return compas.json_loads(text)
        records = list(csv.DictReader(io.StringIO(text)))
        if not records:
            raise ParameterError("no records in CSV text")
        echo = json.loads(records[0]["spec"])
        spec = ExperimentSpec(echo["subcommand"], echo["parameters"], echo["seed"], echo["output"], echo["format"])
        columns = [column for column in records[0] if column not in ("version", "spec")]
        rows = [{column: _parse_cell(record[column]) for column in columns} for record in records]
        passed = None
        if "passed" in columns:
            passed = all(row["passed"] for row in rows)
        return cls(spec, rows, passed=passed, version=records[0]["version"])


def _scalar(value):
    """Plain JSON scalars from numpy values and fractions."""
    if isinstance(value, dict):
        return json.dumps(value, sort_keys=True)
    if hasattr(value, "item"):
        value = value.item()
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, int):
        return int(value)
    return float(value)


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse_cell(text: str):
    if text == "":
        return None
    if text in ("True", "False"):
        return text == "True"
    for kind in (int, float):
        try:
            return kind(text)
        except ValueError:
            pass
    return text


# =============================================================================
# Dispatch
# =============================================================================


def _sandwich_columns(K: int, eps: float, n: int, value: float) -> dict:
    if K > EXACT_MAX_K or not 0 < eps < 1:
        return {"nu_exact": None, "lower_gap": None, "upper_gap": None}
    nu = float(stationary_exact(K, eps).nu_pair)
    line = n * (1.0 + 2.0 * eps * nu)
    return {"nu_exact": nu, "lower_gap": value - line, "upper_gap": line + 2 * K - value}


def _strip_distance(spec: ExperimentSpec, workers: Optional[int]):
    K, eps, n, method = spec["K"], float(spec["eps"]), spec["n"], spec["method"]
    if method == "exact":
        expectation = expected_distance_exact(K, eps, n)
    elif method == "mc":
        expectation = monte_carlo_distance(K, eps, n, spec["replicas"], seed=spec.seed, workers=workers)
    else:
        expectation = stationary_start_expectation(K, eps, n)
    value = float(expectation.value)
    row = {"K": K, "eps": eps, "n": n, "method": method, "value": value, "stderr": expectation.stderr, "seed": spec.seed}
    row.update(_sandwich_columns(K, eps, n, value))
    return [row], None


def _tasep_stationary(spec: ExperimentSpec, workers: Optional[int]):
    K, eps, method = spec["K"], float(spec["eps"]), spec["method"]
    if method == "exact":
        distribution: StationaryDistribution = stationary_exact(K, eps)
        nu, stderr, residual, samples = distribution.nu_pair, None, distribution.residual, None
    elif method == "simulation":
        distribution = nu_pair_simulated(K, eps, spec["burn_in"], spec["samples"], seed=spec.seed, batch_size=spec["batch_size"])
        nu, stderr, residual, samples = distribution.nu_pair, distribution.stderr, None, distribution.samples
    else:
        nu, stderr, residual, samples = nu_pair_formula(K, eps), None, None, None
    row = {"K": K, "eps": eps, "method": method, "nu_pair": float(nu), "stderr": stderr, "residual": residual, "samples": samples, "seed": spec.seed}
    return [row], None


def _nu_compare(spec: ExperimentSpec, workers: Optional[int]):
    rows = []
    for comparison in nu_compare(float(spec["eps"]), spec["K_max"]):
        row = comparison.__data__
        row["difference"] = comparison.difference
        rows.append(row)
    return rows, None


def _verify_correspondence(spec: ExperimentSpec, workers: Optional[int]):
    K, eps = spec["K"], float(spec["eps"])
    if spec["exhaustive"]:
        report = verify_coupling_exhaustive(K)
    elif spec["replay_edges"]:
        configuration = load_edges(spec["replay_edges"])
        if configuration.geometry.K != K:
            LOG.warning("replayed edges have K=%d, overriding K=%d", configuration.geometry.K, K)
        report = verify_coupling(K, eps, configuration.n, spec.seed, configuration=configuration)
    else:
        report = verify_coupling_replicas(K, eps, spec["columns"], spec.seed, spec["replicas"], workers)
        if spec["dump_edges"]:
            replica = report.first_mismatch["replica"] if report.first_mismatch else 0
            configuration = sample_configuration(make_rng(spec.seed, replica), StripGeometry(K), eps, spec["columns"])
            dump_edges(configuration, spec["dump_edges"])
            LOG.info("edges of replica %d written to %s", replica, spec["dump_edges"])
    row = report.__data__
    row["passed"] = bool(report.passed)
    return [row], report.passed


def _mu_estimate(spec: ExperimentSpec, workers: Optional[int]):
    estimate = estimate_mu(float(spec["eps"]), spec["n"], spec["margin"], spec["replicas"], spec.seed, workers)
    row = estimate.__data__
    row["slope"] = estimate.slope
    row.update(estimate.reference)
    return [row], None


def _event_a_bound(spec: ExperimentSpec, workers: Optional[int]):
    K, n, eps = spec["K"], spec["n"], float(spec["eps"])
    estimate = event_a_probability(K, n, eps, spec["samples"], spec.seed, workers)
    row = estimate.__data__
    row.update(
        {
            "probability": estimate.probability,
            "stderr": estimate.stderr,
            "bound": estimate.bound,
            "sharp_bound": estimate.sharp_bound,
            "within_bound": estimate.within_bound(),
            "accepted": None,
            "standard_violations": None,
        }
    )
    passed = bool(estimate.within_bound())
    if spec["accepted"]:
        report = check_standard_bound(K, n, eps, spec["accepted"], spec.seed)
        row.update({"accepted": report.accepted, "standard_violations": report.violations, "max_excess": report.max_excess})
        passed = passed and bool(report.passed)
    row["passed"] = passed
    return [row], passed


def _lower_bound_check(spec: ExperimentSpec, workers: Optional[int]):
    eps = float(spec["eps"])
    report = lower_bound_check(spec["k"], eps, spec.seed, spec["replicas"], workers)
    row = report.__data__
    row["strip_K"] = spec["strip_K"]
    row["strip_bound"] = strip_lower_bound(spec["strip_K"], eps) if 0 < eps < 1 and spec["strip_K"] <= EXACT_MAX_K else None
    row["passed"] = bool(report.passed)
    return [row], row["passed"]


RUNNERS = {
    "strip-distance": _strip_distance,
    "tasep-stationary": _tasep_stationary,
    "nu-compare": _nu_compare,
    "verify-correspondence": _verify_correspondence,
    "mu-estimate": _mu_estimate,
    "event-a-bound": _event_a_bound,
    "lower-bound-check": _lower_bound_check,
}


def run(spec: ExperimentSpec, workers: Optional[int] = None) -> ExperimentResult:
    """Validate the spec and run it.

    The rows depend on the spec only, never on ``workers``. Errors of the
    owning module propagate unchanged.
    """
    spec.validate()
    LOG.info("running %r", spec)
    start = time.perf_counter()
    rows, passed = RUNNERS[spec.subcommand](spec, workers)
    wall_time = time.perf_counter() - start
    LOG.info("%s finished in %.2fs", spec.subcommand, wall_time)
    return ExperimentResult(spec, rows, passed=passed, wall_time=wall_time)
