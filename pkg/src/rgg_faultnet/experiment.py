"""Parameter sweeps, figure presets and the CSV result format."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from . import __version__
from .analytics import (
    SQUARE_FULL,
    TORUS_BULK,
    approx_breakdown_model,
    approx_breakdown_rayleigh_delta,
    approx_fig2,
    beta_critical,
    fig1_threshold,
)
from .connmodel import HardDisk, RayleighSISO, load_profile
from .faultsim import FaultModel, estimate_breakdown
from .geometry import as_metric

COLUMNS = ("n", "eta", "beta", "delta", "epsilon", "metric", "trials",
           "disconnected", "p_hat", "ci_low", "ci_high", "p_approx")
_INT_COLUMNS = {"n", "trials", "disconnected"}
_STR_COLUMNS = {"metric"}
COMPLETE_MARKER = "# complete"

PRESETS = ("fig1", "fig2", "fig3")


class PlanError(ValueError):
    """An invalid experiment plan; ``key`` names the offending field."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


@dataclass
class ExperimentPlan:
    preset: str | None = None
    model: str = "rayleigh"
    eta: list = field(default_factory=lambda: [2.0])
    beta: float | None = None
    beta_rule: str | None = None
    delta: list | None = None
    r_n: float | None = None
    profile: str | None = None
    scale: float = 1.0
    n: list = field(default_factory=lambda: [1024])
    epsilon: list = field(default_factory=lambda: [0.0])
    trials: int | None = 1000
    master_seed: int = 0
    metric: str = "torus"
    truncation: float = 0.0
    workers: int = 1
    out: str | None = None

    def validate(self) -> None:
        if self.preset is not None and self.preset not in PRESETS:
            raise PlanError("preset", f"unknown preset {self.preset!r}")
        if self.preset == "fig1":
            if not self.eta:
                raise PlanError("eta", "empty sweep")
            return
        if self.model not in ("rayleigh", "hard-disk", "tabulated"):
            raise PlanError("model", f"unknown model {self.model!r}")
        if self.trials is not None and (int(self.trials) != self.trials or self.trials < 1):
            raise PlanError("trials", "must be a positive integer")
        if not self.n or any(int(v) != v or v < 2 for v in self.n):
            raise PlanError("n", "node counts must be integers >= 2")
        if not self.epsilon or any(not 0.0 <= e < 1.0 for e in self.epsilon):
            raise PlanError("epsilon", "fault probabilities must lie in [0, 1)")
        if self.truncation < 0:
            raise PlanError("truncation", "must be non-negative")
        try:
            as_metric(self.metric)
        except ValueError as exc:
            raise PlanError("metric", str(exc)) from None
        if self.model == "rayleigh":
            given = [k for k in ("beta", "delta", "beta_rule") if getattr(self, k) is not None]
            if len(given) != 1:
                raise PlanError("beta", "give exactly one of --beta or --delta")
            if self.beta is not None and not self.beta > 0:
                raise PlanError("beta", "must be positive")
            if self.delta is not None and (not self.delta or any(not d > 0 for d in self.delta)):
                raise PlanError("delta", "scaling factors must be positive")
            if len(self.eta) != 1 and self.delta is not None:
                raise PlanError("eta", "cannot sweep eta together with delta")
        elif self.model == "hard-disk":
            if self.r_n is None or not self.r_n > 0:
                raise PlanError("rn", "hard-disk model needs a positive --rn")
        elif self.profile is None:
            raise PlanError("profile", "tabulated model needs --profile")
        axes = [k for k in ("epsilon", "delta", "eta") if getattr(self, k) is not None and len(getattr(self, k)) > 1]
        if self.model != "rayleigh" and len(self.eta) > 1:
            raise PlanError("eta", "eta only applies to the rayleigh model")
        if self.preset is None and len(axes) > 1:
            raise PlanError(axes[1], f"only one sweep axis allowed, got {', '.join(axes)}")


@dataclass(frozen=True)
class ResultRow:
    n: int | None = None
    eta: float | None = None
    beta: float | None = None
    delta: float | None = None
    epsilon: float | None = None
    metric: str | None = None
    trials: int | None = None
    disconnected: int | None = None
    p_hat: float | None = None
    ci_low: float | None = None
    ci_high: float | None = None
    p_approx: float | None = None

    def rounded(self) -> "ResultRow":
        """The row as it reads back from CSV (10 significant digits)."""
        return parse_row(format_row(self))


def preset_plan(name: str, **overrides) -> ExperimentPlan:
    if name == "fig1":
        plan = ExperimentPlan(preset="fig1", eta=frange(2.0, 10.0, 0.1))
    elif name == "fig2":
        plan = ExperimentPlan(preset="fig2", eta=[2.0], beta_rule="fig2", n=[2**8, 2**10, 2**12],
                              epsilon=frange(0.0, 0.6, 0.05), trials=None, metric="torus")
    elif name == "fig3":
        plan = ExperimentPlan(preset="fig3", eta=[4.0], delta=frange(0.5, 2.0, 0.1), n=[2**12],
                              epsilon=[0.0, 0.1, 0.25], trials=1000, metric="torus")
    else:
        raise PlanError("preset", f"unknown preset {name!r}")
    overrides = {k: v for k, v in overrides.items() if v is not None}
    return replace(plan, **overrides)


def _trials_for(plan: ExperimentPlan, n: int) -> int:
    if plan.trials is not None:
        return int(plan.trials)
    return 10_000 if n <= 2**10 else 1000


def _sweep(plan: ExperimentPlan):
    """Yield ``(n, eta, beta, delta, epsilon, model)`` in output order."""
    for n in plan.n:
        n = int(n)
        if plan.model == "hard-disk":
            for eps in plan.epsilon:
                yield n, None, None, None, eps, HardDisk(plan.r_n)
            continue
        if plan.model == "tabulated":
            prof = load_profile(plan.profile, plan.scale)
            for eps in plan.epsilon:
                yield n, None, None, None, eps, prof
            continue
        for eps in plan.epsilon:
            for eta in plan.eta:
                if plan.delta is not None:
                    for d in plan.delta:
                        beta = d * beta_critical(n, eta)
                        yield n, eta, beta, d, eps, RayleighSISO(beta, eta)
                else:
                    beta = plan.beta if plan.beta_rule is None else math.pi * n / (2.0 * math.log(n))
                    yield n, eta, beta, None, eps, RayleighSISO(beta, eta)


def row_approx(plan: ExperimentPlan, n, eta, delta, eps, model) -> float:
    """The analytic prediction attached to a simulated row."""
    if plan.beta_rule == "fig2":
        return approx_fig2(n, eps)
    if delta is not None and eta == 4.0:
        return approx_breakdown_rayleigh_delta(n, eps, delta)
    boundary = TORUS_BULK if as_metric(plan.metric).value == "torus" else SQUARE_FULL
    return approx_breakdown_model(n, eps, model, boundary)


def iter_plan(plan: ExperimentPlan):
    """Run ``plan`` lazily, one :class:`ResultRow` per sweep point."""
    plan.validate()
    if plan.preset == "fig1":
        for eta in plan.eta:
            yield ResultRow(eta=float(eta), epsilon=fig1_threshold(eta))
        return
    metric = as_metric(plan.metric)
    for n, eta, beta, delta, eps, model in _sweep(plan):
        trials = _trials_for(plan, n)
        est = estimate_breakdown(n, model, FaultModel(eps), metric, trials, plan.master_seed,
                                 plan.truncation, plan.workers)
        yield ResultRow(n, eta, beta, delta, float(eps), metric.value, trials, est.disconnected_count,
                        est.p_hat, est.ci_low, est.ci_high, row_approx(plan, n, eta, delta, eps, model))


def run_plan(plan: ExperimentPlan) -> list[ResultRow]:
    """Run every sweep point; writes ``plan.out`` when set."""
    if plan.out:
        with CsvSink(plan.out, plan.master_seed) as sink:
            rows = []
            for row in iter_plan(plan):
                sink.write(row)
                rows.append(row)
            sink.mark_complete()
        return rows
    return list(iter_plan(plan))


def predict(n=None, eta=None, beta=None, delta=None, epsilon=0.0, d=None, b=0.0,
            model=None, metric="torus") -> dict:
    """Thresholds and approximations without simulation."""
    from . import analytics as an
    from .connmodel import constant_C, moment

    out = {}
    if d is not None:
        out["epsilon_star_cor1"] = an.epsilon_threshold_cor1(d)
    if eta is not None:
        out["C_eta"] = an.rayleigh_C(eta)
        if n is not None:
            out["beta_star"] = an.beta_threshold(n, eta, epsilon)
            out["beta_c"] = an.beta_critical(n, eta)
            if delta is not None and beta is None:
                beta = delta * out["beta_c"]
            if beta is not None:
                out["beta"] = beta
                out["epsilon_star"] = an.epsilon_threshold(n, eta, beta)
        if model is None and beta is not None:
            model = RayleighSISO(beta, eta)
    if model is not None:
        C = constant_C(model)
        out["C"] = C
        out["H0"] = moment(model, 0)
        out["H1"] = moment(model, 1)
        if n is not None:
            out["r_star"] = an.critical_radius(n, C, b, epsilon)
            boundary = TORUS_BULK if as_metric(metric).value == "torus" else SQUARE_FULL
            out["p_approx"] = an.approx_breakdown(n, epsilon, out["H0"], out["H1"], boundary)
            if delta is not None and eta == 4.0:
                out["p_approx_delta"] = an.approx_breakdown_rayleigh_delta(n, epsilon, delta)
    out["p_asymptotic"] = an.asymptotic_breakdown(b, epsilon)
    return out


# --- CSV -----------------------------------------------------------------

def header_line(seed: int) -> str:
    return f"# rgg-faultnet v{__version__} seed={seed}"


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    return f"{float(v):.10g}"


def format_row(row: ResultRow) -> str:
    return ",".join(_fmt(getattr(row, c)) for c in COLUMNS)


def parse_row(line: str) -> ResultRow:
    parts = line.rstrip("\n").split(",")
    if len(parts) != len(COLUMNS):
        raise ValueError(f"expected {len(COLUMNS)} fields, got {len(parts)}: {line!r}")
    vals = {}
    for name, raw in zip(COLUMNS, parts):
        if raw == "":
            vals[name] = None
        elif name in _INT_COLUMNS:
            vals[name] = int(raw)
        elif name in _STR_COLUMNS:
            vals[name] = raw
        else:
            vals[name] = float(raw)
    return ResultRow(**vals)


class CsvSink:
    """Streams rows to disk; the trailing marker is only written on success."""

    def __init__(self, path, seed: int):
        self.path = Path(path)
        self.seed = seed
        self._fh = None

    def __enter__(self):
        self._fh = open(self.path, "w", newline="")
        self._fh.write(header_line(self.seed) + "\n")
        self._fh.write(",".join(COLUMNS) + "\n")
        self._fh.flush()
        return self

    def write(self, row: ResultRow) -> None:
        self._fh.write(format_row(row) + "\n")
        self._fh.flush()

    def mark_complete(self) -> None:
        self._fh.write(COMPLETE_MARKER + "\n")

    def __exit__(self, *exc):
        self._fh.close()
        return False


def write_csv(rows, path, seed: int) -> None:
    with CsvSink(path, seed) as sink:
        for row in rows:
            sink.write(row)
        sink.mark_complete()


@dataclass
class CsvResult:
    seed: int | None
    version: str | None
    rows: list
    complete: bool


def read_csv(path) -> CsvResult:
    lines = Path(path).read_text().splitlines()
    if not lines or not lines[0].startswith("# rgg-faultnet v"):
        raise ValueError(f"{path}: missing rgg-faultnet header")
    head = lines[0].split()
    version = head[2][1:]
    seed = int(head[3].split("=", 1)[1])
    if len(lines) < 2 or lines[1] != ",".join(COLUMNS):
        raise ValueError(f"{path}: unexpected column line")
    body = lines[2:]
    complete = bool(body) and body[-1] == COMPLETE_MARKER
    rows = [parse_row(ln) for ln in body if ln and not ln.startswith("#")]
    return CsvResult(seed, version, rows, complete)


# --- ranges and config files ---------------------------------------------

def frange(start: float, stop: float, step: float) -> list[float]:
    """Inclusive arithmetic range with values rounded to 12 decimals."""
    if step <= 0:
        raise ValueError("step must be positive")
    k = int(math.floor((stop - start) / step + 1e-9))
    return [round(start + i * step, 12) for i in range(k + 1)]


def parse_values(text: str, cast=float) -> list:
    """``"a:b:step"`` or a comma separated list."""
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if ":" in part:
            a, b, st = (float(x) for x in part.split(":"))
            out.extend(cast(v) for v in frange(a, b, st))
        else:
            out.append(cast(float(part)) if cast is int else cast(part))
    return out


def load_config(path) -> dict:
    """Read ``key = value`` lines; repeated keys accumulate."""
    cfg: dict = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value'")
        k, v = (x.strip() for x in line.split("=", 1))
        cfg.setdefault(k.replace("-", "_"), []).append(v)
    return cfg


def plan_fields() -> list[str]:
    return [f.name for f in fields(ExperimentPlan)]


def plan_to_dict(plan: ExperimentPlan) -> dict:
    return asdict(plan)
