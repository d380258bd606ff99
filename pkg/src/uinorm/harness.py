"""Batch verification, sharpness search and the calculus cross-check."""
import csv
import io
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import sampling as smp
from .calculus import ContourSpec, HerglotzMeasure, apply_spectral, riesz_dunford
from .errors import UsageError
from .inequalities import STATEMENTS, get_statement, realize
from .linalg import REL_SLACK, op_norm
from .norms import NormKind

log = logging.getLogger(__name__)

FIELDS = ("theorem_id", "dim", "seed", "trial_index", "norm", "lhs", "rhs", "ratio", "d_A", "d_B", "pass")
FORMATS = ("json-lines", "csv")
STALL_LIMIT = 200
CALCULUS_TOL = 1e-8


def fmt_float(x):
    """17 significant digits; ``None`` for non-finite values."""
    if not math.isfinite(x):
        return None
    return format(x, ".17g")


def record_values(rep):
    return (
        rep.theorem_id,
        rep.dim,
        rep.seed,
        rep.trial_index,
        str(rep.norm),
        fmt_float(rep.lhs),
        fmt_float(rep.rhs),
        fmt_float(rep.ratio),
        fmt_float(rep.d_a),
        fmt_float(rep.d_b),
        rep.passed,
    )


def json_line(rep):
    parts = []
    for name, value in zip(FIELDS, record_values(rep)):
        if value is None:
            text = "null"
        elif isinstance(value, bool):
            text = "true" if value else "false"
        elif isinstance(value, str) and name not in ("theorem_id", "norm"):
            text = value  # preformatted number
        else:
            text = json.dumps(value)
        parts.append(f'"{name}": {text}')
    return "{" + ", ".join(parts) + "}\n"


def csv_row(rep):
    buf = io.StringIO()
    row = ["" if v is None else ("true" if v is True else "false" if v is False else v) for v in record_values(rep)]
    csv.writer(buf, lineterminator="\n").writerow(row)
    return buf.getvalue()


def read_records(path):
    """Parse a report written by :func:`verify` back into dicts."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if path.endswith(".csv") or text.startswith(FIELDS[0] + ","):
        rows = list(csv.DictReader(io.StringIO(text)))
        for r in rows:
            r["pass"] = r["pass"] == "true"
        return rows
    return [json.loads(line) for line in text.splitlines() if line]


@dataclass(frozen=True)
class RunConfig:
    theorem_id: str
    dim: int
    trials: int
    seed: int
    output_path: str
    min_gap: float = 0.05
    norms: str = "all"
    format: str = "json-lines"
    dump_instances: bool = False
    workers: int = 1

    def __post_init__(self):
        if self.theorem_id not in STATEMENTS:
            raise UsageError(f"unknown theorem id {self.theorem_id!r}; choose from {', '.join(STATEMENTS)}")
        if self.trials < 1:
            raise UsageError(f"trials must be >= 1, got {self.trials}")
        if not 1 <= self.dim <= smp.MAX_DIM:
            raise UsageError(f"dim must be in [1, {smp.MAX_DIM}], got {self.dim}")
        if not 0.0 < self.min_gap < 1.0:
            raise UsageError(f"min-gap must be in (0, 1), got {self.min_gap}")
        if self.format not in FORMATS:
            raise UsageError(f"format must be one of {FORMATS}, got {self.format!r}")
        if self.workers < 1:
            raise UsageError("workers must be >= 1")
        self.kinds()

    def sampler(self):
        return smp.SamplerConfig(self.seed, self.dim, self.min_gap)

    def kinds(self):
        st = get_statement(self.theorem_id)
        available = st.kinds(self.dim)
        if self.norms.strip().lower() == "all":
            return available
        try:
            wanted = [NormKind.parse(t) for t in self.norms.split(",") if t.strip()]
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if st.fixed_norm is not None and any(k != st.fixed_norm for k in wanted):
            raise UsageError(f"{self.theorem_id} is stated for {st.fixed_norm} only")
        if not wanted:
            raise UsageError("empty norm selection")
        return wanted


@dataclass
class VerifySummary:
    theorem_id: str
    trials: int
    records: int
    passed: int
    failed: int
    max_ratio: float
    report_path: str

    @property
    def ok(self):
        return self.failed == 0


def _instance_json(theorem_id, cfg, trial_index):
    params = get_statement(theorem_id).sample(cfg, smp.stream(cfg.seed, trial_index))
    out = serialize_instance(theorem_id, params, None)
    out.update(seed=cfg.seed, trial_index=trial_index, dim=cfg.dim)
    return out


def _trial_chunk(args):
    theorem_id, cfg, kinds, start, stop = args
    st = get_statement(theorem_id)
    out = []
    for t in range(start, stop):
        params = st.sample(cfg, smp.stream(cfg.seed, t))
        out.append(st.reports(params, cfg.dim, kinds, cfg.seed, t))
    return out


def iter_trials(theorem_id, cfg, kinds, trials, workers=1):
    """Yield per-trial report lists in trial-index order."""
    if workers == 1:
        yield from _trial_chunk((theorem_id, cfg, kinds, 0, trials))
        return
    size = max(1, math.ceil(trials / (4 * workers)))
    chunks = [(theorem_id, cfg, kinds, s, min(trials, s + size)) for s in range(0, trials, size)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for block in pool.map(_trial_chunk, chunks):
            yield from block


def verify(cfg):
    """Run ``cfg.trials`` seeded trials and write one record per (trial, norm)."""
    kinds = cfg.kinds()
    sampler = cfg.sampler()
    line = json_line if cfg.format == "json-lines" else csv_row
    records = passed = 0
    max_ratio = 0.0
    try:
        fh = open(cfg.output_path, "w", encoding="utf-8", newline="\n")
    except OSError as exc:
        raise OSError(f"cannot write report {cfg.output_path}: {exc}") from exc
    dump = None
    with fh:
        if cfg.format == "csv":
            fh.write(",".join(FIELDS) + "\n")
        if cfg.dump_instances:
            dump = open(cfg.output_path + ".instances.jsonl", "w", encoding="utf-8", newline="\n")
        try:
            for reps in iter_trials(cfg.theorem_id, sampler, kinds, cfg.trials, cfg.workers):
                for rep in reps:
                    fh.write(line(rep))
                    records += 1
                    passed += rep.passed
                    max_ratio = max(max_ratio, rep.ratio)
                if dump is not None:
                    dump.write(json.dumps(_instance_json(cfg.theorem_id, sampler, reps[0].trial_index)) + "\n")
        finally:
            if dump is not None:
                dump.close()
    summary = VerifySummary(cfg.theorem_id, cfg.trials, records, passed, records - passed, max_ratio, cfg.output_path)
    log.info("%s: %d/%d records pass, max ratio %.6g", cfg.theorem_id, passed, records, max_ratio)
    return summary


# -- sharpness -------------------------------------------------------------------


@dataclass
class SharpnessResult:
    theorem_id: str
    dim: int
    seed: int
    best_ratio: float
    best_norm: Optional[NormKind]
    best_instance: dict
    evaluations_used: int
    restarts: int = 0

    @property
    def anomaly(self):
        return self.best_ratio > 1.0 + REL_SLACK

    def to_json(self):
        return {
            "theorem_id": self.theorem_id,
            "dim": self.dim,
            "seed": self.seed,
            "best_ratio": self.best_ratio,
            "best_norm": None if self.best_norm is None else str(self.best_norm),
            "evaluations_used": self.evaluations_used,
            "restarts": self.restarts,
            "anomaly": self.anomaly,
            "best_instance": self.best_instance,
        }


def _score(st, params, kinds):
    try:
        reps = st.sides(params).reports(st.theorem_id, 0, kinds)
    except (ValueError, ArithmeticError):
        return -math.inf, None
    best = max(reps, key=lambda r: r.ratio)
    return best.ratio, best.norm


def _collapse(params, factor):
    return {k: (p.scaled(factor) if hasattr(p, "scaled") else p) for k, p in params.items()}


def _perturb(params, rng, step):
    names = list(params)
    if rng.random() < 0.05:
        # joint contraction of every spectrum, zero included
        return _collapse(params, 0.0 if rng.random() < 0.5 else float(rng.random()))
    # move one or all components
    chosen = names if rng.random() < 0.5 else [names[int(rng.integers(len(names)))]]
    return {k: (p.perturbed(rng, step) if k in chosen else p) for k, p in params.items()}


def serialize_instance(theorem_id, params, kind):
    inputs = {}
    for name, value in realize(params).items():
        if isinstance(value, np.ndarray):
            inputs[name] = {"re": value.real.tolist(), "im": value.imag.tolist()}
        elif hasattr(value, "to_json"):
            inputs[name] = value.to_json()
        else:
            inputs[name] = value
    return {
        "theorem_id": theorem_id,
        "norm": None if kind is None else str(kind),
        "params": {k: p.to_json() for k, p in params.items()},
        "inputs": inputs,
    }


def replay_instance(instance):
    """Recompute the ratio of a serialized instance from its stored matrices."""
    st = get_statement(instance["theorem_id"])
    kwargs = {}
    for name, value in instance["inputs"].items():
        if isinstance(value, dict) and "re" in value:
            kwargs[name] = np.asarray(value["re"]) + 1j * np.asarray(value["im"])
        elif isinstance(value, dict) and "angles" in value:
            kwargs[name] = HerglotzMeasure.from_json(value)
        else:
            kwargs[name] = value
    kind = NormKind.parse(instance["norm"])
    (lhs, rhs), = st.build(**kwargs).values([kind])
    if rhs == 0.0:
        return 0.0 if lhs <= 1e-12 else math.inf
    return lhs / rhs


def sharpness(theorem_id, dim, budget, seed, min_gap=0.05):
    """Random-restart hill climbing on the ratio lhs/rhs.

    Each proposal perturbs eigenvalues (projected back into the admissible
    region), takes geodesic steps on the unitary factors and jitters ``X``
    and the measure atoms.  After 200 consecutive non-improving evaluations
    the search restarts from a fresh sample.  The first proposal from
    every start scales all spectra to zero, where several statements have
    their extremal cases.
    """
    if theorem_id not in STATEMENTS:
        raise UsageError(f"unknown theorem id {theorem_id!r}")
    if budget < 100:
        raise UsageError(f"budget must be >= 100, got {budget}")
    cfg = smp.SamplerConfig(seed, dim, min_gap)
    st = get_statement(theorem_id)
    kinds = st.kinds(dim)
    rng = smp.stream(seed, 0)
    restarts = 0

    def fresh():
        return st.sample(cfg, smp.stream(seed, restarts + 1))

    current = fresh()
    cur_ratio, cur_kind = _score(st, current, kinds)
    best, best_ratio, best_kind = current, cur_ratio, cur_kind
    stall = 0
    used = 1
    used_here = 0
    while used < budget:
        if stall >= STALL_LIMIT:
            restarts += 1
            current = fresh()
            cur_ratio, cur_kind = _score(st, current, kinds)
            stall = 0
            used_here = 0
        else:
            if stall == 0 and used_here == 0:
                # the zero-spectrum image of each start is always tried
                cand = _collapse(current, 0.0)
            else:
                step = float(10.0 ** rng.uniform(-4.0, -0.5))
                cand = _perturb(current, rng, step)
            used_here += 1
            ratio, kind = _score(st, cand, kinds)
            if ratio > cur_ratio:
                current, cur_ratio, cur_kind = cand, ratio, kind
                stall = 0
            else:
                stall += 1
        used += 1
        if cur_ratio > best_ratio:
            best, best_ratio, best_kind = current, cur_ratio, cur_kind
    return SharpnessResult(
        theorem_id, dim, seed, float(best_ratio), best_kind,
        serialize_instance(theorem_id, best, best_kind), used, restarts,
    )


def write_quarantine(result, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(result.to_json(), fh, indent=1)
        fh.write("\n")


# -- calculus cross-check ----------------------------------------------------------------


@dataclass
class CalculusSummary:
    trials: int
    nodes: int
    worst: float
    worst_half: float
    monotone: bool
    discrepancies: list = field(default_factory=list)

    @property
    def ok(self):
        return self.worst <= CALCULUS_TOL

    def to_json(self):
        return {
            "trials": self.trials,
            "nodes": self.nodes,
            "worst_discrepancy": self.worst,
            "worst_discrepancy_half_nodes": self.worst_half,
            "decreases_with_doubling": self.monotone,
            "ok": self.ok,
        }


def calculus_check(dim, trials, seed, nodes=256, min_gap=0.2):
    """Compare contour quadrature with the spectral path on sampled normal matrices.

    For every trial the discrepancy is measured at ``nodes`` and
    ``nodes // 2``; ``monotone`` reports whether doubling always helped.
    """
    if trials < 1:
        raise UsageError(f"trials must be >= 1, got {trials}")
    if nodes < 32 or nodes % 4:
        raise UsageError(f"nodes must be a multiple of 4 and >= 32, got {nodes}")
    cfg = smp.SamplerConfig(seed, dim, min_gap)
    worst = worst_half = 0.0
    monotone = True
    rows = []
    for t in range(trials):
        rng = smp.stream(seed, t)
        a_param = smp.sample_normal(cfg, rng)
        f = smp.sample_measure(rng).measure
        a = a_param.matrix()
        exact = apply_spectral(f, a_param.decomposition())
        c = ContourSpec.around(a, nodes)
        full = op_norm(riesz_dunford(f, a, c) - exact)
        half = op_norm(riesz_dunford(f, a, ContourSpec(c.radius, nodes // 2), check=False) - exact)
        monotone &= full < half or half == 0.0
        worst = max(worst, full)
        worst_half = max(worst_half, half)
        rows.append((full, half))
    return CalculusSummary(trials, nodes, worst, worst_half, monotone, rows)
