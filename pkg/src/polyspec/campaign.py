"""Randomized verification campaigns: draw instances, evaluate one bound, summarize.

Trial ``t`` uses seed ``split_seed(config.seed, t)`` and nothing else, so any
trial can be replayed from its recorded seed (or its serialized inputs).
"""
from __future__ import annotations

import csv
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from . import genlab as g
from .bounds import BOUNDS, run_check
from .errors import HypothesisViolation
from .io import instance_to_json
from .linalg import as_pnorm, pnorm_label
from .matpoly import MatrixPolynomial, tuple_matrix_p_norm

SIDECAR_THRESHOLD = 100_000

# per-bound generator defaults; a config's gen_specs entries override them
DEFAULT_GEN = {
    "hoffman-wielandt": {"family": "normal", "n": [1, 12]},
    "normal-arbitrary": {"family": "normal", "n": [1, 12]},
    "kahan": {"family": "hermitian", "n": [1, 12]},
    "elsner": {"family": "arbitrary", "n": [1, 10]},
    "det-perturbation": {"family": "arbitrary", "n": [1, 8]},
    "poly-hoffman-wielandt": {"family": "monic-normal-companion", "n": [1, 4], "m": [1, 4]},
    "poly-bdm": {"family": "monic-normal-companion", "n": [1, 4], "m": [1, 4]},
    "cor-2mn": {"family": "monic-normal-companion", "n": [1, 4], "m": [1, 4]},
    "poly-kahan": {"family": "monic-hermitian-companion", "n": [1, 6], "m": [1, 2]},
    "nbounded": {"family": "monic-arbitrary", "n": [1, 4], "m": [1, 4], "N_factor": [1.0, 2.0]},
    "nonmonic-thm37": {"family": "nonmonic-ball", "n": [1, 4], "m": [1, 3], "radius_fraction": [0.0, 1.0]},
    "wielandt-scalar": {"family": "hermitian-in-interval", "n": [2, 12], "interval": [0.1, 10.0]},
    "wielandt-poly": {"family": "hermitian-in-interval", "n": [2, 6], "m": [1, 4], "interval": [0.1, 10.0], "lambda_modulus": [0.0, 3.0]},
    "gamma-bounds": {"k": [1, 1024]},
}
COMMON_GEN = {"max_mn": 12, "perturbation": [1e-4, 1.0], "scale": 1.0}


@dataclass
class CampaignConfig:
    bound_id: str
    trials: int = 100
    p: float = 2.0
    seed: int = 0
    strict_hypotheses: bool = False
    output_path: Optional[str] = None
    format: str = "json"
    gen_specs: dict = field(default_factory=dict)
    threads: int = 1
    keep_trials: bool = True

    def __post_init__(self):
        if self.bound_id not in BOUNDS:
            raise ValueError(f"unknown bound_id {self.bound_id!r}; choose from {', '.join(BOUNDS)}")
        if int(self.trials) < 1:
            raise ValueError("trials must be >= 1")
        if self.format not in ("json", "csv"):
            raise ValueError("format must be 'json' or 'csv'")
        self.trials = int(self.trials)
        self.seed = int(self.seed) & g.MASK64
        self.p = as_pnorm(self.p)
        self.threads = max(1, int(self.threads))
        if not isinstance(self.gen_specs, dict):
            raise ValueError("gen_specs must be an object of generator settings")

    @property
    def gen(self) -> dict:
        return {**COMMON_GEN, **DEFAULT_GEN.get(self.bound_id, {}), **self.gen_specs}

    @classmethod
    def from_dict(cls, obj: dict) -> "CampaignConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(obj) - known
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
        return cls(**obj)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["p"] = pnorm_label(self.p)
        d["gen_specs"] = self.gen
        return d


# ---------------------------------------------------------------- instance builders


def _draw_range(rng: g.Rng, spec, integer=True):
    if isinstance(spec, (int, float)):
        return spec
    lo, hi = spec
    return rng.integers(lo, hi) if integer else float(rng.uniform(lo, hi))


def _dims(rng: g.Rng, gen: dict, poly: bool):
    n = _draw_range(rng, gen["n"])
    if not poly:
        return n, None
    m_spec = gen.get("m", [1, 1])
    m_lo, m_hi = (m_spec, m_spec) if isinstance(m_spec, int) else m_spec
    n = min(n, gen["max_mn"] // m_lo)
    m_hi = max(m_lo, min(m_hi, gen["max_mn"] // n))
    return n, rng.integers(m_lo, m_hi)


def _eps(rng: g.Rng, gen: dict):
    pert = gen.get("perturbation")
    return None if pert is None else rng.log_uniform(*pert)


def _matrix(family, n, seed, scale):
    return g.generate(g.GenSpec(family, n, seed=seed, scale=scale))


def _matrix_pair(rng, gen, n, seed):
    fam, eps, scale = gen["family"], _eps(rng, gen), gen["scale"]
    if fam == "normal":
        return g.gen_normal_pair(n, seed, eps)
    a = _matrix(fam, n, g.split_seed(seed, 0), scale)
    if eps is None:
        return a, _matrix(fam, n, g.split_seed(seed, 1), scale)
    perturb = {"unitary": g.perturb_unitary, "hermitian": g.perturb_hermitian}.get(fam, g.perturb_arbitrary)
    return a, perturb(a, eps, g.split_seed(seed, 1))


def _matrix_vs_arbitrary(rng, gen, n, seed):
    a = _matrix(gen["family"], n, g.split_seed(seed, 0), gen["scale"])
    eps = _eps(rng, gen)
    if eps is None:
        return a, g.gen_arbitrary(n, g.split_seed(seed, 1), gen["scale"])
    return a, g.perturb_arbitrary(a, eps, g.split_seed(seed, 1))


def _poly(fam, n, m, seed, scale):
    return g.generate(g.GenSpec(fam, n, m, seed=seed, scale=scale))


def _poly_pair(rng, gen, n, m, seed):
    fam, eps = gen["family"], _eps(rng, gen)
    p = _poly(fam, n, m, g.split_seed(seed, 0), gen["scale"])
    if eps is None:
        return p, _poly(fam, n, m, g.split_seed(seed, 1), gen["scale"])
    if fam == "monic-normal-companion":
        a0 = g.perturb_unitary(-p.coeffs[0], eps, g.split_seed(seed, 1))
        return p, MatrixPolynomial.monic([-a0] + list(p.coeffs[1:-1]))
    return p, g.perturb_monic(p, eps, g.split_seed(seed, 1))


def build_instance(bound_id: str, gen: dict, pnorm: float, seed: int):
    """Deterministic (inputs, params) for one trial of ``bound_id``."""
    rng = g.Rng(g.split_seed(seed, 99))
    params = {"p": pnorm}
    if bound_id == "gamma-bounds":
        return [], {"k": _draw_range(rng, gen["k"])}
    if bound_id == "hoffman-wielandt":
        n, _ = _dims(rng, gen, False)
        return list(_matrix_pair(rng, gen, n, seed)), params
    if bound_id in ("normal-arbitrary", "kahan", "elsner", "det-perturbation"):
        n, _ = _dims(rng, gen, False)
        return list(_matrix_vs_arbitrary(rng, gen, n, seed)), params
    if bound_id in ("poly-hoffman-wielandt", "poly-bdm", "cor-2mn", "poly-kahan"):
        n, m = _dims(rng, gen, True)
        return list(_poly_pair(rng, gen, n, m, seed)), params
    if bound_id == "nbounded":
        n, m = _dims(rng, gen, True)
        p, q = _poly_pair(rng, gen, n, m, seed)
        top = max(tuple_matrix_p_norm(p.coeffs[:-1], pnorm), tuple_matrix_p_norm(q.coeffs[:-1], pnorm))
        params["N"] = top * _draw_range(rng, gen["N_factor"], integer=False)
        return [p, q], params
    if bound_id == "nonmonic-thm37":
        n, m = _dims(rng, gen, True)
        center = g.gen_well_conditioned(n, m, g.split_seed(seed, 0), gen["scale"])
        r1 = _draw_range(rng, gen["radius_fraction"], integer=False)
        r2 = _draw_range(rng, gen["radius_fraction"], integer=False)
        p = g.gen_nonmonic_in_ball(center, r1, g.split_seed(seed, 1))
        q = g.gen_nonmonic_in_ball(center, r2, g.split_seed(seed, 2))
        return [p, q, center], {}
    if bound_id in ("wielandt-scalar", "wielandt-poly"):
        n, m = _dims(rng, gen, bound_id == "wielandt-poly")
        lo, hi = sorted(rng.uniform(*gen["interval"], size=2).tolist())
        x, y = g.gen_orthonormal_pair(n, g.split_seed(seed, 0))
        params = {"a": hi, "b": lo, "x": x, "y": y}
        if bound_id == "wielandt-scalar":
            return [g.gen_hermitian_in_interval(n, hi, lo, g.split_seed(seed, 1))], params
        coeffs = [g.gen_hermitian_in_interval(n, hi, lo, g.split_seed(seed, 2 + i)) for i in range(m + 1)]
        r = _draw_range(rng, gen["lambda_modulus"], integer=False)
        params["lambda"] = complex(r * np.exp(1j * rng.uniform(0, 2 * np.pi)))
        return [MatrixPolynomial(tuple(coeffs))], params
    raise ValueError(f"no instance builder for {bound_id!r}")


# ---------------------------------------------------------------- running


def run_trial(config: CampaignConfig, index: int) -> dict:
    seed = g.split_seed(config.seed, index)
    inputs, params = build_instance(config.bound_id, config.gen, config.p, seed)
    record = {"trial": index, "seed": seed}
    try:
        report = run_check(config.bound_id, inputs, params, strict=config.strict_hypotheses)
    except HypothesisViolation as exc:
        record.update(report=None, hypothesis_error=str(exc))
        return record
    record["report"] = report.to_dict()
    if report.violation:
        record["instance"] = instance_to_json(config.bound_id, inputs, params)
    return record


def _run_chunk(args):
    config, indices = args
    return [run_trial(config, i) for i in indices]


def _finite(x):
    return isinstance(x, float) and math.isfinite(x)


def summarize(config: CampaignConfig, records) -> dict:
    violations = hyp_unmet = strict_rejected = 0
    ratios = []
    best = (-1.0, None)
    sub_failures = {}
    max_c = None
    for rec in records:
        rep = rec["report"]
        if rep is None:
            strict_rejected += 1
            continue
        if not rep["hypotheses_met"]:
            hyp_unmet += 1
            continue
        if not rep["holds"]:
            violations += 1
        for name, ok in rep["checks"].items():
            if not ok:
                sub_failures[name] = sub_failures.get(name, 0) + 1
        r = rep["slack_ratio"]
        if _finite(r):
            ratios.append(r)
            if r > best[0]:
                best = (r, rec)
        c = rep["constants"].get("empirical_c")
        if _finite(c) and (max_c is None or c > max_c):
            max_c = c
    summary = {
        "bound_id": config.bound_id,
        "p": pnorm_label(config.p),
        "seed": config.seed,
        "trials": len(records),
        "violations": violations,
        "hypotheses_unmet": hyp_unmet,
        "strict_rejected": strict_rejected,
        "max_slack_ratio": best[0] if ratios else None,
        "mean_slack_ratio": math.fsum(ratios) / len(ratios) if ratios else None,
        "argmax_trial": best[1]["trial"] if best[1] else None,
        "argmax_seed": best[1]["seed"] if best[1] else None,
        "sub_assertion_failures": dict(sorted(sub_failures.items())),
    }
    if max_c is not None:
        summary["empirical_c"] = max_c
    return summary


def resolve_threads(threads: Optional[int] = None) -> int:
    if threads:
        return max(1, int(threads))
    env = os.environ.get("POLYSPEC_THREADS")
    return max(1, int(env)) if env else 1


def run_campaign(config: CampaignConfig) -> dict:
    """Run every trial (in index order, optionally across processes) and build the report."""
    start = time.perf_counter()
    indices = list(range(config.trials))
    if config.threads > 1 and config.trials > 1:
        size = math.ceil(config.trials / (4 * config.threads))
        chunks = [(config, indices[i : i + size]) for i in range(0, config.trials, size)]
        with ProcessPoolExecutor(max_workers=config.threads) as pool:
            records = [rec for part in pool.map(_run_chunk, chunks) for rec in part]
    else:
        records = [run_trial(config, i) for i in indices]
    report = {
        "config": config.to_dict(),
        "summary": summarize(config, records),
        "violation_records": [r for r in records if "instance" in r],
        "wall_time": time.perf_counter() - start,
    }
    if config.keep_trials:
        report["trials"] = records
    return report


def summary_json(report: dict) -> str:
    """Canonical serialization of the summary block (stable across reruns)."""
    return json.dumps(report["summary"], sort_keys=True)


def write_report(report: dict, config: CampaignConfig) -> Optional[str]:
    """Write to config.output_path; very large per-trial lists go to a JSONL sidecar."""
    path = config.output_path
    if not path:
        return None
    trials = report.get("trials")
    if config.format == "csv":
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["trial", "seed", "bound_id", "lhs", "rhs", "slack_ratio", "holds", "hypotheses_met"])
            for rec in trials or []:
                rep = rec["report"] or {}
                writer.writerow([
                    rec["trial"], rec["seed"], config.bound_id,
                    _fmt(rep.get("lhs")), _fmt(rep.get("rhs")), _fmt(rep.get("slack_ratio")),
                    rep.get("holds"), rep.get("hypotheses_met"),
                ])
        return path
    out = dict(report)
    if trials is not None and len(trials) > SIDECAR_THRESHOLD:
        sidecar = path + ".trials.jsonl"
        with open(sidecar, "w") as fh:
            for rec in trials:
                fh.write(json.dumps(rec, sort_keys=True) + "\n")
        out["trials"] = None
        out["trials_sidecar"] = sidecar
    with open(path, "w") as fh:
        json.dump(out, fh, indent=1, sort_keys=True)
        fh.write("\n")
    return path


def _fmt(x):
    if x is None:
        return ""
    return format(x, ".17g") if isinstance(x, float) else x
