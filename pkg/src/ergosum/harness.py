"""Batch experiment harness and command line entry point.

An experiment is described by a small JSON config (see ExperimentConfig).
Five base kinds cover the library surface:

  envelope_scan    certified sup-of-trig-sum rows over an N ladder or
                   explicit (M, N] blocks
  condition_fit    envelope_scan plus a growth-template fit on the rows
  average_run      normalized running sums of w_k f(T^{u_k} x) along an
                   orbit, with decay report
  hilbert_run      partial sums of the one-sided series sum w_k/A(k)
                   f(T^{u_k} x) with Cauchy tail diagnostics
  oscillation_run  average_run plus per-block oscillation maxima along a
                   block ladder

`preset` bundles fixed parameter choices for the worked scenarios
(example1 .. example6, prime_question); `ergosum presets` lists them.

Outputs land under <output root>/<name>/ as CSV + JSON + SVG, plus a
manifest.json recording the canonicalized config, content digests and
wall times. With a fixed config and seed list every emitted CSV, JSON
and SVG is reproduced byte for byte; wall-clock timings live only in the
manifest. Floats are written with shortest round-trip formatting.

Environment: ERGOSUM_OUTPUT_ROOT overrides the default output root,
ERGOSUM_THREADS is exported to the usual BLAS/OMP thread variables
(orchestration itself is single threaded and deterministic either way).

When a run draws on several stochastic ingredients, one per-repetition
seed drives all of them.

Exit codes of the CLI: 0 success, 2 config validation failure, 3
runtime failure (partial outputs are removed).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import numbers
import os
import shutil
import sys
import time
from dataclasses import dataclass, field, fields
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import _svg
from .analytic_bounds import hlawka_bound, steep_power_phase_exponent
from .averages import (
    BlockLadder,
    NormalizerSpec,
    normalized_series,
    oscillation_report,
    cauchy_tail_report,
    hilbert_series,
    weighted_sums,
)
from .dynamics import Observable, OrbitPoint, SystemModel, orbit_eval
from .indices import IndexSpec, gen_indices, pi_count
from .scaling_fit import (
    TEMPLATES,
    EnvelopeSample,
    fit_H1,
    fit_H2,
    fit_harmonic,
    fit_log_decay,
)
from .trigsum import ThetaGrid, sup_envelope, sup_harmonic
from .weights import _SEEDED as _SEEDED_WEIGHTS
from .weights import WeightSpec, gen_weights

TOOL_VERSION = "0.1.0"

KINDS = (
    "envelope_scan",
    "condition_fit",
    "average_run",
    "hilbert_run",
    "oscillation_run",
    "preset",
)

PRESET_IDS = (
    "example1",
    "example2",
    "example3",
    "example4",
    "example5",
    "example6",
    "prime_question",
)

OUTPUT_ROOT_VAR = "ERGOSUM_OUTPUT_ROOT"
THREADS_VAR = "ERGOSUM_THREADS"
DEFAULT_OUTPUT_ROOT = "ergosum_out"

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_RUNTIME = 3

_MAX_SEEDS = 256
_MAX_TERMS = 100_000_000
_MAX_GRID_POINTS = 1 << 26
_CSV_THIN_RATIO = 1.02
_CSV_DENSE_ROWS = 512


class ConfigError(Exception):
    """Raised by run() when the config fails validation."""

    def __init__(self, diagnostics):
        super().__init__("; ".join(diagnostics))
        self.diagnostics = list(diagnostics)


# ---------------------------------------------------------------------------
# config


@dataclass
class ExperimentConfig:
    """Declarative description of one experiment.

    Sub-specs (weights, indices, system, observable, normalizer, ladder)
    are kept as plain dicts and only materialized at run time, so a config
    can always be loaded and inspected even when it is invalid; validate()
    reports every offending field instead of raising.
    """

    name: str
    kind: str
    preset: str | None = None
    weights: dict | None = None
    indices: dict | None = None
    system: dict | None = None
    observable: dict | None = None
    x0: object = None
    normalizer: dict | None = None
    ladder: dict | None = None
    n_ladder: list | None = None
    blocks: list | None = None
    n_terms: int | None = None
    theta_grid: dict | None = None
    template: str | None = None
    harmonic: bool = False
    seeds: list | None = None
    k_first: int | None = None
    bound: float | None = None
    tail_starts: list | None = None
    reference: dict | None = None
    params: dict = field(default_factory=dict)
    output_dir: str | None = None
    extra: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        d = dict(d)
        known = {f.name for f in fields(cls)} - {"extra"}
        kwargs = {k: d.pop(k) for k in list(d) if k in known}
        kwargs.setdefault("kind", "preset" if "preset" in kwargs else "")
        kwargs.setdefault("name", kwargs.get("preset") or kwargs["kind"] or "experiment")
        return cls(extra=d, **kwargs)

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ValueError("config file must contain a JSON object")
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        out = {}
        for f in fields(self):
            if f.name == "extra":
                continue
            v = getattr(self, f.name)
            if v is None or (f.name in ("params",) and not v):
                continue
            if f.name == "harmonic" and not v:
                continue
            out[f.name] = v
        out.update(self.extra)
        return out


def _is_int(v) -> bool:
    return isinstance(v, numbers.Integral) and not isinstance(v, bool)


def _is_num(v) -> bool:
    return isinstance(v, numbers.Real) and not isinstance(v, bool)


def _weight_spec(d: dict, seed) -> WeightSpec:
    d = dict(d)
    if seed is not None and d.get("kind") in _SEEDED_WEIGHTS:
        d.setdefault("seed", int(seed))
    return WeightSpec.from_dict(d)


def _index_spec(d: dict, seed) -> IndexSpec:
    d = dict(d)
    if seed is not None and d.get("kind") == "cramer_primes":
        d.setdefault("seed", int(seed))
    return IndexSpec.from_dict(d)


def _needs_seeds(cfg: ExperimentConfig) -> bool:
    w = cfg.weights or {}
    i = cfg.indices or {}
    s = cfg.system or {}
    return (
        (w.get("kind") in _SEEDED_WEIGHTS and "seed" not in w)
        or (i.get("kind") == "cramer_primes" and "seed" not in i)
        or s.get("kind") == "doubling"
    )


_PRESET_STOCHASTIC = {
    "example1": False,
    "example2": False,
    "example3": False,
    "example4": True,
    "example5": True,
    "example6": True,
    "prime_question": False,
}

_PRESET_PARAM_KEYS = {
    "example3": {"h"},
    "prime_question": {"betas"},
}


def validate(config: ExperimentConfig) -> list[str]:
    """Diagnostics for a config; empty list means runnable. Never writes."""
    diags: list[str] = []

    def check(label, fn):
        try:
            return fn()
        except (ValueError, TypeError, KeyError) as exc:
            diags.append(f"{label}: {exc}")
            return None

    if not isinstance(config.name, str) or not config.name:
        diags.append("name: must be a nonempty string")
    elif config.name in (".", "..") or any(c in config.name for c in "/\\"):
        diags.append("name: must be a bare directory name")
    if config.kind not in KINDS:
        diags.append(f"kind: must be one of {', '.join(KINDS)}")
        return diags

    for k in config.extra:
        diags.append(f"{k}: unknown field")

    if config.seeds is not None:
        if not isinstance(config.seeds, (list, tuple)):
            diags.append("seeds: must be a list of integers")
        elif not all(_is_int(s) for s in config.seeds):
            diags.append("seeds: must be a list of integers")
        elif len(set(config.seeds)) != len(config.seeds):
            diags.append("seeds: must be distinct")
        elif len(config.seeds) > _MAX_SEEDS:
            diags.append(f"seeds: at most {_MAX_SEEDS} repetitions")

    if config.output_dir is not None and not isinstance(config.output_dir, str):
        diags.append("output_dir: must be a string")

    if config.kind == "preset":
        if config.preset not in PRESET_IDS:
            diags.append(f"preset: must be one of {', '.join(PRESET_IDS)}")
            return diags
        if config.seeds is not None and not config.seeds and _PRESET_STOCHASTIC[config.preset]:
            diags.append("seeds: stochastic preset needs seeds")
        allowed = _PRESET_PARAM_KEYS.get(config.preset, set())
        for k in config.params or {}:
            if k not in allowed:
                diags.append(f"params.{k}: not understood by {config.preset}")
        if config.preset == "example3":
            h = (config.params or {}).get("h", 1.0)
            if not _is_num(h) or h == 0:
                diags.append("params.h: must be a nonzero number")
        if config.preset == "prime_question":
            betas = (config.params or {}).get("betas", [0.75])
            if not isinstance(betas, (list, tuple)) or not betas or not all(
                _is_num(b) and 0.5 < b <= 1.0 for b in betas
            ):
                diags.append("params.betas: each beta must lie in (1/2, 1]")
        return diags

    if config.params:
        diags.append("params: only preset configs take free parameters")

    wspec = ispec = None
    if config.weights is None:
        diags.append("weights: required")
    elif not isinstance(config.weights, dict):
        diags.append("weights: must be an object")
    else:
        wspec = check("weights", lambda: _weight_spec(config.weights, 1))
    if config.indices is None:
        diags.append("indices: required")
    elif not isinstance(config.indices, dict):
        diags.append("indices: must be an object")
    else:
        ispec = check("indices", lambda: _index_spec(config.indices, 1))

    if _needs_seeds(config) and not config.seeds:
        diags.append("seeds: required for stochastic ingredients")

    if config.k_first is not None:
        if not _is_int(config.k_first) or config.k_first < 0:
            diags.append("k_first: must be a nonnegative integer")
        else:
            for spec in (wspec, ispec):
                if spec is not None and config.k_first < spec.offset:
                    diags.append(
                        f"k_first: below the {spec.kind} family offset {spec.offset}"
                    )

    if config.kind in ("envelope_scan", "condition_fit"):
        lo_m = max(
            (s.offset for s in (wspec, ispec) if s is not None), default=0
        )
        have_rows = False
        if config.n_ladder is not None:
            if (
                not isinstance(config.n_ladder, (list, tuple))
                or not config.n_ladder
                or not all(_is_int(n) and n >= 1 for n in config.n_ladder)
                or list(config.n_ladder) != sorted(set(config.n_ladder))
            ):
                diags.append("n_ladder: must be strictly increasing positive integers")
            else:
                have_rows = True
                if config.n_ladder[0] <= lo_m:
                    diags.append(f"n_ladder: first N must exceed {lo_m}")
        if config.blocks is not None:
            ok = isinstance(config.blocks, (list, tuple)) and config.blocks and all(
                isinstance(b, (list, tuple)) and len(b) == 2
                and _is_int(b[0]) and _is_int(b[1]) and 0 <= b[0] < b[1]
                for b in config.blocks
            )
            if not ok:
                diags.append("blocks: must be [M, N] integer pairs with 0 <= M < N")
            else:
                have_rows = True
                if any(b[0] + 1 < max(lo_m, 1) for b in config.blocks):
                    diags.append(f"blocks: rows start at M + 1, which must be >= {max(lo_m, 1)}")
        if not have_rows and config.n_ladder is None and config.blocks is None:
            diags.append("n_ladder: an N ladder or explicit blocks is required")
        if config.theta_grid is not None:
            tg = config.theta_grid
            if not isinstance(tg, dict):
                diags.append("theta_grid: must be an object")
            else:
                pts = tg.get("points")
                if pts is not None and (
                    not _is_int(pts) or not 16 <= pts <= _MAX_GRID_POINTS
                ):
                    diags.append(
                        f"theta_grid.points: must be an integer in [16, {_MAX_GRID_POINTS}]"
                    )
                it = tg.get("refine_iters")
                if it is not None and (not _is_int(it) or not 0 <= it <= 200):
                    diags.append("theta_grid.refine_iters: must be an integer in [0, 200]")
                for k in set(tg) - {"points", "refine_iters"}:
                    diags.append(f"theta_grid.{k}: unknown field")
        if config.harmonic:
            for b in config.blocks or []:
                if b[0] + 1 < 1:
                    diags.append("blocks: harmonic rows need k >= 1")
        if config.kind == "condition_fit":
            if config.template not in TEMPLATES:
                diags.append(f"template: must be one of {', '.join(TEMPLATES)}")
            elif config.template.startswith("harmonic") != bool(config.harmonic):
                diags.append("template: harmonic flag and template family disagree")
        return diags

    # orbit-run kinds
    system = None
    if config.system is None:
        diags.append("system: required")
    elif not isinstance(config.system, dict):
        diags.append("system: must be an object")
    else:
        system = check("system", lambda: SystemModel.from_dict(config.system))
        if system is not None and system.kind == "spectral":
            diags.append(
                "system: spectral systems have no orbit; use the library "
                "spectral_l2_norm / maximal_norm entry points"
            )
    if system is not None and system.kind == "doubling" and not config.seeds:
        diags.append("seeds: doubling orbits draw their start point from a seed")
    if config.observable is None:
        diags.append("observable: required")
    elif not isinstance(config.observable, dict):
        diags.append("observable: must be an object")
    else:
        check("observable", lambda: Observable.from_dict(config.observable))
    if config.normalizer is None:
        diags.append("normalizer: required")
    elif not isinstance(config.normalizer, dict):
        diags.append("normalizer: must be an object")
    else:
        check("normalizer", lambda: NormalizerSpec.from_dict(config.normalizer))
    if config.n_terms is None:
        diags.append("n_terms: required")
    elif not _is_int(config.n_terms) or not 2 <= config.n_terms <= _MAX_TERMS:
        diags.append(f"n_terms: must be an integer in [2, {_MAX_TERMS}]")
    if config.x0 is not None:
        check("x0", lambda: _parse_x0(config.x0))
    if config.kind == "oscillation_run":
        if config.ladder is None:
            diags.append("ladder: required for oscillation runs")
        elif not isinstance(config.ladder, dict):
            diags.append("ladder: must be an object")
        else:
            check("ladder", lambda: BlockLadder.from_dict(config.ladder))
    if config.kind == "hilbert_run":
        if config.bound is not None and (not _is_num(config.bound) or config.bound <= 0):
            diags.append("bound: must be a positive number")
        if config.tail_starts is not None and (
            not isinstance(config.tail_starts, (list, tuple))
            or not all(_is_int(t) and t >= 1 for t in config.tail_starts)
            or list(config.tail_starts) != sorted(set(config.tail_starts))
        ):
            diags.append("tail_starts: must be strictly increasing positive integers")
    return diags


def _parse_x0(raw):
    """Accept a float in [0, 1) or an exact [num, den] pair."""
    if raw is None:
        return 0.0
    if isinstance(raw, (list, tuple)):
        if len(raw) != 2 or not all(_is_int(v) for v in raw):
            raise ValueError("x0 pair must be two integers [num, den]")
        fr = Fraction(int(raw[0]), int(raw[1]))
        if not 0 <= fr < 1:
            raise ValueError("x0 must lie in [0, 1)")
        return fr
    if _is_num(raw):
        x = float(raw)
        if not 0.0 <= x < 1.0:
            raise ValueError("x0 must lie in [0, 1)")
        return x
    raise ValueError("x0 must be a number or [num, den]")


# ---------------------------------------------------------------------------
# deterministic serialization


def _py(obj):
    """Recursively convert to plain JSON-ready Python values."""
    if isinstance(obj, dict):
        return {str(k): _py(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_py(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_py(v) for v in obj.tolist()]
    if isinstance(obj, Fraction):
        return [int(obj.numerator), int(obj.denominator)]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, numbers.Integral):
        return int(obj)
    if isinstance(obj, numbers.Real):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, complex):
        return [_py(obj.real), _py(obj.imag)]
    return obj


def _json_bytes(obj) -> bytes:
    text = json.dumps(_py(obj), sort_keys=True, indent=2, allow_nan=False)
    return (text + "\n").encode("utf-8")


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, numbers.Integral):
        return str(int(v))
    if isinstance(v, numbers.Real):
        return repr(float(v))
    return str(v)


def _csv_bytes(header: list[str], rows) -> bytes:
    lines = [",".join(header)]
    lines.extend(",".join(_cell(v) for v in row) for row in rows)
    return ("\n".join(lines) + "\n").encode("utf-8")


def _thin_grid(n_grid: np.ndarray) -> np.ndarray:
    """Row indices for CSV emission: dense head, then geometric spacing.

    Reports always use the full stored grid; only the CSV is thinned."""
    if n_grid.size <= _CSV_DENSE_ROWS:
        return np.arange(n_grid.size)
    head = np.flatnonzero(n_grid <= _CSV_DENSE_ROWS)
    rest = np.flatnonzero(n_grid > _CSV_DENSE_ROWS)
    buckets = np.floor(
        np.log(n_grid[rest].astype(np.float64)) / np.log(_CSV_THIN_RATIO)
    ).astype(np.int64)
    _, first = np.unique(buckets, return_index=True)
    keep = np.concatenate([head, rest[first], [n_grid.size - 1]])
    return np.unique(keep)


def _median(vals) -> float:
    vals = [v for v in vals if v is not None and math.isfinite(v)]
    return float(np.median(vals)) if vals else math.nan


# ---------------------------------------------------------------------------
# stage helpers (shared by base kinds and presets)


def _seed_list(seeds) -> list:
    return list(seeds) if seeds else [None]


def _envelope_stage(files, wdict, idict, blocks, theta_grid, harmonic, seeds,
                    csv_name="envelope.csv"):
    """Certified sup rows over (M, N] blocks; returns samples grouped by seed."""
    points = (theta_grid or {}).get("points")
    iters = (theta_grid or {}).get("refine_iters", 48)
    rows = []
    samples = {}
    for seed in _seed_list(seeds):
        wspec = _weight_spec(wdict, seed)
        ispec = _index_spec(idict, seed)
        got = []
        for m_excl, n_incl in blocks:
            k_lo = m_excl + 1
            w = gen_weights(wspec, k_lo, n_incl + 1)
            u = gen_indices(ispec, k_lo, n_incl + 1)
            grid = ThetaGrid(points) if points else None
            if harmonic:
                est = sup_harmonic(w, u, grid=grid, refine_iters=iters, k_first=k_lo)
            else:
                est = sup_envelope(w, u, grid=grid, refine_iters=iters)
            rows.append([
                seed, m_excl, n_incl, est.lower, est.upper, est.argmax_theta,
                est.deriv_bound, est.weight_l1, est.grid_points,
                est.grid_spacing, est.bracket_width, est.aliased, harmonic,
            ])
            got.append(EnvelopeSample(M=m_excl, N=n_incl, lower=est.lower,
                                      upper=est.upper, harmonic=harmonic))
        samples[seed] = got
    files[csv_name] = _csv_bytes(
        ["seed", "M", "N", "lower", "upper", "argmax_theta", "deriv_bound",
         "weight_l1", "grid_points", "grid_spacing", "bracket_width",
         "aliased", "harmonic"],
        rows,
    )
    series = []
    for seed in list(samples)[: len(_svg.PALETTE)]:
        got = samples[seed]
        label = "upper" if seed is None else f"seed {seed}"
        series.append((label, [s.N - s.M for s in got], [s.upper for s in got]))
    files[csv_name.replace(".csv", ".svg")] = _svg.line_chart(
        "certified sup envelope", "terms per row", "certified upper",
        series, x_log=True, y_log=True,
    ).encode("utf-8")
    return samples


def _fit_one(samples, template):
    if template == "H1":
        return fit_H1(samples)
    if template == "H2":
        return fit_H2(samples)
    if template == "log_decay":
        return fit_log_decay(samples)
    return fit_harmonic(samples, template)


def _fit_stage(files, samples_by_seed, template, reference=None, extras=None):
    fits = []
    for seed, samples in samples_by_seed.items():
        fit = _fit_one(samples, template)
        fits.append({"seed": seed, **fit.to_dict()})
    agg = {
        "median_alpha": _median([f["alpha"] for f in fits]),
        "max_rms_residual": max(f["rms_residual"] for f in fits),
        "verdicts": sorted({f["verdict"] for f in fits}),
    }
    if template == "H1":
        agg["max_delta_plus_alpha"] = max(f["delta"] + f["alpha"] for f in fits)
    record = {"template": template, "fits": fits, "aggregate": agg}
    if reference:
        record["reference"] = reference
    if extras:
        record.update(extras)
    files["fit.json"] = _json_bytes(record)
    return record


def _orbit_point(system, x0_raw, seed, u_max):
    if system.kind == "doubling":
        return OrbitPoint.doubling(int(seed), int(u_max) + 128)
    return OrbitPoint.rotation(_parse_x0(x0_raw))


def _series_csv_rows(seed, run, norm):
    keep = _thin_grid(run.n_grid)
    n = run.n_grid[keep]
    s = run.sums[keep]
    a = np.where(n >= norm.k0, 1.0, np.nan)
    vals = norm.values(n[n >= norm.k0])
    a[n >= norm.k0] = vals
    rows = []
    for i in range(n.size):
        ratio = abs(s[i]) / a[i] if math.isfinite(a[i]) else None
        rows.append([seed, int(n[i]), s[i].real, s[i].imag, abs(s[i]),
                     a[i] if math.isfinite(a[i]) else None, ratio])
    return rows


def _average_stage(files, wdict, idict, sysdict, obsdict, x0_raw, normdict,
                   n_terms, seeds, k_first=None, ladder_dict=None,
                   checkpoints=None, report_extra=None):
    """Normalized running-sum runs, one per seed; optional oscillation report."""
    norm = NormalizerSpec.from_dict(normdict)
    system = SystemModel.from_dict(sysdict)
    f = Observable.from_dict(obsdict)
    ladder = BlockLadder.from_dict(ladder_dict) if ladder_dict else None
    csv_rows = []
    per_seed = []
    osc_entries = []
    chart = []
    osc_chart = []
    for seed in _seed_list(seeds):
        wspec = _weight_spec(wdict, seed)
        ispec = _index_spec(idict, seed)
        kf = k_first if k_first is not None else max(wspec.offset, ispec.offset, 1)
        w = gen_weights(wspec, kf, kf + n_terms)
        u = gen_indices(ispec, kf, kf + n_terms)
        x0 = _orbit_point(system, x0_raw, seed, u.max())
        vals = orbit_eval(system, f, x0, u)
        run = weighted_sums(vals, w, k_first=kf, normalizer=norm)
        ns = normalized_series(run)
        cps = checkpoints or _decade_checkpoints(ns.n_grid)
        entry = {
            "seed": seed,
            "k_first": kf,
            "n_max": run.n_max,
            "slope": ns.slope(),
            "ratio_at": {str(c): ns.value_at(c) for c in cps},
            "tail_max": {str(c): ns.tail_max(c) for c in cps},
            "monotone_normalizer": ns.monotone_normalizer,
        }
        per_seed.append(entry)
        csv_rows.extend(_series_csv_rows(seed, run, norm))
        if len(chart) < len(_svg.PALETTE):
            keep = _thin_grid(ns.n_grid)
            label = "ratio" if seed is None else f"seed {seed}"
            chart.append((label, ns.n_grid[keep].tolist(), ns.ratios[keep].tolist()))
        if ladder is not None:
            rep = oscillation_report(run, ladder)
            osc_entries.append({
                "seed": seed,
                **rep.to_dict(),
                "decomposition": rep.check_decomposition(),
            })
            if len(osc_chart) < 4:
                label = "osc" if seed is None else f"seed {seed}"
                osc_chart.append((label, rep.ladder_j[:-1].tolist(), rep.osc.tolist()))
    files["series.csv"] = _csv_bytes(
        ["seed", "N", "s_real", "s_imag", "s_abs", "a_value", "ratio"], csv_rows)
    files["ratio.svg"] = _svg.line_chart(
        "normalized running sums", "N", "|S_N| / A(N)",
        chart, x_log=True, y_log=True).encode("utf-8")
    slopes = [e["slope"] for e in per_seed]
    report = {
        "normalizer": norm.to_dict(),
        "convention": "exclusive",
        "per_seed": per_seed,
        "aggregate": {
            "median_slope": _median(slopes),
            "median_ratio_at": {
                key: _median([e["ratio_at"][key] for e in per_seed])
                for key in per_seed[0]["ratio_at"]
            },
            "median_tail_max": {
                key: _median([e["tail_max"][key] for e in per_seed])
                for key in per_seed[0]["tail_max"]
            },
        },
    }
    if report_extra:
        report.update(report_extra)
    files["report.json"] = _json_bytes(report)
    if ladder is not None:
        files["oscillation.json"] = _json_bytes({
            "ladder": ladder.to_dict(),
            "per_seed": osc_entries,
            "all_decompositions_pass": all(
                e["decomposition"]["passed"] for e in osc_entries),
        })
        files["oscillation.svg"] = _svg.line_chart(
            "per-block oscillation maxima", "block index j", "osc_j",
            osc_chart, x_log=False, y_log=True).encode("utf-8")
    return report


def _decade_checkpoints(n_grid: np.ndarray) -> list[int]:
    lo, hi = int(n_grid[0]), int(n_grid[-1])
    cps = [10**e for e in range(1, 10) if lo <= 10**e <= hi]
    if hi not in cps:
        cps.append(hi)
    return cps


def _hilbert_stage(files, wdict, idict, sysdict, obsdict, x0_raw, normdict,
                   n_terms, seeds, k_first=None, tail_starts=None, bound=None,
                   ratio_norm=None):
    """Partial sums of the one-sided series with Cauchy tail diagnostics."""
    norm = NormalizerSpec.from_dict(normdict)
    system = SystemModel.from_dict(sysdict)
    f = Observable.from_dict(obsdict)
    csv_rows = []
    per_seed = []
    ratio_entries = []
    chart = []
    for seed in _seed_list(seeds):
        wspec = _weight_spec(wdict, seed)
        ispec = _index_spec(idict, seed)
        kf = k_first if k_first is not None else max(
            norm.k0, wspec.offset, ispec.offset, 1)
        w = gen_weights(wspec, kf, kf + n_terms)
        u = gen_indices(ispec, kf, kf + n_terms)
        x0 = _orbit_point(system, x0_raw, seed, u.max())
        vals = orbit_eval(system, f, x0, u)
        run = hilbert_series(w, vals, norm, k_first=kf)
        starts = tail_starts or _dyadic_starts(kf, run.n_max)
        tails = cauchy_tail_report(run, starts)
        max_abs = float(np.abs(run.sums).max())
        entry = {"seed": seed, "k_first": kf, "n_max": run.n_max,
                 "max_abs": max_abs, "tails": tails}
        if bound is not None:
            entry["within_bound"] = bool(max_abs <= bound)
        per_seed.append(entry)
        keep = _thin_grid(run.n_grid)
        for i in keep:
            s = run.sums[i]
            csv_rows.append([seed, int(run.n_grid[i]), s.real, s.imag, abs(s)])
        if len(chart) < len(_svg.PALETTE):
            label = "|partial|" if seed is None else f"seed {seed}"
            chart.append((label, run.n_grid[keep].tolist(),
                          np.abs(run.sums[keep]).tolist()))
        if ratio_norm is not None:
            ns = normalized_series(run, ratio_norm)
            cps = _decade_checkpoints(ns.n_grid)
            ratio_entries.append({
                "seed": seed,
                "slope": ns.slope(),
                "ratio_at": {str(c): ns.value_at(c) for c in cps},
                "tail_max": {str(c): ns.tail_max(c) for c in cps},
            })
    files["hseries.csv"] = _csv_bytes(
        ["seed", "N", "s_real", "s_imag", "s_abs"], csv_rows)
    files["hseries.svg"] = _svg.line_chart(
        "series partial sums", "N", "|partial sum|",
        chart, x_log=True, y_log=False).encode("utf-8")
    record = {
        "normalizer": norm.to_dict(),
        "convention": "inclusive",
        "per_seed": per_seed,
        "max_abs": max(e["max_abs"] for e in per_seed),
    }
    if bound is not None:
        record["bound"] = float(bound)
        record["all_within_bound"] = all(e["within_bound"] for e in per_seed)
    files["cauchy.json"] = _json_bytes(record)
    if ratio_norm is not None:
        files["report.json"] = _json_bytes({
            "normalizer": ratio_norm.to_dict(),
            "per_seed": ratio_entries,
            "aggregate": {
                "median_slope": _median([e["slope"] for e in ratio_entries]),
            },
        })
    return record


def _dyadic_starts(k_first: int, n_max: int) -> list[int]:
    lo = max(k_first, 8)
    out = []
    v = 1
    while v <= n_max // 2:
        if v >= lo:
            out.append(v)
        v *= 2
    return out or [lo]


def _pi_table_stage(files, seeds, big_ns):
    """Counting-function table Pi(N) log N / N for the random prime model."""
    rows = []
    scaled = {n: [] for n in big_ns}
    for seed in seeds:
        spec = IndexSpec(kind="cramer_primes", seed=int(seed))
        for n in big_ns:
            p = pi_count(spec, n)
            s = p * math.log(n) / n
            rows.append([seed, n, p, s])
            scaled[n].append(s)
    files["pi_table.csv"] = _csv_bytes(["seed", "N", "pi", "scaled"], rows)
    return {str(n): {"median": _median(v), "min": min(v), "max": max(v)}
            for n, v in scaled.items()}


# ---------------------------------------------------------------------------
# base kind runners


def _full_blocks(cfg: ExperimentConfig, wspec, ispec):
    if cfg.blocks is not None:
        return [tuple(b) for b in cfg.blocks]
    m0 = max(wspec.offset - 1, ispec.offset - 1, 0)
    return [(m0, int(n)) for n in cfg.n_ladder]


def _run_envelope_kind(cfg: ExperimentConfig, files, walls):
    t0 = time.perf_counter()
    wspec = _weight_spec(cfg.weights, 1)
    ispec = _index_spec(cfg.indices, 1)
    blocks = _full_blocks(cfg, wspec, ispec)
    samples = _envelope_stage(files, cfg.weights, cfg.indices, blocks,
                              cfg.theta_grid, bool(cfg.harmonic), cfg.seeds)
    walls["envelope"] = time.perf_counter() - t0
    if cfg.kind == "condition_fit":
        t0 = time.perf_counter()
        _fit_stage(files, samples, cfg.template, reference=cfg.reference)
        walls["fit"] = time.perf_counter() - t0


def _run_average_kind(cfg: ExperimentConfig, files, walls):
    t0 = time.perf_counter()
    _average_stage(files, cfg.weights, cfg.indices, cfg.system, cfg.observable,
                   cfg.x0, cfg.normalizer, int(cfg.n_terms), cfg.seeds,
                   k_first=cfg.k_first,
                   ladder_dict=cfg.ladder if cfg.kind == "oscillation_run" else None)
    walls["average"] = time.perf_counter() - t0


def _run_hilbert_kind(cfg: ExperimentConfig, files, walls):
    t0 = time.perf_counter()
    _hilbert_stage(files, cfg.weights, cfg.indices, cfg.system, cfg.observable,
                   cfg.x0, cfg.normalizer, int(cfg.n_terms), cfg.seeds,
                   k_first=cfg.k_first, tail_starts=cfg.tail_starts,
                   bound=cfg.bound)
    walls["hilbert"] = time.perf_counter() - t0


# ---------------------------------------------------------------------------
# presets


_SQRT2_SYSTEM = SystemModel.rotation_sqrt2().to_dict()
_MODE1 = {"kind": "fourier_mode", "mode": 1}


def _preset_example1(cfg, files, walls):
    """Steep power phase over a squared orbit.

    Envelope rows are computed on a fixed 2^20 grid, far below the Nyquist
    density for u ~ N^2, so rows carry the aliased flag and the fit is
    exploratory; the reference exponent uses the n-th derivative envelope
    with delta = 2.5.
    """
    w = {"kind": "power_phase", "delta": 2.5}
    i = {"kind": "monomial", "d": 2}
    blocks = [(0, 1 << j) for j in range(7, 13)]
    t0 = time.perf_counter()
    samples = _envelope_stage(files, w, i, blocks,
                              {"points": 1 << 20, "refine_iters": 48}, False, None)
    walls["envelope"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    _fit_stage(files, samples, "H2", reference={
        "alpha": steep_power_phase_exponent(2.5),
        "label": "derivative-test envelope exponent for delta = 2.5",
        "note": "grid rows are aliased at this density; fit is exploratory",
    })
    walls["fit"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    _hilbert_stage(files, w, i, _SQRT2_SYSTEM, _MODE1, 0.0,
                   {"gamma": 35.0 / 36.0, "a": 2.0, "k0": 3},
                   10_000, None)
    walls["hilbert"] = time.perf_counter() - t0


def _preset_example2(cfg, files, walls):
    """Fractional power phase on the integers: envelope fit, normalized
    run along an irrational rotation, and block oscillation maxima."""
    w = {"kind": "power_phase", "delta": 0.5}
    i = {"kind": "identity"}
    blocks = [(0, 1 << j) for j in range(10, 18)]
    t0 = time.perf_counter()
    samples = _envelope_stage(files, w, i, blocks, None, False, None)
    walls["envelope"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    _fit_stage(files, samples, "H2", reference={
        "alpha": 0.75,
        "label": "second-derivative envelope exponent 1 - delta/2",
    })
    walls["fit"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    _average_stage(files, w, i, _SQRT2_SYSTEM, _MODE1, 0.0,
                   {"gamma": 0.875, "a": 2.0, "k0": 3},
                   1_000_000, None,
                   ladder_dict={"kind": "dyadic", "j_lo": 2, "j_hi": 19},
                   checkpoints=[1_000, 10_000, 100_000, 1_000_000])
    walls["average"] = time.perf_counter() - t0


def _preset_example3(cfg, files, walls):
    """Logarithmic phase: harmonic sup rows against the closed-form bound,
    a flat harmonic growth fit, and bounded series partial sums."""
    h = float((cfg.params or {}).get("h", 1.0))
    bound = hlawka_bound(h)
    w = {"kind": "log_phase", "h": h}
    i = {"kind": "identity"}
    blocks = [(0, 1 << 10), (0, 1 << 12), (0, 1 << 14), (0, 1 << 16), (0, 100_000)]
    t0 = time.perf_counter()
    samples = _envelope_stage(files, w, i, blocks, None, True, None)
    walls["envelope"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    max_upper = max(s.upper for s in samples[None])
    _fit_stage(files, samples, "harmonic_H2", reference={
        "bound": bound,
        "label": "closed-form harmonic sup bound 30(|h| + 1/|h|)",
    }, extras={"bound_check": {
        "bound": bound,
        "max_upper": max_upper,
        "slack_fraction": 1.0 - max_upper / bound,
        "passed": bool(max_upper <= bound),
    }})
    walls["fit"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    _hilbert_stage(files, w, i, _SQRT2_SYSTEM, _MODE1, 0.0,
                   {"gamma": 1.0, "k0": 1}, 100_000, None,
                   tail_starts=[1 << j for j in range(7, 16, 2)], bound=bound)
    walls["hilbert"] = time.perf_counter() - t0


def _preset_example4(cfg, files, walls):
    """Random unimodular weights over dyadic (M, N] blocks with a
    two-variable envelope fit and a square-root shape check."""
    seeds = list(cfg.seeds) if cfg.seeds else list(range(1, 11))
    w = {"kind": "iid_uniform_phase"}
    i = {"kind": "identity"}
    blocks = [(n - (n >> s), n)
              for n in (1 << j for j in range(11, 17))
              for s in (1, 2, 3)]
    t0 = time.perf_counter()
    samples = _envelope_stage(files, w, i, blocks,
                              {"refine_iters": 32}, False, seeds)
    walls["envelope"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    shape = {}
    for seed, got in samples.items():
        shape[str(seed)] = max(
            s.upper / (math.sqrt(s.N - s.M) * math.sqrt(math.log(s.N)))
            for s in got)
    _fit_stage(files, samples, "H1", reference={
        "shape": "sqrt(N - M) sqrt(log N)",
        "label": "square-root block envelope for centered random weights",
    }, extras={"shape_check": {
        "definition": "max upper / (sqrt(N - M) sqrt(log N)) per seed",
        "per_seed_max": shape,
        "max": max(shape.values()),
    }})
    walls["fit"] = time.perf_counter() - t0


def _preset_example5(cfg, files, walls):
    """Harmonic version of the random-weight scan plus the log-normalized
    series run."""
    seeds = list(cfg.seeds) if cfg.seeds else [1, 2, 3, 4]
    w = {"kind": "iid_uniform_phase"}
    i = {"kind": "identity"}
    blocks = [(0, 1 << j) for j in range(8, 17)]
    t0 = time.perf_counter()
    samples = _envelope_stage(files, w, i, blocks, None, True, seeds)
    walls["envelope"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    _fit_stage(files, samples, "harmonic_log_decay", reference={
        "label": "slowly varying harmonic envelope log N / log^beta log N",
    })
    walls["fit"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    _hilbert_stage(files, w, i, _SQRT2_SYSTEM, _MODE1, 0.0,
                   {"gamma": 1.0, "k0": 1}, 100_000, seeds,
                   ratio_norm=NormalizerSpec(gamma=0.0, a=1.0, k0=3))
    walls["hilbert"] = time.perf_counter() - t0


def _preset_example6(cfg, files, walls):
    """Random prime model: counting-function scaling table plus normalized
    averages along the random index set."""
    seeds = list(cfg.seeds) if cfg.seeds else list(range(1, 21))
    t0 = time.perf_counter()
    pi_summary = _pi_table_stage(files, seeds, [10_000, 100_000, 1_000_000])
    walls["pi_table"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    _average_stage(files, {"kind": "constant"}, {"kind": "cramer_primes"},
                   _SQRT2_SYSTEM, _MODE1, 0.0,
                   {"gamma": 0.75, "k0": 1},
                   1_000_000, seeds,
                   checkpoints=[10_000, 1_000_000],
                   report_extra={"pi_scaled": pi_summary})
    walls["average"] = time.perf_counter() - t0


def _preset_prime_question(cfg, files, walls):
    """Exploratory: decay of (1/N^beta) sums along the true primes for a
    ladder of beta values. No growth claim is certified here."""
    betas = [float(b) for b in (cfg.params or {}).get("betas", (0.6, 0.75, 0.9, 1.0))]
    n_terms = 200_000
    t0 = time.perf_counter()
    ispec = IndexSpec(kind="primes")
    u = gen_indices(ispec, 1, 1 + n_terms)
    w = np.ones(n_terms, dtype=np.complex128)
    system = SystemModel.from_dict(_SQRT2_SYSTEM)
    f = Observable.from_dict(_MODE1)
    vals = orbit_eval(system, f, OrbitPoint.rotation(0.0), u)
    run = weighted_sums(vals, w, k_first=1)
    per_beta = []
    csv_rows = []
    chart = []
    for beta in betas:
        norm = NormalizerSpec(gamma=beta, k0=1)
        ns = normalized_series(run, norm)
        cps = _decade_checkpoints(ns.n_grid)
        per_beta.append({
            "beta": beta,
            "slope": ns.slope(),
            "ratio_at": {str(c): ns.value_at(c) for c in cps},
            "tail_max": {str(c): ns.tail_max(c) for c in cps},
        })
        keep = _thin_grid(ns.n_grid)
        if len(chart) < len(_svg.PALETTE):
            chart.append((f"beta {beta}", ns.n_grid[keep].tolist(),
                          ns.ratios[keep].tolist()))
        if not csv_rows:
            for idx in keep:
                s = run.sums[idx]
                n_val = int(ns.n_grid[idx])
                csv_rows.append([None, n_val, s.real, s.imag, abs(s),
                                 norm.values(np.array([n_val]))[0],
                                 ns.ratios[idx]])
    files["series.csv"] = _csv_bytes(
        ["seed", "N", "s_real", "s_imag", "s_abs", "a_value", "ratio"], csv_rows)
    files["ratio.svg"] = _svg.line_chart(
        "prime-index averages", "N", "|S_N| / N^beta",
        chart, x_log=True, y_log=True).encode("utf-8")
    files["report.json"] = _json_bytes({
        "exploratory": True,
        "question": "does power-normalized decay along all integers force "
                    "decay along the primes?",
        "n_terms": n_terms,
        "per_beta": per_beta,
    })
    walls["average"] = time.perf_counter() - t0


_PRESET_RUNNERS = {
    "example1": _preset_example1,
    "example2": _preset_example2,
    "example3": _preset_example3,
    "example4": _preset_example4,
    "example5": _preset_example5,
    "example6": _preset_example6,
    "prime_question": _preset_prime_question,
}

_PRESET_SUMMARY = {
    "example1": ("steep power phase over a squared orbit",
                 ["grid envelope rows (aliased, exploratory)",
                  "H2 fit vs the derivative-test exponent",
                  "power-log normalized series partial sums"]),
    "example2": ("fractional power phase on the integers",
                 ["certified envelope rows 2^10..2^17",
                  "H2 fit vs exponent 1 - delta/2",
                  "normalized rotation run to N = 10^6",
                  "dyadic block oscillation maxima"]),
    "example3": ("logarithmic phase with a closed-form sup bound",
                 ["harmonic sup rows vs 30(|h| + 1/|h|)",
                  "flat harmonic growth fit",
                  "bounded series partial sums"]),
    "example4": ("random unimodular weights over dyadic blocks",
                 ["two-variable H1 envelope fit",
                  "square-root block shape check"]),
    "example5": ("harmonic random weights",
                 ["slowly varying harmonic envelope fit",
                  "log-normalized series decay report"]),
    "example6": ("random prime model",
                 ["counting-function scaling table",
                  "power-normalized averages along the random set"]),
    "prime_question": ("prime-index averages (exploratory)",
                       ["decay slopes for a ladder of beta exponents"]),
}


def list_presets() -> list[dict]:
    """Catalog of built-in presets with what each one exercises."""
    out = []
    for pid in PRESET_IDS:
        title, exercises = _PRESET_SUMMARY[pid]
        out.append({
            "id": pid,
            "title": title,
            "exercises": exercises,
            "stochastic": _PRESET_STOCHASTIC[pid],
            "params": sorted(_PRESET_PARAM_KEYS.get(pid, ())),
        })
    return out


# ---------------------------------------------------------------------------
# run + manifest


@dataclass
class ResultManifest:
    """What a run produced: canonical config echo, digests, timings."""

    config: dict
    kind: str
    out_dir: str
    outputs: dict
    wall_seconds: dict
    seeds: list
    tool_version: str = TOOL_VERSION
    environment: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "kind": self.kind,
            "output_dir": self.out_dir,
            "outputs": self.outputs,
            "wall_seconds": self.wall_seconds,
            "seeds": self.seeds,
            "tool_version": self.tool_version,
            "environment": self.environment,
        }


def _output_root(config: ExperimentConfig) -> Path:
    return Path(config.output_dir or os.environ.get(OUTPUT_ROOT_VAR)
                or DEFAULT_OUTPUT_ROOT)


def run(config: ExperimentConfig) -> ResultManifest:
    """Validate, compute every output in memory, then write atomically.

    Raises ConfigError on validation failure; on any other failure no
    partial files are left behind (outputs are only written once the whole
    computation has succeeded, and a failed write cleans up after itself).
    """
    diags = validate(config)
    if diags:
        raise ConfigError(diags)
    files: dict[str, bytes] = {}
    walls: dict[str, float] = {}
    t_total = time.perf_counter()
    if config.kind == "preset":
        _PRESET_RUNNERS[config.preset](config, files, walls)
    elif config.kind in ("envelope_scan", "condition_fit"):
        _run_envelope_kind(config, files, walls)
    elif config.kind in ("average_run", "oscillation_run"):
        _run_average_kind(config, files, walls)
    else:
        _run_hilbert_kind(config, files, walls)
    walls["total"] = time.perf_counter() - t_total

    target = _output_root(config) / config.name
    if target.exists():
        shutil.rmtree(target)
    target.mkdir(parents=True)
    written = []
    try:
        outputs = {}
        for fname in sorted(files):
            payload = files[fname]
            path = target / fname
            path.write_bytes(payload)
            written.append(path)
            outputs[fname] = {
                "sha256": hashlib.sha256(payload).hexdigest(),
                "bytes": len(payload),
            }
        manifest = ResultManifest(
            config=_py(config.to_dict()),
            kind=config.kind,
            out_dir=str(target),
            outputs=outputs,
            wall_seconds={k: round(v, 6) for k, v in walls.items()},
            seeds=list(config.seeds or []),
            environment={
                "output_root": str(_output_root(config)),
                "threads": os.environ.get(THREADS_VAR),
            },
        )
        (target / "manifest.json").write_bytes(_json_bytes(manifest.to_dict()))
    except BaseException:
        for path in written:
            path.unlink(missing_ok=True)
        (target / "manifest.json").unlink(missing_ok=True)
        try:
            target.rmdir()
        except OSError:
            pass
        raise
    return manifest


# ---------------------------------------------------------------------------
# CLI


def _apply_thread_env():
    v = os.environ.get(THREADS_VAR)
    if not v:
        return
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(var, v)


def _load_config(path: str):
    try:
        return ExperimentConfig.load(path), []
    except FileNotFoundError:
        return None, [f"config file not found: {path}"]
    except (ValueError, TypeError) as exc:
        return None, [f"could not parse config: {exc}"]


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="ergosum",
        description="weighted ergodic average experiments: certified "
                    "trig-sum envelopes, growth fits, normalized runs",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="validate a config and run it")
    p_run.add_argument("config", help="path to a JSON experiment config")
    p_val = sub.add_parser("validate", help="check a config without writing")
    p_val.add_argument("config", help="path to a JSON experiment config")
    sub.add_parser("presets", help="list built-in presets")
    args = parser.parse_args(argv)

    if args.command == "presets":
        for entry in list_presets():
            seeds = " (seeded)" if entry["stochastic"] else ""
            print(f"{entry['id']}: {entry['title']}{seeds}")
            for line in entry["exercises"]:
                print(f"    - {line}")
            if entry["params"]:
                print(f"    params: {', '.join(entry['params'])}")
        return EXIT_OK

    config, diags = _load_config(args.config)
    if config is not None:
        diags = validate(config)
    if args.command == "validate":
        if diags:
            for d in diags:
                print(f"invalid: {d}")
            return EXIT_VALIDATION
        print("ok")
        return EXIT_OK

    if diags:
        for d in diags:
            print(f"invalid: {d}")
        return EXIT_VALIDATION
    _apply_thread_env()
    try:
        manifest = run(config)
    except ConfigError as exc:
        for d in exc.diagnostics:
            print(f"invalid: {d}")
        return EXIT_VALIDATION
    except Exception as exc:
        print(f"runtime failure: {exc}")
        return EXIT_RUNTIME
    print(f"wrote {len(manifest.outputs) + 1} files to {manifest.out_dir}")
    for fname in sorted(manifest.outputs):
        print(f"    {fname}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
