"""Command-line front end: sweeps, simulator cross-checks, and high-SNR reports.

Subcommands
-----------
sweep        evaluate outage curves along one axis and emit a CSV table
validate     compare the Monte-Carlo estimator against the exact integrals
do-cg        print diversity order and coding gain for both systems
preset list  show the built-in scenario presets

Parameter sources merge in increasing precedence: built-in defaults, then
``--preset``, then ``--config FILE`` (flat ``key=value`` lines, ``#``
comments allowed), then repeated ``--set KEY=VALUE`` overrides, then the
dedicated flags (``--axis``, ``--start``, ...).

The sweep CSV is RFC-4180 style (CRLF line endings) preceded by a
``#``-prefixed comment block recording the tool version, the full
parameter set, and the seed, so a run is reproducible from its own output
file.  Every row reuses the same seed, which gives common random numbers
across the axis and makes the output byte-identical for any worker count.

Exit codes: 0 success, 2 validation z-score failure, 3 numeric failure
(a sweep row that could not be evaluated, or an unusable parameter set).
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
import warnings
from dataclasses import dataclass, replace

from .analytic_exact import QuadratureError, primary_op_exact, secondary_op_exact
from .asymptotic import (
    CoefficientSingularityWarning,
    primary_do_cg,
    primary_op_approx,
    primary_op_asymptotic,
    secondary_do_cg,
    secondary_op_approx,
    secondary_op_asymptotic,
)
from .model import LinkFading, SystemParams, snr_from_db
from .montecarlo import SimulationConfig, estimate_outage

__all__ = [
    "AXES",
    "OUTPUTS",
    "PRESETS",
    "SweepSpec",
    "SweepResult",
    "ValidationReport",
    "run_sweep",
    "run_validate",
    "run_do_cg",
    "format_preset_list",
    "main",
]

__version__ = "0.1.0"

AXES = ("snr_db", "alpha", "rho")
OUTPUTS = ("mc", "exact", "approx", "asymptotic")

_OUTPUT_ALIASES = {"asym": "asymptotic"}

# Defaults mirror the common scenario of the bundled presets: rate target
# 1 bit/s/Hz, unit conversion efficiency, conversion noise as strong as
# the receiver noise, and the five-link fading profile used throughout.
_DEFAULTS = {
    "axis": "snr_db",
    "start": 0.0,
    "stop": 40.0,
    "step": 2.0,
    "snr_db": 20.0,
    "rho": 0.5,
    "alpha": 0.5,
    "eta": 1.0,
    "mu": 1.0,
    "r0": 1.0,
    "m": (0.6, 1.5, 1.5, 1.5, 0.6),
    "beta": (1.0, 1.5, 1.5, 1.5, 1.0),
    "outputs": ("mc", "exact", "approx", "asymptotic"),
    "trials": 1_000_000,
    "seed": 1234,
    "workers": 1,
    "batch": 100_000,
}

# Presets store only their deltas against _DEFAULTS.
PRESETS: dict[str, dict] = {
    "fig3": {"axis": "snr_db", "start": 0.0, "stop": 40.0, "step": 2.0, "alpha": 0.5},
    "fig4": {"axis": "snr_db", "start": 0.0, "stop": 40.0, "step": 2.0, "alpha": 0.2},
    "fig5": {"axis": "alpha", "start": 0.05, "stop": 0.95, "step": 0.05},
    "fig6": {"axis": "alpha", "start": 0.05, "stop": 0.95, "step": 0.05},
    "fig7": {"axis": "rho", "start": 0.05, "stop": 0.95, "step": 0.05, "alpha": 0.9},
    "fig8": {"axis": "rho", "start": 0.05, "stop": 0.95, "step": 0.05, "alpha": 0.2},
}

_PRESET_NOTES = {
    "fig3": "primary outage versus mean SNR (alpha = 0.5)",
    "fig4": "secondary outage versus mean SNR (alpha = 0.2)",
    "fig5": "primary outage versus power-sharing coefficient",
    "fig6": "secondary outage versus power-sharing coefficient",
    "fig7": "primary outage versus power-splitting coefficient (alpha = 0.9)",
    "fig8": "secondary outage versus power-splitting coefficient (alpha = 0.2)",
}

_FLOAT_KEYS = frozenset(
    ["start", "stop", "step", "snr_db", "rho", "alpha", "eta", "mu", "r0"]
    + [f"m{i}" for i in range(5)]
    + [f"beta{i}" for i in range(5)]
)
_INT_KEYS = frozenset(["trials", "seed", "workers", "batch"])
_TUPLE_KEYS = frozenset(["m", "beta"])


@dataclass(frozen=True)
class SweepSpec:
    """One sweep: the axis and its grid, the fixed scenario, and the outputs.

    fixed supplies every parameter except the swept one; its value on the
    swept axis is ignored.  outputs is any subset of OUTPUTS.
    """

    axis: str
    start: float
    stop: float
    step: float
    fixed: SystemParams
    outputs: tuple = OUTPUTS
    mc_trials: int = 1_000_000
    seed: int = 1234

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"axis must be one of {AXES}, got {self.axis!r}")
        if not self.start < self.stop:
            raise ValueError(
                f"need start < stop, got start={self.start} stop={self.stop}")
        if self.step <= 0.0:
            raise ValueError(f"step must be positive, got {self.step}")
        canonical = tuple(name for name in OUTPUTS if name in self.outputs)
        unknown = [name for name in self.outputs if name not in OUTPUTS]
        if unknown:
            raise ValueError(f"unknown outputs {unknown}; choose from {OUTPUTS}")
        if not canonical:
            raise ValueError("at least one output is required")
        object.__setattr__(self, "outputs", canonical)
        if self.mc_trials < 1:
            raise ValueError(f"mc_trials must be >= 1, got {self.mc_trials}")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        grid = self.grid()
        if self.axis in ("alpha", "rho") and not (0.0 <= grid[0] and grid[-1] <= 1.0):
            raise ValueError(
                f"{self.axis} grid [{grid[0]}, {grid[-1]}] leaves [0, 1]")

    def grid(self) -> list:
        """Axis values start, start+step, ... (never past stop).

        A step larger than the span still yields the single starting
        point, so a degenerate request produces a one-row table.
        """
        count = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return [self.start + k * self.step for k in range(count)]


@dataclass(frozen=True)
class SweepResult:
    """Rendered CSV text plus the number of rows with evaluation failures."""

    csv_text: str
    failed_rows: int


@dataclass(frozen=True)
class ValidationReport:
    """Simulator-versus-exact comparison for one parameter point."""

    text: str
    z_primary: float
    z_secondary: float

    @property
    def passed(self) -> bool:
        return self.z_primary <= 4.0 and self.z_secondary <= 4.0


def _with_axis(params: SystemParams, axis: str, value: float) -> SystemParams:
    if axis == "snr_db":
        return replace(params, snr_bar=snr_from_db(value))
    return replace(params, **{axis: value})


def _columns(spec: SweepSpec) -> list:
    cols = [spec.axis]
    for system in ("primary", "secondary"):
        if "mc" in spec.outputs:
            cols += [f"{system}_mc", f"{system}_mc_stderr"]
        for name in ("exact", "approx", "asymptotic"):
            if name in spec.outputs:
                cols.append(f"{system}_{name}")
    cols.append("error")
    return cols


def _header_block(spec: SweepSpec, batch: int) -> list:
    fixed = spec.fixed
    m_txt = ",".join(str(link.m) for link in fixed.links)
    beta_txt = ",".join(str(link.beta) for link in fixed.links)
    return [
        f"# crn-outage sweep {__version__}",
        f"# axis={spec.axis} start={spec.start} stop={spec.stop} step={spec.step}",
        f"# outputs={','.join(spec.outputs)}",
        f"# mc_trials={spec.mc_trials} seed={spec.seed} batch={batch}",
        f"# snr_bar={fixed.snr_bar} rho={fixed.rho} alpha={fixed.alpha}"
        f" eta={fixed.eta} mu={fixed.mu} r0={fixed.r0}",
        f"# m={m_txt}",
        f"# beta={beta_txt}",
    ]


_MC_COLS = ("primary_mc", "primary_mc_stderr", "secondary_mc", "secondary_mc_stderr")


def _evaluate_row(spec: SweepSpec, value: float, workers: int, batch: int):
    """(column -> cell text, failure notes) for one axis value."""
    params = _with_axis(spec.fixed, spec.axis, value)
    cells = {spec.axis: str(float(value))}
    notes = []

    if "mc" in spec.outputs:
        try:
            config = SimulationConfig(
                trials=spec.mc_trials, seed=spec.seed, workers=workers, batch=batch)
            primary_est, secondary_est = estimate_outage(params, config)
        except ValueError as exc:
            for col in _MC_COLS:
                cells[col] = "nan"
            notes.append(f"mc: {type(exc).__name__}")
        else:
            cells["primary_mc"] = str(primary_est.p_hat)
            cells["primary_mc_stderr"] = str(primary_est.stderr)
            cells["secondary_mc"] = str(secondary_est.p_hat)
            cells["secondary_mc_stderr"] = str(secondary_est.stderr)

    evaluators = (
        ("exact", primary_op_exact, secondary_op_exact),
        ("approx", primary_op_approx, secondary_op_approx),
        ("asymptotic", primary_op_asymptotic, secondary_op_asymptotic),
    )
    for name, primary_fn, secondary_fn in evaluators:
        if name not in spec.outputs:
            continue
        for system, fn in (("primary", primary_fn), ("secondary", secondary_fn)):
            col = f"{system}_{name}"
            try:
                # A coefficient tie already falls back to the closed-form
                # approximation inside the evaluator; the per-row warning
                # would otherwise repeat for every axis value.
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", CoefficientSingularityWarning)
                    cells[col] = str(float(fn(params)))
            except (QuadratureError, ValueError, OverflowError) as exc:
                cells[col] = "nan"
                notes.append(f"{col}: {type(exc).__name__}")
    return cells, notes


def run_sweep(spec: SweepSpec, workers: int = 1, batch: int = 100_000) -> SweepResult:
    """Evaluate the sweep and render the CSV table.

    Rows appear in axis order.  A point that cannot be evaluated gets nan
    in the failing cells and a note in the error column instead of
    aborting the run.  The text depends only on spec and batch, not on
    the worker count.
    """
    buffer = io.StringIO()
    for line in _header_block(spec, batch):
        buffer.write(line + "\r\n")
    writer = csv.writer(buffer)
    cols = _columns(spec)
    writer.writerow(cols)
    failed = 0
    for value in spec.grid():
        cells, notes = _evaluate_row(spec, value, workers, batch)
        if notes:
            failed += 1
        cells["error"] = ";".join(notes)
        writer.writerow([cells.get(col, "") for col in cols])
    return SweepResult(csv_text=buffer.getvalue(), failed_rows=failed)


def run_validate(params: SystemParams, trials: int, seed: int,
                 workers: int = 1, batch: int = 100_000) -> ValidationReport:
    """Run the simulator and the exact integrals at one point and compare.

    The comparison statistic is z = |p_hat - exact| / stderr; an exact
    match reports z = 0 even when the standard error collapses to zero
    (all trials in outage, or none).
    """
    config = SimulationConfig(trials=trials, seed=seed, workers=workers, batch=batch)
    estimates = estimate_outage(params, config)
    exact_fns = (primary_op_exact, secondary_op_exact)

    lines = [
        f"validate: trials={trials} seed={seed}",
        f"  snr_bar={params.snr_bar} rho={params.rho} alpha={params.alpha}"
        f" eta={params.eta} mu={params.mu} r0={params.r0}",
    ]
    z_scores = []
    for system, est, exact_fn in zip(("primary", "secondary"), estimates, exact_fns):
        exact = exact_fn(params)
        diff = abs(est.p_hat - exact)
        if diff == 0.0:
            z = 0.0
        elif est.stderr == 0.0:
            z = math.inf
        else:
            z = diff / est.stderr
        z_scores.append(z)
        lines.append(
            f"  {system:9s} mc={est.p_hat:.6f} stderr={est.stderr:.3e}"
            f" exact={exact:.6e} z={z:.2f}")
    ok = z_scores[0] <= 4.0 and z_scores[1] <= 4.0
    lines.append("result: OK (both z <= 4)" if ok else "result: MISMATCH (z > 4)")
    return ValidationReport(
        text="\n".join(lines), z_primary=z_scores[0], z_secondary=z_scores[1])


def run_do_cg(params: SystemParams) -> str:
    """Report regime, diversity order, coding gain, and dominant terms."""
    lines = [
        f"high-SNR characterization: rho={params.rho} alpha={params.alpha}"
        f" eta={params.eta} mu={params.mu} r0={params.r0}",
    ]
    for system, fn in (("primary", primary_do_cg), ("secondary", secondary_do_cg)):
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", CoefficientSingularityWarning)
            char = fn(params)
        lines.append(f"{system}:")
        lines.append(f"  regime: {char.regime}")
        lines.append(f"  diversity order: {char.diversity_order:g}")
        if char.coding_gain is None:
            lines.append("  coding gain: n/a (coefficient tie)")
        else:
            cg_db = 10.0 * math.log10(char.coding_gain)
            lines.append(
                f"  coding gain: {char.coding_gain:.6g} ({cg_db:+.3f} dB)")
        lines.append(f"  dominant terms: {', '.join(char.dominant_terms)}")
        for item in caught:
            lines.append(f"  warning: {item.message}")
    return "\n".join(lines)


def format_preset_list() -> str:
    """The built-in presets with their full resolved parameter sets."""
    lines = []
    for name in sorted(PRESETS):
        merged = {**_DEFAULTS, **PRESETS[name]}
        lines.append(f"{name}: {_PRESET_NOTES[name]}")
        lines.append(
            f"  axis={merged['axis']} start={merged['start']}"
            f" stop={merged['stop']} step={merged['step']}")
        lines.append(
            f"  snr_db={merged['snr_db']} rho={merged['rho']}"
            f" alpha={merged['alpha']} eta={merged['eta']}"
            f" mu={merged['mu']} r0={merged['r0']}")
        lines.append("  m=" + ",".join(str(v) for v in merged["m"]))
        lines.append("  beta=" + ",".join(str(v) for v in merged["beta"]))
    return "\n".join(lines)


def _parse_outputs(text) -> tuple:
    if isinstance(text, tuple):
        return text
    tokens = [tok.strip() for tok in text.split(",") if tok.strip()]
    names = [_OUTPUT_ALIASES.get(tok, tok) for tok in tokens]
    unknown = [tok for tok in names if tok not in OUTPUTS]
    if unknown:
        raise ValueError(f"unknown outputs {unknown}; choose from {OUTPUTS}")
    if not names:
        raise ValueError("at least one output is required")
    return tuple(name for name in OUTPUTS if name in names)


def _coerce(key: str, raw: str):
    if key in _FLOAT_KEYS:
        return float(raw)
    if key in _INT_KEYS:
        return int(raw)
    if key in _TUPLE_KEYS:
        values = tuple(float(tok) for tok in raw.split(","))
        if len(values) != 5:
            raise ValueError(f"{key} needs 5 comma-separated values, got {raw!r}")
        return values
    if key == "axis":
        if raw not in AXES:
            raise ValueError(f"axis must be one of {AXES}, got {raw!r}")
        return raw
    if key == "outputs":
        return _parse_outputs(raw)
    raise ValueError(f"unknown configuration key {key!r}")


def _read_config(path: str) -> dict:
    pairs = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
            pairs[key.strip()] = value.strip()
    return pairs


def _resolve(args) -> dict:
    """Merge defaults, preset, config file, --set pairs, and flags."""
    merged = dict(_DEFAULTS)
    preset = getattr(args, "preset", None)
    if preset:
        merged.update(PRESETS[preset])
    config_path = getattr(args, "config", None)
    if config_path:
        for key, raw in _read_config(config_path).items():
            merged[key] = _coerce(key, raw)
    for pair in getattr(args, "set", None) or []:
        key, sep, raw = pair.partition("=")
        if not sep:
            raise ValueError(f"--set expects KEY=VALUE, got {pair!r}")
        merged[key.strip()] = _coerce(key.strip(), raw.strip())
    for key in ("axis", "start", "stop", "step", "trials", "seed", "workers", "batch"):
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    outputs = getattr(args, "outputs", None)
    if outputs is not None:
        merged["outputs"] = _parse_outputs(outputs)

    m = list(merged["m"])
    beta = list(merged["beta"])
    for i in range(5):
        if f"m{i}" in merged:
            m[i] = merged.pop(f"m{i}")
        if f"beta{i}" in merged:
            beta[i] = merged.pop(f"beta{i}")
    merged["m"] = tuple(m)
    merged["beta"] = tuple(beta)
    return merged


def _params_from(merged: dict) -> SystemParams:
    links = tuple(
        LinkFading(m=m_i, beta=b_i) for m_i, b_i in zip(merged["m"], merged["beta"]))
    return SystemParams(
        snr_bar=snr_from_db(merged["snr_db"]),
        rho=merged["rho"],
        alpha=merged["alpha"],
        eta=merged["eta"],
        mu=merged["mu"],
        r0=merged["r0"],
        links=links,
    )


def _cmd_sweep(args) -> int:
    merged = _resolve(args)
    spec = SweepSpec(
        axis=merged["axis"],
        start=merged["start"],
        stop=merged["stop"],
        step=merged["step"],
        fixed=_params_from(merged),
        outputs=merged["outputs"],
        mc_trials=merged["trials"],
        seed=merged["seed"],
    )
    result = run_sweep(spec, workers=merged["workers"], batch=merged["batch"])
    if args.out:
        # newline="" keeps the CRLF terminators exactly as rendered.
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(result.csv_text)
    else:
        sys.stdout.write(result.csv_text)
    if result.failed_rows:
        print(f"error: {result.failed_rows} row(s) failed to evaluate",
              file=sys.stderr)
        return 3
    return 0


def _cmd_validate(args) -> int:
    merged = _resolve(args)
    report = run_validate(
        _params_from(merged), merged["trials"], merged["seed"],
        workers=merged["workers"], batch=merged["batch"])
    print(report.text)
    return 0 if report.passed else 2


def _cmd_do_cg(args) -> int:
    merged = _resolve(args)
    print(run_do_cg(_params_from(merged)))
    return 0


def _cmd_preset(args) -> int:
    print(format_preset_list())
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crn-outage",
        description="Outage analysis for an energy-harvesting overlay "
                    "cognitive radio network.")
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("--preset", choices=sorted(PRESETS),
                        help="start from a built-in scenario")
    source.add_argument("--config", metavar="FILE",
                        help="flat key=value file applied over the preset")
    source.add_argument("--set", action="append", metavar="KEY=VALUE",
                        help="single parameter override, repeatable; applied "
                             "over the config file")

    mc = argparse.ArgumentParser(add_help=False)
    mc.add_argument("--trials", type=int, help="Monte-Carlo trials per point")
    mc.add_argument("--seed", type=int, help="RNG seed (reused on every row)")
    mc.add_argument("--workers", type=int,
                    help="worker processes; results do not depend on this")
    mc.add_argument("--batch", type=int,
                    help="trials per RNG substream chunk; part of the "
                         "reproducibility contract")

    p_sweep = sub.add_parser(
        "sweep", parents=[source, mc],
        help="evaluate outage curves along one axis and emit CSV")
    p_sweep.add_argument("--axis", choices=AXES, help="swept parameter")
    p_sweep.add_argument("--start", type=float, help="first axis value")
    p_sweep.add_argument("--stop", type=float, help="last axis value (inclusive)")
    p_sweep.add_argument("--step", type=float, help="axis increment")
    p_sweep.add_argument("--outputs", metavar="LIST",
                         help="comma list from mc,exact,approx,asymptotic "
                              "(asym is accepted)")
    p_sweep.add_argument("--out", metavar="FILE",
                         help="write the CSV here instead of stdout")
    p_sweep.set_defaults(handler=_cmd_sweep)

    p_validate = sub.add_parser(
        "validate", parents=[source, mc],
        help="check the simulator against the exact integrals at one point")
    p_validate.set_defaults(handler=_cmd_validate)

    p_do_cg = sub.add_parser(
        "do-cg", parents=[source],
        help="print diversity order and coding gain for both systems")
    p_do_cg.set_defaults(handler=_cmd_do_cg)

    p_preset = sub.add_parser("preset", help="inspect built-in presets")
    p_preset.add_argument("action", choices=("list",))
    p_preset.set_defaults(handler=_cmd_preset)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (QuadratureError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
