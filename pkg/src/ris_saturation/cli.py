"""Command-line entry point: ``ris-saturation <subcommand> [options]``.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

import argparse
import csv
import io
import logging
import math
import sys

from . import __version__
from .config import config_hash, resolve
from .exceptions import ConfigError, DomainError, NumericalFailure
from .experiments import correlation_table, gain_vs_n, gain_vs_spread, make_model, snr_vs_n
from .correlation import ArrayGeometry
from .snr import RNG_NAME

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3

logger = logging.getLogger("ris_saturation")


def _fmt(value):
    if isinstance(value, float):
        return repr(float(value))
    return str(value)


def render_csv(command, params, rows, columns):
    """CSV text with a ``#`` metadata block; byte-identical for equal inputs."""
    out = io.StringIO()
    out.write(f"# tool: ris-saturation {__version__}\n")
    out.write(f"# command: {command}\n")
    out.write(f"# config_sha256: {config_hash(command, params)}\n")
    out.write(f"# seed: {params.get('seed', 0)}\n")
    out.write(f"# rng: {RNG_NAME}\n")
    out.write("# angles: radians internally; spread columns in degrees\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row.get(c, "")) for c in columns])
    return out.getvalue()


def run_corr(p):
    family = p["family"]
    param = p["kappa"] if family == "exponential" else p["angular_spread"]
    model = make_model(family, param, p["mean_angle"])
    geom = ArrayGeometry(p["lags"], p["spacing"], 1.0, p["departure_angle"])
    rows = correlation_table(model, geom, p["lags"])
    cols = ["n", "re", "im", "abs", "approx_re", "approx_im", "approx_abs"]
    return rows, cols


def run_gain_vs_n(p):
    rows = gain_vs_n(p["curves"], p["n_elements"], spacing=p["spacing"],
                     mean_angle=p["mean_angle"], departure_angle=p["departure_angle"],
                     source=p["source"], n_restarts=p["n_restarts"],
                     benchmark_samples=p["benchmark_samples"], seed=p["seed"])
    cols = ["curve", "N_r", "zeta", "zeta_db", "zeta_dft", "zeta_dft_db", "lambda_max",
            "bound", "bound_db", "instantaneous", "instantaneous_se", "instantaneous_db"]
    return rows, cols


def run_gain_vs_spread(p):
    rows = gain_vs_spread(p["families"], p["spreads"], n_elements=p["n_elements"],
                          spacing=p["spacing"], mean_angle=p["mean_angle"],
                          departure_angle=p["departure_angle"], source=p["source"],
                          n_restarts=p["n_restarts"], seed=p["seed"])
    cols = ["family", "spread_deg", "zeta", "zeta_db", "lambda_max", "bound", "bound_db"]
    return rows, cols


def run_snr_vs_n(p):
    rows = snr_vs_n(p["curves"], p["n_elements"], n_bs=p["n_bs"],
                    link_budget=10.0 ** (p["link_budget_db"] / 10.0), spacing=p["spacing"],
                    mean_angle=p["mean_angle"], departure_angle=p["departure_angle"],
                    source=p["source"], n_restarts=p["n_restarts"], samples=p["samples"],
                    seed=p["seed"])
    cols = ["curve", "N_r", "method", "zeta", "snr_analytic", "snr_analytic_db", "snr_mc",
            "snr_mc_db", "std_err_db", "cv"]
    return rows, cols


COMMANDS = {
    "corr": (run_corr, "spatial correlation coefficients, exact and closed-form"),
    "gain-vs-n": (run_gain_vs_n, "beamforming gain versus number of RIS elements"),
    "gain-vs-spread": (run_gain_vs_spread, "beamforming gain versus angular spread"),
    "snr-vs-n": (run_snr_vs_n, "average SNR versus number of RIS elements"),
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ris-saturation",
        description="Two-timescale RIS beamforming gain experiments (CSV output).",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", metavar="PATH", help="key = value config file")
        p.add_argument("--out", metavar="PATH", help="output CSV (default: stdout)")
        p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument("--defaults", choices=["fig1", "fig2", "fig3"],
                       help="start from a figure preset (default depends on the subcommand)")
        p.add_argument("--degrees", action="store_true",
                       help="read plain angle values in the config as degrees")
        p.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_CONFIG
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    runner, _ = COMMANDS[args.command]
    try:
        text = None
        if args.config:
            try:
                with open(args.config, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise ConfigError(f"cannot read config: {exc}") from None
        params = resolve(args.command, text=text, preset_name=args.defaults,
                         degrees=args.degrees, seed=args.seed)
        rows, cols = runner(params)
        payload = render_csv(args.command, params, rows, cols)
    except NumericalFailure as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
