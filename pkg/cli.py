#!/usr/bin/env python3
"""
Command line interface of layernet.

Commands:
    - study: Runs a convergence study from a JSON/YAML config.
    - verify-snn: Converts a stored ReLU network and checks equivalence.
    - verify-cheb: Checks Chebyshev tree networks.
    - emit-net: Builds a network from a construction spec.
    - serve: Runs the HTTP API.

Exit codes: 0 on success, 2 on configuration errors, 3 when a study row
is flagged by the quadrature check or a verification fails.
"""
import json
import logging
from typing import Any, Dict, Optional

import click

from api.v1.services.cheb_service import verify_cheb_trees
from api.v1.services.network_service import build_network, spiking_params
from api.v1.services.snn_service import convert, verify_equivalence
from api.v1.services.study_service import (StudyResult, convergence_study,
                                           write_csv)
from api.v1.utils.schema_utils import CHEB_SCHEMA, load_config, validate
from config import Config, setup_logging
from models.errors import ConfigError, LayerNetError
from models.network import Network

logger = logging.getLogger(__name__)

EXIT_CONFIG = 2
EXIT_FLAGGED = 3
# Relative deviation above which verify-snn reports a failure.
SNN_TOLERANCE = 1e-8


def _emit(payload: str, out: Optional[str]) -> None:
    with click.open_file(out or "-", "w") as handle:
        handle.write(payload)
        if not payload.endswith("\n"):
            handle.write("\n")


def _dump(data: Dict[str, Any]) -> str:
    return json.dumps(data, indent=2)


def _read_network(path: str) -> Network:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
        data.pop("__class__", None)
        return Network.from_json(data)
    except (OSError, ValueError, KeyError, LayerNetError) as err:
        raise ConfigError(f"Cannot read network {path}: {err}") from err


@click.group()
@click.option("--log-level", default=None,
              help="Logging level (default: Config.LOG_LEVEL).")
def cli(log_level: Optional[str]) -> None:
    """Constructive neural networks for singularly perturbed problems."""
    setup_logging(log_level)


@cli.command()
@click.option("--config", "config_path", required=True,
              type=click.Path(dir_okay=False), help="Study config file.")
@click.option("--out", default=None, help="Output file (default stdout).")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
              default="csv", show_default=True)
@click.option("--jobs", type=int, default=Config.DEFAULT_JOBS,
              show_default=True)
@click.option("--seed", type=int, default=Config.DEFAULT_SEED,
              show_default=True)
@click.pass_context
def study(ctx: click.Context, config_path: str, out: Optional[str],
          fmt: str, jobs: int, seed: int) -> None:
    """Runs a convergence study."""
    try:
        result: StudyResult = convergence_study(load_config(config_path),
                                                jobs=jobs, seed=seed)
    except ConfigError as err:
        click.echo(f"Error: {err}", err=True)
        ctx.exit(EXIT_CONFIG)
    if fmt == "json":
        _emit(_dump(result.to_json()), out)
    else:
        with click.open_file(out or "-", "w") as handle:
            write_csv(result, handle)
    if result.robustness is not None:
        logger.info("Robustness ratio %.3f", result.robustness)
    if result.flagged:
        ctx.exit(EXIT_FLAGGED)


@cli.command("verify-snn")
@click.argument("network_path", type=click.Path(dir_okay=False))
@click.option("--config", "config_path", default=None,
              type=click.Path(dir_okay=False),
              help="Conversion parameters (delta, bound, input_box).")
@click.option("--out", default=None, help="Output file (default stdout).")
@click.option("--samples", type=int, default=1000, show_default=True)
@click.option("--seed", type=int, default=Config.DEFAULT_SEED,
              show_default=True)
@click.pass_context
def verify_snn(ctx: click.Context, network_path: str,
               config_path: Optional[str], out: Optional[str],
               samples: int, seed: int) -> None:
    """Converts a ReLU network JSON and reports the SNN deviation."""
    try:
        net = _read_network(network_path)
        params = spiking_params(load_config(config_path)
                                if config_path else {})
        snn = convert(net, params, seed)
    except (ConfigError, ValueError) as err:
        click.echo(f"Error: {err}", err=True)
        ctx.exit(EXIT_CONFIG)
    report = verify_equivalence(net, snn, samples, seed)
    _emit(_dump(report.to_json()), out)
    if not report.max_rel <= SNN_TOLERANCE:
        ctx.exit(EXIT_FLAGGED)


@cli.command("verify-cheb")
@click.option("--config", "config_path", default=None,
              type=click.Path(dir_okay=False),
              help="File with m, delta, activation and samples.")
@click.option("-m", "ms", type=int, multiple=True,
              help="Tree degree; repeatable.")
@click.option("--delta", "deltas", type=float, multiple=True,
              help="Tolerance; repeatable.")
@click.option("--activation", default="tanh", show_default=True)
@click.option("--samples", type=int, default=10000, show_default=True)
@click.option("--out", default=None, help="Output file (default stdout).")
@click.pass_context
def verify_cheb(ctx: click.Context, config_path: Optional[str], ms: tuple,
                deltas: tuple, activation: str, samples: int,
                out: Optional[str]) -> None:
    """Checks error, depth and size of Chebyshev tree networks."""
    try:
        if config_path:
            data = validate(load_config(config_path), CHEB_SCHEMA)
            ms = data["m"] if isinstance(data["m"], list) else [data["m"]]
            deltas = (data["delta"] if isinstance(data["delta"], list)
                      else [data["delta"]])
            activation = data.get("activation", activation)
            samples = int(data.get("samples", samples))
        if not ms or not deltas:
            raise ConfigError("Need at least one m and one delta")
        rows = verify_cheb_trees(activation, ms, deltas, samples)
    except (ConfigError, ValueError) as err:
        click.echo(f"Error: {err}", err=True)
        ctx.exit(EXIT_CONFIG)
    passed = all(row["passed"] for row in rows)
    _emit(_dump({"trees": rows, "passed": passed}), out)
    if not passed:
        ctx.exit(EXIT_FLAGGED)


@cli.command("emit-net")
@click.option("--config", "config_path", required=True,
              type=click.Path(dir_okay=False), help="Construction spec.")
@click.option("--out", default=None, help="Output file (default stdout).")
@click.pass_context
def emit_net(ctx: click.Context, config_path: str,
             out: Optional[str]) -> None:
    """Writes a constructed network in its interchange format."""
    try:
        net = build_network(load_config(config_path))
    except (ConfigError, ValueError) as err:
        click.echo(f"Error: {err}", err=True)
        ctx.exit(EXIT_CONFIG)
    _emit(json.dumps(net.to_json()), out)


@cli.command()
@click.option("--host", default=Config.API_HOST, show_default=True)
@click.option("--port", type=int, default=Config.API_PORT,
              show_default=True)
def serve(host: str, port: int) -> None:
    """Runs the HTTP API."""
    from api.v1.app import app
    app.run(host=host, port=port, threaded=True)


if __name__ == "__main__":
    cli()
