"""Command-line client for the benchmark service.

The CLI never runs simulations itself: it posts requests to the HTTP
service, either an in-process instance (default) or a remote one given
via --server, and writes the returned records to CSV locally.

Exit codes: 0 full sweep, 2 sweep completed with skipped points,
1 configuration or transport error.
"""

from __future__ import annotations

import json
import sys

import click

from .bench import emit_csv
from .errors import SimulationError
from .service import RecordModel, app

_EXPERIMENTS = click.Choice(["runtime", "amplitude", "shots"])
_K_POLICIES = click.Choice(["paper", "optimal"])
_MARKED = click.Choice(["ones", "random"])


def _client(server: str | None):
    if server is None:
        from fastapi.testclient import TestClient
        return TestClient(app)
    import httpx
    return httpx.Client(base_url=server, timeout=None)


def _post(server: str | None, path: str, payload: dict) -> dict:
    with _client(server) as client:
        resp = client.post(path, json=payload)
    if resp.status_code != 200:
        try:
            detail = resp.json().get("detail", resp.text)
        except ValueError:
            detail = resp.text
        raise SimulationError(f"{path} failed ({resp.status_code}): {detail}")
    return resp.json()


def _split(value: str) -> list[str]:
    return [part.strip() for part in value.split(",") if part.strip()]


@click.group()
def cli():
    """Grover benchmark client."""


@cli.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, type=int, show_default=True)
def serve(host: str, port: int):
    """Run the HTTP service."""
    import uvicorn
    uvicorn.run(app, host=host, port=port)


@cli.command("run")
@click.option("--n", required=True, type=int)
@click.option("--marked", default=None, help="Marked bitstring "
              "(default: all ones).")
@click.option("--backend", default="sv", type=click.Choice(["sv", "mps"]),
              show_default=True)
@click.option("--mode", default="iterative",
              type=click.Choice(["common", "iterative"]), show_default=True)
@click.option("--precision", default="f64",
              type=click.Choice(["f32", "f64"]), show_default=True)
@click.option("--k-policy", default="paper", type=_K_POLICIES,
              show_default=True)
@click.option("--k", default=None, type=int,
              help="Fixed iteration count overriding the policy.")
@click.option("--chi-max", default=64, type=int, show_default=True)
@click.option("--shots", default=0, type=int, show_default=True,
              help="Measurement shots after the run (0 = none).")
@click.option("--seed", default=0, type=int, show_default=True)
@click.option("--server", default=None, help="Base URL of a running "
              "service; default runs in-process.")
def run_cmd(n, marked, backend, mode, precision, k_policy, k, chi_max,
            shots, seed, server):
    """Execute a single Grover run and print the result as JSON."""
    payload = {
        "n": n, "marked": marked, "backend": backend, "mode": mode,
        "precision": precision, "k_policy": k_policy, "k_override": k,
        "chi_max": chi_max, "shots": shots, "seed": seed,
    }
    body = _post(server, "/grover/run", payload)
    click.echo(json.dumps(body, indent=2, sort_keys=True))
    return 0


@cli.command()
@click.option("--experiment", required=True, type=_EXPERIMENTS)
@click.option("--n-min", required=True, type=int)
@click.option("--n-max", required=True, type=int)
@click.option("--backends", default="sv,mps", show_default=True,
              help="Comma-separated backend list.")
@click.option("--modes", default="common,iterative", show_default=True,
              help="Comma-separated mode list.")
@click.option("--precisions", default="f64", show_default=True,
              help="Comma-separated precision list.")
@click.option("--shots", default="1,8,64,512,4096", show_default=True,
              help="Comma-separated shot counts (shots experiment only).")
@click.option("--trials", default=1, type=int, show_default=True)
@click.option("--chi-max", default=64, type=int, show_default=True)
@click.option("--k-policy", default="paper", type=_K_POLICIES,
              show_default=True)
@click.option("--marked", default="ones", type=_MARKED, show_default=True)
@click.option("--seed", default=0, type=int, show_default=True)
@click.option("--jobs", default=1, type=int, show_default=True)
@click.option("--out", required=True,
              type=click.Path(dir_okay=False, writable=True))
@click.option("--server", default=None, help="Base URL of a running "
              "service; default runs in-process.")
def bench(experiment, n_min, n_max, backends, modes, precisions, shots,
          trials, chi_max, k_policy, marked, seed, jobs, out, server):
    """Run a benchmark sweep and write one CSV row per (point, trial)."""
    try:
        shot_values = [int(s) for s in _split(shots)]
    except ValueError:
        raise click.BadParameter("--shots must be comma-separated integers")
    payload = {
        "experiment": experiment,
        "n_min": n_min,
        "n_max": n_max,
        "backends": _split(backends),
        "modes": _split(modes),
        "precisions": _split(precisions),
        "shots": shot_values,
        "trials": trials,
        "chi_max": chi_max,
        "k_policy": k_policy,
        "marked": marked,
        "seed": seed,
        "jobs": jobs,
    }
    body = _post(server, "/bench/sweep", payload)
    records = [RecordModel(**r).to_record() for r in body["records"]]
    emit_csv(records, out)
    for reason in body["skipped"]:
        click.echo(f"skipped: {reason}", err=True)
    click.echo(f"wrote {len(records)} records to {out}")
    return 2 if body["partial"] else 0


def main(argv=None) -> int:
    try:
        result = cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        return int(exc.exit_code)
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except SimulationError as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    return int(result) if isinstance(result, int) else 0


if __name__ == "__main__":
    sys.exit(main())
