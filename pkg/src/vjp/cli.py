"""Thin command-line client over the pipeline/service layer.

Runs in-process by default; with --server it posts the same request to a
running vjp service and renders the response identically, so the CLI stays
a client of the service contract either way.

Exit codes: 0 verdict reached (for check-variational: globally variational),
1 negative verdict, 2 input error, 3 mathematical precondition failure,
4 numerical non-convergence.
"""

from __future__ import annotations

import json
import sys

import click

from .errors import VjpError
from .pipeline import COMMANDS
from .problem import load_problem
from .reports import canonical_json, render_text


def _parse_tolerances(pairs):
    out = {}
    for pair in pairs:
        if "=" not in pair:
            raise click.UsageError(f"--tolerance expects name=value, got {pair!r}")
        name, _, value = pair.partition("=")
        out[name.strip()] = float(value)
    return out


def _emit(report, report_path, as_text):
    payload = render_text(report) if as_text else canonical_json(report)
    if report_path:
        with open(report_path, "w", encoding="utf-8") as fh:
            fh.write(canonical_json(report))
        if as_text:
            click.echo(payload, nl=False)
    else:
        click.echo(payload, nl=False)


def _run_remote(server, command, problem_path, seed, tolerances):
    import httpx

    with open(problem_path, "r", encoding="utf-8") as fh:
        problem = json.load(fh)
    body = {"problem": problem, "tolerances": tolerances}
    if seed is not None:
        body["seed"] = seed
    resp = httpx.post(f"{server.rstrip('/')}/v1/{command}", json=body, timeout=600.0)
    data = resp.json()
    if resp.status_code != 200:
        err = data.get("error", {})
        click.echo(f"error: {err.get('kind', 'ServerError')}: {err.get('message', data)}", err=True)
        sys.exit(int(err.get("exit_code", 3)))
    return data["report"]


def _command(name):
    fn = COMMANDS[name]

    @click.option("--problem", "problem_path", required=True, type=click.Path(exists=True))
    @click.option("--report", "report_path", default=None, type=click.Path())
    @click.option("--seed", default=None, type=int, help="Override the problem seed.")
    @click.option("--text/--json", "as_text", default=False, help="Output rendering.")
    @click.option(
        "--tolerance", "tolerances", multiple=True, help="Override as name=value."
    )
    @click.option("--server", default=None, help="POST to a running vjp service.")
    def cmd(problem_path, report_path, seed, as_text, tolerances, server):
        tols = _parse_tolerances(tolerances)
        try:
            if server:
                report = _run_remote(server, name, problem_path, seed, tols)
            else:
                problem = load_problem(problem_path)
                report = fn(problem, seed=seed, tolerances=tols)
        except VjpError as err:
            click.echo(f"error: {type(err).__name__}: {err}", err=True)
            sys.exit(err.exit_code)
        _emit(report, report_path, as_text)
        sys.exit(int(report.get("exit_code", 0)))

    cmd.__name__ = name.replace("-", "_")
    return cmd


@click.group()
def main():
    """Variational workbench over jet coordinates and atlases."""


for _name in COMMANDS:
    main.command(name=_name)(_command(_name))


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", default=8412, type=int)
def serve(host, port):
    """Run the FastAPI service."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
