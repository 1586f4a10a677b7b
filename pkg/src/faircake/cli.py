"""Batch command-line interface.

Subcommands: `run` (execute a protocol and export artifacts), `gen`
(emit random valuation files), `verify` (recheck exported artifacts from
the files alone), `bench` (query-count table against the predicted
recurrence and the desk-scale bound).

Exit codes: 0 success, 1 property violation, 2 input error.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import click

from .allocation import (
    Allocation,
    allocation_csv,
    allocation_table,
    assign_given_choice,
    parse_allocation_csv,
    secret_best_piece,
    verify_proportional,
)
from .errors import FairCakeError, ValuationError
from .measures import (
    Interval,
    UNIT,
    Valuation,
    dump_valuations,
    format_rational,
    load_valuations,
    random_valuation,
)
from .protocol import (
    dc_secret,
    even_paz,
    pieces_of,
    predicted_cut_count,
    query_budget,
    tree_to_json,
)
from .rw import Transcript, simulated_endpoints


@dataclass
class RunConfig:
    mode: str
    valuations: dict[int, Valuation]
    secret: Valuation | None
    choice: str
    out: Path | None
    transcript_path: Path | None
    decimals: int | None


def _approx(x: Fraction, decimals: int | None) -> str:
    text = format_rational(x)
    if decimals is not None:
        text += f" ({float(x):.{decimals}f})"
    return text


def _load_inputs(file, seed, n, segments) -> tuple[dict[int, Valuation], Valuation | None]:
    if file is not None:
        if seed is not None or n is not None:
            raise click.UsageError("give either --file or --seed/--n, not both")
        agents, secret = load_valuations(Path(file).read_text())
        if not agents:
            raise ValuationError(["valuation file contains no agents"])
        return {i + 1: v for i, v in enumerate(agents)}, secret
    if seed is None or n is None:
        raise click.UsageError("need --file, or both --seed and --n")
    if n < 1:
        raise click.UsageError("--n must be >= 1")
    return {i: random_valuation(seed * 1000 + i, segments) for i in range(1, n + 1)}, None


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _pieces_json(pieces: list[Interval]) -> str:
    return json.dumps({"pieces": [p.to_json() for p in pieces]}, indent=2, sort_keys=True) + "\n"


@click.group()
def main() -> None:
    """Proportional cake-cutting with one never-queried participant."""


@main.command()
@click.option("--mode", type=click.Choice(["dc-secret", "even-paz"]), default="dc-secret")
@click.option("--file", "file_", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Valuations JSON ({'agents': [...], 'secret': ...?}).")
@click.option("--seed", type=int, default=None, help="Seed for generated valuations.")
@click.option("--n", type=int, default=None, help="Number of queried agents.")
@click.option("--segments", type=int, default=4, show_default=True)
@click.option("--choice", default="all", show_default=True,
              help="Piece index the non-queried participant picks, or 'all'.")
@click.option("--out", type=click.Path(file_okay=False), default=None,
              help="Directory for pieces.json, allocation.csv, tree.json, transcript.txt.")
@click.option("--transcript", "transcript_path", type=click.Path(dir_okay=False), default=None,
              help="Extra path for the transcript export.")
@click.option("--decimal", "decimals", type=int, default=None,
              help="Also show k-digit decimal approximations (display only).")
def run(mode, file_, seed, n, segments, choice, out, transcript_path, decimals):
    """Run a protocol, print a summary, export artifacts, verify."""
    if choice != "all":
        try:
            int(choice)
        except ValueError:
            raise click.UsageError(f"--choice must be 'all' or an integer, got {choice!r}")
    try:
        valuations, secret = _load_inputs(file_, seed, n, segments)
    except (FairCakeError, OSError, json.JSONDecodeError) as e:
        click.echo(f"input error: {e}", err=True)
        sys.exit(2)
    cfg = RunConfig(
        mode=mode,
        valuations=valuations,
        secret=secret,
        choice=choice,
        out=Path(out) if out is not None else None,
        transcript_path=Path(transcript_path) if transcript_path is not None else None,
        decimals=decimals,
    )
    sys.exit(_execute_run(cfg))


def _execute_run(cfg: RunConfig) -> int:
    agents = tuple(sorted(cfg.valuations))
    transcript = Transcript(agents)
    endpoints = simulated_endpoints(cfg.valuations)

    try:
        if cfg.mode == "even-paz":
            pieces, assignment = even_paz(UNIT, agents, endpoints, transcript)
            denom = len(agents)
            reports = [verify_proportional(pieces, Allocation(0, assignment), cfg.valuations, denom)]
            tree_doc = None
        else:
            tree = dc_secret(UNIT, agents, endpoints, transcript)
            pieces = pieces_of(tree)
            denom = len(agents) + 1
            if cfg.choice == "all":
                table = allocation_table(tree, endpoints, transcript)
            else:
                j = int(cfg.choice)
                table = {j: assign_given_choice(tree, j, endpoints, transcript)}
            reports = [
                verify_proportional(pieces, alloc, cfg.valuations, denom)
                for _, alloc in sorted(table.items())
            ]
            tree_doc = json.dumps(tree_to_json(tree), indent=2, sort_keys=True) + "\n"
    except FairCakeError as e:
        click.echo(f"input error: {e}", err=True)
        return 2

    click.echo(f"mode={cfg.mode} agents={len(agents)} pieces={len(pieces)} "
               f"cuts={transcript.count('cut')} evals={transcript.count('eval')}")
    for i, piece in enumerate(pieces, start=1):
        click.echo(
            f"  piece {i}: [{_approx(piece.lo, cfg.decimals)}, {_approx(piece.hi, cfg.decimals)}]"
        )
    ok = all(r.verdict for r in reports)
    for report in reports:
        status = "ok" if report.verdict else "FAIL"
        click.echo(f"  choice {report.choice}: {status}")

    if cfg.secret is not None and cfg.mode == "dc-secret":
        best = secret_best_piece(pieces, cfg.secret)
        click.echo(f"  stored secret measure would pick piece {best}")

    if cfg.out is not None:
        _write(cfg.out / "pieces.json", _pieces_json(pieces))
        _write(cfg.out / "allocation.csv", allocation_csv(reports))
        _write(cfg.out / "transcript.txt", "\n".join(transcript.export_lines()) + "\n")
        if tree_doc is not None:
            _write(cfg.out / "tree.json", tree_doc)
    if cfg.transcript_path is not None:
        _write(cfg.transcript_path, "\n".join(transcript.export_lines()) + "\n")

    return 0 if ok else 1


@main.command()
@click.option("--seed", type=int, required=True)
@click.option("--n", type=int, required=True)
@click.option("--segments", type=int, default=4, show_default=True)
@click.option("--with-secret", is_flag=True, help="Also include a valuation for the non-queried participant.")
@click.option("-o", "--out", type=click.Path(dir_okay=False), required=True)
def gen(seed, n, segments, with_secret, out):
    """Write a random valuations file."""
    if n < 1:
        click.echo("input error: --n must be >= 1", err=True)
        sys.exit(2)
    agents = [random_valuation(seed * 1000 + i, segments) for i in range(1, n + 1)]
    secret = random_valuation(seed * 1000, segments) if with_secret else None
    _write(Path(out), dump_valuations(agents, secret))
    click.echo(f"wrote {n} agent valuations to {out}")


@main.command()
@click.option("--pieces", "pieces_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--allocation", "allocation_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--valuations", "valuations_path", type=click.Path(exists=True, dir_okay=False), required=True)
def verify(pieces_path, allocation_path, valuations_path):
    """Recompute proportionality from exported files alone."""
    try:
        pieces_doc = json.loads(Path(pieces_path).read_text())
        pieces = [Interval.from_json(p) for p in pieces_doc["pieces"]]
        assignments = parse_allocation_csv(Path(allocation_path).read_text())
        agents, _ = load_valuations(Path(valuations_path).read_text())
        valuations = {i + 1: v for i, v in enumerate(agents)}
    except (FairCakeError, OSError, KeyError, json.JSONDecodeError) as e:
        click.echo(f"input error: {e}", err=True)
        sys.exit(2)

    denom = len(pieces)
    failures = []
    try:
        for choice in sorted(assignments):
            report = verify_proportional(
                pieces, Allocation(choice, assignments[choice]), valuations, denom
            )
            for row in report.rows:
                if not row.ok:
                    failures.append((choice, row))
    except FairCakeError as e:
        click.echo(f"input error: {e}", err=True)
        sys.exit(2)

    if failures:
        for choice, row in failures:
            click.echo(
                f"violation: choice {choice}, agent {row.agent} received piece {row.piece} "
                f"worth {format_rational(row.mass)} < threshold {format_rational(row.threshold)}"
            )
        sys.exit(1)
    click.echo(f"verified: {len(assignments)} choice(s), {denom} pieces, all thresholds met")
    sys.exit(0)


@main.command()
@click.option("--n-max", type=int, required=True)
@click.option("--trials", type=int, default=1, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--segments", type=int, default=3, show_default=True)
def bench(n_max, trials, seed, segments):
    """Measure query counts for n = 1..n_max against the exact recurrence
    and the desk-scale bound."""
    if n_max < 1:
        click.echo("input error: --n-max must be >= 1", err=True)
        sys.exit(2)
    click.echo("n,trial,cuts,predicted_cuts,evals,total,bound,ok")
    exceeded = False
    for n in range(1, n_max + 1):
        for trial in range(trials):
            valuations = {
                i: random_valuation(seed + n * 10007 + trial * 101 + i, segments)
                for i in range(1, n + 1)
            }
            transcript = Transcript(valuations)
            endpoints = simulated_endpoints(valuations)
            tree = dc_secret(UNIT, tuple(valuations), endpoints, transcript)
            cuts = transcript.count("cut")
            assign_given_choice(tree, (trial % (n + 1)) + 1, endpoints, transcript)
            evals = transcript.count("eval")
            total = cuts + evals
            bound = query_budget(n)
            ok = cuts == predicted_cut_count(n) and total <= bound
            exceeded = exceeded or not ok
            click.echo(
                f"{n},{trial},{cuts},{predicted_cut_count(n)},{evals},{total},{bound},"
                f"{'true' if ok else 'false'}"
            )
    sys.exit(1 if exceeded else 0)


if __name__ == "__main__":
    main()
