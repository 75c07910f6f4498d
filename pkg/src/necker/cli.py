"""Command-line interface: ``necker <subcommand>``.

Exit codes: 0 ok, 2 invalid input, 3 truncated trace, 4 singular hit,
5 not applicable (for example a direction with non-simple closed geodesics),
6 matrix outside the level-2 congruence group.
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction
from pathlib import Path

import click

from . import dynamics, homology, veech
from .cylinders import cylinder_for_direction, is_simple
from .flow import (
    Direction,
    OutcomeKind,
    SingularHit,
    TruncatedTrace,
    WitnessNotFound,
    generic_start,
    sixfold_witness,
    start_state,
    trace,
)
from .render import render_scene, scene_with_background
from .tiling import NonSimpleDirection, generate_tiling, verify

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_TRUNCATED = 3
EXIT_SINGULAR = 4
EXIT_NOT_APPLICABLE = 5
EXIT_NOT_IN_GAMMA2 = 6


class CliFailure(Exception):
    def __init__(self, code: int, kind: str, message: str, **extra):
        super().__init__(message)
        self.code, self.kind, self.extra = code, kind, extra


def _emit(record, out: str | None = None) -> None:
    text = json.dumps(record, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n")
    click.echo(text)


def _write_text(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


def _direction(text: str) -> Direction:
    try:
        return Direction.parse(text)
    except (ValueError, TypeError) as exc:
        raise CliFailure(EXIT_INVALID, "invalid-direction", str(exc)) from exc


def _start(text: str | None, d: Direction):
    if text is None:
        return generic_start(d)
    try:
        parts = [Fraction(p.strip()) for p in text.split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        raise CliFailure(EXIT_INVALID, "invalid-start", str(exc)) from exc
    if len(parts) != 2 or not all(0 <= p <= 1 for p in parts):
        raise CliFailure(EXIT_INVALID, "invalid-start", "start must be two rationals in [0,1]")
    return tuple(parts)


def _traced(d: Direction, start_text: str | None, max_crossings: int | None):
    outcome = trace(start_state(d, _start(start_text, d)), max_crossings)
    if outcome.kind is OutcomeKind.SINGULAR:
        hit = outcome.singular
        raise CliFailure(EXIT_SINGULAR, "singular-hit", str(hit), vertex=[int(c) for c in hit.vertex])
    if outcome.kind is OutcomeKind.TRUNCATED:
        raise CliFailure(EXIT_TRUNCATED, "truncated", f"no recurrence within {outcome.crossings} crossings")
    return outcome


class NeckerGroup(click.Group):
    """Turns library failures into a JSON error record and a distinct exit code."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except CliFailure as exc:
            failure = exc
        except NonSimpleDirection as exc:
            failure = CliFailure(EXIT_NOT_APPLICABLE, "non-simple-direction", str(exc))
        except veech.NotInGamma2 as exc:
            failure = CliFailure(EXIT_NOT_IN_GAMMA2, "not-in-gamma2", str(exc))
        except SingularHit as exc:
            failure = CliFailure(EXIT_SINGULAR, "singular-hit", str(exc))
        except TruncatedTrace as exc:
            failure = CliFailure(EXIT_TRUNCATED, "truncated", str(exc))
        except WitnessNotFound as exc:
            failure = CliFailure(EXIT_NOT_APPLICABLE, "no-witness", str(exc))
        click.echo(json.dumps({"error": failure.kind, "message": str(failure), "exit_code": failure.code,
                               **failure.extra}, sort_keys=True))
        ctx.exit(failure.code)


dir_option = click.option("--dir", "direction", required=True, help="Direction vector a/b (slope b/a).")
start_option = click.option("--start", default=None, help="Start point s,t in the favorite square, e.g. 1/3,1/7.")
crossings_option = click.option("--max-crossings", type=int, default=None, help="Crossing budget.")
out_option = click.option("--out", default=None, type=click.Path(dir_okay=False), help="Output file.")


@click.group(cls=NeckerGroup)
def main() -> None:
    """Exact geodesics, cylinders, tilings and affine symmetries of the Necker cube surface."""


@main.command()
@dir_option
@start_option
@crossings_option
@out_option
def classify(direction, start, max_crossings, out):
    """Periodic or drift-periodic verdict with exact squared length."""
    outcome = _traced(_direction(direction), start, max_crossings)
    _emit(outcome.summary(), out)


@main.command("trace")
@dir_option
@start_option
@crossings_option
@out_option
@click.option("--witness/--no-witness", default=False, help="Also search for the sixfold symmetry.")
def trace_cmd(direction, start, max_crossings, out, witness):
    """Crossing states as JSON Lines (to --out) and a summary record."""
    outcome = _traced(_direction(direction), start, max_crossings)
    if out:
        Path(out).write_text(outcome.dump_jsonl())
    summary = outcome.summary()
    if witness and outcome.kind is OutcomeKind.PERIODIC:
        xi = sixfold_witness(outcome)
        summary["witness"] = {"matrix": [list(r) for r in xi.matrix], "translation": [str(c) for c in xi.translation]}
    click.echo(json.dumps(summary, sort_keys=True))


@main.command()
@dir_option
@out_option
def cylinders(direction, out):
    """The maximal cylinder of an odd/odd direction."""
    d = _direction(direction)
    if not d.is_odd:
        raise CliFailure(EXIT_NOT_APPLICABLE, "not-odd", f"{d} is not an odd/odd direction")
    cyl = cylinder_for_direction(d)
    record = cyl.to_record()
    record["simple"] = is_simple(cyl.core)
    record["nested"] = cyl.nested
    _emit(record, out)


@main.command()
@dir_option
@click.option("--kind", type=click.Choice(["out", "in"]), default="out")
@click.option("--window", type=int, default=8, help="Window radius in deck coordinates.")
@click.option("--format", "fmt", type=click.Choice(["json", "svg"]), default="json")
@out_option
def tile(direction, kind, window, fmt, out):
    """Tiling of the plane by projected disks bounded by cylinder boundaries."""
    d = _direction(direction)
    if not d.is_odd:
        raise CliFailure(EXIT_NOT_APPLICABLE, "not-odd", f"{d} is not an odd/odd direction")
    tiling = generate_tiling(d, kind, window)
    if fmt == "svg":
        _write_text(render_scene(scene_with_background(window, [tiling])), out)
        return
    report = verify(tiling)
    record = {
        "direction": [d.a, d.b],
        "kind": kind,
        "window": window,
        "translations": [[str(c) for c in v] for v in tiling.translations],
        "report": report.to_record(),
        "tiles": [t.to_record() for t in tiling.tiles],
    }
    _emit(record, out)


@main.command("homology")
@click.option("--word", required=True, help="Word in h, v (H, V for inverses); the rightmost letter acts first.")
def homology_cmd(word):
    """Action of an affine automorphism on the homology of the double cover."""
    try:
        word = veech.reduce_word(word)
    except ValueError as exc:
        raise CliFailure(EXIT_INVALID, "invalid-word", str(exc)) from exc
    m = homology.psi_star(word)
    record = {
        "word": word,
        "matrix": [list(r) for r in m],
        "preserves_form": homology.preserves_form(m),
        "w_image": homology.w_space_image(word).value,
        "rho": [list(r) for r in veech.rho_of(word)],
        "derivative": [list(r) for r in veech.m_of(word)],
    }
    _emit(record)


@main.command("veech")
@click.option("--matrix", required=True, help="Entries a,b,c,d of [[a,b],[c,d]].")
def veech_cmd(matrix):
    """Whether the matrix is the derivative of an affine automorphism of the four-fold cover."""
    try:
        a, b, c, d = (int(x) for x in matrix.split(","))
    except ValueError as exc:
        raise CliFailure(EXIT_INVALID, "invalid-matrix", "expected four integers a,b,c,d") from exc
    try:
        result = veech.veech_membership(((a, b), (c, d)))
    except veech.NotInGamma2:
        raise
    except ValueError as exc:
        raise CliFailure(EXIT_INVALID, "invalid-matrix", str(exc)) from exc
    _emit(result.to_record())


def _unit(angle: float | None, vector: str | None) -> dynamics.UnitDirection:
    if (angle is None) == (vector is None):
        raise CliFailure(EXIT_INVALID, "invalid-direction", "give exactly one of --angle or --vector")
    if angle is not None:
        return dynamics.UnitDirection.from_angle(angle)
    try:
        x, y = (float(c) for c in vector.split(","))
    except ValueError as exc:
        raise CliFailure(EXIT_INVALID, "invalid-direction", str(exc)) from exc
    if x == 0 and y == 0:
        raise CliFailure(EXIT_INVALID, "invalid-direction", "zero vector")
    return dynamics.UnitDirection.from_vector(x, y)


@main.command()
@click.option("--angle", type=float, default=None)
@click.option("--vector", default=None, help="x,y (normalized for you).")
@click.option("--pd", "pd_text", required=True, help="Odd coprime pair q,p.")
def busemann(angle, vector, pd_text):
    """Closed-form and grid minimum of the cylinder Busemann function along the ray."""
    u = _unit(angle, vector)
    try:
        pd = dynamics.PeriodicDatum(*(int(c) for c in pd_text.split(",")))
    except (ValueError, TypeError) as exc:
        raise CliFailure(EXIT_INVALID, "invalid-pair", str(exc)) from exc
    d, w, bad = dynamics.close_return_bound(u, pd.holonomy())
    record = {"return_time": d, "distance_bound": w, "bad_measure": bad}
    if d > 0 and w > 0:
        t_star, value = dynamics.busemann_min_closed_form(u, pd)
        grid = dynamics.busemann_grid_minimum(u, pd)
        record.update({"argmin": t_star, "minimum": value, "grid_argmin": grid.argmin,
                       "grid_minimum": grid.value, "grid_spacing": grid.spacing})
    _emit(record)


@main.command()
@click.option("--seed", type=int, required=True, help="Seed for the random direction.")
@click.option("--t-max", type=float, default=20.0)
@click.option("--denom-bound", type=int, default=500)
@click.option("--t-step", type=float, default=0.05)
@out_option
def recurrence(seed, t_max, denom_bound, t_step, out):
    """Record minima of the Busemann infimum along the ray of a random direction."""
    if t_max <= 0 or denom_bound < 1:
        raise CliFailure(EXIT_INVALID, "invalid-parameters", "t_max and denom_bound must be positive")
    scan = dynamics.recurrence_scan(dynamics.UnitDirection.random(seed), t_max, denom_bound, t_step)
    _emit({"seed": seed, **scan.to_record()}, out)


@main.command()
@click.option("--seed", type=int, required=True, help="Seed for the random direction.")
@click.option("--height", type=int, default=10**7, help="Bound on the rational direction's components.")
@click.option("--max-crossings", type=int, default=10**6)
@out_option
def diffusion(seed, height, max_crossings, out):
    """Deck displacement at dyadic lengths (JSON Lines to --out) and the fitted exponent."""
    result, run = dynamics.diffusion_seed(seed, height, max_crossings)
    if run.singular is not None:
        raise CliFailure(EXIT_SINGULAR, "singular-hit", str(run.singular))
    if out:
        Path(out).write_text("".join(json.dumps(s.to_record(), sort_keys=True) + "\n" for s in run.samples))
    click.echo(json.dumps({"seed": seed, "direction": list(result.direction), "exponent": result.exponent,
                           "residual": result.residual, "crossings": result.crossings}, sort_keys=True))


@main.command()
@click.option("--dir", "direction", default=None, help="Direction a/b; omit for the bare background.")
@click.option("--what", type=click.Choice(["trace", "cylinder", "tiling"]), default="trace")
@click.option("--kind", type=click.Choice(["out", "in"]), default="out")
@click.option("--window", type=int, default=5)
@start_option
@out_option
def render(direction, what, kind, window, start, out):
    """SVG figure over a rhombille background."""
    parts = []
    if direction is not None:
        d = _direction(direction)
        if what == "trace":
            parts.append(_traced(d, start, None))
        elif not d.is_odd:
            raise CliFailure(EXIT_NOT_APPLICABLE, "not-odd", f"{d} is not an odd/odd direction")
        elif what == "cylinder":
            parts.append(cylinder_for_direction(d))
        else:
            parts.append(generate_tiling(d, kind, window))
    _write_text(render_scene(scene_with_background(window, parts)), out)


@main.command("run-manifest")
@click.argument("manifest", type=click.Path(exists=True, dir_okay=False))
@click.option("--out-dir", default=None, type=click.Path(file_okay=False))
def run_manifest(manifest, out_dir):
    """Run a JSON experiment manifest (diffusion or recurrence)."""
    try:
        config = json.loads(Path(manifest).read_text())
        if "seeds" not in config:
            raise ValueError("manifest needs a seeds list")
        summary = dynamics.run_manifest(config, out_dir)
    except ValueError as exc:
        raise CliFailure(EXIT_INVALID, "invalid-manifest", str(exc)) from exc
    _emit(summary)


if __name__ == "__main__":
    sys.exit(main())
