"""Command-line interface.

Subcommands: validate, lmf, equiv, support, extract, render.  All JSON output
is canonical (sorted keys, stable ordering) so identical inputs produce byte
identical artifacts.  Exit codes: 0 success, 1 domain error, 2 parse error,
and 3 for an equiv verdict of not equivalent.
"""

from __future__ import annotations

import json
import os
import sys

import click

from .embedded_graph import graph_from_json, graph_to_dot, graph_to_json, validate_embedding
from .isotopy import orbital_equivalence
from .lmf import build_lmf, classify_faces
from .numeric import NumericSettings, PolynomialField, extract_skeleton
from .skeleton import skeleton_from_json, skeleton_to_json, validate_skeleton
from .support import (
    boundary_report,
    check_sep_property,
    classify_regions_wrt,
    elbs,
    family_from_json,
    lbs,
    lbs_star,
    validate_family,
)


class ParseFailure(Exception):
    pass


def _load(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseFailure(f"{path}: {exc}")


def _kind(data: dict) -> str:
    if "p" in data and "q" in data:
        return "field"
    if "per_closure" in data:
        return "family"
    if "singular_points" in data:
        return "skeleton"
    return "graph"


def _emit(text: str, output: str | None):
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _emit_json(obj, output: str | None):
    _emit(json.dumps(obj, indent=2, sort_keys=True) + "\n", output)


def _die(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


@click.group()
def main():
    """Phase portraits of sphere vector fields as labeled embedded graphs."""


def _input_argument(f):
    f = click.argument("input", type=click.Path(exists=True), required=False)(f)
    f = click.option("--input", "input_opt", type=click.Path(exists=True),
                     default=None, help="alternative to the positional path")(f)
    return f


def _resolve_input(input, input_opt):
    path = input or input_opt
    if not path:
        _die(2, "no input file given")
    return path


@main.command()
@_input_argument
@click.option("--output", type=click.Path(), default=None)
def validate(input, input_opt, output):
    """Validate a graph, skeleton, or family file."""
    input = _resolve_input(input, input_opt)
    try:
        data = _load(input)
    except ParseFailure as exc:
        _die(2, str(exc))
    try:
        kind = _kind(data)
        if kind == "graph":
            rep = validate_embedding(graph_from_json(data))
        elif kind == "skeleton":
            rep = validate_skeleton(skeleton_from_json(data))
        elif kind == "family":
            fam = family_from_json(data)
            rep = validate_skeleton(fam.base)
            if rep.ok:
                rep = validate_family(fam)
        else:
            _die(2, f"{input}: field files are validated by `extract`")
    except (KeyError, TypeError, ValueError) as exc:
        _die(2, f"{input}: malformed input: {exc}")
    _emit_json({"kind": kind, "ok": rep.ok, "issues": rep.issues,
                "warnings": rep.warnings}, output)
    sys.exit(0 if rep.ok else 1)


@main.command()
@_input_argument
@click.option("--output", type=click.Path(), default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "dot"]),
              default="json")
def lmf(input, input_opt, output, fmt):
    """Build the labeled loop graph of a skeleton."""
    input = _resolve_input(input, input_opt)
    try:
        data = _load(input)
    except ParseFailure as exc:
        _die(2, str(exc))
    try:
        skel = skeleton_from_json(data)
        built = build_lmf(skel)
        faces = classify_faces(built)
    except (KeyError, TypeError) as exc:
        _die(2, f"{input}: malformed input: {exc}")
    except ValueError as exc:
        _die(1, str(exc))
    if fmt == "dot":
        _emit(graph_to_dot(built.graph, name="LMF"), output)
    else:
        payload = graph_to_json(built.graph)
        payload["loops"] = [
            {"id": lp.id, "label": lp.label,
             "object": list(map(_jsonable, lp.object_key)),
             "crossings": list(lp.crossings)}
            for lp in sorted(built.loops.values(), key=lambda l: l.id)]
        payload["faces"] = [f.to_json() for f in faces]
        _emit_json(payload, output)


def _jsonable(x):
    return list(x) if isinstance(x, tuple) else x


@main.command()
@click.argument("first", type=click.Path(exists=True))
@click.argument("second", type=click.Path(exists=True))
@click.option("--output", type=click.Path(), default=None)
def equiv(first, second, output):
    """Decide orbital topological equivalence of two skeleton files."""
    try:
        s1 = skeleton_from_json(_load(first))
        s2 = skeleton_from_json(_load(second))
    except ParseFailure as exc:
        _die(2, str(exc))
    except (KeyError, TypeError) as exc:
        _die(2, f"malformed input: {exc}")
    try:
        verdict = orbital_equivalence(s1, s2)
    except ValueError as exc:
        _die(1, str(exc))
    _emit_json(verdict.to_json(), output)
    sys.exit(0 if verdict.equivalent else 3)


@main.command()
@click.argument("input", type=click.Path(exists=True), required=False)
@click.option("--family", "family_opt", type=click.Path(exists=True),
              default=None, help="alternative to the positional path")
@click.option("--output", type=click.Path(), default=None)
def support(input, family_opt, output):
    """Bifurcation supports and the boundary report of a family file."""
    input = _resolve_input(input, family_opt)
    try:
        data = _load(input)
    except ParseFailure as exc:
        _die(2, str(exc))
    try:
        fam = family_from_json(data)
    except (KeyError, TypeError) as exc:
        _die(2, f"{input}: malformed input: {exc}")
    try:
        rep = validate_skeleton(fam.base)
        if not rep.ok:
            _die(1, "invalid base skeleton: " + "; ".join(rep.issues))
        big = elbs(fam.base)
        small = lbs(fam)
        star = lbs_star(fam)
        sep_rep = check_sep_property(fam.base, star)
        cases = classify_regions_wrt(fam.base, star)
        boundary = boundary_report(fam.base, star)
    except ValueError as exc:
        _die(1, str(exc))
    _emit_json({
        "elbs": big.to_json(),
        "lbs": small.to_json(),
        "lbs_star": star.to_json(),
        "sep_property_holds": sep_rep.ok,
        "region_cases": dict(sorted(cases.items())),
        "boundary_components": [c.to_json() for c in boundary],
    }, output)


@main.command()
@_input_argument
@click.option("--settings", "settings_path", type=click.Path(exists=True),
              default=None, help="settings JSON; defaults to $LMFKIT_SETTINGS")
@click.option("--override", "override_path", type=click.Path(exists=True),
              default=None, help="confirmed connections/semistable cycles")
@click.option("--output", type=click.Path(), default=None)
def extract(input, input_opt, settings_path, override_path, output):
    """Extract a skeleton from a polynomial field file."""
    input = _resolve_input(input, input_opt)
    try:
        data = _load(input)
        field = PolynomialField.from_json(data)
        settings = NumericSettings(**data.get("settings", {}))
        if settings_path is None:
            settings_path = os.environ.get("LMFKIT_SETTINGS")
        if settings_path:
            settings = NumericSettings.from_json(_load(settings_path))
        overrides = []
        if override_path:
            overrides = _load(override_path).get("connections", [])
    except ParseFailure as exc:
        _die(2, str(exc))
    except (KeyError, TypeError) as exc:
        _die(2, f"{input}: malformed input: {exc}")
    try:
        skel = extract_skeleton(field, settings, overrides)
    except ValueError as exc:
        _die(1, str(exc))
    _emit_json(skeleton_to_json(skel), output)


@main.command()
@_input_argument
@click.option("--output", type=click.Path(), default=None)
def render(input, input_opt, output):
    """Render a graph, skeleton, LMF, or family file as DOT."""
    input = _resolve_input(input, input_opt)
    try:
        data = _load(input)
    except ParseFailure as exc:
        _die(2, str(exc))
    try:
        kind = _kind(data)
        if kind == "skeleton":
            g = skeleton_from_json(data).embedding
        elif kind == "family":
            g = family_from_json(data).base.embedding
        elif kind == "graph":
            g = graph_from_json(data)
        else:
            _die(2, "field files cannot be rendered; extract a skeleton first")
    except (KeyError, TypeError) as exc:
        _die(2, f"{input}: malformed input: {exc}")
    _emit(graph_to_dot(g), output)


if __name__ == "__main__":
    main()
