"""Command line front end: weil-forge validate|check|cohomology|basis.

Exit codes: 0 pass, 1 parse error, 2 invalid data, 3 incompatible.
"""

from __future__ import annotations

import json
import sys

import click

from . import __version__
from .cohomology import bigraded_cohomology, total_cohomology
from .config import ConfigError, InvalidConfigData, Problem, load_config
from .structures import (
    assemble_double,
    cartan_suite,
    check_double_lie_algebroid,
    core_lie_algebroid,
    role_operators,
    validate,
)
from .weil_core import MAX_DIM, Role, Shape, basis_count

EXIT_OK, EXIT_PARSE, EXIT_INVALID, EXIT_INCOMPATIBLE = 0, 1, 2, 3
SCHEMA = 1


class Exit(Exception):
    def __init__(self, code: int, message: str | None = None):
        super().__init__(message)
        self.code = code
        self.message = message


def _report(command: str, problem: Problem | None = None, **extra) -> dict:
    rep = {"schema": SCHEMA, "tool": "weil-forge", "version": __version__, "command": command}
    if problem is not None:
        rep["config_digest"] = problem.digest
        rep["description"] = problem.description
        rep["shape"] = list(problem.shape.as_tuple())
    rep.update(extra)
    return rep


def _emit(report: dict, fmt: str, text_lines: list[str]) -> None:
    if fmt == "json":
        click.echo(json.dumps(report, indent=2, ensure_ascii=False))
    else:
        click.echo("\n".join(text_lines))


def _load(path: str) -> Problem:
    try:
        return load_config(path)
    except ConfigError as exc:
        raise Exit(EXIT_PARSE, f"parse error: {exc}") from None
    except InvalidConfigData as exc:
        raise Exit(EXIT_INVALID, f"invalid data: {exc}") from None


def _validation(problem: Problem) -> tuple[bool, dict]:
    out = {}
    ok = True
    for name, data in problem.data:
        rep = validate(data)
        out[name] = rep.to_json()
        ok = ok and rep.valid
    return ok, out


def _validation_lines(vals: dict) -> list[str]:
    lines = []
    for name, rep in vals.items():
        lines.append(f"{name} (role {rep['role']}): {'valid' if rep['valid'] else 'INVALID'}")
        for f in rep["failures"]:
            lines.append(f"  {f['condition']} at {tuple(f['witness'])}: {f['detail']}")
    return lines


format_option = click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text",
                             show_default=True)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(__version__, prog_name="weil-forge")
def cli():
    """Weil algebras of split double vector spaces: structure checks and cohomology."""


@cli.command("validate")
@click.argument("config", type=click.Path(dir_okay=False))
@format_option
def cmd_validate(config: str, fmt: str) -> int:
    """Validate every structure data block in CONFIG."""
    problem = _load(config)
    ok, vals = _validation(problem)
    report = _report("validate", problem, status="pass" if ok else "fail", validation=vals)
    _emit(report, fmt, [f"config {problem.digest[:16]}: {problem.description}"] + _validation_lines(vals)
          + [f"status: {report['status']}"])
    return EXIT_OK if ok else EXIT_INVALID


@cli.command("check")
@click.argument("config", type=click.Path(dir_okay=False))
@click.option("--trials", type=click.IntRange(min=0), default=20, show_default=True,
              help="Random tuples per identity.")
@click.option("--seed", type=int, default=0, show_default=True)
@format_option
def cmd_check(config: str, trials: int, seed: int, fmt: str) -> int:
    """Assemble operators, run the identity suite and the double Lie algebroid checks."""
    problem = _load(config)
    ok, vals = _validation(problem)
    lines = [f"config {problem.digest[:16]}: {problem.description}", f"seed: {seed}", f"trials: {trials}"]
    if not ok:
        report = _report("check", problem, seed=seed, trials=trials, status="invalid", validation=vals)
        _emit(report, fmt, lines + _validation_lines(vals) + ["status: invalid"])
        return EXIT_INVALID
    suites = {}
    for name, data in problem.data:
        suites[name] = cartan_suite(role_operators(data), trials=trials, seed=seed).to_json()
    suite_ok = all(s["passed"] for s in suites.values())
    report = _report("check", problem, seed=seed, trials=trials, validation=vals, identity_suite=suites)
    for name, s in suites.items():
        bad = sorted(k for k, v in s["failures"].items() if v)
        lines.append(f"identity suite on {name}: {'pass' if s['passed'] else 'FAIL ' + ', '.join(bad)}")
    code = EXIT_OK if suite_ok else EXIT_INCOMPATIBLE
    if problem.double is not None:
        ops = assemble_double(problem.double)
        eq = check_double_lie_algebroid(problem.double, samples=trials, seed=seed, ops=ops)
        report["double"] = eq.to_json()
        for k, v in eq.verdicts.items():
            lines.append(f"verdict {k}: {'zero' if v else 'nonzero'}")
        lines.append(f"lemma residuals: pointwise {eq.lemma_pointwise}, derivation {eq.lemma_derivation}"
                     f" over {eq.samples} samples")
        if eq.compatible and problem.shape.nE:
            core = core_lie_algebroid(problem.double, ops=ops, require_compatible=False)
            report["double"]["core_bracket"] = [[[str(v) for v in r] for r in m] for m in core]
        if not (eq.compatible and eq.lemma_holds):
            code = EXIT_INCOMPATIBLE
    report["status"] = "pass" if code == EXIT_OK else "incompatible"
    lines.append(f"status: {report['status']}")
    _emit(report, fmt, lines)
    return code


@cli.command("cohomology")
@click.argument("config", type=click.Path(dir_okay=False))
@click.option("-d", "--differential", type=click.Choice(["h", "v", "total"]), default="total", show_default=True)
@click.option("--max-degree", type=click.IntRange(min=0), default=4, show_default=True)
@format_option
def cmd_cohomology(config: str, differential: str, max_degree: int, fmt: str) -> int:
    """Betti numbers of d_h, d_v (bigraded) or d_h + d_v (total degree)."""
    problem = _load(config)
    ok, vals = _validation(problem)
    if not ok:
        raise Exit(EXIT_INVALID, "invalid data: " + "; ".join(_validation_lines(vals)))
    if problem.double is not None:
        ops = assemble_double(problem.double)
        d_h, d_v = ops.d_h, ops.d_v
    else:
        ro = role_operators(problem.single)
        d_h, d_v = ro.d_h, ro.d_v
    if differential == "total":
        if problem.double is None:
            raise Exit(EXIT_INVALID, "total cohomology needs a double input (dataH and dataV)")
        eq = check_double_lie_algebroid(problem.double, samples=0, ops=ops)
        if not eq.compatible:
            raise Exit(EXIT_INCOMPATIBLE, "incompatible: d_h and d_v do not commute")
        rep = total_cohomology(d_h, d_v, max_degree)
    else:
        rep = bigraded_cohomology(d_h if differential == "h" else d_v, max_degree, max_degree)
    algebra_role = (d_h if differential == "h" else d_v).algebra.role
    js = rep.to_json()
    report = _report("cohomology", problem, differential=differential, algebra_role=algebra_role.value,
                     truncation=js["truncation"], table=js["table"])
    _emit(report, fmt, [f"config {problem.digest[:16]}: {problem.description}",
                        f"differential: {differential} on W({algebra_role.label})",
                        rep.format_text()])
    return EXIT_OK


def _parse_shape(text: str) -> Shape:
    try:
        parts = [int(p) for p in text.replace("(", "").replace(")", "").split(",")]
        return Shape(*parts)
    except (TypeError, ValueError) as exc:
        raise click.BadParameter(f"expected nA,nB,nE with entries 0..{MAX_DIM}: {exc}") from None


@cli.command("basis")
@click.argument("shape")
@click.argument("role", default="D")
@click.option("--max", "max_pq", nargs=2, type=click.IntRange(min=0), default=(3, 3), show_default=True,
              metavar="P Q")
@format_option
def cmd_basis(shape: str, role: str, max_pq: tuple[int, int], fmt: str) -> int:
    """Print dim W^{p,q} for 0 ≤ p ≤ P, 0 ≤ q ≤ Q."""
    sh = _parse_shape(shape)
    try:
        r = Role.parse(role)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from None
    P, Q = max_pq
    grid = [[basis_count(sh, r, p, q) for q in range(Q + 1)] for p in range(P + 1)]
    report = _report("basis", None, shape=list(sh.as_tuple()), role=r.value, max=[P, Q], dims=grid)
    width = max(3, *(len(str(v)) + 1 for row in grid for v in row))
    lines = [f"dim W^(p,q) for shape {sh.as_tuple()} role {r.label}",
             "p\\q " + "".join(f"{q:>{width}}" for q in range(Q + 1))]
    lines += [f"{p:>3} " + "".join(f"{v:>{width}}" for v in row) for p, row in enumerate(grid)]
    _emit(report, fmt, lines)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    try:
        code = cli.main(args=argv, prog_name="weil-forge", standalone_mode=False)
    except Exit as exc:
        if exc.message:
            click.echo(exc.message, err=True)
        code = exc.code
    except click.exceptions.Exit as exc:
        code = exc.exit_code
    except click.ClickException as exc:
        exc.show()
        code = EXIT_PARSE
    except click.Abort:
        code = EXIT_PARSE
    code = code if isinstance(code, int) else EXIT_OK
    if argv is None:
        sys.exit(code)
    return code


if __name__ == "__main__":
    main()
