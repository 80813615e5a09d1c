"""
Command-line front end
Every command is a thin shell over the library: parse, call, print.
"""

import functools
import json
import logging
import sys
from typing import List, Optional, Tuple

import click

from becorder import __version__
from becorder.bitstrings import display, parse_bitstring
from becorder.closure import close, seed_rules
from becorder.errors import CapacityError, DegreeError, DomainError, ParseError
from becorder.logs import configure_logging
from becorder.matrix import census, relation_matrix
from becorder.models import MethodSpec
from becorder.render import RenderSpec, render_matrix
from becorder.utils.reports import Reports, default_ranking_methods, write_csv
from becorder.verify import SUITES, VerifyOptions, run_suites

logger = logging.getLogger(__name__)


def usage_errors(fn):
    """Turn library input errors into click usage errors (exit code 2)"""
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (ParseError, CapacityError, DegreeError, DomainError) as exc:
            raise click.UsageError(str(exc))
    return wrapper


def _method(method: str, beta: Optional[str]) -> MethodSpec:
    return MethodSpec.parse(f"beta:{beta}" if beta else method)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with click.open_file(out, "w") as f:
            f.write(text)
        click.echo(f"wrote {out}", err=True)
    else:
        click.echo(text, nl=False)


@click.group()
@click.version_option(__version__, prog_name="becorder")
@click.option("--log-level", default=None, help="Logging level (default from BECORDER_LOG_LEVEL)")
@click.option("--log-json", is_flag=True, help="Log JSON lines instead of plain text")
def cli(log_level: Optional[str], log_json: Optional[bool]):
    """Exact comparisons of synthetic binary erasure channels"""
    configure_logging(log_level, log_json or None)


@cli.command()
@click.argument("alpha")
@click.argument("gamma")
@click.option("--method", default="std", show_default=True,
              help="std, ber:n, fst, beta:spec, avg, hlf, at0, at1 or rules:SETS")
@click.option("--beta", default=None, help="Shorthand for --method beta:BETA")
@click.option("--enable-rsd", is_flag=True, help="Admit the conjectured rule set D")
@click.option("--precision", type=click.IntRange(1), default=None, help="Starting interval precision in bits")
@click.option("--json", "as_json", is_flag=True, help="Print the full report as JSON")
@click.option("--dump", is_flag=True,
              help="Print I_alpha, I_gamma and I_alpha - I_gamma as JSON coefficient lists instead")
@usage_errors
def compare(alpha, gamma, method, beta, enable_rsd, precision, as_json, dump):
    """Compare two strings under one method"""
    if dump:
        click.echo(json.dumps(Reports.polynomials(parse_bitstring(alpha), parse_bitstring(gamma)), indent=2))
        return
    report = Reports.compare(
        parse_bitstring(alpha), parse_bitstring(gamma), _method(method, beta), enable_rsd, precision
    )
    if as_json:
        click.echo(report.model_dump_json(indent=2, exclude={"timestamp", "status", "message"}))
        return
    click.echo(report.summary)
    certificate = report.evidence.get("certificate")
    if certificate:
        if certificate["witness"]:
            click.echo(f"  witness: {', '.join(certificate['witness'])}")
        else:
            click.echo(f"  division points: {', '.join(certificate['division_points'])}")
    for flag in report.flags:
        click.echo(f"  flag: {flag}")


@cli.command()
@click.argument("m", type=click.IntRange(0))
@click.option("--method", default="std", show_default=True)
@click.option("--rules", default=None, help="Shorthand for --method rules:RULES")
@click.option("--beta", default=None, help="Shorthand for --method beta:BETA")
@click.option("--dim-against", default=None, help="Dim pixels that agree with this method")
@click.option("--out", type=click.Path(dir_okay=False, writable=True), required=True, help="P6 pixmap to write")
@click.option("--palette", default=None, help="e.g. 'greater=0,17,170;less=17,102,0'")
@click.option("--enable-rsd", is_flag=True)
@click.option("--max-len", type=click.IntRange(0), default=None, help="Override the matrix length cap")
@click.option("--json", "as_json", is_flag=True, help="Print the census as JSON")
@usage_errors
def matrix(m, method, rules, beta, dim_against, out, palette, enable_rsd, max_len, as_json):
    """Render the relation matrix of {0,1}^M"""
    spec = MethodSpec.parse(f"rules:{rules}") if rules else _method(method, beta)
    render = RenderSpec.from_palette(palette, dim_against=dim_against, out=out)
    matrix_ = relation_matrix(m, spec, enable_rsd=enable_rsd, max_len=max_len)
    reference = None
    if dim_against:
        reference = relation_matrix(m, MethodSpec.parse(dim_against), enable_rsd=enable_rsd, max_len=max_len)
    try:
        recounted = render_matrix(matrix_, render, reference)
    except OSError as exc:
        raise click.FileError(out, hint=str(exc))
    expected = census(matrix_, reference)
    if recounted.model_dump(exclude={"dim_against"}) != expected.model_dump(exclude={"dim_against"}):
        logger.error("census recounted from %s differs from the matrix", out)
        sys.exit(1)
    if as_json:
        click.echo(expected.model_dump_json(indent=2))
        return
    click.echo(f"{out}: {1 << m}x{1 << m} {spec.label}")
    click.echo(
        f"greater={expected.greater} less={expected.less} "
        f"equal={expected.equal} incomparable={expected.incomparable}"
    )
    if reference is not None:
        click.echo(
            f"against {reference.method}: non-dimmed={expected.non_dimmed} "
            f"non-dimmed incomparable={expected.non_dimmed_incomparable}"
        )


@cli.command()
@click.argument("m", type=click.IntRange(0))
@click.option("--method", default="hlf", show_default=True, help="beta:spec, avg, hlf, at0 or at1")
@click.option("--beta", default=None, help="Shorthand for --method beta:BETA")
@click.option("--precision", type=click.IntRange(1), default=None)
@click.option("--out", default=None, help="CSV file (default stdout)")
@usage_errors
def rank(m, method, beta, precision, out):
    """Rank {0,1}^M best first"""
    report = Reports.ranking(m, _method(method, beta), precision)
    text = write_csv(None, ("rank", "bitstring", "label", "value"),
                     ((r.rank, r.bitstring, r.label, r.value) for r in report.rows))
    _emit(text, out)
    if report.ties_at_cap:
        click.echo(f"{report.ties_at_cap} pairs tied at the precision cap", err=True)


@cli.command()
@click.argument("m", type=click.IntRange(0))
@click.option("--method", "methods", multiple=True, help="Repeat for each ranking (default: two beta presets, avg and hlf)")
@click.option("--out", default=None, help="JSON file (default stdout)")
@usage_errors
def kendall(m, methods: Tuple[str, ...], out):
    """Kendall tau distances between rankings of {0,1}^M"""
    report = Reports.kendall(m, list(methods) or default_ranking_methods())
    _emit(report.model_dump_json(indent=2, include={"m", "methods", "distances"}) + "\n", out)


@cli.command()
@click.argument("max_level", type=click.IntRange(0))
@click.option("--precision", type=click.IntRange(1), default=None)
@click.option("--slope-from", type=click.IntRange(0), default=4, show_default=True)
@click.option("--out", default=None, help="CSV file of (level, bitstring, influence)")
@usage_errors
def influence(max_level, precision, slope_from, out):
    """Influence of the last bit for every string up to MAX_LEVEL"""
    report = Reports.influence(max_level, precision, slope_from)
    if out:
        text = write_csv(None, ("level", "bitstring", "influence"),
                         ((r.level, r.bitstring, r.influence) for r in report.rows))
        _emit(text, out)
    for level in report.levels:
        click.echo(f"level {level.level:2d}  count {level.count:5d}  mean {level.mean:.6e}  log2 {level.log2_mean:+.4f}")
    if report.slope is not None:
        click.echo(f"slope of log2(mean) over levels {slope_from}..{max_level}: {report.slope:+.4f}")


@cli.command()
@click.option("--rules", default="ABCEF", show_default=True, help="Rule-set letters from ABCDEF")
@click.option("--max-len", type=click.IntRange(0), default=6, show_default=True)
@click.option("--enable-rsd", is_flag=True)
@click.option("--out", default=None, help="CSV of every edge (lhs, rhs, provenance)")
@click.option("--limit", type=click.IntRange(0), default=20, show_default=True, help="Sample edges to print")
@usage_errors
def closure(rules, max_len, enable_rsd, out, limit):
    """Close a rule-set seed under concatenation, duality and transitivity"""
    report = Reports.closure(rules, max_len, enable_rsd, limit=limit)
    if out:
        relation = close(seed_rules(rules, max_len, enable_rsd))
        text = write_csv(None, ("lhs", "rhs", "provenance"),
                         ((display(lhs), display(rhs), tag) for lhs, rhs, tag in relation.edges()))
        _emit(text, out)
    click.echo(f"rules {report.rules} at L={max_len}: {report.nodes} strings, {report.edges} edges")
    for tag, count in report.provenance_counts.items():
        click.echo(f"  {tag}: {count}")
    for edge in report.sample:
        click.echo(f"  {edge.lhs} >= {edge.rhs}  [{edge.provenance}]")


@cli.command()
@click.argument("suites", nargs=-1)
@click.option("--max-len", type=click.IntRange(0), default=None, help="Override each suite's length bound")
@click.option("--samples", type=click.IntRange(0), default=None, help="Override randomized sample counts")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--enable-rsd", is_flag=True)
@click.option("--workers", type=click.IntRange(1), default=None, help="Processes for the desk-scale suites (default BECORDER_WORKERS)")
@click.option("--list", "list_only", is_flag=True, help="List suites and exit")
@click.option("--json", "as_json", is_flag=True)
@usage_errors
def verify(suites, max_len, samples, seed, enable_rsd, workers, list_only, as_json):
    """Run verification suites ('all' for the fast ones, 'acceptance' for the desk-scale ones)"""
    if list_only:
        for name, entry in SUITES.items():
            click.echo(f"{name:20s} {'slow ' if entry.slow else '     '}{entry.summary}")
        return
    options = VerifyOptions(max_len=max_len, samples=samples, seed=seed, enable_rsd=enable_rsd, workers=workers)
    results = run_suites(list(suites) or ["all"], options)
    if as_json:
        click.echo(json.dumps([r.model_dump() for r in results], indent=2))
    else:
        for result in results:
            click.echo(f"{'PASS' if result.passed else 'FAIL'} {result.name} ({result.checked} checks)")
            for failure in result.failures:
                click.echo(f"  failure: {failure}")
            for note in result.notes:
                click.echo(f"  {note}")
    if not all(r.passed for r in results):
        sys.exit(1)


def main(argv: Optional[List[str]] = None):
    cli.main(args=argv, prog_name="becorder")
