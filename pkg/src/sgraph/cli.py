"""Command-line entry point.

Verbs: ``validate``, ``expand``, ``to-machine``, ``to-graph``, ``run``,
``plan``, ``compile``, ``measure``, ``values``.  Exit codes: 0 success,
1 parse error, 2 validation failure, 3 caps exhausted (bounded search or
size budget ran out before an answer — never a proof of absence).
"""

from __future__ import annotations

import sys
from fractions import Fraction
from pathlib import Path

import click

from sgraph.words import LWord, Word

EXIT_PARSE = 1
EXIT_VALIDATION = 2
EXIT_CAPS = 3


def _parse_word(text: str) -> Word:
    if "·" in text or "." in text or "^" in text or text == "1":
        return Word.parse(text)
    return Word.of(*text)


def _parse_eps(text: str) -> Fraction:
    try:
        eps = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise click.ClickException(f"cannot parse precision {text!r}")
    if not 0 < eps < 1:
        raise click.ClickException("precision must lie in (0, 1)")
    return eps


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(EXIT_PARSE)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
        click.echo(f"wrote {out}")
    else:
        click.echo(text, nl=False)


def _load_any(path: str):
    """Parse a file by extension: .sgn, .sg0, .sm, or .trs."""
    suffix = Path(path).suffix
    text = _read(path)
    try:
        if suffix == ".sgn":
            from sgraph.sgn import parse_sgn

            return "sgn", parse_sgn(text)
        if suffix == ".sg0":
            from sgraph.graph0 import parse_sg0

            return "sg0", parse_sg0(text)
        if suffix == ".sm":
            from sgraph.smachine import parse_sm

            return "sm", (parse_sm(text), _sm_header(text))
        if suffix == ".trs":
            from sgraph.turing import parse_trs

            return "trs", parse_trs(text)
    except ValueError as e:
        click.echo(f"parse error: {e}", err=True)
        sys.exit(EXIT_PARSE)
    click.echo(f"error: unknown file type {suffix!r}", err=True)
    sys.exit(EXIT_PARSE)


def _sm_header(text: str) -> dict:
    """Recognition metadata from ``# recognize ...`` comment lines."""
    meta: dict = {}
    for line in text.splitlines():
        line = line.strip()
        if line.startswith("# recognize"):
            for item in line[len("# recognize"):].split():
                key, _, val = item.partition("=")
                if key == "input":
                    meta["input"] = int(val)
                elif key in ("start", "finish"):
                    meta[key] = tuple(val.split(","))
    return meta


def _sm_recognizer(m, meta):
    from sgraph.smachine import RecognizingSMachine

    if not {"input", "start", "finish"} <= set(meta):
        click.echo(
            "error: machine file lacks a '# recognize input=.. start=.. finish=..' header",
            err=True,
        )
        sys.exit(EXIT_PARSE)
    return RecognizingSMachine(m, meta["input"], meta["start"], meta["finish"])


@click.group()
def main() -> None:
    """Graph/machine toolkit: validate, lower, run, and measure."""


_word_opt = click.option("--word", "word_text", required=True, help="input word (e.g. xxyy)")
_eps_opt = click.option("--eps", "eps_text", default="1/2", show_default=True, help="precision p/q")
_max_word_opt = click.option("--max-word", default=64, show_default=True, type=int)
_max_configs_opt = click.option("--max-configs", default=10**6, show_default=True, type=int)
_max_steps_opt = click.option("--max-steps", default=10**5, show_default=True, type=int)
_out_opt = click.option("--out", default=None, help="write output to a file")
_seed_opt = click.option(
    "--seed", default=0, show_default=True, type=int,
    help="fresh-name generator seed (naming is canonical; kept for interface stability)",
)


@main.command()
@click.argument("path")
def validate(path: str) -> None:
    """Check a graph/system file; exit 0 iff it is well-formed."""
    kind, data = _load_any(path)
    try:
        if kind == "sgn":
            from sgraph.star import check_condition_O, validate_star_graph

            report = validate_star_graph(data.graph)
            if not report.ok:
                click.echo(f"validation failure: {report}", err=True)
                sys.exit(EXIT_VALIDATION)
            if data.op_spec is not None:
                res = check_condition_O(data.operation())
                if not res.ok:
                    click.echo(f"validation failure: bracket discipline {res}", err=True)
                    sys.exit(EXIT_VALIDATION)
        # sg0/sm/trs: structural invariants are enforced by the parsers
    except ValueError as e:
        click.echo(f"validation failure: {e}", err=True)
        sys.exit(EXIT_VALIDATION)
    click.echo(f"{path}: ok")


@main.command()
@click.argument("path")
@_out_opt
@_seed_opt
def expand(path: str, out: str | None, seed: int) -> None:
    """Lower a graph with instance calls to a degree-0 graph."""
    kind, data = _load_any(path)
    if kind != "sgn":
        click.echo("error: expand takes a .sgn file", err=True)
        sys.exit(EXIT_PARSE)
    from sgraph.expansion import expand_graph
    from sgraph.graph0 import dump_sg0

    try:
        res = expand_graph(data.graph)
    except ValueError as e:
        click.echo(f"validation failure: {e}", err=True)
        sys.exit(EXIT_VALIDATION)
    _emit(dump_sg0(res.graph), out)


@main.command("to-machine")
@click.argument("path")
@click.option("--eta", default=None, help="comma-separated tape enumeration")
@_out_opt
def to_machine(path: str, eta: str | None, out: str | None) -> None:
    """Convert a degree-0 graph to a machine."""
    kind, data = _load_any(path)
    if kind != "sg0":
        click.echo("error: to-machine takes a .sg0 file", err=True)
        sys.exit(EXIT_PARSE)
    from sgraph.smachine import dump_sm, machine_from_graph

    order = tuple(t.strip() for t in eta.split(",")) if eta else None
    try:
        gm = machine_from_graph(data, order)
    except ValueError as e:
        click.echo(f"validation failure: {e}", err=True)
        sys.exit(EXIT_VALIDATION)
    _emit(dump_sm(gm.machine), out)


@main.command("to-graph")
@click.argument("path")
@_out_opt
def to_graph(path: str, out: str | None) -> None:
    """Convert a machine to a degree-0 graph."""
    kind, data = _load_any(path)
    if kind != "sm":
        click.echo("error: to-graph takes a .sm file", err=True)
        sys.exit(EXIT_PARSE)
    m, _meta = data
    from sgraph.graph0 import dump_sg0
    from sgraph.smachine import graph_from_machine

    _emit(dump_sg0(graph_from_machine(m).graph), out)


@main.command()
@click.argument("path")
@_word_opt
@_max_word_opt
@_max_configs_opt
@_max_steps_opt
def run(path: str, word_text: str, max_word: int, max_configs: int, max_steps: int) -> None:
    """Search for an accepting computation on the input word."""
    kind, data = _load_any(path)
    w = _parse_word(word_text)
    if kind == "trs":
        from sgraph.turing import trs_recognize_bounded

        comp = trs_recognize_bounded(data, w, max_size=max_word, max_configs=max_configs)
        if comp is None:
            click.echo("not found within caps (not a proof of rejection)")
            sys.exit(EXIT_CAPS)
        click.echo(f"accepted in {len(comp.history)} steps")
        return
    if kind == "sm":
        from sgraph.smachine import measure_machine, recognize_bounded

        m, meta = data
        rec = _sm_recognizer(m, meta)
        comp = recognize_bounded(rec, w, max_word, max_steps)
        if comp is None:
            click.echo("not found within caps (not a proof of rejection)")
            sys.exit(EXIT_CAPS)
        cost = measure_machine(comp)
        click.echo(f"accepted in {cost.tm} steps (sp={cost.sp})")
        return
    click.echo("error: run takes a .trs or .sm file", err=True)
    sys.exit(EXIT_PARSE)


@main.command()
@click.argument("path")
@_word_opt
@_eps_opt
@_max_word_opt
@_max_configs_opt
@_out_opt
def plan(path: str, word_text: str, eps_text: str, max_word: int, max_configs: int, out: str | None) -> None:
    """Produce and lower a planned accepting run, printing a trace."""
    kind, data = _load_any(path)
    if kind != "trs":
        click.echo("error: plan takes a .trs file", err=True)
        sys.exit(EXIT_PARSE)
    eps = _parse_eps(eps_text)
    from sgraph.pipeline import compile_acceptor
    from sgraph.plans import PlanError, lower_run
    from sgraph.star import F_MARK, S_MARK

    w = _parse_word(word_text)
    ca = compile_acceptor(
        data, eps, name=Path(path).stem, max_size=max_word, max_configs=max_configs
    )
    w1 = LWord({"a": w})
    p = ca.acceptor.plan("op", w1, S_MARK, LWord(), F_MARK)
    if p is None:
        click.echo("no plan found within caps (not a proof of rejection)")
        sys.exit(EXIT_CAPS)
    lines: list[str] = []
    lr = lower_run(
        ca.acceptor, "op", w1, S_MARK, p, trace=lambda eid, size: lines.append(f"{eid}\t{size}")
    )
    _emit("\n".join(lines) + "\n", out)
    click.echo(f"accepted: tm={lr.tm} sp={lr.sp}", err=(out is None))


@main.command()
@click.argument("path")
@_eps_opt
@_max_word_opt
@_max_configs_opt
@_max_steps_opt
@_out_opt
def compile(path: str, eps_text: str, max_word: int, max_configs: int, max_steps: int, out: str | None) -> None:
    """Compile a rewriting system into a recognizing machine.

    Prints a summary of the compiled object.  With --out, materializes
    the degree-0 expansion and writes the machine — only if the
    expansion fits within --max-steps edges; otherwise exits 3.
    """
    kind, data = _load_any(path)
    if kind != "trs":
        click.echo("error: compile takes a .trs file", err=True)
        sys.exit(EXIT_PARSE)
    eps = _parse_eps(eps_text)
    from sgraph.pipeline import compile_acceptor

    ca = compile_acceptor(
        data, eps, name=Path(path).stem, max_size=max_word, max_configs=max_configs
    )
    wb = ca.wacc
    click.echo(
        f"compiled {Path(path).stem}: eps={eps} rank={wb.rank} tapes={wb.k} "
        f"walker-states={wb.state_count()} (expected {wb.expected_state_count()})"
    )
    if out is None:
        return
    from sgraph.expansion import expansion_size

    op = ca.acceptor.obj.operations["op"]
    est = expansion_size(op, max_steps)
    if est is None or est > max_steps:
        shown = f"over {max_steps}" if est is None else str(est)
        click.echo(
            f"warning: expansion needs {shown} edges, budget --max-steps={max_steps}; "
            "not materializing (use the plan/run verbs on the .trs instead)",
            err=True,
        )
        sys.exit(EXIT_CAPS)
    from sgraph.expansion import expand_operation
    from sgraph.graph0 import Config0
    from sgraph.smachine import dump_sm, machine_from_graph

    ex = expand_operation(op)
    gm = machine_from_graph(ex.operation.graph)
    start = gm.mu(Config0(LWord(), op.start))
    finish = gm.mu(Config0(LWord(), op.finish))
    input_idx = gm.eta.index("a") + 1
    header = (
        f"# recognize input={input_idx} "
        f"start={','.join(start.states)} finish={','.join(finish.states)}\n"
    )
    _emit(header + dump_sm(gm.machine), out)


@main.command()
@click.argument("path")
@_eps_opt
@click.option("--sizes", default="2,4,6,8", show_default=True, help="input sizes to sweep")
@_max_word_opt
@_max_configs_opt
@click.option("--csv", "csv_path", default=None, help="write (n, tm, sp) rows as CSV")
@_seed_opt
def measure(path: str, eps_text: str, sizes: str, max_word: int, max_configs: int, csv_path: str | None, seed: int) -> None:
    """Sweep member words by size and fit the lowered-time exponent."""
    kind, data = _load_any(path)
    if kind != "trs":
        click.echo("error: measure takes a .trs file", err=True)
        sys.exit(EXIT_PARSE)
    eps = _parse_eps(eps_text)
    import itertools

    from sgraph.pipeline import compile_acceptor, measure_scaling

    ca = compile_acceptor(
        data, eps, name=Path(path).stem, max_size=max_word, max_configs=max_configs
    )
    alpha = sorted(data.input_alphabet)
    rows = []
    for n in (int(s) for s in sizes.split(",")):
        found = None
        for tup in itertools.product(alpha, repeat=n):
            if ca.wacc.std.language(Word.of(*tup)):
                found = Word.of(*tup)
                break
        if found is None:
            click.echo(f"n={n}: no member word of this size within caps", err=True)
            continue
        lr = ca.accepts(found)
        rows.append((n, lr.tm, lr.sp))
        click.echo(f"n={n}\tword={found}\ttm={lr.tm}\tsp={lr.sp}")
    if csv_path:
        Path(csv_path).write_text(
            "n,tm,sp\n" + "".join(f"{n},{tm},{sp}\n" for n, tm, sp in rows)
        )
        click.echo(f"wrote {csv_path}")
    if len(rows) >= 4:
        fit = measure_scaling([(n, tm) for n, tm, _ in rows])
        click.echo(f"fitted slope: {fit.slope:.3f} (residual {fit.residual:.3f})")
    else:
        click.echo("fewer than 4 sample points; no exponent fit", err=True)
        sys.exit(EXIT_CAPS)


@main.command()
@click.argument("object_name")
@_max_word_opt
@_max_steps_opt
def values(object_name: str, max_word: int, max_steps: int) -> None:
    """Enumerate the reachable values of a library object."""
    from sgraph.gadgets import lookup_object
    from sgraph.plans import StdObject
    from sgraph.star import explore_values

    try:
        std = lookup_object(object_name)
    except (KeyError, ValueError) as e:
        click.echo(f"error: unknown object {object_name!r} ({e})", err=True)
        sys.exit(EXIT_PARSE)
    vals, truncated = explore_values(std.obj, StdObject.oracles, max_word, max_steps)
    for v in sorted(vals):
        click.echo(str(v))
    if truncated:
        click.echo("warning: enumeration truncated by caps", err=True)
        sys.exit(EXIT_CAPS)


if __name__ == "__main__":
    main()
