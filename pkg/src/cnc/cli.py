"""Command-line front end.

Exit codes: 0 valid / provable / found, 1 invalid / unprovable / none,
2 usage or parse error.

File formats:
- ``.cncp``: one proof as an s-expression ``(rule (seq L [x:a; y:b] goal) prem...)``.
- ``.cnct``: one term; optional header comments ``# ctx: ...`` and
  ``# goal: ...`` give its typing.
"""

from __future__ import annotations

import argparse
import contextlib
import io
import json
import re
import sys
from pathlib import Path
from typing import Any, Sequence

from .kernel import NDTypeError, check_nd, check_sc, is_cut_free
from .syntax import (Context, ParseError, SortError, parse_context, parse_formula,
                     parse_proof, parse_sequent, parse_term, print_context,
                     print_formula, print_proof, print_sequent, print_term)
from .syntax.sequents import ProofStructureError

OK, FAIL, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(args: argparse.Namespace, report: dict[str, Any], text: str) -> None:
    if getattr(args, "json", False):
        print(json.dumps(report, indent=2, ensure_ascii=False))
    else:
        print(text)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise UsageError(str(e)) from None


_HEADER = re.compile(r"^\s*#\s*(ctx|goal)\s*:(.*)$")


def read_cnct(text: str) -> tuple[str | None, str | None, str]:
    """(ctx text, goal text, term text) of a .cnct file."""
    ctx = goal = None
    for line in text.splitlines():
        m = _HEADER.match(line)
        if m:
            if m.group(1) == "ctx":
                ctx = m.group(2).strip()
            else:
                goal = m.group(2).strip()
    return ctx, goal, text


def write_cnct(ctx: Context, term, goal) -> str:
    return f"# ctx: {print_context(ctx)}\n# goal: {print_formula(goal)}\n{print_term(term)}\n"


def _typing(args: argparse.Namespace, text: str):
    hctx, hgoal, body = read_cnct(text)
    ctx_text = args.ctx if args.ctx is not None else hctx
    goal_text = args.goal if args.goal is not None else hgoal
    term = parse_term(body)
    if goal_text is None:
        return None, term, None
    goal = parse_formula(goal_text)
    ctx = parse_context(ctx_text or "", goal.sort)
    return ctx, term, goal


# ----------------------------------------------------------------- commands

def cmd_check_sc(args: argparse.Namespace) -> int:
    from .cutelim import measure

    p = parse_proof(_read(args.file))
    rep = check_sc(p)
    out: dict[str, Any] = {"valid": rep.ok, "sequent": print_sequent(p.conclusion),
                           "failures": [{"path": list(a), "rule": r, "message": m} for a, r, m in rep.failures]}
    if rep.ok:
        m = measure(p)
        out.update(cut_free=is_cut_free(p), cut_rank=m.cut_rank, depth=m.depth)
        text = f"valid: {print_sequent(p.conclusion)} (cut rank {m.cut_rank}, depth {m.depth})"
    else:
        text = "invalid\n" + rep.summary()
    _emit(args, out, text)
    return OK if rep.ok else FAIL


def cmd_check_nd(args: argparse.Namespace) -> int:
    ctx, term, goal = _typing(args, _read(args.file))
    if goal is None:
        raise UsageError("check-nd needs --goal (or a '# goal:' header)")
    try:
        d = check_nd(ctx, term, goal)
    except NDTypeError as e:
        _emit(args, {"valid": False, "error": e.kind, "message": str(e)}, f"ill-typed: {e}")
        return FAIL
    rules = [n.rule for n in d.nodes()]
    _emit(args, {"valid": True, "rules": rules}, d.pretty())
    return OK


def cmd_prove(args: argparse.Namespace) -> int:
    from .search import decide, logical_depth, prove

    s = parse_sequent(args.sequent)
    p = prove(s, args.depth)
    out: dict[str, Any] = {"sequent": print_sequent(s), "depth": args.depth, "found": p is not None}
    if p is not None:
        out.update(proof=print_proof(p), logical_depth=logical_depth(p), rules=[n.rule for n in p.nodes()])
        text = print_proof(p)
    else:
        text = f"no proof within logical depth {args.depth}"
        if args.exhaustive:
            dec = decide(s)
            out["exhaustive"] = dec.verdict
            text += f"; exhaustive check: {dec.verdict}"
    _emit(args, out, text)
    return OK if p is not None else FAIL


def cmd_cutelim(args: argparse.Namespace) -> int:
    from .cutelim import CutElimError, eliminate_cuts, measure

    p = parse_proof(_read(args.file))
    trace: list[int] = []
    try:
        q = eliminate_cuts(p, trace)
    except CutElimError as e:
        _emit(args, {"ok": False, "message": str(e)}, f"error: {e}")
        return FAIL
    text = print_proof(q)
    if args.output:
        Path(args.output).write_text(text + "\n")
    before, after = measure(p), measure(q)
    out = {"ok": True, "rank_trace": trace, "before": vars(before), "after": vars(after),
           "output": args.output}
    _emit(args, out, text if not args.output else f"cut-free proof written to {args.output} (rank trace {trace})")
    return OK


def cmd_normalize(args: argparse.Namespace) -> int:
    from .rewrite import normalize

    ctx, term, goal = _typing(args, _read(args.file))
    if goal is not None:
        check_nd(ctx, term, goal)
    trace: list = []
    nf, steps, exhausted = normalize(term, args.fuel, trace)
    if goal is not None:
        for s in trace:
            check_nd(ctx, s.after, goal)
    out = {"normal_form": print_term(nf), "steps": steps, "exhausted": exhausted,
           "trace": [{"kind": s.kind, "rule": s.rule, "path": list(s.path)} for s in trace],
           "typed": goal is not None}
    text = print_term(nf) + ("\n(fuel exhausted)" if exhausted else "")
    _emit(args, out, text)
    return FAIL if exhausted else OK


def cmd_translate(args: argparse.Namespace) -> int:
    from .translate import TranslationError, nd_to_sc, sc_to_nd

    text = _read(args.file)
    try:
        if args.dir == "sc2nd":
            p = parse_proof(text)
            rep = check_sc(p)
            if not rep.ok:
                raise TranslationError("invalid proof: " + rep.summary())
            d = sc_to_nd(p)
            body = write_cnct(d.ctx, d.term, d.type)
            out = {"ctx": print_context(d.ctx), "term": print_term(d.term), "goal": print_formula(d.type)}
        else:
            ctx, term, goal = _typing(args, text)
            if goal is None:
                raise UsageError("nd2sc needs --goal (or a '# goal:' header)")
            p = nd_to_sc(check_nd(ctx, term, goal))
            body = print_proof(p)
            out = {"proof": body, "sequent": print_sequent(p.conclusion)}
    except (TranslationError, NDTypeError) as e:
        _emit(args, {"ok": False, "message": str(e)}, f"error: {e}")
        return FAIL
    if args.output:
        Path(args.output).write_text(body if body.endswith("\n") else body + "\n")
    _emit(args, {"ok": True, **out}, body.rstrip("\n"))
    return OK


def _load_poset(path: str):
    from .dialectica import BiclosedPoset

    try:
        return BiclosedPoset.from_json(_read(path), Path(path).stem)
    except (KeyError, ValueError, TypeError) as e:
        raise UsageError(f"bad poset file {path}: {e}") from None


def cmd_model_validate(args: argparse.Namespace) -> int:
    from .dialectica import validate_poset

    rep = validate_poset(_load_poset(args.poset))
    lines = ["valid" if rep.ok else "invalid"] + rep.failures
    lines += [f"{k}: {v}" for k, v in rep.facts.items()]
    _emit(args, rep.to_json(), "\n".join(lines))
    return OK if rep.ok else FAIL


def cmd_model_refute(args: argparse.Namespace) -> int:
    from .dialectica import FragmentError, refute, validate_poset

    s = parse_sequent(args.sequent)
    P = _load_poset(args.poset)
    if not validate_poset(P).ok:
        raise UsageError(f"{args.poset} is not a valid biclosed poset with exchange")
    try:
        cm = refute(s, P, args.max_size)
    except FragmentError as e:
        raise UsageError(str(e)) from None
    if cm is None:
        _emit(args, {"found": False, "max_size": args.max_size},
              f"no countermodel with |U|,|X| ≤ {args.max_size}")
        return FAIL
    lines = ["countermodel:"]
    for a, o in cm.valuation.items():
        rows = "; ".join(" ".join(o.rel[u, x] for x in o.X) for u in o.U)
        lines.append(f"  {a} = |U|={len(o.U)} |X|={len(o.X)} α=[{rows}]")
    lines.append("  Hom(context, goal) is empty")
    _emit(args, {"found": True, **cm.to_json()}, "\n".join(lines))
    return OK


def cmd_corpus_run(args: argparse.Namespace) -> int:
    root = Path(args.dir)
    manifest = json.loads(_read(str(root / "manifest.json")))
    results = []
    for entry in manifest["entries"]:
        argv = [a.replace("{dir}", str(root)) for a in entry["args"]]
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf), contextlib.redirect_stderr(buf):
            code = main(argv)
        ok = code == entry["expect"]
        results.append({"name": entry.get("name", " ".join(entry["args"])), "expect": entry["expect"],
                        "got": code, "ok": ok})
    lines = [f"{'PASS' if r['ok'] else 'FAIL'} {r['name']} (exit {r['got']}, expected {r['expect']})"
             for r in results]
    passed = sum(r["ok"] for r in results)
    lines.append(f"{passed}/{len(results)} passed")
    _emit(args, {"results": results, "passed": passed, "total": len(results)}, "\n".join(lines))
    return OK if passed == len(results) else FAIL


# ------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cnc", description="Proof tools for CNC logic.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name: str, fn, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_)
        p.add_argument("--json", action="store_true", help="machine-readable report")
        p.set_defaults(fn=fn)
        return p

    p = add("check-sc", cmd_check_sc, "check a sequent-calculus proof")
    p.add_argument("file")

    p = add("check-nd", cmd_check_nd, "type-check a natural-deduction term")
    p.add_argument("file")
    p.add_argument("--ctx")
    p.add_argument("--goal")

    p = add("prove", cmd_prove, "search for a cut-free proof")
    p.add_argument("sequent")
    p.add_argument("--depth", type=int, default=12)
    p.add_argument("--exhaustive", action="store_true", help="run the decision procedure on failure")

    p = add("cutelim", cmd_cutelim, "eliminate cuts")
    p.add_argument("file")
    p.add_argument("-o", "--output")

    p = add("normalize", cmd_normalize, "normalize a term")
    p.add_argument("file")
    p.add_argument("--fuel", type=int, default=1000)
    p.add_argument("--ctx")
    p.add_argument("--goal")

    p = add("translate", cmd_translate, "translate between proof formats")
    p.add_argument("--dir", choices=("sc2nd", "nd2sc"), required=True)
    p.add_argument("file")
    p.add_argument("--ctx")
    p.add_argument("--goal")
    p.add_argument("-o", "--output")

    model = sub.add_parser("model", help="dialectica models")
    msub = model.add_subparsers(dest="model_command", required=True)
    p = msub.add_parser("validate", help="check a poset file")
    p.add_argument("poset")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_model_validate)
    p = msub.add_parser("refute", help="search for a countermodel")
    p.add_argument("sequent")
    p.add_argument("--poset", required=True)
    p.add_argument("--max-size", type=int, default=2)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_model_refute)

    corpus = sub.add_parser("corpus", help="acceptance corpus")
    csub = corpus.add_subparsers(dest="corpus_command", required=True)
    p = csub.add_parser("run", help="replay a corpus directory")
    p.add_argument("dir")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_corpus_run)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code else OK
    try:
        return args.fn(args)
    except (UsageError, ParseError, SortError, ProofStructureError) as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE
    except NDTypeError as e:
        print(f"ill-typed: {e}", file=sys.stderr)
        return FAIL


if __name__ == "__main__":
    sys.exit(main())
