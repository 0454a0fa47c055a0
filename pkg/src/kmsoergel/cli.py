"""Command-line front end.

Every command prints one JSON document (sorted keys) on stdout.  Exit status
is 0 on success, 1 on a domain error (payload {"error": ..., "detail": ...})
and 2 on a usage error.  ``run`` returns (status, text) without touching the
process streams, which is what the batch harness uses.
"""
from __future__ import annotations

import argparse
import difflib
import json
import os
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import rmatrix as rm
from .laurent import LaurentPoly, divide_exact, quotient_is_reduced, random_laurent
from .intmat import smith_normal_form, hermite_normal_form
from .rootdatum import (RootDatum, RootDatumError, NAMED, validate, classify, langlands_dual, affinize)
from .weyl import weyl_group, bruhat_leq
from .demazure import demazure_context, demazure, demazure_minus, is_invariant, ps_split
from .bimodule import (BSObject, StdBimodule, object_from_json, tensor, std_multiplicities, hom_std,
                       hom_bounded, gr_map, decompose_bsbs, central_element)
from .complexes import (ChainComplex, unit_complex, rouquier_delta, rouquier_nabla, tensor_complex,
                        gaussian_eliminate, is_unit_complex, dualize, hom_complex)


class UsageError(Exception):
    pass


class InvalidDatum(RootDatumError):
    pass


@dataclass
class Session:
    datum: RootDatum | None
    bound: int = 3
    fmt: str = "json"
    seed: int = 0
    options: dict = field(default_factory=dict)

    def need_datum(self) -> RootDatum:
        if self.datum is None:
            raise UsageError("this command needs --datum")
        return self.datum


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# argument decoding

def _read_json_arg(text):
    if text.startswith("@"):
        return json.loads(Path(text[1:]).read_text())
    return json.loads(text)


def load_datum(name_or_path) -> RootDatum:
    if name_or_path in NAMED:
        D = NAMED[name_or_path]()
    else:
        try:
            obj = json.loads(Path(name_or_path).read_text())
        except FileNotFoundError:
            raise UsageError(f"no datum file or named datum {name_or_path!r}")
        D = RootDatum.from_json(obj)
    problems = validate(D)
    if problems:
        raise InvalidDatum("; ".join(problems))
    return D


def parse_word(text):
    text = text.strip()
    if text.startswith("["):
        return [str(g) for g in json.loads(text)]
    if text in ("", "e"):
        return []
    return [g.strip() for g in text.split(",") if g.strip()]


def parse_poly(text, rank):
    obj = _read_json_arg(text)
    if isinstance(obj, int):
        return LaurentPoly.constant(obj, rank)
    return LaurentPoly.from_json(obj, rank)


def parse_object(D, text):
    text = text.strip()
    if text.startswith("{") or text.startswith("@"):
        return object_from_json(D, _read_json_arg(text))
    if text.startswith("std:"):
        return StdBimodule(D, weyl_group(D).element(parse_word(text[4:])))
    return BSObject(D, tuple(parse_word(text)))


def parse_complex(D, text, bound=2):
    """'unit', '@file.json', a JSON complex, or letters such as
    'delta:s1,s2*nabla:s1' (the product is the tensor product)."""
    text = text.strip()
    if text.startswith("{") or text.startswith("@"):
        return ChainComplex.from_json(D, _read_json_arg(text))
    out = None
    for factor in text.split("*"):
        factor = factor.strip()
        if factor == "unit":
            C = unit_complex(D)
        else:
            kind, _, word = factor.partition(":")
            if kind == "delta":
                C = rouquier_delta(D, parse_word(word))
            elif kind == "nabla":
                C = rouquier_nabla(D, parse_word(word), bound)
            else:
                raise UsageError(f"unknown complex factor {factor!r}")
        out = C if out is None else tensor_complex(out, C)
    return out


def _word_json(w):
    return list(w.names())


# ---------------------------------------------------------------------------
# command implementations

def cmd_datum(S, a):
    D = load_datum(a.file) if a.file else S.need_datum()
    if a.action == "validate":
        return {"valid": True, "rank": D.rank, "generators": list(D.generators),
                "cartan_matrix": [list(r) for r in D.cartan_matrix]}
    if a.action == "classify":
        return classify(D).to_json()
    if a.action == "dual":
        return langlands_dual(D).to_json()
    if a.action == "affinize":
        return affinize(D, a.mode).to_json()


def cmd_weyl(S, a):
    W = weyl_group(S.need_datum())
    if a.action == "reduce":
        w = W.element(parse_word(a.word))
        return {"word": _word_json(w), "length": w.length}
    if a.action == "mult":
        w = W.element(parse_word(a.word)) * W.element(parse_word(a.word2))
        return {"word": _word_json(w), "length": w.length}
    if a.action == "length":
        return {"length": W.element(parse_word(a.word)).length}
    if a.action == "bruhat":
        return {"leq": bruhat_leq(W.element(parse_word(a.word)), W.element(parse_word(a.word2)))}
    if a.action == "enum":
        els = W.enumerate(a.max_length)
        return {"count": len(els), "elements": [_word_json(w) for w in els]}


def cmd_dem(S, a):
    D = S.need_datum()
    ctx = demazure_context(D, a.gen)
    p = parse_poly(a.poly, D.rank)
    if a.action == "apply":
        return {"result": demazure(ctx, p).to_json()}
    if a.action == "minus":
        return {"result": demazure_minus(ctx, p).to_json()}
    if a.action == "split":
        inv, anti = ps_split(ctx, p)
        return {"a": inv.to_json(), "b": anti.to_json(), "varpi": list(ctx.require_varpi())}
    if a.action == "invariant":
        return {"invariant": is_invariant(ctx, p)}


def _object_summary(X):
    return {"object": X.to_json(), "rank": X.rank, "label": X.label()}


def cmd_bim(S, a):
    D = S.need_datum()
    if a.action == "bs":
        X = BSObject(D, tuple(parse_word(a.word)))
        out = _object_summary(X)
        out["basis_degrees"] = [list(d) for d in X.basis_degrees()]
        return out
    if a.action == "tensor":
        return _object_summary(tensor(parse_object(D, a.obj1), parse_object(D, a.obj2)))
    if a.action == "stdmult":
        counts = std_multiplicities(D, parse_word(a.word))
        return {repr(w): c for w, c in counts.items()}
    if a.action == "hom":
        X, Y = parse_object(D, a.obj1), parse_object(D, a.obj2)
        if isinstance(X, StdBimodule) and isinstance(Y, StdBimodule):
            return hom_std(Y.twist, X.twist)
        return hom_bounded(X, Y, S.bound).to_json()
    if a.action == "grmap":
        f = gr_map(D, a.gen)
        return {"morphism": f.to_json(), "det": rm.det(f.matrix, D.rank).to_json()}
    if a.action == "bsbs-split":
        phi, psi = decompose_bsbs(D, a.gen)
        return {"phi": phi.to_json(), "psi": psi.to_json()}
    if a.action == "central":
        return {"coordinates": [c.to_json() for c in central_element(D, a.gen)],
                "basis": BSObject(D, (D.index(a.gen),)).basis_labels()}


def cmd_cx(S, a):
    D = S.need_datum()
    if a.action == "rouquier":
        word = parse_word(a.word)
        C = rouquier_delta(D, word) if a.kind == "delta" else rouquier_nabla(D, word)
        return C.to_json()
    C = parse_complex(D, a.complex)
    if a.action == "conv":
        return C.to_json()
    if a.action == "minimize":
        M, cert = gaussian_eliminate(C)
        return {"complex": M.to_json(), "labels": {str(k): v for k, v in M.labels().items()},
                "certificate_verified": cert.verify()}
    if a.action == "unit":
        return {"unit": is_unit_complex(C)}
    if a.action == "dual":
        return dualize(C).to_json()
    if a.action == "hom":
        E = parse_complex(D, a.complex2)
        return hom_complex(C, E, S.bound).to_json()


def cmd_ring(S, a):
    if a.action == "snf":
        A = _read_json_arg(a.arg1)
        U, Dm, V = smith_normal_form(A)
        return {"U": U, "D": Dm, "V": V, "hnf": hermite_normal_form(A)}
    if a.action == "reduced":
        lam = _read_json_arg(a.arg1)
        rank = S.datum.rank if S.datum is not None else len(lam)
        res = quotient_is_reduced(rank, lam)
        return {"reduced": res["reduced"], "structure": list(res["structure"]),
                "snf": None if res["snf"] is None else [list(map(list, m)) for m in res["snf"]]}
    D = S.need_datum()
    p, q = parse_poly(a.arg1, D.rank), parse_poly(a.arg2, D.rank)
    if a.action == "mul":
        return {"result": (p * q).to_json()}
    if a.action == "div":
        return {"result": divide_exact(p, q).to_json()}


def cmd_selfcheck(S, a):
    """Seeded random Demazure identities on the session datum."""
    D = S.need_datum()
    rng = random.Random(S.seed)
    failures = []
    for s in D.generators:
        ctx = demazure_context(D, s)
        for t in range(a.samples):
            p = random_laurent(rng, D.rank)
            d = demazure(ctx, p)
            if demazure(ctx, d) != d or not is_invariant(ctx, d) or d + demazure_minus(ctx, p) != p:
                failures.append({"gen": s, "sample": t, "poly": p.to_json()})
    return {"seed": S.seed, "samples": a.samples, "failures": failures, "ok": not failures}


# ---------------------------------------------------------------------------
# batch harness

def _run_entry(entry, base="."):
    argv = [a.replace("{dir}", base) for a in entry["argv"]]
    code, text = run(argv)
    return {"exit": code, "stdout": text}


def cmd_batch(S, a):
    """Replay a corpus {"commands": [{"name", "argv", "expected"}]}; "{dir}"
    in an argument stands for the corpus directory."""
    path = Path(a.file)
    corpus = json.loads(path.read_text())
    commands = corpus.get("commands", [])
    base = str(path.parent)
    if a.jobs > 1:
        with ThreadPoolExecutor(max_workers=a.jobs) as pool:
            results = list(pool.map(lambda c: _run_entry(c, base), commands))
    else:
        results = [_run_entry(c, base) for c in commands]
    if a.record:
        for c, r in zip(commands, results):
            c["expected"] = r
        path.write_text(json.dumps(corpus, indent=1, sort_keys=True) + "\n")
        return {"recorded": len(commands), "file": str(path)}
    mismatches = []
    for c, r in zip(commands, results):
        exp = c.get("expected")
        if exp != r:
            exp_text = "" if exp is None else f"exit {exp['exit']}\n{exp['stdout']}"
            got_text = f"exit {r['exit']}\n{r['stdout']}"
            diff = "".join(difflib.unified_diff(exp_text.splitlines(True), got_text.splitlines(True),
                                                "expected", "actual"))
            mismatches.append({"name": c.get("name", " ".join(c["argv"])), "diff": diff})
    out = {"total": len(commands), "passed": len(commands) - len(mismatches), "mismatches": mismatches}
    if mismatches:
        raise BatchMismatch(out)
    return out


class BatchMismatch(Exception):
    def __init__(self, report):
        super().__init__(f"{len(report['mismatches'])} mismatches")
        self.report = report


# ---------------------------------------------------------------------------

def _global_options(p, suppress=False):
    dflt = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--datum", default=dflt(None),
                   help="root-datum JSON file or a named datum (" + ", ".join(NAMED) + ")")
    p.add_argument("--bound", type=int, default=dflt(None), help="support bound (default 3, env KMSOERGEL_BOUND)")
    p.add_argument("--format", choices=("json", "text"), default=dflt("json"))
    p.add_argument("--seed", type=int, default=dflt(0))


_COMMON = _Parser(add_help=False)
_global_options(_COMMON, suppress=True)


def _leaf(group, name):
    # global options are accepted after the subcommand as well
    return group.add_parser(name, parents=[_COMMON])


def build_parser():
    p = _Parser(prog="kmsoergel", description=__doc__.splitlines()[0])
    _global_options(p)
    sub = p.add_subparsers(dest="group", required=True, parser_class=_Parser)

    g = _leaf(sub, "datum").add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name in ("validate", "classify", "dual", "affinize"):
        q = _leaf(g, name)
        q.add_argument("file", nargs="?")
        if name == "affinize":
            q.add_argument("--mode", default="loop_rotation",
                           choices=("loop", "loop_rotation", "central_extension"))

    g = _leaf(sub, "weyl").add_subparsers(dest="action", required=True, parser_class=_Parser)
    _leaf(g, "reduce").add_argument("word")
    _leaf(g, "length").add_argument("word")
    for name in ("mult", "bruhat"):
        q = _leaf(g, name)
        q.add_argument("word")
        q.add_argument("word2")
    _leaf(g, "enum").add_argument("--max-length", type=int, default=3)

    g = _leaf(sub, "dem").add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name in ("apply", "minus", "split", "invariant"):
        q = _leaf(g, name)
        q.add_argument("--gen", required=True)
        q.add_argument("poly", help="LaurentPoly JSON, an integer, or @file")

    g = _leaf(sub, "bim").add_subparsers(dest="action", required=True, parser_class=_Parser)
    _leaf(g, "bs").add_argument("--word", required=True)
    _leaf(g, "stdmult").add_argument("--word", required=True)
    for name in ("tensor", "hom"):
        q = _leaf(g, name)
        q.add_argument("obj1")
        q.add_argument("obj2")
    for name in ("grmap", "bsbs-split", "central"):
        _leaf(g, name).add_argument("--gen", required=True)

    g = _leaf(sub, "cx").add_subparsers(dest="action", required=True, parser_class=_Parser)
    q = _leaf(g, "rouquier")
    q.add_argument("--kind", choices=("delta", "nabla"), default="delta")
    q.add_argument("--word", required=True)
    for name in ("conv", "minimize", "unit", "dual"):
        _leaf(g, name).add_argument("complex")
    q = _leaf(g, "hom")
    q.add_argument("complex")
    q.add_argument("complex2")

    g = _leaf(sub, "ring").add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name in ("mul", "div"):
        q = _leaf(g, name)
        q.add_argument("arg1")
        q.add_argument("arg2")
    _leaf(g, "snf").add_argument("arg1", help="integer matrix JSON")
    _leaf(g, "reduced").add_argument("arg1", help="weight JSON")

    q = _leaf(sub, "batch")
    q.add_argument("file")
    q.add_argument("--jobs", type=int, default=1)
    q.add_argument("--record", action="store_true", help="overwrite expected outputs")

    _leaf(sub, "selfcheck").add_argument("--samples", type=int, default=50)
    return p


COMMANDS = {"datum": cmd_datum, "weyl": cmd_weyl, "dem": cmd_dem, "bim": cmd_bim, "cx": cmd_cx,
            "ring": cmd_ring, "batch": cmd_batch, "selfcheck": cmd_selfcheck}


def _text(obj, indent=0):
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v)}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(f"{pad}- {json.dumps(v, sort_keys=True)}" for v in obj)
    return pad + json.dumps(obj)


def _render(obj, fmt):
    if fmt == "text":
        return _text(obj) + "\n"
    return json.dumps(obj, sort_keys=True) + "\n"


def run(argv):
    """Execute one command line; returns (exit status, stdout text)."""
    fmt = "json"
    try:
        args = build_parser().parse_args(list(argv))
        fmt = args.format
        bound = args.bound if args.bound is not None else int(os.environ.get("KMSOERGEL_BOUND", "3"))
        if bound <= 0:
            raise UsageError("--bound must be positive")
        D = load_datum(args.datum) if args.datum else None
        S = Session(D, bound, fmt, args.seed)
        return 0, _render(COMMANDS[args.group](S, args), fmt)
    except UsageError as exc:
        return 2, _render({"error": "UsageError", "detail": str(exc)}, fmt)
    except BatchMismatch as exc:
        return 1, _render(exc.report, fmt)
    except (ValueError, ArithmeticError, KeyError, TypeError, LookupError, RuntimeError,
            json.JSONDecodeError) as exc:
        detail = exc.args[0] if len(exc.args) == 1 else list(exc.args)
        if not isinstance(detail, (str, int, list)):
            detail = str(detail)
        return 1, _render({"error": type(exc).__name__, "detail": detail}, fmt)


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    if any(a in ("-h", "--help") for a in argv):
        build_parser().parse_args(argv)
    code, text = run(argv)
    (sys.stdout if code != 2 else sys.stderr).write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
