"""Command line interface.

Exit codes: 0 success, 2 domain error (certificate JSON on stderr), 1 usage
or parse error.  ``MACLANE_LOG`` in {off, info, trace} sets the log level.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from fractions import Fraction

from .base_field import fmt_val, parse_base
from .errors import DomainError, ParseError
from .kpoly import KPoly, _split_top, parse_poly, parse_scalar

_LOG_LEVELS = {"off": logging.CRITICAL + 1, "info": logging.INFO, "trace": logging.DEBUG}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with status 2
        raise UsageError(message)


# ----------------------------------------------------------------------------
# handlers: each takes a dict of arguments and returns a JSON-able dict
# ----------------------------------------------------------------------------

def _field(args):
    return parse_base(args.get("base") or "qp:2")


def _poly(args, F, key="poly"):
    if args.get(key) is None:
        raise UsageError(f"missing {key}")
    return parse_poly(args[key], F)


def cmd_approximants(args):
    from .maclane import approximants

    F = _field(args)
    f = _poly(args, F)
    V = approximants(f)
    out = {"base": F.spec, "poly": str(f), "chain": V.to_json(), "e": V.ramification_index(),
           "f": V.residue_degree()}
    if args.get("dot"):
        out["dot"] = chain_dot(V)
    return out


def chain_dot(V) -> str:
    """Graphviz rendering of a chain; edges carry the diskoid parameters."""
    from .diskoid import make_diskoid

    lines = ["digraph approximants {", "  rankdir=LR;", '  node [shape=circle, label=""];',
             '  v0 [shape=point];']
    for i in range(1, V.n + 1):
        st = V.stage(i)
        lab = f"{st.phi}, s={fmt_val(st.mu)}"
        if not st.terminal and st.phi.derivative():
            try:
                lab += f", r={fmt_val(make_diskoid(st.phi, st.mu).r)}"
            except DomainError:
                pass
        shape = "doublecircle" if st.terminal else "circle"
        lines.append(f"  v{i} [shape={shape}];")
        lines.append(f'  v{i - 1} -> v{i} [label="{lab}"];')
    lines.append("}")
    return "\n".join(lines)


def cmd_ramified_approx(args):
    from .wtr import ramified_approx

    F = _field(args)
    res = ramified_approx(_poly(args, F))
    return {"base": F.spec, **res.to_json()}


def cmd_min_disk(args):
    from .diskoid import min_disk_of_roots

    F = _field(args)
    return {"base": F.spec, **min_disk_of_roots(_poly(args, F)).to_json()}


def cmd_diskoid_val(args):
    from .diskoid import diskoid_valuation, make_diskoid

    F = _field(args)
    phi = _poly(args, F, "phi")
    if args.get("s") is None:
        raise UsageError("missing s")
    D = make_diskoid(phi, Fraction(str(args["s"])))
    g = _poly(args, F)
    return {"base": F.spec, "diskoid": D.to_json(), "poly": str(g), "value": fmt_val(diskoid_valuation(D, g))}


def cmd_ec_semistable(args):
    from .elliptic import WModel, semistable_model

    F = _field(args)
    a = [parse_scalar(str(args.get(f"a{i}") or 0), F) for i in (1, 2, 3, 4, 6)]
    res = semistable_model(WModel(F, *a))
    return {"base": F.spec, **res.to_json()}


def _form(args, F, key):
    """A bare comma list ``c_d,...,c_0`` lists the coefficients of X^d, X^(d-1) Y, ..., Y^d;
    anything else is read as an expression in z = X/Y."""
    text = args.get(key)
    if isinstance(text, str) and "," in text and not text.strip().startswith("["):
        return KPoly(F, [parse_scalar(c, F) for c in reversed(_split_top(text))])
    return _poly(args, F, key)


def _ratmap(args, F):
    from .dynres import normalize

    d = args.get("deg")
    f0, f1 = _form(args, F, "f0"), _form(args, F, "f1")
    if d is None and isinstance(args.get("f0"), str) and "," in args["f0"]:
        d = len(_split_top(args["f0"])) - 1
    return normalize(f0, f1, int(d) if d is not None else None)


def cmd_dyn_ordres(args):
    from .dynres import ordres, ordres_at

    F = _field(args)
    f = _ratmap(args, F)
    out = {"base": F.spec, "map": f.to_json(), "ordres": fmt_val(ordres(f))}
    if args.get("t") is not None:
        alpha = parse_scalar(str(args.get("center") or 0), F)
        t = Fraction(str(args["t"]))
        out["center"] = F.format(alpha)
        out["t"] = str(t)
        out["ordres_at"] = fmt_val(ordres_at(f, alpha, t))
    return out


def cmd_dyn_semistable(args):
    from .dynres import mrl_search, semistable_check

    F = _field(args)
    f = _ratmap(args, F)
    res = mrl_search(f)
    ok, cert = semistable_check(res.conjugated)
    return {"base": F.spec, "map": f.to_json(), **res.to_json(), "semistable": ok, "slopes": cert}


def cmd_bounds(args):
    from .dynres import degree_bounds

    if args.get("p") is None or args.get("d") is None:
        raise UsageError("bounds needs p and d")
    return degree_bounds(int(args["p"]), int(args["d"])).to_json()


COMMANDS = {
    "approximants": cmd_approximants,
    "ramified-approx": cmd_ramified_approx,
    "min-disk": cmd_min_disk,
    "diskoid-val": cmd_diskoid_val,
    "ec-semistable": cmd_ec_semistable,
    "dyn-ordres": cmd_dyn_ordres,
    "dyn-semistable": cmd_dyn_semistable,
    "bounds": cmd_bounds,
}


# ----------------------------------------------------------------------------
# argument parsing and output
# ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="ramapprox", description=__doc__.splitlines()[0])
    ap.add_argument("--batch", metavar="FILE", help="JSONL requests, one per line ('-' for stdin)")
    ap.add_argument("--json", action="store_true", help="emit JSON")
    sub = ap.add_subparsers(dest="cmd")

    def common(name, poly=True):
        p = sub.add_parser(name)
        p.add_argument("--base", default="qp:2", help="qp:<p>, fpt:<p> or qt")
        p.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        if poly:
            p.add_argument("poly")
        return p

    common("approximants").add_argument("--dot", action="store_true", help="emit a Graphviz chain")
    common("ramified-approx")
    common("min-disk")
    p = common("diskoid-val")
    p.add_argument("--phi", required=True)
    p.add_argument("--s", required=True)
    p = common("ec-semistable", poly=False)
    for i in (1, 2, 3, 4, 6):
        p.add_argument(f"--a{i}", default="0")
    for name in ("dyn-ordres", "dyn-semistable"):
        p = common(name, poly=False)
        p.add_argument("--deg", type=int)
        p.add_argument("--f0", required=True)
        p.add_argument("--f1", required=True)
        if name == "dyn-ordres":
            p.add_argument("--center")
            p.add_argument("--t")
    p = sub.add_parser("bounds")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    return ap


def _text(out: dict) -> str:
    if "dot" in out:
        return out["dot"]
    lines = []
    for k, v in out.items():
        lines.append(f"{k}: {v if isinstance(v, (str, int, bool)) or v is None else json.dumps(v, default=str)}")
    return "\n".join(lines)


def _dumps(obj) -> str:
    return json.dumps(obj, default=str, sort_keys=False)


def execute(cmd: str, args: dict) -> dict:
    """Run one request; raises DomainError / ParseError / UsageError."""
    if cmd not in COMMANDS:
        raise UsageError(f"unknown command {cmd!r}")
    return COMMANDS[cmd](args)


def _batch(path: str, stream) -> int:
    fh = sys.stdin if path == "-" else open(path, encoding="utf-8")
    worst = 0
    with fh:
        for line in fh:
            if not line.strip():
                stream.write(_dumps({"ok": False, "error": "UsageError", "message": "empty line"}) + "\n")
                worst = max(worst, 1)
                continue
            try:
                req = json.loads(line)
                inp = req.get("input", {})
                args = dict(inp) if isinstance(inp, dict) else {"poly": inp}
                args.setdefault("base", req.get("base"))
                res = {"ok": True, "result": execute(req.get("cmd"), args)}
            except DomainError as exc:
                res = {"ok": False, **exc.to_json()}
                worst = max(worst, 2)
            except (UsageError, ParseError, ValueError, AttributeError) as exc:
                res = {"ok": False, "error": type(exc).__name__, "message": str(exc)}
                worst = max(worst, 1)
            stream.write(_dumps(res) + "\n")
    return 0 if worst == 0 else worst


def _configure_logging(level: int, stream) -> None:
    pkg = logging.getLogger("ramapprox")
    for h in [h for h in pkg.handlers if getattr(h, "_ramapprox_cli", False)]:
        pkg.removeHandler(h)
    pkg.setLevel(level)
    if level <= logging.CRITICAL:
        h = logging.StreamHandler(stream)
        h.setFormatter(logging.Formatter("%(name)s: %(message)s"))
        h._ramapprox_cli = True
        pkg.addHandler(h)
        pkg.propagate = False
    else:
        pkg.propagate = True


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    level = os.environ.get("MACLANE_LOG", "off").lower()
    _configure_logging(_LOG_LEVELS.get(level, _LOG_LEVELS["off"]), stderr)
    try:
        ns = build_parser().parse_args(argv)
        if ns.batch:
            return _batch(ns.batch, stdout)
        if not ns.cmd:
            raise UsageError("no command given")
        args = {k: v for k, v in vars(ns).items() if k not in ("cmd", "batch", "json")}
        out = execute(ns.cmd, args)
    except DomainError as exc:
        stderr.write(_dumps(exc.to_json()) + "\n")
        return 2
    except (UsageError, ParseError, ValueError) as exc:
        stderr.write(f"error: {exc}\n")
        return 1
    stdout.write((_dumps(out) if ns.json else _text(out)) + "\n")
    return 0


def main() -> None:  # pragma: no cover - console entry point
    sys.exit(run())


if __name__ == "__main__":  # pragma: no cover
    main()
