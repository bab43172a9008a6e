"""Command line front end.

Wires the library into a handful of workflows: build an operator and print
its normal form, analyze its fixed and critical points, compute parameter
stability regions, render dynamical and parameter planes to PPM, run the
built-in verification suites, and list the catalog.

Exit codes: 0 success, 1 usage error, 2 computation error (diagnostic on
stderr), 3 verification failure.  All output uses stable key ordering and
seeded checks, so identical invocations print identical bytes.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

from .analysis import classify_operator, critical_points
from .builder import (SchemeContext, catalog_entry, catalog_names,
                      check_scheme_lambda_odd, conjugated_form, instantiate,
                      parse_scheme)
from .conjugate import (check_iota_symmetry, extract_normal_form,
                        mobius_conjugate, standard_tau)
from .errors import NdynError, UnknownMethod
from .planes import (RenderConfig, dynamical_plane, parameter_plane,
                     write_image, write_metadata)
from .poly import is_inf
from .stability import linearize, stability_region_z1, stability_region_zm1
from .verify import run_all


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits with code 2
        raise UsageError(message)


# ----------------------------------------------------------------------
# literals and formatting

_TERM = r"[+-]?(?:\d+\.?\d*|\.\d+)i?"
_LITERAL = re.compile(rf"^({_TERM})({_TERM})?$")


def parse_complex_literal(text: str) -> complex:
    """Decimal with optional i suffix, composed as a+bi (e.g. 1.5+2i)."""
    m = _LITERAL.match(text.strip())
    if not m:
        raise UsageError(
            f"bad complex literal {text!r}; use forms like 2, -4.5, 1.5+2i")
    value = 0j
    for part in m.groups():
        if not part:
            continue
        if part.endswith("i"):
            value += complex(0.0, float(part[:-1]))
        else:
            value += complex(float(part))
    return value


def _fmt_real(x: float) -> str:
    x = float(x)
    if x == 0.0:
        x = 0.0
    return f"{x:.12g}"


def _fmt_complex(z) -> str:
    if is_inf(z):
        return "inf"
    z = complex(z)
    re_, im = z.real, z.imag
    mag = abs(z)
    if mag > 0.0:
        if abs(im) <= 1e-12 * mag:
            im = 0.0
        if abs(re_) <= 1e-12 * mag:
            re_ = 0.0
    if im == 0.0:
        return _fmt_real(re_)
    if re_ == 0.0:
        return _fmt_real(im) + "i"
    sign = "+" if im > 0 else "-"
    return f"{_fmt_real(re_)}{sign}{_fmt_real(abs(im))}i"


def _emit(payload: dict) -> None:
    print(json.dumps(payload, indent=2))


# ----------------------------------------------------------------------
# shared argument plumbing

def _add_operator_args(p) -> None:
    p.add_argument("--method", help="catalog method name (see `catalog`)")
    p.add_argument("--scheme-file", help="path to a scheme definition file")
    p.add_argument("--param", action="append", default=[],
                   metavar="NAME=VALUE",
                   help="bind a scheme parameter (value per the scheme "
                        "number grammar, e.g. beta=-4 or a=2-9.3i)")
    p.add_argument("--d", type=int, default=2,
                   help="polynomial degree for the scheme (default 2)")
    p.add_argument("--c", default="1",
                   help="polynomial constant term c (default 1)")


def _add_render_args(p, window_default=None) -> None:
    p.add_argument("--window", required=window_default is None,
                   default=window_default, metavar="X0,X1,Y0,Y1",
                   help="view rectangle")
    p.add_argument("--res", default="400x400", metavar="WxH",
                   help="image resolution (default 400x400)")
    p.add_argument("--out", required=True, help="output PPM path")
    p.add_argument("--mode", choices=("speed", "attractor"), default="speed",
                   help="coloring mode (default speed)")
    p.add_argument("--max-iter", type=int, default=150,
                   help="iteration budget per pixel (default 150)")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: NDYN_THREADS or cpu count)")
    p.add_argument("--attractor", action="append", default=[],
                   metavar="VALUE",
                   help="known extra attractor (repeatable); points captured "
                        "by one are reported as strange-attractor pixels")


def _bindings(args) -> dict:
    out = {}
    for item in args.param:
        name, eq, value = item.partition("=")
        if not eq or not name:
            raise UsageError(f"--param expects NAME=VALUE, got {item!r}")
        out[name] = parse_complex_literal(value)
    return out


def _one_source(args) -> str:
    if bool(args.method) == bool(args.scheme_file):
        raise UsageError("exactly one of --method / --scheme-file is required")
    return "method" if args.method else "scheme-file"


def _entry(name):
    try:
        return catalog_entry(name)
    except UnknownMethod as e:
        raise UsageError(str(e))


def _scheme_form(path: str, bindings: dict, c: complex):
    with open(path, encoding="utf-8") as fh:
        ast = parse_scheme(fh.read())
    ctx = SchemeContext(d=2, c=c, bindings=dict(bindings))
    op = instantiate(ast, ctx)
    return ast, extract_normal_form(mobius_conjugate(op, standard_tau(c)))


def _get_form(args):
    """(label, form, scheme ast or None) for the normal-form subcommands."""
    source = _one_source(args)
    bindings = _bindings(args)
    c = parse_complex_literal(args.c)
    if args.d != 2:
        raise NdynError(
            "the palindromic normal form is built from the quadratic "
            "polynomial; use --d 2")
    if source == "method":
        entry = _entry(args.method)
        form = conjugated_form(args.method, bindings, c=c)
        return args.method, form, entry.ast
    ast, form = _scheme_form(args.scheme_file, bindings, c)
    return args.scheme_file, form, ast


def _window(text: str):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 4:
        raise UsageError(f"--window expects X0,X1,Y0,Y1, got {text!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise UsageError(f"--window expects four numbers, got {text!r}")


def _resolution(text: str):
    m = re.match(r"^(\d+)x(\d+)$", text.strip())
    if not m:
        raise UsageError(f"--res expects WxH, got {text!r}")
    return int(m.group(1)), int(m.group(2))


def _render_config(args) -> RenderConfig:
    return RenderConfig(window=_window(args.window),
                        resolution=_resolution(args.res),
                        max_iter=args.max_iter,
                        mode=args.mode,
                        workers=args.threads)


def _write_outputs(img, args, extra: dict) -> None:
    write_image(img, args.out)
    meta = args.out + ".meta"
    write_metadata(img, meta, extra=extra)
    w, h = img.width, img.height
    print(f"wrote {args.out} ({w}x{h}, mode={args.mode})")
    print(f"wrote {meta}")


# ----------------------------------------------------------------------
# subcommands

def _form_payload(label: str, form) -> dict:
    return {
        "method": label,
        "n": form.n,
        "k": form.k,
        "sign": form.sign,
        "degenerate": bool(form.degenerate),
        "a": [_fmt_complex(v) for v in form.a],
        "roots": [_fmt_complex(v) for v in form.roots],
    }


def cmd_build(args) -> int:
    label, form, _ast = _get_form(args)
    _emit(_form_payload(label, form))
    return 0


def cmd_analyze(args) -> int:
    label, form, ast = _get_form(args)
    info = classify_operator(form)
    payload = _form_payload(label, form)
    payload["order_at_roots"] = info["order_at_roots"]
    payload["parity"] = info["parity"]
    payload["one"] = info["one"]
    payload["minus_one"] = info["minus_one"]
    if "cycle_multiplier" in info:
        payload["cycle_multiplier"] = _fmt_complex(info["cycle_multiplier"])
    payload["fixed_points"] = [
        {"point": _fmt_complex(r.point),
         "multiplier": _fmt_complex(r.multiplier),
         "class": r.cls,
         "strange": bool(r.strange)}
        for r in info["fixed_points"]]
    R = form.reconstruct()
    payload["critical_points"] = [
        {"point": _fmt_complex(r.point),
         "multiplicity": r.multiplicity,
         "free": bool(r.free),
         "partner": None if r.partner is None else _fmt_complex(r.partner)}
        for r in critical_points(R)]
    payload["inversion_symmetric"] = bool(check_iota_symmetry(R))
    if ast is not None:
        ctx = SchemeContext(d=args.d, c=parse_complex_literal(args.c),
                            bindings=_bindings(args))
        payload["rotation_symmetry"] = {
            "d": args.d,
            "holds": bool(check_scheme_lambda_odd(ast, ctx, args.d)),
        }
    _emit(payload)
    return 0


def _region_payload(reg) -> dict:
    out = {"kind": reg.kind}
    if reg.kind == "not-applicable":
        return out
    if reg.center is not None:
        out["center"] = _fmt_complex(reg.center)
    if reg.radius is not None:
        out["radius"] = _fmt_real(reg.radius)
    if reg.threshold is not None:
        out["threshold"] = _fmt_real(reg.threshold)
    if reg.attracting_side is not None:
        out["attracting_side"] = reg.attracting_side
    if reg.superattracting_parameter is not None:
        out["superattracting_parameter"] = _fmt_complex(
            reg.superattracting_parameter)
    out["superattracting_everywhere"] = bool(reg.superattracting_everywhere)
    out["indifferent_everywhere"] = bool(reg.indifferent_everywhere)
    if reg.aggregates:
        out["aggregates"] = {key: _fmt_real(val)
                             for key, val in reg.aggregates.items()}
    return out


def _family(args):
    """(label, parameter name, producer) for the one-parameter subcommands."""
    source = _one_source(args)
    bindings = _bindings(args)
    c = parse_complex_literal(args.c)
    if source == "method":
        entry = _entry(args.method)
        if entry.stability_producer is None:
            raise NdynError(
                f"{args.method} has no one-parameter family; pick a method "
                "with a free parameter or use --scheme-file with "
                "--family-param")
        return args.method, entry.stability_param, entry.stability_producer
    name = getattr(args, "family_param", None)
    if not name:
        raise UsageError("--scheme-file needs --family-param NAME")
    path = args.scheme_file
    with open(path, encoding="utf-8") as fh:
        ast = parse_scheme(fh.read())

    def producer(t: complex):
        ctx = SchemeContext(d=2, c=c,
                            bindings={**bindings, name: complex(t)})
        op = instantiate(ast, ctx)
        return extract_normal_form(mobius_conjugate(op, standard_tau(c)))

    return path, name, producer


def cmd_stability(args) -> int:
    label, pname, producer = _family(args)
    lc = linearize(producer)
    payload = {
        "method": label,
        "parameter": pname,
        "n": lc.n,
        "k": lc.k,
        "A": [_fmt_real(v) for v in lc.A],
        "B": [_fmt_real(v) for v in lc.B],
        "z=1": _region_payload(stability_region_z1(lc)),
        "z=-1": _region_payload(stability_region_zm1(lc)),
    }
    _emit(payload)
    return 0


def cmd_dynplane(args) -> int:
    label, form, _ast = _get_form(args)
    cfg = _render_config(args)
    attractors = tuple(parse_complex_literal(v) for v in args.attractor)
    img = dynamical_plane(form.reconstruct(), cfg,
                          known_attractors=attractors)
    _write_outputs(img, args, extra={"subject": label})
    return 0


def cmd_paramplane(args) -> int:
    label, pname, producer = _family(args)
    cfg = _render_config(args)
    attractors = tuple(parse_complex_literal(v) for v in args.attractor)
    img = parameter_plane(producer, cfg, selector=args.selector,
                          known_attractors=attractors)
    _write_outputs(img, args, extra={"subject": label, "parameter": pname})
    return 0


def cmd_verify(args) -> int:
    results = run_all()
    failed = 0
    checks = 0
    for r in results:
        status = "PASS" if r.ok else "FAIL"
        total = r.passed + r.failed
        print(f"{r.name:24s} {status}  {r.passed}/{total}")
        for note in r.notes:
            print(f"  - {note}")
        failed += r.failed
        checks += total
    if failed:
        print(f"{failed} of {checks} checks failed")
        return 3
    print(f"all {checks} checks passed")
    return 0


def cmd_catalog(args) -> int:
    for name in catalog_names():
        entry = catalog_entry(name)
        if entry.nk is None:
            shape = "not palindromic"
        else:
            shape = f"n={entry.nk[0]} k={entry.nk[1]}"
        params = ", ".join(entry.params) if entry.params else "-"
        print(f"{name:18s} {shape:18s} params: {params}")
    return 0


# ----------------------------------------------------------------------

def _build_parser() -> _Parser:
    parser = _Parser(prog="ndyn",
                     description="Dynamics of Newton-like root finders in "
                                 "palindromic normal form.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("build", help="print the normal form")
    _add_operator_args(p)
    p.set_defaults(fn=cmd_build)

    p = sub.add_parser("analyze",
                       help="fixed points, critical points, symmetry")
    _add_operator_args(p)
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("stability",
                       help="parameter stability regions for z = +-1")
    _add_operator_args(p)
    p.add_argument("--family-param", default=None,
                   help="varying parameter name (scheme files only)")
    p.set_defaults(fn=cmd_stability)

    p = sub.add_parser("dynplane", help="render a dynamical plane")
    _add_operator_args(p)
    _add_render_args(p, window_default="-3,3,-3,3")
    p.set_defaults(fn=cmd_dynplane)

    p = sub.add_parser("paramplane", help="render a parameter plane")
    _add_operator_args(p)
    p.add_argument("--family-param", default=None,
                   help="varying parameter name (scheme files only)")
    _add_render_args(p)
    p.add_argument("--selector", type=int, default=None,
                   help="free critical pair index when several exist")
    p.set_defaults(fn=cmd_paramplane)

    p = sub.add_parser("verify", help="run the built-in property suites")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("catalog", help="list built-in methods")
    p.set_defaults(fn=cmd_catalog)

    return parser


# flags whose values may start with a minus sign (windows, complex literals)
_VALUE_FLAGS = ("--window", "--c", "--attractor", "--param")


def _merge_negative_values(argv):
    """Turn `--window -1,5,-3,3` into `--window=-1,5,-3,3` so the parser
    does not mistake the value for an option."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv) \
                and re.match(r"^-[\d.]", argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    parser = _build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(_merge_negative_values(list(argv)))
        return args.fn(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 1
    except NdynError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
