"""Command-line front end: evaluate W, list spectra, design gains,
cross-check, and simulate.

Every command prints a JSON envelope on stdout::

    {"schema_version": "1", "command": ..., "inputs": ...,
     "result": ..., "warnings": [...]}

with the parsed inputs echoed back and every numeric rendered with 17
significant digits, so identical flags produce byte-identical output.
The one non-JSON mode is ``spectrum --format csv``, which emits a bare
root table instead (header ``branch,re,im,multiplicity``).

Exit codes: 0 success, 2 invalid input, 3 infeasible assignment,
4 verification mismatch.  Set ``DELAYW_KMAX`` to raise the branch
index bound when more than the default number of branches is needed.
"""

import argparse
import json
import math
import os
import sys

from .assign import (
    assign_both,
    assign_current_only,
    assign_delay_only,
    assign_input_delay,
    assign_real_both,
)
from .errors import (
    AlphaOutOfRange,
    ConditionViolated,
    DelayWError,
    DomainError,
    InsufficientData,
    MismatchDetected,
    NonFiniteInput,
    NotAssignableAsRightmost,
)
from .lambertw import K_MAX_DEFAULT, lambert_w
from .oracle import cross_validate
from .sim import (
    ConstantHistory,
    InitialData,
    LinearHistory,
    estimate_dominant_eig_detailed,
    simulate,
)
from .spectrum import ClosedLoopParams, Gains, SystemParams, close_loop, is_stable, spectrum

SCHEMA_VERSION = "1"
ENV_K_MAX = "DELAYW_KMAX"

COMPLEX_GRAMMAR = (
    'complex literal: "<re>", "<im>i", or "<re>+<im>i" / "<re>-<im>i"; '
    'spaces and scientific notation allowed, "j" accepted for "i" '
    '(examples: "-1", "2i", "-0.092484+1.9973i", "1e-2-2.5e+1i")'
)


def parse_complex(text):
    """Parse the documented complex-literal grammar into a complex."""
    t = text.replace(" ", "").replace("I", "i").replace("J", "j").replace("i", "j")
    if not t:
        raise DomainError("empty complex literal")
    # complex() rejects a bare trailing j without a mantissa ("1+j", "-j")
    if t.endswith("j") and (len(t) == 1 or t[-2] in "+-"):
        t = t[:-1] + "1j"
    try:
        val = complex(t)
    except ValueError:
        raise DomainError(f"cannot parse {text!r}; expected {COMPLEX_GRAMMAR}") from None
    if not (math.isfinite(val.real) and math.isfinite(val.imag)):
        raise NonFiniteInput(f"complex literal must be finite, got {text!r}")
    return val


def _k_max():
    raw = os.environ.get(ENV_K_MAX)
    if raw is None:
        return K_MAX_DEFAULT
    try:
        val = int(raw)
    except ValueError:
        raise DomainError(f"{ENV_K_MAX} must be an integer, got {raw!r}") from None
    if val < 0:
        raise DomainError(f"{ENV_K_MAX} must be nonnegative, got {val}")
    return val


# ---------------------------------------------------------------------------
# JSON emission with a fixed numeric format


def _g(x):
    return "%.17g" % x


def _dump(obj, indent=0):
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        rows = (f"{pad}  {json.dumps(k)}: {_dump(v, indent + 1)}" for k, v in obj.items())
        return "{\n" + ",\n".join(rows) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        rows = (f"{pad}  {_dump(v, indent + 1)}" for v in obj)
        return "[\n" + ",\n".join(rows) + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        # JSON has no inf/nan literals; those only reach here inside
        # mismatch reports, as strings they stay machine-readable
        return _g(obj) if math.isfinite(obj) else json.dumps(repr(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if obj is None:
        return "null"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _c(z):
    return {"re": z.real, "im": z.imag}


def _envelope(command, inputs, result, warnings):
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs": inputs,
        "result": result,
        "warnings": list(warnings),
    }


def _inputs_echo(args):
    echo = {}
    for key in sorted(vars(args)):
        if key in ("command", "handler"):
            continue
        val = getattr(args, key)
        if val is not None:
            echo[key] = val
    return echo


def _error_payload(exc):
    payload = {"error": type(exc).__name__, "message": str(exc)}
    residual = getattr(exc, "residual", None)
    if residual is not None:
        payload["residual"] = residual
    margin = getattr(exc, "margin", None)
    if margin is not None:
        payload["margin"] = margin
    gains = getattr(exc, "gains", None)
    if gains is not None:
        payload["would_be_gains"] = {"k": gains.k, "k1d": gains.k1d}
    cl = getattr(exc, "closed_loop", None)
    if cl is not None:
        payload["would_be_closed_loop"] = {"alpha": cl.alpha, "beta": cl.beta, "h": cl.h}
    window = getattr(exc, "window", None)
    if window is not None:
        payload["admissible_v"] = list(window)
    report = getattr(exc, "report", None)
    if report is not None:
        payload["spectrum_count"] = report.spectrum_count
        payload["oracle_count"] = report.oracle_count
        payload["max_distance"] = report.max_distance
        payload["rect"] = _rect_payload(report.rect)
    return payload


def _rect_payload(rect):
    return {
        "re_min": rect.re_min,
        "re_max": rect.re_max,
        "im_min": rect.im_min,
        "im_max": rect.im_max,
    }


def _exit_code(exc):
    if isinstance(exc, MismatchDetected):
        return 4
    if isinstance(exc, (NotAssignableAsRightmost, ConditionViolated, AlphaOutOfRange)):
        return 3
    return 2


# ---------------------------------------------------------------------------
# shared flag handling


def _add_loop_flags(p):
    p.add_argument("--a", type=float, help="plant current-state coefficient")
    p.add_argument("--a1d", type=float, help="plant delayed-state coefficient")
    p.add_argument("--b", type=float, help="plant input gain")
    p.add_argument("--k", type=float, help="current-state feedback gain (default 0)")
    p.add_argument("--k1d", type=float, help="delayed-state feedback gain (default 0)")
    p.add_argument("--alpha", type=float, help="closed-loop current coefficient")
    p.add_argument("--beta", type=float, help="closed-loop delayed coefficient")
    p.add_argument("--h", type=float, required=True, help="delay (positive)")


def _closed_loop_from(args):
    """Build ClosedLoopParams from either flag form.

    Direct form: --alpha --beta --h.  Plant form: --a --a1d --b --h with
    optional gains --k --k1d (omitted gains mean the open loop).
    """
    direct = args.alpha is not None or args.beta is not None
    plant = any(getattr(args, name) is not None for name in ("a", "a1d", "b", "k", "k1d"))
    if direct and plant:
        raise DomainError(
            "give either --alpha --beta --h or --a --a1d --b --h [--k --k1d], not a mix"
        )
    if direct:
        if args.alpha is None or args.beta is None:
            raise DomainError("closed-loop form needs both --alpha and --beta")
        return ClosedLoopParams(args.alpha, args.beta, args.h)
    missing = [f"--{name}" for name in ("a", "a1d", "b") if getattr(args, name) is None]
    if missing:
        raise DomainError(f"plant form needs {' '.join(missing)}")
    sysp = SystemParams(args.a, args.a1d, args.b, args.h)
    k = args.k if args.k is not None else 0.0
    k1d = args.k1d if args.k1d is not None else 0.0
    return close_loop(sysp, Gains(k=k, k1d=k1d))


# ---------------------------------------------------------------------------
# commands


def cmd_wk(args):
    res = lambert_w(args.branch, complex(args.re, args.im), tol=args.tol, k_max=_k_max())
    return {
        "w": _c(res.w),
        "residual": res.residual,
        "iterations": res.iterations,
    }, []


def cmd_spectrum(args):
    cl = _closed_loop_from(args)
    sp = spectrum(cl, args.branches, k_max=_k_max())
    if args.format == "csv":
        lines = ["branch,re,im,multiplicity"]
        for r in sp.roots:
            lines.append(f"{r.branch},{_g(r.s.real)},{_g(r.s.imag)},{r.multiplicity}")
        return "\n".join(lines) + "\n", []
    stable, margin = is_stable(cl)
    result = {
        "closed_loop": {"alpha": cl.alpha, "beta": cl.beta, "h": cl.h},
        "roots": [
            {"branch": r.branch, "re": r.s.real, "im": r.s.imag, "multiplicity": r.multiplicity}
            for r in sp.roots
        ],
        "rightmost": _c(sp.rightmost),
        "stable": stable,
        "margin": margin,
    }
    return result, []


def _target_from(args):
    literal = args.target is not None
    parts = args.target_re is not None or args.target_im is not None
    if literal and parts:
        raise DomainError("give --target or --target-re/--target-im, not both")
    if literal:
        return parse_complex(args.target)
    if args.target_re is None:
        raise DomainError("a target is required: --target or --target-re [--target-im]")
    return complex(args.target_re, args.target_im if args.target_im is not None else 0.0)


_ASSIGN_MODES = {
    "both": assign_both,
    "delay-only": assign_delay_only,
    "current-only": assign_current_only,
    "real-both": assign_real_both,
    "input-delay": assign_input_delay,
}


def cmd_assign(args):
    target = _target_from(args)
    a1d = args.a1d if args.a1d is not None else 0.0
    sysp = SystemParams(args.a, a1d, args.b, args.h, input_delay=args.input_delay)
    if args.alpha is not None and args.mode != "real-both":
        raise DomainError("--alpha selects the decay coefficient for --mode real-both only")
    if args.mode == "real-both":
        res = assign_real_both(sysp, target, alpha_choice=args.alpha)
    else:
        res = _ASSIGN_MODES[args.mode](sysp, target)
    sp = spectrum(res.closed_loop, args.branches, k_max=_k_max())
    result = {
        "mode": res.mode.value,
        "gains": {"k": res.gains.k, "k1d": res.gains.k1d},
        "closed_loop": {
            "alpha": res.closed_loop.alpha,
            "beta": res.closed_loop.beta,
            "h": res.closed_loop.h,
        },
        "predicted_rightmost": _c(res.predicted_rightmost),
        "certificate": res.certificate,
        "confirmation": {
            "branches": args.branches,
            "rightmost": _c(sp.rightmost),
            "distance_to_target": abs(sp.rightmost - res.predicted_rightmost),
        },
    }
    return result, []


def cmd_verify(args):
    cl = _closed_loop_from(args)
    report = cross_validate(cl, args.branches, match_tol=args.match_tol, k_max=_k_max())
    result = {
        "match": True,
        "spectrum_count": report.spectrum_count,
        "oracle_count": report.oracle_count,
        "max_distance": report.max_distance,
        "match_tol": args.match_tol,
        "rect": _rect_payload(report.rect),
    }
    return result, []


def _history_from(text, x0):
    if text is None:
        return ConstantHistory(x0)
    kind, sep, rest = text.partition(":")
    if not sep:
        raise DomainError('history must look like "const:<c>" or "linear:<c0>,<c1>"')
    try:
        if kind == "const":
            return ConstantHistory(float(rest))
        if kind == "linear":
            c0, c1 = (float(part) for part in rest.split(","))
            return LinearHistory(c0, c1)
    except ValueError:
        raise DomainError(f"cannot parse history {text!r}") from None
    raise DomainError(f"unknown history form {kind!r}; use const: or linear:")


def cmd_simulate(args):
    cl = _closed_loop_from(args)
    init = InitialData(args.x0, _history_from(args.phi, args.x0))
    traj = simulate(cl, init, args.tfinal, args.step)
    warnings = []
    if traj.truncated:
        warnings.append(
            f"trajectory truncated at t = {_g(traj.times[-1])}: |x| reached the overflow limit"
        )
    if args.out is not None:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(traj.to_csv())
    prediction = spectrum(cl, 0, k_max=_k_max()).rightmost
    result = {
        "n_samples": len(traj.times),
        "step": traj.step,
        "t_end": traj.times[-1],
        "truncated": traj.truncated,
        "csv_path": args.out,
        "predicted_rightmost": _c(prediction),
        "estimate": None,
        "deviation": None,
    }
    try:
        est = estimate_dominant_eig_detailed(traj)
    except InsufficientData as exc:
        warnings.append(f"estimate unavailable: {exc}")
    else:
        result["estimate"] = {
            "value": _c(est.value),
            "kind": est.kind,
            "fit_residual": est.fit_residual,
            "n_crossings": est.n_crossings,
        }
        result["deviation"] = abs(est.value - prediction)
    return result, warnings


# ---------------------------------------------------------------------------
# parser


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="delayw",
        description="Spectra, stability, and eigenvalue assignment for x'(t) = alpha*x(t) + beta*x(t-h).",
        epilog="exit codes: 0 ok, 2 invalid input, 3 infeasible assignment, 4 verification mismatch",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("wk", help="evaluate one branch of the Lambert W function")
    p.add_argument("--branch", type=int, required=True, help="branch index k")
    p.add_argument("--re", type=float, required=True, help="Re z")
    p.add_argument("--im", type=float, default=0.0, help="Im z (default 0)")
    p.add_argument("--tol", type=float, default=1e-14, help="residual tolerance")
    p.set_defaults(handler=cmd_wk)

    p = sub.add_parser("spectrum", help="enumerate characteristic roots by branch")
    _add_loop_flags(p)
    p.add_argument("--branches", type=int, default=4, help="branch pairs to include (default 4)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(handler=cmd_spectrum)

    p = sub.add_parser(
        "assign",
        help="design feedback gains placing the rightmost eigenvalue",
        epilog="target grammar: " + COMPLEX_GRAMMAR,
    )
    p.add_argument("--a", type=float, required=True, help="plant current-state coefficient")
    p.add_argument("--a1d", type=float, help="plant delayed-state coefficient (default 0)")
    p.add_argument("--b", type=float, required=True, help="plant input gain (nonzero)")
    p.add_argument("--h", type=float, required=True, help="delay (positive)")
    p.add_argument("--input-delay", action="store_true", help="plant is x' = a*x + b*u(t-h)")
    p.add_argument("--target", help="desired rightmost eigenvalue, " + COMPLEX_GRAMMAR)
    p.add_argument("--target-re", type=float, help="real part of the target")
    p.add_argument("--target-im", type=float, help="imaginary part of the target (default 0)")
    p.add_argument(
        "--mode",
        choices=tuple(_ASSIGN_MODES),
        default="both",
        help="which gains carry the design (default: both)",
    )
    p.add_argument("--alpha", type=float, help="decay coefficient choice for --mode real-both")
    p.add_argument("--branches", type=int, default=3, help="branches for the confirmation spectrum")
    p.set_defaults(handler=cmd_assign)

    p = sub.add_parser("verify", help="cross-check the spectrum against the counting oracle")
    _add_loop_flags(p)
    p.add_argument("--branches", type=int, default=4, help="branch pairs to verify (default 4)")
    p.add_argument("--match-tol", type=float, default=1e-8, help="per-root match tolerance")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("simulate", help="integrate the loop and estimate the dominant eigenvalue")
    _add_loop_flags(p)
    p.add_argument("--x0", type=float, default=1.0, help="state at t = 0 (default 1)")
    p.add_argument(
        "--phi",
        help='history on [-h, 0): "const:<c>" or "linear:<c0>,<c1>" '
        "with phi(t) = c0 + c1*t (default: const:<x0>)",
    )
    p.add_argument("--tfinal", type=float, required=True, help="integration horizon (>= h)")
    p.add_argument("--step", type=float, help="target step, snapped to divide h (default h/1000)")
    p.add_argument("--out", help="write the trajectory CSV (header t,x) to this path")
    p.set_defaults(handler=cmd_simulate)

    return parser


def _glue_target(argv):
    """Join "--target -1+2i" into "--target=-1+2i".

    argparse would otherwise read a leading minus as an option prefix
    and reject the value.
    """
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok == "--target" and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(tok + "=" + argv[i + 1])
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    args = _build_parser().parse_args(_glue_target(argv))
    try:
        out, warnings = args.handler(args)
    except DelayWError as exc:
        env = _envelope(args.command, _inputs_echo(args), _error_payload(exc), [])
        print(_dump(env))
        return _exit_code(exc)
    if isinstance(out, str):
        # csv mode bypasses the envelope
        print(out, end="")
        return 0
    print(_dump(_envelope(args.command, _inputs_echo(args), out, warnings)))
    return 0


if __name__ == "__main__":
    sys.exit(main())
