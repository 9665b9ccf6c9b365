"""Command-line client for the polarshort service.

Each subcommand builds a request model, dispatches it to the service (the
in-process handlers by default, or a remote instance via --server) and
formats the response into files and stdout.  Outputs carry a provenance
header and are byte-identical across reruns with the same arguments.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .service import schemas
from .service.app import (
    RequestError,
    handle_compare,
    handle_construct,
    handle_pattern,
    handle_simulate,
    handle_spectrum,
    handle_validate,
)

EXIT_USAGE = 2


class _Client:
    """Dispatches request models in-process or over HTTP."""

    def __init__(self, server: str | None):
        self.server = server.rstrip("/") if server else None

    def call(self, path: str, request, handler, response_model=None):
        if self.server is None:
            return handler(request)
        import httpx

        resp = httpx.post(
            f"{self.server}{path}", json=request.model_dump(), timeout=None
        )
        if resp.status_code != 200:
            raise RequestError(f"server returned {resp.status_code}: {resp.text}")
        data = resp.json()
        return response_model.model_validate(data) if response_model else data


def _provenance(args: argparse.Namespace, fields: list[str]) -> list[str]:
    lines = [f"polarshort version={__version__}"]
    for name in fields:
        lines.append(f"{name}={getattr(args, name)}")
    return lines


def _write(path: str, content: str):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(content)


def _load_pattern_model(path: str) -> schemas.PatternModel:
    obj = json.loads(Path(path).read_text())
    return schemas.PatternModel.model_validate(obj)


def cmd_construct(args, client: _Client) -> int:
    req = schemas.ConstructRequest(n=args.n, design_snr_db=args.design_snr)
    profile = client.call("/construct", req, handle_construct, schemas.ProfileResponse)
    print("rank k = " + ",".join(str(i) for i in profile.rank))
    if args.out:
        header = "\n".join(
            "# " + line for line in _provenance(args, ["n", "design_snr"])
        )
        rank_pos = {ch: pos + 1 for pos, ch in enumerate(profile.rank)}
        rows = [f"{i + 1},{profile.means[i]!r},{profile.b[i]!r},{rank_pos[i + 1]}"
                for i in range(profile.n)]
        _write(args.out, header + "\nindex,mean,b,rank_position\n" + "\n".join(rows) + "\n")
        print(f"profile written to {args.out}")
    return 0


def cmd_pattern(args, client: _Client) -> int:
    req = schemas.PatternRequest(
        n=args.n, n_short=args.n_short, method=args.method, design_snr_db=args.design_snr
    )
    pat = client.call("/pattern", req, handle_pattern, schemas.PatternModel)
    print(f"p = ({','.join(str(i) for i in pat.indices)})")
    if args.out:
        _write(args.out, json.dumps(pat.model_dump(), indent=2) + "\n")
        print(f"pattern written to {args.out}")
    return 0


def cmd_spectrum(args, client: _Client) -> int:
    pattern = _load_pattern_model(args.pattern_file) if args.pattern_file else None
    if pattern is not None:
        check = client.call(
            "/pattern/validate",
            schemas.ValidateRequest(pattern=pattern),
            handle_validate,
            schemas.ValidateResponse,
        )
        if not check.ok:
            sys.stderr.write(
                f"invalid pattern: {len(check.violations)} uncovered rows, "
                f"first: {check.violations[:5]}\n"
            )
            return EXIT_USAGE
    req = schemas.SpectrumRequest(
        n=args.n,
        n_short=args.n_short,
        method=args.method,
        design_snr_db=args.design_snr,
        pattern=pattern,
    )
    report = client.call("/spectrum", req, handle_spectrum)
    print(f"lambda = {report['lambda']} = {report['lambda_decimal']}")
    print(f"d = {report['d']} = {report['d_decimal']}")
    if args.out:
        report["provenance"] = _provenance(args, ["n", "n_short", "method"])
        _write(args.out, json.dumps(report, indent=2, sort_keys=True) + "\n")
        print(f"report written to {args.out}")
    return 0


def cmd_compare(args, client: _Client) -> int:
    req = schemas.CompareRequest(
        n=args.n, n_short=args.n_short, design_snr_db=args.design_snr, eval_x=args.eval_x
    )
    report = client.call("/compare", req, handle_compare)
    print("lambda ranking: " + " >= ".join(report["lambda_ranking"]))
    for name in report["lambda_ranking"]:
        m = report["methods"][name]
        print(f"  {name}: lambda = {m['lambda']}, d = {m['d']}")
    if args.out:
        report["provenance"] = _provenance(args, ["n", "n_short", "design_snr", "eval_x"])
        _write(args.out, json.dumps(report, indent=2, sort_keys=True) + "\n")
        print(f"report written to {args.out}")
    return 0


def _simulate_series(args, client: _Client, method: str):
    n_short = args.n if method == "mother" else args.n_short
    req = schemas.SimulateRequest(
        n=args.n,
        n_short=n_short,
        k=args.k,
        method="pd" if method == "mother" else method,
        design_snr_db=args.design_snr,
        ebn0_db=args.ebn0,
        seed=args.seed,
        stop=schemas.StopModel(
            min_frame_errors=args.min_frame_errors, max_frames=args.max_frames
        ),
        pattern=_load_pattern_model(args.pattern_file)
        if method == "custom"
        else None,
    )
    return client.call("/simulate", req, handle_simulate, schemas.SimulateResponse)


def cmd_simulate(args, client: _Client) -> int:
    methods = [m.strip().lower() for m in args.method.split(",") if m.strip()]
    if not methods:
        sys.stderr.write("no simulation method given\n")
        return EXIT_USAGE
    if "custom" in methods and not args.pattern_file:
        sys.stderr.write("--method custom requires --pattern-file\n")
        return EXIT_USAGE
    out_base = Path(args.out) if args.out else None
    for method in methods:
        result = _simulate_series(args, client, method)
        for p in result.points:
            print(
                f"[{method}] Eb/N0={p.ebn0_db:g} dB  frames={p.frames}  "
                f"BER={p.ber:.6g}  FER={p.fer:.6g}  ci95_ber={p.ci95_ber:.3g}"
            )
        if out_base is None:
            continue
        if len(methods) == 1:
            path = out_base
        else:
            path = out_base.with_name(f"{out_base.stem}_{method}{out_base.suffix}")
        prov = _provenance(
            args,
            ["n", "n_short", "k", "design_snr", "seed", "min_frame_errors", "max_frames"],
        ) + [f"method={method}", f"ebn0={','.join(str(e) for e in args.ebn0)}"]
        if args.format == "csv":
            lines = ["# " + ln for ln in prov]
            lines.append("ebn0_db,frames,bit_errors,frame_errors,ber,fer,ci95_ber,seed")
            for p in result.points:
                lines.append(
                    f"{p.ebn0_db!r},{p.frames},{p.bit_errors},{p.frame_errors},"
                    f"{p.ber!r},{p.fer!r},{p.ci95_ber!r},{p.seed}"
                )
            _write(str(path), "\n".join(lines) + "\n")
        else:
            obj = result.model_dump()
            obj["provenance"] = prov
            _write(str(path), json.dumps(obj, indent=2, sort_keys=True) + "\n")
        print(f"[{method}] results written to {path}")
    return 0


def cmd_serve(args, _client) -> int:
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polarshort",
        description="Polar code construction, rate-compatible shortening and AWGN simulation",
    )
    parser.add_argument("--server", help="base URL of a running service; default runs in-process")
    parser.add_argument("--version", action="version", version=f"polarshort {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common_code(p, n_short=True):
        p.add_argument("--n", type=int, required=True, help="mother code length (power of two)")
        if n_short:
            p.add_argument("--n-short", dest="n_short", type=int, required=True)
        p.add_argument("--design-snr", dest="design_snr", type=float, default=0.0)

    p = sub.add_parser("construct", help="GA reliability profile and channel ranking")
    common_code(p, n_short=False)
    p.add_argument("--out", help="CSV output path")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("pattern", help="generate a shortening pattern")
    common_code(p)
    p.add_argument("--method", choices=["pd", "cw", "rqup"], default="pd")
    p.add_argument("--out", help="pattern JSON output path")
    p.set_defaults(func=cmd_pattern)

    p = sub.add_parser("spectrum", help="path-weight spectrum of one pattern")
    common_code(p)
    p.add_argument("--method", choices=["pd", "cw", "rqup"], default="pd")
    p.add_argument("--pattern-file", dest="pattern_file", help="custom pattern JSON")
    p.add_argument("--out", help="JSON report path")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("compare", help="spectrum-distance comparison of PD/CW/RQUP")
    common_code(p)
    p.add_argument("--eval-x", dest="eval_x", type=float, default=0.5)
    p.add_argument("--out", help="JSON report path")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("simulate", help="Monte Carlo BER/FER sweep")
    common_code(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument(
        "--method",
        default="pd",
        help="comma list of pd,cw,rqup,mother,custom (mother ignores --n-short)",
    )
    p.add_argument("--ebn0", type=lambda s: [float(v) for v in s.split(",")], required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--min-frame-errors", dest="min_frame_errors", type=int, default=100)
    p.add_argument("--max-frames", dest="max_frames", type=int, default=1_000_000)
    p.add_argument("--pattern-file", dest="pattern_file")
    p.add_argument("--out", help="output path (per-method suffix when several)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    client = _Client(args.server)
    try:
        return args.func(args, client)
    except RequestError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (ValueError, FileNotFoundError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
