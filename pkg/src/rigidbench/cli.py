"""Command-line front end.

The CLI owns file I/O and exit codes and delegates every computation to
the service layer: either a remote instance named by --server or an
in-process application spoken to over an ASGI transport, so offline use
needs no running daemon.  Exit codes: 0 ok, 2 usage or parse problem,
3 no certificate applies, 4 refutation not guaranteed.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from pathlib import Path

import httpx

from .scalars import DEFAULT_TOLERANCE
from .service import create_app

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NO_CERTIFICATE = 3
EXIT_REFUTATION_NOT_GUARANTEED = 4

_EXIT_FOR_CODE = {
    "usage": EXIT_USAGE,
    "parse": EXIT_USAGE,
    "no_certificate": EXIT_NO_CERTIFICATE,
    "refutation_not_guaranteed": EXIT_REFUTATION_NOT_GUARANTEED,
}


class ServiceClient:
    """POST helper that talks to a remote service when a base URL is given
    and to an in-process application otherwise."""

    def __init__(self, server: str | None):
        self.server = server

    def post(self, path: str, payload: dict):
        async def issue():
            if self.server is None:
                transport = httpx.ASGITransport(app=create_app())
                async with httpx.AsyncClient(
                    transport=transport, base_url="http://rigidbench.internal", timeout=None
                ) as client:
                    return await client.post(path, json=payload)
            async with httpx.AsyncClient(base_url=self.server, timeout=None) as client:
                return await client.post(path, json=payload)

        response = asyncio.run(issue())
        try:
            body = response.json()
        except ValueError:
            body = {}
        return response.status_code, body


def _json_document(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _fail(body: dict) -> int:
    detail = body.get("detail") if isinstance(body, dict) else None
    if isinstance(detail, dict):
        code = detail.get("code", "usage")
        message = detail.get("message", "request failed")
    else:
        code = "usage"
        message = "request failed" if detail is None else json.dumps(detail)
    if code == "refutation_not_guaranteed":
        print(f"REFUTATION_NOT_GUARANTEED {message}")
    else:
        print(f"error: {message}", file=sys.stderr)
    return _EXIT_FOR_CODE.get(code, 1)


def _emit(args, body: dict, text_lines) -> None:
    if args.format == "json":
        sys.stdout.write(_json_document(body))
    else:
        for line in text_lines:
            print(line)


def _cmd_gen(args, client: ServiceClient) -> int:
    status, body = client.post(
        "/gen",
        {
            "family": args.family,
            "size_param": args.size_param,
            "approximate": args.approximate,
        },
    )
    if status != 200:
        return _fail(body)
    if args.out is not None:
        args.out.write_text(body["matrix"])
        _emit(args, body, [])
    elif args.format == "json":
        sys.stdout.write(_json_document(body))
    else:
        sys.stdout.write(body["matrix"])
    return EXIT_OK


def _cmd_rank(args, client: ServiceClient) -> int:
    status, body = client.post(
        "/rank",
        {
            "matrix": args.matrix.read_text(),
            "numerical": args.numerical,
            "tolerance": args.tolerance,
        },
    )
    if status != 200:
        return _fail(body)
    _emit(args, body, [body["summary"]])
    return EXIT_OK


def _cmd_bound(args, client: ServiceClient) -> int:
    status, body = client.post(
        "/bound",
        {"matrix": args.matrix.read_text(), "target_rank": args.r},
    )
    if status != 200:
        return _fail(body)
    cert_path = args.cert_out or Path(f"{args.matrix}.r{args.r}.cert.json")
    cert_path.write_text(_json_document(body["certificate"]))
    _emit(args, body, [body["summary"]])
    return EXIT_OK


def _cmd_refute(args, client: ServiceClient) -> int:
    status, body = client.post(
        "/refute",
        {
            "matrix": args.matrix.read_text(),
            "perturbation": args.perturbation.read_text(),
            "target_rank": args.r,
        },
    )
    if status != 200:
        return _fail(body)
    witness_path = args.witness_out or Path(f"{args.perturbation}.witness.json")
    witness_path.write_text(_json_document(body["witness"]))
    _emit(args, body, [body["summary"]])
    return EXIT_OK


def _cmd_rigidity(args, client: ServiceClient) -> int:
    status, body = client.post(
        "/rigidity",
        {
            "matrix": args.matrix.read_text(),
            "target_rank": args.r,
            "exact": args.exact,
            "budget": args.budget,
            "seed": args.seed,
            "tolerance": args.tolerance,
        },
    )
    if status != 200:
        return _fail(body)
    report_path = args.report_out or Path(f"{args.matrix}.r{args.r}.rigidity.json")
    report_path.write_text(_json_document(body["report"]))
    _emit(args, body, [body["summary"]])
    return EXIT_OK


def _cmd_verify_dft(args, client: ServiceClient) -> int:
    status, body = client.post(
        "/verify-dft",
        {"n": args.n, "exponent_offset": args.exponent_offset},
    )
    if status != 200:
        return _fail(body)
    lines = [body["summary"]]
    mismatch = body["mismatch"]
    if mismatch is not None:
        lines.append(
            f"MISMATCH row={mismatch['row']} col={mismatch['col']} "
            f"got={mismatch['got']} want={mismatch['want']}"
        )
    _emit(args, body, lines)
    return EXIT_OK


def _cmd_serve(args, client: ServiceClient) -> int:
    import uvicorn

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return EXIT_OK


def _add_global_options(parser: argparse.ArgumentParser, suppress: bool) -> None:
    # Subparsers re-declare the globals with SUPPRESS defaults so a flag
    # given after the subcommand wins without erasing one given before it.
    def default(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument(
        "--server",
        metavar="URL",
        default=default(None),
        help="base URL of a running service; default runs in process",
    )
    parser.add_argument(
        "--tolerance",
        type=float,
        default=default(DEFAULT_TOLERANCE),
        help="numerical rank tolerance for approx mode",
    )
    parser.add_argument(
        "--format",
        choices=("text", "json"),
        default=default("text"),
        help="stdout format",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rigidbench",
        description="matrix rigidity workbench: constructions, exact rank, "
        "lower-bound certificates, refutation, and rigidity search",
    )
    _add_global_options(parser, suppress=False)
    shared = argparse.ArgumentParser(add_help=False)
    _add_global_options(shared, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", parents=[shared], help="write a matrix family member in canonical text form")
    gen.add_argument("family", choices=("sylvester", "dft"))
    gen.add_argument("size_param", type=int, help="sylvester: iteration count k; dft: side n")
    gen.add_argument("--approximate", action="store_true", help="dft only: complex floats instead of cyclotomics")
    gen.add_argument("-o", "--out", type=Path, help="output file; default stdout")

    rank = sub.add_parser("rank", parents=[shared], help="rank of a matrix file")
    rank.add_argument("matrix", type=Path)
    rank.add_argument("--numerical", action="store_true", help="force the tolerance-based computation")

    bound = sub.add_parser("bound", parents=[shared], help="best rigidity lower-bound certificate")
    bound.add_argument("matrix", type=Path)
    bound.add_argument("r", type=int, help="target rank")
    bound.add_argument("--cert-out", type=Path, help="certificate path; default <matrix>.r<r>.cert.json")

    refute = sub.add_parser("refute", parents=[shared], help="show a perturbation cannot reach the target rank")
    refute.add_argument("matrix", type=Path)
    refute.add_argument("perturbation", type=Path)
    refute.add_argument("r", type=int, help="target rank")
    refute.add_argument("--witness-out", type=Path, help="witness path; default <perturbation>.witness.json")

    rigidity = sub.add_parser("rigidity", parents=[shared], help="rigidity interval from certificates and search")
    rigidity.add_argument("matrix", type=Path)
    rigidity.add_argument("r", type=int, help="target rank")
    rigidity.add_argument("--exact", action="store_true", help="require exact enumeration (rank 1, side <= 6)")
    rigidity.add_argument("--budget", type=int, default=200, help="search iteration budget")
    rigidity.add_argument("--seed", type=int, default=0, help="search seed")
    rigidity.add_argument("--report-out", type=Path, help="report path; default <matrix>.r<r>.rigidity.json")

    verify = sub.add_parser("verify-dft", parents=[shared], help="check the Fourier matrix block decomposition")
    verify.add_argument("n", type=int)
    verify.add_argument("--exponent-offset", type=int, default=0, help="shift the diagonal scaling exponents (0 is the identity that holds)")

    serve = sub.add_parser("serve", parents=[shared], help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)

    return parser


_HANDLERS = {
    "gen": _cmd_gen,
    "rank": _cmd_rank,
    "bound": _cmd_bound,
    "refute": _cmd_refute,
    "rigidity": _cmd_rigidity,
    "verify-dft": _cmd_verify_dft,
    "serve": _cmd_serve,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    client = ServiceClient(args.server)
    try:
        return _HANDLERS[args.command](args, client)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except httpx.HTTPError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
