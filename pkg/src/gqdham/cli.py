"""Command line client: define a group and generators, construct, verify,
export.

Talks to the bundled service in process by default, or to a running
server with --server.  Exit codes: 0 verified success, 1 construction or
verification failure, 2 input error.
"""
import argparse
import json
import sys

import httpx

from .abelian import FiniteAbelianGroup
from .group import GqdGroup, WordParseError, normalize_word, parse_word


def _parse_factors(text):
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise WordParseError(f"bad integer list {text!r}")


def _job_group(args):
    factors = _parse_factors(args.factors)
    beta = _parse_factors(args.beta) if args.beta else (0,) * len(factors)
    G = GqdGroup(FiniteAbelianGroup(factors), beta)
    return G, {"invariant_factors": list(factors), "beta": list(beta)}


def _job_gens(G, args):
    if args.gens_json and args.gen:
        raise WordParseError("use --gen words or --gens-json, not both")
    if args.gens_json:
        records = json.loads(args.gens_json)
        if not isinstance(records, list):
            raise WordParseError("--gens-json must hold a list")
        return records
    if not args.gen:
        raise WordParseError("no generators: pass --gen WORD (repeatable)")
    records = []
    for text in args.gen:
        x = normalize_word(G, parse_word(text))
        records.append({"k": list(x.k), "i": x.i, "eps": x.eps})
    return records


def _post(args, path, payload):
    if args.server:
        url = args.server.rstrip("/") + path
        reply = httpx.post(url, json=payload, timeout=300.0)
    else:
        from fastapi.testclient import TestClient

        from .service import app
        reply = TestClient(app).post(path, json=payload)
    return reply.status_code, reply.json()


def _emit(args, text):
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _finish(args, status, body, failable=True):
    if status != 200:
        detail = body.get("detail", body) if isinstance(body, dict) else body
        print(f"error: {detail}", file=sys.stderr)
        return 2
    _emit(args, json.dumps(body, indent=2))
    if not failable:
        return 0
    if body.get("error"):
        return 1
    report = body.get("report")
    if report is not None and not report.get("passed"):
        return 1
    return 0


def cmd_group_info(args):
    G, group = _job_group(args)
    status, body = _post(args, "/group-info",
                         {"group": group, "gens": _job_gens(G, args)})
    return _finish(args, status, body, failable=False)


def _ham_payload(args):
    G, group = _job_group(args)
    return {"group": group, "gens": _job_gens(G, args),
            "radius": args.radius, "inner_radius": args.inner_radius,
            "budget": args.budget, "seed": args.seed}


def cmd_ham_ray(args):
    status, body = _post(args, "/ham-ray", _ham_payload(args))
    return _finish(args, status, body)


def cmd_ham_circle(args):
    status, body = _post(args, "/ham-circle", _ham_payload(args))
    return _finish(args, status, body)


def cmd_verify(args):
    G, group = _job_group(args)
    payload = {"group": group, "gens": _job_gens(G, args),
               "radius": args.radius, "inner_radius": args.inner_radius,
               "budget": args.budget}
    source = args.ray if args.ray else args.circle
    with (sys.stdin if source == "-" else open(source)) as fh:
        artifact = json.load(fh)
    if args.ray:
        payload["ray"] = artifact
    else:
        payload["rays"] = artifact["rays"]
    status, body = _post(args, "/verify", payload)
    return _finish(args, status, body)


def cmd_wall(args):
    payload = {"k": args.k, "l": args.l, "show": args.show,
               "n_lo": args.n_lo, "n_hi": args.n_hi, "format": args.format}
    status, body = _post(args, "/wall", payload)
    if status == 200 and args.format == "dot":
        _emit(args, body["dot"])
        return 0
    return _finish(args, status, body, failable=False)


def cmd_serve(args):
    import uvicorn

    from .service import app
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gqdham",
        description="Hamiltonian double rays and circles on two-ended "
                    "generalized quasi-dihedral Cayley graphs")
    parser.add_argument("--server", default=None,
                        help="URL of a running service; default runs in process")
    sub = parser.add_subparsers(dest="command", required=True)

    group_flags = argparse.ArgumentParser(add_help=False)
    group_flags.add_argument("--factors", default="",
                             help="invariant factors of K, e.g. 2,4 (empty for trivial)")
    group_flags.add_argument("--beta", default="",
                             help="b squared as a K element, e.g. 0,2 (default zero)")
    group_flags.add_argument("--gen", action="append", default=[],
                             metavar="WORD",
                             help="generator word, e.g. 'b', 'a b', 'k(1,0) a- b'; repeatable")
    group_flags.add_argument("--gens-json", default=None,
                             help="generators as a JSON list of {k, i, eps} records")

    verify_flags = argparse.ArgumentParser(add_help=False)
    verify_flags.add_argument("--radius", type=int, default=12)
    verify_flags.add_argument("--inner-radius", type=int, default=10)
    verify_flags.add_argument("--budget", type=int, default=10**5)
    verify_flags.add_argument("--out", default=None, help="write output here")

    p = sub.add_parser("group-info", parents=[group_flags],
                       help="group and generating set summary")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_group_info)

    for name, fn in (("ham-ray", cmd_ham_ray), ("ham-circle", cmd_ham_circle)):
        p = sub.add_parser(name, parents=[group_flags, verify_flags],
                           help=f"construct and verify a {name.split('-')[1]}")
        p.add_argument("--seed", type=int, default=0,
                       help="reserved for sampling commands; fixed default")
        p.set_defaults(fn=fn)

    p = sub.add_parser("verify", parents=[group_flags, verify_flags],
                       help="re-verify an exported ray or circle")
    what = p.add_mutually_exclusive_group(required=True)
    what.add_argument("--ray", help="ray JSON file, or - for stdin")
    what.add_argument("--circle", help="circle JSON file, or - for stdin")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("wall", help="cylinder window with construction overlay")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--show", default="window",
                   choices=["window", "column", "snake", "staircase",
                            "ray", "two-rays", "iso-rows"])
    p.add_argument("--n-lo", type=int, default=-8)
    p.add_argument("--n-hi", type=int, default=8)
    p.add_argument("--format", default="json", choices=["dot", "json"])
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_wall)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(fn=cmd_serve)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (WordParseError, ValueError, OSError, json.JSONDecodeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except httpx.HTTPError as err:
        print(f"error: cannot reach server: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
