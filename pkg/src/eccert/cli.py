"""Command-line interface.

Exit codes: 0 success, 2 unreadable or malformed input, 3 a certificate
failed verification, 4 a certificate was issued for a different graph.
"""

from __future__ import annotations

import argparse
import inspect
import logging
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from .certificates import CertificateBundle, FingerprintMismatch, verify_bundle
from .chordal import NotChordalError, chordal_all_ecc, chordal_diameter
from .generators import FAMILIES, GenSpec
from .graph import Graph, GraphFormatError, Ranking, read_graph, restrict_to_core, write_edge_list
from .solvers import VARIANTS, CertificateError, all_eccentricities, diameter, diameter_doubling, radius
from .analysis import profile

EXIT_OK, EXIT_PARSE, EXIT_VERIFY, EXIT_FINGERPRINT = 0, 2, 3, 4


def parse_ranking(spec: str, n: int) -> Ranking:
    if spec == "id":
        return Ranking.identity(n)
    if spec.startswith("random:"):
        return Ranking.random(n, int(spec.split(":", 1)[1]))
    raise ValueError(f"ranking must be 'id' or 'random:<seed>', got {spec!r}")


def load_core(path: str, fmt: str) -> Graph:
    graph = read_graph(path, fmt)
    core, _ = restrict_to_core(graph)
    if core.n != graph.n:
        print(f"# restricted to largest component: {core.n} of {graph.n} nodes", file=sys.stderr)
    return core


def _write_bundle(bundle: CertificateBundle, path: str | None) -> None:
    if path:
        Path(path).write_text(bundle.to_json() + "\n", encoding="utf-8")


def _solve(args: argparse.Namespace) -> int:
    graph = load_core(args.input, args.format)
    ranking = parse_ranking(args.ranking, graph.n)
    check = not args.no_self_check
    if args.command == "radius":
        res = radius(graph, ranking, self_check=check)
        print(f"radius={res.value} center={res.center} sweeps={res.report.sweeps} |L|={len(res.L)}")
    elif args.command == "diameter":
        if args.variant == "doubling":
            res = diameter_doubling(graph, ranking, Fraction(args.alpha), self_check=check)
        elif args.variant == "chordal":
            res = chordal_diameter(graph, ranking, self_check=check)
        else:
            res = diameter(graph, ranking, args.variant, self_check=check)
        print(f"diameter={res.value} diametral={res.diametral} sweeps={res.report.sweeps} |U|={len(res.U)}")
    else:
        solver = chordal_all_ecc if args.chordal else all_eccentricities
        res = solver(graph, ranking, self_check=check)
        print(f"eccentricities: min={int(res.ecc.min())} max={int(res.ecc.max())} "
              f"sweeps={res.report.sweeps} |U|={len(res.U)} |L|={len(res.L)}")
        if args.ecc_out:
            np.savetxt(args.ecc_out, res.ecc, fmt="%d")
    _write_bundle(res.bundle, args.cert_out)
    return EXIT_OK


def _verify(args: argparse.Namespace) -> int:
    graph = load_core(args.input, args.format)
    try:
        bundle = CertificateBundle.from_json(Path(args.cert).read_text(encoding="utf-8"))
    except (ValueError, KeyError) as exc:
        print(f"error: malformed certificate: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        verdict = verify_bundle(graph, bundle)
    except FingerprintMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FINGERPRINT
    print(verdict.summary())
    if not verdict and verdict.uncovered is not None:
        print(f"first uncovered node: {verdict.uncovered}")
    return EXIT_OK if verdict else EXIT_VERIFY


def _append_csv(path: str, text_with_header: str) -> None:
    """Append one row (plus header for a new file) with a single write."""
    fd = os.open(path, os.O_WRONLY | os.O_CREAT | os.O_APPEND, 0o644)
    try:
        lines = text_with_header.splitlines(keepends=True)
        payload = "".join(lines if os.fstat(fd).st_size == 0 else lines[1:])
        os.write(fd, payload.encode("utf-8"))
    finally:
        os.close(fd)


def _profile(args: argparse.Namespace) -> int:
    graph = read_graph(args.input, args.format)
    core, _ = restrict_to_core(graph)
    ranking = parse_ranking(args.ranking, core.n)
    name = args.name or Path(args.input).stem
    prof = profile(core, ranking, full=args.full, name=name, type=args.type)
    text = prof.csv(header=True)
    sys.stdout.write(text)
    if args.csv_out:
        _append_csv(args.csv_out, text)
    return EXIT_OK


_GEN_PARAMS = ("k", "p", "q", "n", "exponent", "target_avg_degree", "deletion_fraction",
               "max_length", "prob")


def _generate(args: argparse.Namespace) -> int:
    fn = FAMILIES[args.family]
    accepted = inspect.signature(fn).parameters
    params = {}
    for name in _GEN_PARAMS:
        value = getattr(args, name)
        key = "p" if name == "prob" else name
        if value is not None and key in accepted and not (name == "p" and args.family == "er"):
            params[key] = value
    seed = args.seed if "seed" in accepted else None
    spec = GenSpec(args.family, params, seed)
    graph = spec.build()
    out = sys.stdout if args.out in (None, "-") else open(args.out, "w", encoding="utf-8")
    try:
        write_edge_list(graph, out, comment=f"generated {spec.describe()}")
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="eccert", description="Certified radius, diameter and eccentricities.")
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    def graph_opts(p: argparse.ArgumentParser) -> None:
        p.add_argument("--input", default="-", help="graph file ('-' for stdin; .gz accepted)")
        p.add_argument("--format", default="auto", choices=["auto", "el", "gr"])
        p.add_argument("--ranking", default="id", help="'id' or 'random:<seed>'")

    for cmd in ("radius", "diameter", "ecc-all"):
        p = sub.add_parser(cmd)
        graph_opts(p)
        p.add_argument("--cert-out", help="write the certificate bundle as JSON")
        p.add_argument("--no-self-check", action="store_true", help="skip re-verifying the bundle")
        if cmd == "diameter":
            p.add_argument("--variant", default="center_init_delegate",
                           choices=list(VARIANTS) + ["doubling", "chordal"])
            p.add_argument("--alpha", default="1/2", help="packing factor for --variant doubling")
        if cmd == "ecc-all":
            p.add_argument("--chordal", action="store_true", help="use the chordal procedure")
            p.add_argument("--ecc-out", help="write one eccentricity per line")

    p = sub.add_parser("verify")
    graph_opts(p)
    p.add_argument("--cert", required=True, help="certificate bundle JSON")

    p = sub.add_parser("profile")
    graph_opts(p)
    p.add_argument("--full", action="store_true", help="also compute the quadratic columns")
    p.add_argument("--csv-out", help="append the row to this CSV file")
    p.add_argument("--name")
    p.add_argument("--type", default="synthetic")

    p = sub.add_parser("generate")
    p.add_argument("--family", required=True, choices=sorted(FAMILIES))
    p.add_argument("--k", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--prob", type=float, help="edge probability for the er family")
    p.add_argument("--exponent", type=float)
    p.add_argument("--target-avg-degree", dest="target_avg_degree", type=float)
    p.add_argument("--deletion-fraction", dest="deletion_fraction", type=float)
    p.add_argument("--max-length", dest="max_length", type=float)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output path (default stdout)")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handlers = {"radius": _solve, "diameter": _solve, "ecc-all": _solve,
                "verify": _verify, "profile": _profile, "generate": _generate}
    try:
        return handlers[args.command](args)
    except (GraphFormatError, FileNotFoundError, UnicodeDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CertificateError as exc:
        print(f"error: self-check failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except NotChordalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
