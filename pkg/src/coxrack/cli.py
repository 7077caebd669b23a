"""Command-line front end.

Subcommands: info (group structure), certify (twist certificate),
hilbert (per-degree symmetrizer ranks for both sign cocycles), dihedral
(admissible diagonal summands and the compatibility report).

Exit codes: 0 success, 1 usage or resource errors, 2 mathematical
falsification (a certified identity failed, with the counterexample
serialized to stderr).  Certificates are byte-identical across runs for
a fixed configuration.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import pickle
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .coxeter import (
    CoxeterMatrix,
    GroupTable,
    InvalidMatrixError,
    NotFiniteError,
    build_group,
    resolve_matrix,
)
from .dihedral import (
    InvalidSummandError,
    admissible_pairs,
    compatible,
    dihedral_yd,
    dynkin_diagram,
    exterior_coefficients,
)
from .extension import CertificationError, PathMismatchError, certificate_json, \
    twist_certificate
from .nichols import (
    DegreeTooLargeError,
    braiding_from_rack,
    hilbert_coeffs,
    total_dimension,
)
from .racks import q_minus, q_plus, rack_from_class, reflection_rack

CACHE_VERSION = 1


@dataclass
class RunConfig:
    """Resolved options shared by the subcommands."""

    matrix: CoxeterMatrix
    json_out: bool
    cache_dir: Path | None
    dmax: int = 4
    nprimes: int = 2
    mode: str = "modular"
    budget: int | None = None
    subrack: str | None = None


def _matrix_digest(matrix: CoxeterMatrix) -> str:
    payload = repr(matrix.rows).encode()
    return hashlib.sha256(payload).hexdigest()[:24]


def load_or_build(matrix: CoxeterMatrix, cache_dir: Path | None) -> GroupTable:
    """Build a group table, using the on-disk cache when enabled."""
    if cache_dir is None:
        return build_group(matrix)
    cache_dir.mkdir(parents=True, exist_ok=True)
    path = cache_dir / f"group-{_matrix_digest(matrix)}.pkl"
    if path.exists():
        with open(path, "rb") as fh:
            payload = pickle.load(fh)
        if payload.get("version") == CACHE_VERSION and \
                payload.get("matrix") == matrix.rows:
            return payload["table"]
    table = build_group(matrix)
    with open(path, "wb") as fh:
        pickle.dump({"version": CACHE_VERSION, "matrix": matrix.rows,
                     "table": table}, fh)
    return table


def _class_indices(g: GroupTable, name: str | None):
    """Resolve --subrack T1/T2/... to reflection indices (None = all of T)."""
    if name is None:
        return None
    classes = g.reflection_classes()
    try:
        num = int(name.upper().lstrip("T"))
    except ValueError:
        raise InvalidMatrixError(f"bad subrack name {name!r}")
    if not 1 <= num <= len(classes):
        raise InvalidMatrixError(
            f"subrack {name!r} out of range; group has {len(classes)} classes")
    return classes[num - 1]


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_info(cfg: RunConfig) -> int:
    g = load_or_build(cfg.matrix, cfg.cache_dir)
    classes = g.reflection_classes()
    data = {
        "schema": "group_info.v1",
        "matrix": [list(r) for r in cfg.matrix.rows],
        "rank": g.rank,
        "order": g.order,
        "positive_roots": g.nroots,
        "reflections": len(g.reflections),
        "class_sizes": [len(c) for c in classes],
        "odd_components": cfg.matrix.odd_components(),
        "all_odd": cfg.matrix.all_odd(),
        "cyclotomic_level": g.level,
    }
    if cfg.json_out:
        print(json.dumps(data, sort_keys=True, indent=2))
    else:
        print(f"|W| = {g.order}   |Phi+| = {g.nroots}   |T| = {len(g.reflections)}")
        print(f"reflection classes: {len(classes)} "
              f"(sizes {', '.join(str(len(c)) for c in classes)})")
        print(f"odd components: {data['odd_components']}")
        print(f"all bond orders odd: {data['all_odd']}")
    return 0


def cmd_certify(cfg: RunConfig, out: Path | None = None) -> int:
    g = load_or_build(cfg.matrix, cfg.cache_dir)
    cert = twist_certificate(g)
    text = certificate_json(cert)
    if out is not None:
        out.write_text(text)
    if cfg.json_out or out is None:
        sys.stdout.write(text)
    ok = (cert["vendramin"] == cert["global"] == cert["twist"] == "pass"
          and cert["split"] == cert["cohomologous"] == cert["all_odd"])
    return 0 if ok else 2


def cmd_hilbert(cfg: RunConfig) -> int:
    g = load_or_build(cfg.matrix, cfg.cache_dir)
    indices = _class_indices(g, cfg.subrack)
    if indices is None:
        rack = reflection_rack(g)
        qp, qm = q_plus(g), q_minus(g)
    else:
        rack = rack_from_class(g, [g.reflections[i].elem for i in indices])
        qp, qm = q_plus(g).restrict(indices), q_minus(g).restrict(indices)
    vp = braiding_from_rack(rack, qp)
    vm = braiding_from_rack(rack, qm)
    rep_p = hilbert_coeffs(vp, cfg.dmax, mode=cfg.mode, nprimes=cfg.nprimes,
                           budget=cfg.budget)
    rep_m = hilbert_coeffs(vm, cfg.dmax, mode=cfg.mode, nprimes=cfg.nprimes,
                           budget=cfg.budget)
    rows = []
    for a, b in zip(rep_p, rep_m):
        rows.append({"degree": a.degree, "ambient_dim": a.ambient_dim,
                     "rank_plus": a.rank, "rank_minus": b.rank,
                     "equal": a.rank == b.rank,
                     "agreed": a.agreed and b.agreed})
    data = {
        "schema": "hilbert_table.v1",
        "matrix": [list(r) for r in cfg.matrix.rows],
        "subrack": cfg.subrack,
        "mode": cfg.mode,
        "primes": list(rep_p[0].primes),
        "rows": rows,
        "total_plus": sum(r.rank for r in rep_p),
        "total_minus": sum(r.rank for r in rep_m),
    }
    if cfg.json_out:
        print(json.dumps(data, sort_keys=True, indent=2))
    else:
        print(f"deg   dim      rank(q+)  rank(q-)  equal")
        for row in rows:
            print(f"{row['degree']:>3} {row['ambient_dim']:>6} "
                  f"{row['rank_plus']:>9} {row['rank_minus']:>9}  "
                  f"{'yes' if row['equal'] else 'NO'}")
        print(f"totals through degree {cfg.dmax}: "
              f"{data['total_plus']} / {data['total_minus']}")
    return 0 if all(r["equal"] and r["agreed"] for r in rows) else 2


def cmd_dihedral(args, json_out: bool) -> int:
    r = args.r
    if r <= 3 or r % 2 == 0:
        print(f"error: the even-dihedral analysis requires r > 3 and odd; "
              f"got r = {r}", file=sys.stderr)
        return 1
    pairs = admissible_pairs(r)
    chosen = _parse_summands(args.summands) if args.summands else None
    data = {
        "schema": "dihedral_report.v1",
        "r": r,
        "admissible_pairs": [list(p) for p in pairs],
        "v0": {"degree": r, "character": r},
    }
    if chosen is not None:
        compat = compatible(r, chosen)
        space = dihedral_yd(r, chosen, v0_copies=args.v0)
        dd = dynkin_diagram(space)
        data["summands"] = [list(p) for p in chosen]
        data["v0_copies"] = args.v0
        data["dimension"] = space.dim
        data["compatible"] = compat
        data["predicted_total"] = 2 ** space.dim if compat else None
        data["dynkin"] = {
            "vertices": list(dd.vertices),
            "edges": {f"{i},{j}": e for (i, j), e in sorted(dd.edges.items())},
        }
        if args.check:
            total, reports = total_dimension(space, budget=args.budget)
            data["computed_total"] = total
            data["ranks"] = [rep.rank for rep in reports]
            if compat and total != 2 ** space.dim:
                print("error: computed total contradicts the prediction",
                      file=sys.stderr)
                return 2
            if compat and data["ranks"][:-1] != \
                    exterior_coefficients(space.dim)[:-1]:
                print("error: ranks are not the exterior binomials",
                      file=sys.stderr)
                return 2
    if json_out:
        print(json.dumps(data, sort_keys=True, indent=2))
    else:
        print(f"r = {r}: admissible two-dimensional summands {pairs}")
        if chosen is not None:
            print(f"sum of {chosen} plus {args.v0} trivial-type lines: "
                  f"dim {data['dimension']}, compatible: {data['compatible']}")
            if data["compatible"]:
                print(f"predicted total dimension 2^{data['dimension']} = "
                      f"{data['predicted_total']}")
            if args.check:
                print(f"computed total {data['computed_total']} "
                      f"with ranks {data['ranks']}")
    return 0


def _parse_summands(text: str) -> list[tuple[int, int]]:
    out = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        bits = [int(v) for v in part.split(",")]
        if len(bits) != 2:
            raise InvalidSummandError(f"summand {part!r} must be 'h,j'")
        out.append((bits[0], bits[1]))
    return out


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def _add_matrix_args(sub):
    sub.add_argument("target", nargs="?",
                     help="preset name (A3, B2, I2(7), ...) or matrix file")
    sub.add_argument("--preset", help="preset name (alternative to target)")
    sub.add_argument("--input", help="matrix file path (alternative to target)")
    sub.add_argument("--cache-dir", type=Path, default=None,
                     help="cache directory for group tables")
    sub.add_argument("--json", action="store_true", help="JSON output")


def _resolve(args) -> CoxeterMatrix:
    spec = args.preset or args.input or args.target
    if spec is None:
        raise InvalidMatrixError("no preset or matrix file given")
    return resolve_matrix(str(spec))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coxrack",
        description="reflection racks of finite Coxeter groups: cocycle "
                    "twists and Nichols algebra Hilbert series")
    parser.add_argument("--version", action="version",
                        version=f"coxrack {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    p_info = subs.add_parser("info", help="group and reflection structure")
    _add_matrix_args(p_info)

    p_cert = subs.add_parser("certify", help="emit the twist certificate")
    _add_matrix_args(p_cert)
    p_cert.add_argument("--out", type=Path, default=None,
                        help="also write the certificate to a file")

    p_hil = subs.add_parser("hilbert",
                            help="per-degree symmetrizer ranks, both cocycles")
    _add_matrix_args(p_hil)
    p_hil.add_argument("--dmax", type=int, default=4)
    p_hil.add_argument("--primes", type=int, default=2, dest="nprimes")
    p_hil.add_argument("--mode", choices=("modular", "exact"),
                       default="modular")
    p_hil.add_argument("--budget", type=int, default=None,
                       help="max ambient columns per degree")
    p_hil.add_argument("--subrack", default=None,
                       help="restrict to a reflection class (T1, T2, ...)")

    p_dih = subs.add_parser("dihedral",
                            help="admissible diagonal summands for even "
                                 "dihedral groups of twice an odd order")
    p_dih.add_argument("r", type=int, help="odd half-order parameter (> 3)")
    p_dih.add_argument("--summands", default=None,
                       help="semicolon-separated h,j pairs, e.g. '5,1;5,3'")
    p_dih.add_argument("--v0", type=int, default=0,
                       help="copies of the one-dimensional summand")
    p_dih.add_argument("--check", action="store_true",
                       help="cross-check the prediction by symmetrizer ranks")
    p_dih.add_argument("--budget", type=int, default=None)
    p_dih.add_argument("--json", action="store_true")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        if args.command == "dihedral":
            return cmd_dihedral(args, args.json)
        matrix = _resolve(args)
        cfg = RunConfig(matrix=matrix, json_out=args.json,
                        cache_dir=args.cache_dir)
        if args.command == "info":
            return cmd_info(cfg)
        if args.command == "certify":
            return cmd_certify(cfg, out=args.out)
        if args.command == "hilbert":
            cfg.dmax = args.dmax
            cfg.nprimes = args.nprimes
            cfg.mode = args.mode
            cfg.budget = args.budget
            cfg.subrack = args.subrack
            return cmd_hilbert(cfg)
        parser.error(f"unknown command {args.command}")
        return 1
    except (PathMismatchError, CertificationError) as exc:
        print(json.dumps({"falsification": exc.details}, sort_keys=True),
              file=sys.stderr)
        return 2
    except (InvalidMatrixError, InvalidSummandError, NotFiniteError,
            DegreeTooLargeError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
