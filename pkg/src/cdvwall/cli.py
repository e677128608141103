"""Command-line surface: every subcommand reads a flag-based config (with
an optional JSON config file supplying defaults), produces byte-identical
output for identical configs, and exits nonzero on any violation or
oracle mismatch."""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional

from . import __version__
from .arrangement import (
    GeometryError,
    enumerate_chambers,
    gallery_through_wall,
)
from .bps import (
    ClassError,
    SymmetryConfig,
    geometric_verdict,
    gv_transport,
    orbit_partition,
    window_classes,
)
from .dihedral import run_case
from .dynkin import (
    DiagramError,
    build_diagram,
    enumerate_roots,
    imaginary_root,
    real_roots_window,
    root_count_formula,
)
from .exports import chamber_graph_dot, groupoid_dot, level_slice_svg
from .groupoid import compose, induced_root_map, mutation_data
from .linalg import is_colinear
from .oracle import oracle_chamber_probe, oracle_gcd_check, oracle_restricted_roots
from .restriction import (
    DynkinType,
    check_gcd_closure,
    imaginary_restriction,
    proper_subsets,
    restricted_roots,
)

COMMANDS = (
    "roots", "restricted-roots", "check-gcd", "chambers", "gallery", "mutate",
    "vanishing-table", "orbits", "gv-map", "dihedral-check", "selftest", "export",
)


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class JobConfig:
    family: str = "A"
    rank: int = 2
    affine: bool = False
    contracted: tuple[int, ...] = ()
    kmax: int = 3
    maxlen: int = 6
    rigidified: bool = False
    weighted_homogeneous: bool = False
    non_flop: tuple[int, ...] = ()
    chi_max: int = 4
    beta_max: int = 2
    fmt: str = "json"
    out: Optional[str] = None
    n: int = 2

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "rank": self.rank,
            "affine": self.affine,
            "contracted": list(self.contracted),
            "kmax": self.kmax,
            "maxlen": self.maxlen,
            "rigidified": self.rigidified,
            "weighted_homogeneous": self.weighted_homogeneous,
            "non_flop": list(self.non_flop),
            "window": {"chi": self.chi_max, "beta": self.beta_max},
            "format": self.fmt,
            "out": self.out,
            "n": self.n,
        }

    @staticmethod
    def from_json(data: dict) -> "JobConfig":
        window = data.get("window", {})
        return JobConfig(
            family=data.get("family", "A"),
            rank=data.get("rank", 2),
            affine=data.get("affine", False),
            contracted=tuple(data.get("contracted", ())),
            kmax=data.get("kmax", 3),
            maxlen=data.get("maxlen", 6),
            rigidified=data.get("rigidified", False),
            weighted_homogeneous=data.get("weighted_homogeneous", False),
            non_flop=tuple(data.get("non_flop", ())),
            chi_max=window.get("chi", 4),
            beta_max=window.get("beta", 2),
            fmt=data.get("format", "json"),
            out=data.get("out"),
            n=data.get("n", 2),
        )


def worker_count() -> int:
    raw = os.environ.get("CDVWALL_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _pmap(fn, items):
    workers = worker_count()
    if workers == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _parse_int_list(text: str, flag: str) -> tuple[int, ...]:
    if not text:
        return ()
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise UsageError(f"--{flag} expects a comma-separated integer list, got {text!r}")


def _parse_window(text: str) -> tuple[int, int]:
    chi, beta = None, None
    for part in text.split(","):
        key, _, value = part.partition("=")
        try:
            if key == "chi":
                chi = int(value)
            elif key == "beta":
                beta = int(value)
            else:
                raise ValueError
        except ValueError:
            raise UsageError(f"--window expects chi=C,beta=B, got {text!r}") from None
    if chi is None or beta is None:
        raise UsageError(f"--window expects chi=C,beta=B, got {text!r}")
    return chi, beta


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cdvwall",
        description="Exact ADE wall-crossing combinatorics and vanishing verdicts",
    )
    parser.add_argument("--version", action="version", version=f"cdvwall {__version__}")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="JSON file with config defaults")
    parser.add_argument("--family", choices=("A", "D", "E"))
    parser.add_argument("--rank", type=int)
    parser.add_argument("--affine", action="store_true", default=None)
    parser.add_argument("--contracted", help="comma-separated contracted nodes")
    parser.add_argument("--kmax", type=int, help="level window bound")
    parser.add_argument("--maxlen", type=int, help="word-length bound for enumeration")
    parser.add_argument("--rigidified", action="store_true", default=None)
    parser.add_argument("--weighted-homogeneous", action="store_true", default=None,
                        dest="weighted_homogeneous")
    parser.add_argument("--non-flop", dest="non_flop",
                        help="comma-separated nodes whose contraction does not flop")
    parser.add_argument("--window", help="class window as chi=C,beta=B")
    parser.add_argument("--format", dest="fmt", choices=("json", "csv", "dot", "svg", "text"))
    parser.add_argument("--out", help="output path (default stdout)")
    parser.add_argument("--n", type=int, help="dihedral family parameter")
    return parser


def config_from_args(args: argparse.Namespace) -> JobConfig:
    cfg = JobConfig()
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            cfg = JobConfig.from_json(json.load(fh))
    updates = {}
    if args.family is not None:
        updates["family"] = args.family
    if args.rank is not None:
        updates["rank"] = args.rank
    if args.affine is not None:
        updates["affine"] = args.affine
    if args.contracted is not None:
        updates["contracted"] = _parse_int_list(args.contracted, "contracted")
    if args.kmax is not None:
        updates["kmax"] = args.kmax
    if args.maxlen is not None:
        updates["maxlen"] = args.maxlen
    if args.rigidified is not None:
        updates["rigidified"] = args.rigidified
    if args.weighted_homogeneous is not None:
        updates["weighted_homogeneous"] = args.weighted_homogeneous
    if args.non_flop is not None:
        updates["non_flop"] = _parse_int_list(args.non_flop, "non-flop")
    if args.window is not None:
        updates["chi_max"], updates["beta_max"] = _parse_window(args.window)
    if args.fmt is not None:
        updates["fmt"] = args.fmt
    if args.out is not None:
        updates["out"] = args.out
    if args.n is not None:
        updates["n"] = args.n
    return replace(cfg, **updates)


def _dtype(cfg: JobConfig) -> DynkinType:
    diagram = build_diagram(cfg.family, cfg.rank, cfg.affine)
    return DynkinType(diagram, frozenset(cfg.contracted))


def _emit(cfg: JobConfig, text: str) -> None:
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(cfg: JobConfig, command: str, results) -> None:
    payload = {"command": command, "config": cfg.to_json(), "results": results}
    _emit(cfg, json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _emit_csv(cfg: JobConfig, header: list[str], rows: list[list]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(str(x) for x in row))
    _emit(cfg, "\n".join(lines) + "\n")


def cmd_roots(cfg: JobConfig) -> int:
    diagram = build_diagram(cfg.family, cfg.rank, cfg.affine)
    if not cfg.affine:
        rts = enumerate_roots(diagram)
        results = {
            "diagram": diagram.to_json(),
            "positive_roots": [list(r) for r in rts.positive_roots],
            "highest_root": list(rts.highest_root),
            "count": len(rts.positive_roots),
        }
    else:
        rim = imaginary_root(diagram)
        window = real_roots_window(diagram, cfg.kmax)
        results = {
            "diagram": diagram.to_json(),
            "imaginary_root": list(rim),
            "real_roots": [
                {"finite": list(r.finite_part), "level": r.level,
                 "coeffs": list(r.expand(diagram))}
                for r in window
            ],
            "count": len(window),
        }
    _emit_json(cfg, "roots", results)
    return 0


def cmd_restricted_roots(cfg: JobConfig) -> int:
    dtype = _dtype(cfg)
    rr = restricted_roots(dtype, cfg.kmax if cfg.affine else None)
    _emit_json(cfg, "restricted-roots", rr.to_json())
    return 0


def cmd_check_gcd(cfg: JobConfig) -> int:
    diagram = build_diagram(cfg.family, cfg.rank, cfg.affine)
    if cfg.contracted:
        subsets = [frozenset(cfg.contracted)]
    else:
        subsets = list(proper_subsets(diagram))

    def one(subset):
        return check_gcd_closure(DynkinType(diagram, subset),
                                 cfg.kmax if cfg.affine else None)

    reports = _pmap(one, subsets)
    total = sum(len(r.violations) for r in reports)
    if cfg.fmt == "json":
        results = {
            "subsets": len(subsets),
            "violations": total,
            "summary": f"{total} violations",
            "failing": [r.to_json() for r in reports if r.violations],
        }
        _emit_json(cfg, "check-gcd", results)
    else:
        _emit(cfg, f"{total} violations\n")
    return 0 if total == 0 else 1


def cmd_chambers(cfg: JobConfig) -> int:
    dtype = _dtype(cfg)
    chambers, edges = enumerate_chambers(dtype, cfg.maxlen)
    if cfg.fmt == "dot":
        _emit(cfg, chamber_graph_dot(chambers, edges))
        return 0
    index = {c.key(): i for i, c in enumerate(chambers)}
    dedup = sorted({(min(index[a], index[b]), max(index[a], index[b]), w)
                    for a, b, w in edges if a in index and b in index},
                   key=lambda e: (e[0], e[1], e[2].normal))
    results = {
        "count": len(chambers),
        "chambers": [c.to_json() for c in chambers],
        "adjacency": [
            {"a": i, "b": j, "wall": w.to_json()} for i, j, w in dedup
        ],
    }
    _emit_json(cfg, "chambers", results)
    return 0


def cmd_gallery(cfg: JobConfig) -> int:
    dtype = _dtype(cfg)
    positives = sorted(
        e.coeffs for e in restricted_roots(dtype, min(cfg.kmax, 1)).elements
        if all(c >= 0 for c in e.coeffs)
    )
    rim = imaginary_restriction(dtype)
    rows = []
    for node in dtype.kept:
        alpha = tuple(dtype.diagram.simple_root(node)[dtype.diagram.index[m]]
                      for m in dtype.kept)
        for rbar in positives:
            if is_colinear(rbar, alpha) or is_colinear(rbar, rim):
                continue
            try:
                gallery = gallery_through_wall(dtype, node, rbar)
            except GeometryError as err:
                rows.append({"node": node, "rbar": list(rbar), "skipped": str(err)})
                continue
            rows.append({
                "node": node,
                "rbar": list(rbar),
                "length": gallery.length,
                "walls": [w.to_json() for w in gallery.walls],
                "labels": [c.label_str() for c in gallery.chambers],
            })
    _emit_json(cfg, "gallery", rows)
    return 0


def cmd_mutate(cfg: JobConfig) -> int:
    dtype = _dtype(cfg)
    if len(dtype.kept) < 2:
        raise UsageError("mutation needs at least two kept nodes")
    if cfg.fmt == "dot":
        _emit(cfg, groupoid_dot(dtype, cfg.maxlen))
        return 0
    rows = []
    for node in dtype.kept:
        omega, iota_node, target = mutation_data(
            dtype.diagram, dtype.contracted, node)
        arrow = compose(dtype, (node,), verify_geometry=dtype.affine)
        rmap = induced_root_map(arrow)
        rows.append({
            "node": node,
            "iota": iota_node,
            "target": sorted(target),
            "omega_word": list(omega.word),
            "induced_matrix": [list(r) for r in rmap.matrix],
        })
    _emit_json(cfg, "mutate", rows)
    return 0


def cmd_vanishing_table(cfg: JobConfig) -> int:
    dtype = _dtype(cfg)
    if dtype.affine:
        raise UsageError("vanishing-table takes a finite type; drop --affine")
    sym = SymmetryConfig(cfg.rigidified, cfg.weighted_homogeneous,
                         frozenset(cfg.non_flop), cfg.chi_max, cfg.beta_max)
    classes = window_classes(dtype, sym)
    rows = []
    for cc in classes:
        verdict = geometric_verdict(dtype, cc, cfg.weighted_homogeneous)
        rows.append((cc, verdict))
    if cfg.fmt == "csv":
        header = ["chi", "beta", "verdict", "paper_ref", "mult"]
        csv_rows = [
            [cc.chi, ";".join(map(str, cc.beta)),
             "forced-zero" if v.forced_zero else "candidate", v.rule, v.mult]
            for cc, v in rows
        ]
        _emit_csv(cfg, header, csv_rows)
        return 0
    results = [
        {"class": cc.to_json(), **v.to_json()} for cc, v in rows
    ]
    _emit_json(cfg, "vanishing-table", results)
    return 0


def cmd_orbits(cfg: JobConfig) -> int:
    dtype = _dtype(cfg)
    if dtype.affine:
        raise UsageError("orbits takes a finite type; drop --affine")
    sym = SymmetryConfig(cfg.rigidified, cfg.weighted_homogeneous,
                         frozenset(cfg.non_flop), cfg.chi_max, cfg.beta_max)
    partition = orbit_partition(dtype, sym)
    if cfg.fmt == "csv":
        header = ["chi", "beta", "rep_chi", "rep_beta"]
        rows = []
        for orbit in partition.orbits:
            rep = orbit[0]
            for member in orbit:
                rows.append([member[0], ";".join(map(str, member[1])),
                             rep[0], ";".join(map(str, rep[1]))])
        _emit_csv(cfg, header, rows)
        return 0
    _emit_json(cfg, "orbits", partition.to_json())
    return 0


def cmd_gv_map(cfg: JobConfig) -> int:
    dtype = _dtype(cfg)
    if dtype.affine:
        raise UsageError("gv-map takes a finite type; drop --affine")
    import itertools

    rows = []
    ranges = [range(0, cfg.beta_max + 1)] * len(dtype.kept)
    for node in dtype.kept:
        flop = node not in cfg.non_flop
        unit = tuple(1 if m == node else 0 for m in dtype.kept)
        for beta in itertools.product(*ranges):
            if all(b == 0 for b in beta):
                continue
            if is_colinear(beta, unit):
                continue
            try:
                rows.append(gv_transport(dtype, beta, node, flop).to_json())
            except ClassError as err:
                rows.append({"node": node, "beta": list(beta), "skipped": str(err)})
    _emit_json(cfg, "gv-map", rows)
    return 0


def cmd_dihedral_check(cfg: JobConfig) -> int:
    report = run_case(cfg.n)
    if cfg.fmt == "text":
        _emit(cfg, ("PASS" if report.ok else "FAIL") + f" dihedral n={cfg.n}\n")
    else:
        _emit_json(cfg, "dihedral-check", report.to_json())
    return 0 if report.ok else 1


def cmd_selftest(cfg: JobConfig) -> int:
    lines = []
    failures = 0

    for family, ranks in (("A", range(1, 9)), ("D", range(4, 9)), ("E", (6, 7, 8))):
        for rank in ranks:
            diagram = build_diagram(family, rank)
            got = len(enumerate_roots(diagram).positive_roots)
            want = root_count_formula(family, rank)
            ok = got == want
            failures += not ok
            lines.append(f"[{'ok' if ok else 'FAIL'}] root count {family}{rank}: {got}")

    def sweep(family: str, rank: int, subsets) -> tuple[int, int]:
        diagram = build_diagram(family, rank)

        def one(subset):
            dtype = DynkinType(diagram, subset)
            engine = restricted_roots(dtype).values()
            agree = oracle_restricted_roots(dtype) == engine
            return agree, oracle_gcd_check(dtype)

        results = _pmap(one, list(subsets))
        return (sum(1 for a, _ in results if not a),
                sum(1 for _, g in results if not g))

    e6 = build_diagram("E", 6)
    bad_rr, bad_gcd = sweep("E", 6, proper_subsets(e6))
    failures += bad_rr + bad_gcd
    lines.append(f"[{'ok' if not (bad_rr or bad_gcd) else 'FAIL'}] oracle E6 all subsets: "
                 f"{bad_rr} set mismatches, {bad_gcd} gcd failures")

    d5 = build_diagram("D", 5)
    bad_rr, bad_gcd = sweep("D", 5, proper_subsets(d5))
    failures += bad_rr + bad_gcd
    lines.append(f"[{'ok' if not (bad_rr or bad_gcd) else 'FAIL'}] oracle D5 all subsets: "
                 f"{bad_rr} set mismatches, {bad_gcd} gcd failures")

    a7 = build_diagram("A", 7)
    all_subsets = list(proper_subsets(a7))
    picked = [all_subsets[(17 * i + 5) % len(all_subsets)] for i in range(50)]
    bad_rr, bad_gcd = sweep("A", 7, picked)
    failures += bad_rr + bad_gcd
    lines.append(f"[{'ok' if not (bad_rr or bad_gcd) else 'FAIL'}] oracle A7 50 subsets: "
                 f"{bad_rr} set mismatches, {bad_gcd} gcd failures")

    a2a = build_diagram("A", 2, affine=True)
    probe = oracle_chamber_probe(DynkinType(a2a, frozenset()), 10_000, box=1)
    failures += len(probe.mismatches)
    lines.append(f"[{'ok' if probe.ok else 'FAIL'}] chamber probe A2 affine: "
                 f"{probe.located} located, {probe.skipped_degenerate} skipped, "
                 f"{len(probe.mismatches)} mismatches")

    status = "PASS" if failures == 0 else "FAIL"
    lines.append(f"selftest {status}: {failures} failures")
    _emit(cfg, "\n".join(lines) + "\n")
    return 0 if failures == 0 else 1


def cmd_export(cfg: JobConfig) -> int:
    dtype = _dtype(cfg)
    if cfg.fmt == "svg":
        fin_kept = [n for n in dtype.kept if n != 0]
        if not dtype.affine or 0 in dtype.contracted or len(fin_kept) != 2:
            raise UsageError("svg export needs an affine type with node 0 kept "
                             "and exactly two kept finite nodes")
        _emit(cfg, level_slice_svg(dtype, cfg.kmax))
        return 0
    if cfg.fmt == "dot":
        if dtype.affine:
            chambers, edges = enumerate_chambers(dtype, cfg.maxlen)
            _emit(cfg, chamber_graph_dot(chambers, edges))
        else:
            _emit(cfg, groupoid_dot(dtype, cfg.maxlen))
        return 0
    raise UsageError("export supports --format dot or svg")


HANDLERS = {
    "roots": cmd_roots,
    "restricted-roots": cmd_restricted_roots,
    "check-gcd": cmd_check_gcd,
    "chambers": cmd_chambers,
    "gallery": cmd_gallery,
    "mutate": cmd_mutate,
    "vanishing-table": cmd_vanishing_table,
    "orbits": cmd_orbits,
    "gv-map": cmd_gv_map,
    "dihedral-check": cmd_dihedral_check,
    "selftest": cmd_selftest,
    "export": cmd_export,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        return HANDLERS[args.command](cfg)
    except (UsageError, DiagramError, ClassError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except GeometryError as err:
        print(f"geometry violation: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
