"""Command-line entry point: verify, search, check, substructures, export.

Every report carries the seed it was produced with and is byte-identical
across runs at the same configuration.  Exit codes: 0 pass, 1 check
failure, 2 usage error, 3 budget exhausted.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from ._backend import backend_choice
from .census import DEFAULT_SAMPLES, enumerate_family_proofs
from .coloring import colorable
from .errors import (
    AmbiguousPairing,
    BudgetExceeded,
    E8KSError,
    NonOrthogonalRequired,
    TimeoutExceeded,
)
from .families import classify_table, family_for_selector, profile
from .proofs import (
    ParityProof,
    is_critical,
    is_parity_proof,
    noncontextuality_gap,
    proof_symbol,
    rank2_refine,
)
from .rays import N_RAYS, build_rays, export_gram_csv, export_rays_csv
from .structure import (
    build_graph,
    check_saturation,
    enumerate_bases,
    load_table,
    pair_occurrence_counts,
    save_table,
    system_symbol,
    table_checksum,
)
from .subsystems import build_kp_sets, extract_E6, extract_E7, is_saturated, kp_report
from .symmetry import (
    export_labeled_csv,
    generate_labeled_table,
    load_generators,
    load_seed_block,
    symmetry_group_order,
)

EXIT_OK = 0
EXIT_CHECK = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


@dataclass(frozen=True)
class RunConfig:
    threshold: float = 1e-9
    enumeration_cap: int = 26
    node_budget: int = 10_000_000
    seed: int = 0
    cache_dir: Path | None = None
    output_format: str = "text"

    def __post_init__(self):
        if not self.threshold > 0:
            raise ValueError("threshold must be positive")
        if self.enumeration_cap <= 0 or self.node_budget <= 0:
            raise ValueError("enumeration cap and node budget must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")
        if self.output_format not in ("json", "csv", "text"):
            raise ValueError(f"unknown output format {self.output_format!r}")


class _Context:
    """Lazily built system objects shared by the subcommands."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self._system = None
        self._graph = None
        self._table = None
        self._labeled = None

    @property
    def system(self):
        if self._system is None:
            self._system = build_rays()
        return self._system

    @property
    def graph(self):
        if self._graph is None:
            self._graph = build_graph(self.system, self.cfg.threshold)
        return self._graph

    @property
    def table(self):
        if self._table is None:
            self._table = self._load_or_enumerate()
        return self._table

    @property
    def labeled(self):
        if self._labeled is None:
            self._labeled = generate_labeled_table(load_generators(self.graph))
        return self._labeled

    def _load_or_enumerate(self):
        cache = self.cfg.cache_dir
        if cache is None:
            return enumerate_bases(self.graph)
        checksum = table_checksum(self.system, self.cfg.threshold)
        path = Path(cache) / f"bases-{checksum[:16]}.txt"
        table = load_table(path, checksum) if path.exists() else None
        if table is None:
            table = enumerate_bases(self.graph)
            path.parent.mkdir(parents=True, exist_ok=True)
            save_table(table, path, checksum)
        return table


def _emit_json(payload: dict) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def _emit_kv(payload: dict, fmt: str) -> None:
    """Flat report: text as `key: value` lines, csv as key,value rows."""
    if fmt == "json":
        _emit_json(payload)
        return
    for key in sorted(payload):
        value = payload[key]
        if fmt == "csv":
            print(f"{key},{json.dumps(value)}")
        else:
            print(f"{key}: {value}")


# --- verify ------------------------------------------------------------------


def cmd_verify(ctx: _Context, profile_census: bool) -> int:
    cfg = ctx.cfg
    checks: list[tuple[str, str, bool]] = []
    classes: dict[str, tuple[int, ...]] = {}

    def record(name: str, got, want) -> None:
        ok = bool(got == want)
        shown = f"{got}" if ok else f"{got} (expected {want})"
        checks.append((name, shown, ok))

    try:
        system = ctx.system
        graph = ctx.graph
        norms = [abs(sum(x * x for x in system.vector(i)) - 1.0) for i in range(1, N_RAYS + 1)]
        record("rays", len(system.coords), N_RAYS)
        record("unitNorm", max(norms) <= 1e-12, True)
        record("degree", int(graph.adjacency.sum(axis=1).max()), 63)
        table = ctx.table
        record("bases", len(table), 2025)
        record("perRay", sorted({table.multiplicity(i) for i in range(1, N_RAYS + 1)}), [135])
        counts = pair_occurrence_counts(table)
        record("pairCooccurrence", sorted(set(counts[graph.adjacency].tolist())), [15])
        record("saturation", check_saturation(table, graph), True)
        labeled = ctx.labeled
        record("labeledTable", len(labeled), 2025)
        record("labelsMatchCliques", labeled.basis_set() == set(table.bases), True)
        record("groupOrder", symmetry_group_order(system, table), 696729600)
        classes = classify_table(table)
        record("profiles", len(classes), 33)
    except E8KSError as exc:
        checks.append((type(exc).__name__, str(exc), False))

    failed = [name for name, _, ok in checks if not ok]
    if cfg.output_format == "json":
        payload = {
            "seed": cfg.seed,
            "checks": {name: {"value": shown, "ok": ok} for name, shown, ok in checks},
            "ok": not failed,
        }
        if profile_census:
            payload["profiles"] = {p: len(v) for p, v in sorted(classes.items())}
        _emit_json(payload)
    else:
        for name, shown, ok in checks:
            print(f"{name}: {shown} {'OK' if ok else 'FAIL'}")
        if profile_census and not failed:
            for name, members in sorted(classes.items()):
                print(f"profile {name}: {len(members)} bases")
        print(f"seed: {cfg.seed}")
    return EXIT_OK if not failed else EXIT_CHECK


# --- search ------------------------------------------------------------------


def _certificate(ctx: _Context, proof: ParityProof, report=None) -> dict:
    """Certificate fields for one proof; criticality recomputed if absent."""
    if report is None:
        report = is_critical(proof, ctx.graph, node_budget=ctx.cfg.node_budget)
    try:
        refined = rank2_refine(proof).text
    except AmbiguousPairing:
        refined = None
    return {
        "family": "+".join(sorted({profile(b) for b in proof.bases})),
        "basisLabels": [list(ctx.labeled.label_of(b)) for b in proof.bases],
        "bases": [list(b) for b in proof.bases],
        "symbol": proof_symbol(proof).text,
        "refinedSymbol": refined,
        "critical": report.critical,
        "witnesses": {
            str(idx): sorted(assignment.ones) for idx, assignment in report.witnesses
        },
    }


def cmd_search(
    ctx: _Context,
    selector: str,
    out_dir: Path,
    samples: int,
    max_certificates: int,
    require_exhaustive: bool,
) -> int:
    cfg = ctx.cfg
    try:
        family = family_for_selector(ctx.table, selector)
    except (KeyError, ValueError) as exc:
        print(f"unknown selector {selector!r}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        census = enumerate_family_proofs(
            family,
            ctx.graph,
            kernel_cap=cfg.enumeration_cap,
            node_budget=cfg.node_budget,
            seed=cfg.seed,
            samples=samples,
            require_exhaustive=require_exhaustive,
        )
    except BudgetExceeded as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET

    out_dir.mkdir(parents=True, exist_ok=True)
    census_path = out_dir / f"census-{selector}.csv"
    with open(census_path, "w") as fh:
        fh.write(f"# seed={cfg.seed} threshold={cfg.threshold:g} cap={cfg.enumeration_cap}\n")
        fh.write("symbol,count,exhaustive\n")
        for symbol in sorted(census.counts):
            fh.write(f"{symbol},{census.counts[symbol]},{census.exhaustive}\n")

    cert_path = out_dir / f"certificates-{selector}.jsonl"
    emitted = 0
    with open(cert_path, "w") as fh:
        for mask in census.critical_masks:
            if emitted >= max_certificates:
                break
            proof = census.proof_from_mask(mask)
            fh.write(json.dumps(_certificate(ctx, proof), sort_keys=True) + "\n")
            emitted += 1

    payload = {
        "seed": cfg.seed,
        "selector": selector,
        "family": family.name,
        "kernelDim": census.kernel_dim,
        "exhaustive": census.exhaustive,
        "explored": census.explored,
        "coverage": census.coverage,
        "critical": census.n_critical,
        "unresolved": census.n_unresolved,
        "symbols": len(census.counts),
        "maxCriticalBases": census.max_critical_bases,
        "censusFile": str(census_path),
        "certificateFile": str(cert_path),
        "certificatesWritten": emitted,
    }
    if cfg.output_format == "json":
        _emit_json({**payload, "counts": dict(sorted(census.counts.items()))})
    else:
        _emit_kv(payload, cfg.output_format)
    return EXIT_OK


# --- check -------------------------------------------------------------------


def _parse_proof_file(path: Path) -> list[tuple[int, ...]]:
    """Bases from JSON (list or {"bases": …}) or a whitespace table."""
    text = path.read_text()
    rows: list[list[int]]
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        rows = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            body = line.split("#", 1)[0].strip()
            if not body:
                continue
            try:
                rows.append([int(tok) for tok in body.split()])
            except ValueError:
                raise ValueError(f"line {lineno}: non-integer token") from None
    else:
        if isinstance(data, dict):
            data = data.get("bases")
        if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
            raise ValueError("JSON input must be a list of bases or have a 'bases' key")
        rows = [[int(x) for x in r] for r in data]
    if not rows:
        raise ValueError("no bases found in input")
    for row in rows:
        if len(row) != 8:
            raise ValueError(f"basis {row} does not have 8 rays")
        for x in row:
            if not 1 <= x <= N_RAYS:
                raise ValueError(f"ray id {x} outside 1..{N_RAYS}")
    return [tuple(row) for row in rows]


def cmd_check(ctx: _Context, path: Path) -> int:
    cfg = ctx.cfg
    try:
        rows = _parse_proof_file(path)
    except (OSError, ValueError) as exc:
        print(f"malformed proof file: {exc}", file=sys.stderr)
        return EXIT_USAGE

    graph = ctx.graph
    for row in rows:
        bad = [
            (i, j)
            for i, j in itertools.combinations(sorted(set(row)), 2)
            if not graph.are_orthogonal(i, j)
        ]
        if len(set(row)) != len(row) or bad:
            print(f"not a basis: {list(row)} (non-orthogonal pairs {bad})", file=sys.stderr)
            return EXIT_CHECK

    if not is_parity_proof(rows):
        _emit_kv({"seed": cfg.seed, "parityProof": False, "verdict": "not a parity proof"},
                 cfg.output_format)
        return EXIT_CHECK

    proof = ParityProof.from_bases(rows)
    report = is_critical(proof, graph, node_budget=cfg.node_budget)
    certificate = _certificate(ctx, proof, report)
    certificate["seed"] = cfg.seed
    certificate["parityProof"] = True
    if report.critical:
        low, high = noncontextuality_gap(proof, report)
        certificate["gap"] = [low, high]
    if cfg.output_format == "json":
        _emit_json(certificate)
    else:
        flat = dict(certificate)
        flat["basisLabels"] = json.dumps(flat["basisLabels"])
        flat["bases"] = json.dumps(flat["bases"])
        flat["witnesses"] = json.dumps(flat["witnesses"], sort_keys=True)
        _emit_kv(flat, cfg.output_format)
    return EXIT_OK


# --- substructures -----------------------------------------------------------


def cmd_substructures(ctx: _Context, which: str, anchor: int, pair, rows) -> int:
    cfg = ctx.cfg
    if which == "e7":
        sub = extract_E7(ctx.table, ctx.graph, anchor)
        payload = {
            "seed": cfg.seed,
            "anchor": anchor,
            "rays": sub.n_rays,
            "bases": sub.n_bases,
            "symbol": sub.symbol.text,
            "saturated": is_saturated(sub, ctx.graph),
            "colorable": colorable(sub.bases, ctx.graph, node_budget=cfg.node_budget)
            is not None,
        }
        _emit_kv(payload, cfg.output_format)
        return EXIT_OK
    if which == "e6":
        i, j = pair
        try:
            sub = extract_E6(ctx.graph, i, j)
        except (NonOrthogonalRequired, ValueError) as exc:
            print(f"invalid ray pair: {exc}", file=sys.stderr)
            return EXIT_USAGE
        payload = {
            "seed": cfg.seed,
            "pair": list(pair),
            "rays": sub.n_rays,
            "bases": sub.n_bases,
            "rayIds": json.dumps(list(sub.rays)),
        }
        _emit_kv(payload, cfg.output_format)
        return EXIT_OK

    block = load_seed_block(ctx.graph)
    kp_sets, pseudo = build_kp_sets(ctx.table, ctx.graph, block)
    if rows is None:
        payload = {
            "seed": cfg.seed,
            "candidates": len(kp_sets) + len(pseudo),
            "kpSets": len(kp_sets),
            "pseudoSets": len(pseudo),
        }
        _emit_kv(payload, cfg.output_format)
        return EXIT_OK
    wanted = {tuple(sorted(block[r])) for r in rows}
    match = next((k for k in kp_sets + pseudo if set(k.seeds) == wanted), None)
    if match is None:
        print(f"no candidate for block rows {sorted(rows)}", file=sys.stderr)
        return EXIT_USAGE
    report = kp_report(match)
    report["seed"] = cfg.seed
    if cfg.output_format == "json":
        _emit_json(report)
    else:
        flat = dict(report)
        flat["seeds"] = json.dumps(flat["seeds"])
        flat["pairs"] = json.dumps(flat["pairs"])
        flat["proofCounts"] = json.dumps(flat["proofCounts"], sort_keys=True)
        _emit_kv(flat, cfg.output_format)
    return EXIT_OK


# --- export ------------------------------------------------------------------


def cmd_export(ctx: _Context, what: str, output: Path) -> int:
    if what == "rays":
        export_rays_csv(ctx.system, output)
    elif what == "gram":
        export_gram_csv(ctx.system, output)
    else:
        export_labeled_csv(ctx.labeled, output)
    print(f"wrote {output}")
    return EXIT_OK


# --- argument plumbing ---------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="e8ks",
        description="Verify, search, and report on the 120-ray parity-proof system.",
    )
    parser.add_argument("--threshold", type=float, default=1e-9,
                        help="orthogonality threshold (default 1e-9)")
    parser.add_argument("--cap", type=int, default=26,
                        help="exhaustive kernel-sweep cap (default 26)")
    parser.add_argument("--node-budget", type=int, default=10_000_000,
                        help="per-solve backtracking node budget (default 1e7)")
    parser.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    parser.add_argument("--cache-dir", type=Path, default=None,
                        help="directory for the cached basis table")
    parser.add_argument("--format", choices=("json", "csv", "text"), default="text",
                        dest="output_format", help="report format (default text)")

    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="build everything and check the invariants")
    p_verify.add_argument("--profile-census", action="store_true",
                          help="also list the 33 basis profiles")

    p_search = sub.add_parser("search", help="census the parity proofs of one family")
    p_search.add_argument("selector", help="type1..type4 or an 8-letter profile")
    p_search.add_argument("--out-dir", type=Path, default=Path("."),
                          help="where census CSV and certificates go (default .)")
    p_search.add_argument("--samples", type=int, default=DEFAULT_SAMPLES,
                          help="random draws when the sweep cap is exceeded")
    p_search.add_argument("--max-certificates", type=int, default=100,
                          help="certificate cap per search (default 100)")
    p_search.add_argument("--require-exhaustive", action="store_true",
                          help="fail with exit 3 instead of sampling")

    p_check = sub.add_parser("check", help="verdict for a proof file")
    p_check.add_argument("file", type=Path, help="JSON or whitespace table, 8 ids per line")

    p_sub = sub.add_parser("substructures", help="extract E7, E6, or KP structures")
    p_sub.add_argument("which", choices=("e7", "e6", "kp"))
    p_sub.add_argument("--anchor", type=int, default=1, help="anchor ray for e7 (default 1)")
    p_sub.add_argument("--rays", type=int, nargs=2, default=(1, 2),
                       metavar=("I", "J"), help="the nonorthogonal pair for e6")
    p_sub.add_argument("--rows", type=lambda s: tuple(int(x) for x in s.split(",")),
                       default=None, help="block rows selecting one KP candidate, e.g. 0,1,2,3,6")

    p_export = sub.add_parser("export", help="write rays, bases, or gram CSV")
    p_export.add_argument("what", choices=("rays", "bases", "gram"))
    p_export.add_argument("--output", type=Path, default=None)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        backend_choice()
        cfg = RunConfig(
            threshold=args.threshold,
            enumeration_cap=args.cap,
            node_budget=args.node_budget,
            seed=args.seed,
            cache_dir=args.cache_dir,
            output_format=args.output_format,
        )
    except ValueError as exc:
        print(f"bad configuration: {exc}", file=sys.stderr)
        return EXIT_USAGE
    ctx = _Context(cfg)
    try:
        if args.command == "verify":
            return cmd_verify(ctx, args.profile_census)
        if args.command == "search":
            return cmd_search(
                ctx,
                args.selector,
                args.out_dir,
                args.samples,
                args.max_certificates,
                args.require_exhaustive,
            )
        if args.command == "check":
            return cmd_check(ctx, args.file)
        if args.command == "substructures":
            return cmd_substructures(ctx, args.which, args.anchor, tuple(args.rays), args.rows)
        if args.command == "export":
            output = args.output or Path(f"{args.what}.csv")
            return cmd_export(ctx, args.what, output)
    except BudgetExceeded as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except TimeoutExceeded as exc:
        print(f"solver budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    parser.error(f"unknown command {args.command!r}")
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
