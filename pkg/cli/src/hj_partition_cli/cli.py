#!/usr/bin/env python3
"""Command-line interface for hj-partition."""

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional

from pydantic import BaseModel

from hj_partition.cograph import (
    cograph_split,
    cotree_of,
    is_universal_bruteforce,
    realize,
    universal_cograph,
)
from hj_partition.construction import (
    ConstructionParams,
    SubsetAudit,
    audit_coverage,
    audit_density,
    audit_local_split,
    construct,
    tiny_has_partition,
)
from hj_partition.decorators import (
    EXIT_BUDGET,
    EXIT_HYPOTHESIS,
    EXIT_INTERNAL,
    EXIT_IO,
    EXIT_OK,
    error_handler,
    run_command,
)
from hj_partition.engine import SplitChoice, disconnected_partition, partition_pair
from hj_partition.errors import (
    BudgetExceeded,
    HeroBudgetExceeded,
    HypothesisViolation,
    InputError,
    InvariantViolation,
    Witness,
)
from hj_partition.graph import Graph, bits, to_dot
from hj_partition.oracles import FPartition, exists_partition, is_split, verify_partition, verify_split
from hj_partition.schemas import (
    AuditFile,
    ClassModel,
    ConstructionAuditModel,
    ConstructionFile,
    CotreeFile,
    CotreeNode,
    GraphModel,
    HeroFile,
    HyperedgeModel,
    NormalizationModel,
    OracleFile,
    ParamsModel,
    PartitionFile,
    PatternsFile,
    RunConfig,
    SplitFile,
    SubsetAuditModel,
    TournamentModel,
    WitnessFile,
    model_of,
    read_cotree,
    read_graph,
    read_model,
    read_tournament,
    structure_of,
    write_model,
)
from hj_partition.tournament import hero_color, two_tourn_partition, verify_tournament_partition

logger = logging.getLogger("hj_partition_cli")


# ---------------------------------------------------------------------------
# Shared helpers
# ---------------------------------------------------------------------------


def witness_path(args) -> Path:
    """--witness, else <out>.witness.json next to the artifact, else ./witness.json."""
    if getattr(args, "witness", None):
        return Path(args.witness)
    out = getattr(args, "out", None)
    if out:
        out = Path(out)
        return out.with_name(out.stem + ".witness.json")
    return Path("witness.json")


def write_witness(exc: HypothesisViolation, args) -> tuple[str, str]:
    """Error handler: store the machine-readable witness of a violated hypothesis."""
    path = write_model(witness_path(args), WitnessFile.from_witness(str(exc), exc.witness))
    return f"Hypothesis violated: {exc}", f"witness written to {path}"


def describe_budget(exc: BudgetExceeded) -> tuple[str, str]:
    return f"Refused: {exc}", "raise the matching HJ_* budget to allow it"


def emit(args, model: BaseModel, what: str) -> None:
    """Write the artifact to --out, or print it to stdout."""
    if args.out:
        path = write_model(Path(args.out), model)
        print(f"✓ Wrote {what}: {path}")
    else:
        sys.stdout.write(model.model_dump_json(indent=2) + "\n")


def emit_dot(args, G: Graph, classes: list[int]) -> None:
    if getattr(args, "dot", None):
        Path(args.dot).write_text(to_dot(G, classes), encoding="utf-8")
        print(f"✓ Wrote DOT export: {args.dot}")


def config_from(args, **inputs) -> RunConfig:
    return RunConfig.create(
        args.command,
        inputs,
        out=getattr(args, "out", None),
        seed=getattr(args, "seed", None) or 0,
        verbose=args.verbose,
    )


def require_valid(report, what: str) -> None:
    """Refuse to emit output that fails its own verifier."""
    if not report.valid:
        violation = report.first_violation
        raise InvariantViolation(f"{what} failed self-verification: {violation.reason} (class {violation.class_index})")


def parse_indices(text: Optional[str]) -> Optional[tuple[int, ...]]:
    if text is None:
        return None
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise InputError(f"expected comma-separated indices, got {text!r}") from exc


def common_errors(func):
    """The error-to-exit-code mapping shared by every command."""
    func = error_handler(HeroBudgetExceeded, exit_code=EXIT_HYPOTHESIS, handler=write_witness)(func)
    func = error_handler(HypothesisViolation, exit_code=EXIT_HYPOTHESIS, handler=write_witness)(func)
    func = error_handler(BudgetExceeded, exit_code=EXIT_BUDGET, handler=describe_budget)(func)
    func = error_handler(InputError, exit_code=EXIT_IO)(func)
    func = error_handler(OSError, exit_code=EXIT_IO)(func)
    func = error_handler(InvariantViolation, exit_code=EXIT_INTERNAL)(func)
    return func


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


@common_errors
def cmd_partition(args) -> int:
    """Partition an {H, J}-free graph."""
    config = config_from(args, graph=args.graph, H=args.H, J=args.J)
    budgets = config.budgets()
    G, H, J = read_graph(args.graph), read_graph(args.H), read_graph(args.J)

    if args.mode == "pair":
        choice = SplitChoice(parse_indices(args.h1), parse_indices(args.j1))
        result = partition_pair(G, H, J, choice, budgets)
        patterns, names = list(result.parts), ["H1", "H2", "J1", "J2"]
        partition, bound = result.partition, result.bound
        record = result.record
        normalization = NormalizationModel(
            complemented=record.complemented,
            side_swapped=record.side_swapped,
            component_choice=record.component_choice,
            certificate_map=list(record.certificate_map),
        )
    else:
        driven = disconnected_partition(G, H, J, budgets)
        patterns = list(driven.family)
        names = [f"c(H)[{i}]" for i in range(driven.h_count)]
        names += [f"ac(J)[{i}]" for i in range(len(driven.family) - driven.h_count)]
        partition, bound, normalization = driven.partition, driven.bound, None

    require_valid(verify_partition(G, patterns, partition), "partition")
    if len(partition) > bound:
        raise InvariantViolation(f"{len(partition)} classes exceed the bound {bound}")
    emit(
        args,
        PartitionFile(
            n=G.n,
            patterns=[model_of(p) for p in patterns],
            pattern_names=names,
            classes=PartitionFile.classes_of(partition),
            bound=bound,
            normalization=normalization,
        ),
        f"partition with {len(partition)} classes (bound {bound})",
    )
    emit_dot(args, G, partition.masks())
    return EXIT_OK


@common_errors
def cmd_cosplit(args) -> int:
    """Split an {H, J}-free graph for cographs H and J."""
    config = config_from(args, graph=args.graph, H=args.H, J=args.J)
    budgets = config.budgets()
    G = read_graph(args.graph)
    H, J = read_cotree(args.H), read_cotree(args.J)
    split = cograph_split(G, H, J, budgets)
    driven = split.driven
    require_valid(verify_partition(G, list(driven.family), driven.partition), "cograph split partition")
    if split.X | split.Y != G.vertices or split.X & split.Y:
        raise InvariantViolation("X and Y do not partition V(G)")
    names = [f"c(H)[{i}]" for i in range(driven.h_count)]
    names += [f"ac(J)[{i}]" for i in range(len(driven.family) - driven.h_count)]
    emit(
        args,
        SplitFile(
            n=G.n,
            X=list(bits(split.X)),
            Y=list(bits(split.Y)),
            P=split.P,
            k=split.Htilde.height,
            Htilde=CotreeNode.from_cotree(split.Htilde),
            Jtilde=CotreeNode.from_cotree(split.Jtilde),
            partition=PartitionFile(
                n=G.n,
                patterns=[model_of(p) for p in driven.family],
                pattern_names=names,
                classes=PartitionFile.classes_of(driven.partition),
                bound=driven.bound,
            ),
        ),
        f"split |X|={split.X.bit_count()} |Y|={split.Y.bit_count()}",
    )
    emit_dot(args, G, [split.X, split.Y])
    return EXIT_OK


@common_errors
def cmd_universal(args) -> int:
    """Build an (F, P)-universal connected cograph of height k."""
    budgets = config_from(args, patterns=args.patterns).budgets()
    entries = read_model(args.patterns, PatternsFile).patterns
    F = []
    for entry in entries:
        if isinstance(entry, CotreeNode):
            F.append(entry.to_cotree())
        elif isinstance(entry, GraphModel):
            F.append(cotree_of(entry.to_graph()))
        else:
            raise InputError("universal cographs are built from graphs or cotrees, not tournaments")
    tree = universal_cograph(F, args.P, args.k)
    if args.check:
        C = realize(tree, budgets)
        if not is_universal_bruteforce(C, [realize(f, budgets) for f in F], args.P, budgets):
            raise InvariantViolation("constructed cograph is not universal")
        print(f"✓ Exhaustively confirmed ({args.P})-universality on {C.n} vertices")
    emit(args, CotreeFile.from_cotree(tree), f"cotree with {tree.leaf_count} leaves, height {tree.height}")
    return EXIT_OK


@common_errors
def cmd_tpartition(args) -> int:
    """Partition an (H1 => H2)-free tournament."""
    budgets = config_from(args, tournament=args.tournament, H1=args.H1, H2=args.H2).budgets()
    G, H1, H2 = read_tournament(args.tournament), read_tournament(args.H1), read_tournament(args.H2)
    result = two_tourn_partition(G, H1, H2, budgets)
    require_valid(verify_tournament_partition(G, [H1, H2], result.partition), "tournament partition")
    emit(
        args,
        PartitionFile(
            host_kind="tournament",
            n=G.n,
            patterns=[model_of(H1), model_of(H2)],
            pattern_names=["H1", "H2"],
            classes=PartitionFile.classes_of(result.partition),
            bound=result.bound,
            normalization=NormalizationModel(
                complemented=False,
                side_swapped=result.reversed,
                component_choice="arcs reversed" if result.reversed else "as given",
                certificate_map=[1, 0] if result.reversed else [0, 1],
            ),
        ),
        f"tournament partition with {len(result.partition)} classes (bound {result.bound})",
    )
    return EXIT_OK


@common_errors
def cmd_thero(args) -> int:
    """Color an (H1 => H2)-free tournament with transitive sets."""
    budgets = config_from(args, tournament=args.tournament, H1=args.H1, H2=args.H2).budgets()
    G, H1, H2 = read_tournament(args.tournament), read_tournament(args.H1), read_tournament(args.H2)
    coloring = hero_color(G, H1, H2, args.c, budgets)
    parts = coloring.partition
    require_valid(verify_tournament_partition(G, [H1, H2], parts.partition), "tournament partition")
    emit(
        args,
        HeroFile(
            n=G.n,
            classes=[list(bits(c)) for c in coloring.classes],
            per_class=list(coloring.per_class),
            optimal=coloring.optimal,
            c=args.c,
            bound=coloring.bound,
            partition=PartitionFile(
                host_kind="tournament",
                n=G.n,
                patterns=[model_of(H1), model_of(H2)],
                pattern_names=["H1", "H2"],
                classes=PartitionFile.classes_of(parts.partition),
                bound=parts.bound,
            ),
        ),
        f"hero coloring with {len(coloring.classes)} transitive classes",
    )
    return EXIT_OK


def audit_model(audit: SubsetAudit) -> SubsetAuditModel:
    return SubsetAuditModel(
        kind=audit.kind,
        subset_size=audit.subset_size,
        checked=audit.checked,
        failures=audit.failures,
        failure_rate=audit.failure_rate,
        exhaustive=audit.exhaustive,
        first_failure=list(audit.first_failure) if audit.first_failure is not None else None,
    )


@common_errors
def cmd_construct(args) -> int:
    """Run the randomized construction and its audits."""
    config = config_from(args, L=args.L, M=args.M)
    budgets = config.budgets()
    L, M = read_graph(args.L), read_graph(args.M)
    params = ConstructionParams(args.n, args.r, args.k, args.epsilon, config.seed, args.complemented)
    report = construct(L, M, params, budgets)
    G, lib = report.G, report.library

    local = density = coverage = None
    if args.samples:
        local = audit_model(audit_local_split(G, L, M, params.r, args.samples, config.seed, budgets))
        density = audit_model(audit_density(G, L, M, params.k, args.samples, config.seed, budgets))
        coverage = audit_model(audit_coverage(report.hypergraph, len(lib.pieces), args.samples, config.seed, budgets))

    audit = report.audit
    emit(
        args,
        ConstructionFile(
            params=ParamsModel(
                n=params.n,
                r=params.r,
                k=params.k,
                epsilon=params.epsilon,
                seed=params.seed,
                complemented=params.complemented,
            ),
            r_effective=report.r_effective,
            epsilon=report.epsilon,
            swapped=lib.swapped,
            pieces=[f"{lib.piece_name(i)}:{block.n}" for i, block in enumerate(lib.pieces)],
            graph=GraphModel.from_graph(G),
            kept=list(report.kept),
            removed=list(bits(report.removed)),
            hyperedges=[
                HyperedgeModel(vertices=list(bits(e.vertices)), labels=sorted(lib.piece_name(i) for i in e.labels))
                for e in report.hypergraph.hyperedges
            ],
            audit=ConstructionAuditModel(
                hyperedges_sampled=audit.hyperedges_sampled,
                hyperedges_kept=audit.hyperedges_kept,
                violations_before=list(audit.violations_before),
                violations_after=list(audit.violations_after),
                removed=audit.removed,
                removal_ratio=audit.removal_ratio,
                rounds=audit.rounds,
                girth=audit.girth,
                blocks_faithful=audit.blocks_faithful,
                tiny_has_partition=audit.tiny_has_partition,
                local_split=local,
                density=density,
                coverage=coverage,
            ),
        ),
        f"construction on {G.n} vertices ({audit.removed} removed)",
    )
    if args.graph_out:
        write_model(Path(args.graph_out), GraphModel.from_graph(G))
        print(f"✓ Wrote graph: {args.graph_out}")
    emit_dot(args, G, [])
    return EXIT_OK


@common_errors
def cmd_audit(args) -> int:
    """Audit local splitness or density of a graph."""
    config = config_from(args, graph=args.graph, L=args.L, M=args.M)
    budgets = config.budgets()
    G, L, M = read_graph(args.graph), read_graph(args.L), read_graph(args.M)
    tiny = None
    if args.mode == "local":
        audit = audit_local_split(G, L, M, args.r, args.samples, config.seed, budgets)
    else:
        audit = audit_density(G, L, M, args.k, args.samples, config.seed, budgets)
        tiny = tiny_has_partition(G, L, M, args.k, budgets)
        logger.info("exact {L, M}-partition check into %d classes: %s", args.k, tiny)
    emit(
        args,
        AuditFile(seed=config.seed, samples=args.samples, audit=audit_model(audit), tiny_has_partition=tiny),
        f"{audit.kind} audit: {audit.failures}/{audit.checked} failures",
    )
    return EXIT_OK


@common_errors
def cmd_verify(args) -> int:
    """Check a partition file against its host."""
    config_from(args, host=args.host, partition=args.partition)
    stored = read_model(args.partition, PartitionFile)
    if args.patterns:
        patterns = [structure_of(p) for p in read_model(args.patterns, PatternsFile).patterns if not isinstance(p, CotreeNode)]
    else:
        patterns = [structure_of(p) for p in stored.patterns]
    partition = stored.to_partition()
    if stored.host_kind == "tournament":
        host = read_tournament(args.host)
        report = verify_tournament_partition(host, patterns, partition)
    else:
        host = read_graph(args.host)
        report = verify_partition(host, patterns, partition)
    if not report.valid:
        violation = report.first_violation
        witness = None
        if violation.witness is not None:
            witness = Witness(violation.witness.pattern, violation.witness.mapping, f"class {violation.class_index}")
        raise HypothesisViolation(f"partition is invalid: {violation.reason}", witness)
    print(f"✓ Partition with {len(partition)} classes is valid")
    return EXIT_OK


@common_errors
def cmd_oracle(args) -> int:
    """Exact split / partition queries on small graphs."""
    config = config_from(args, graph=args.graph, patterns=args.patterns)
    budgets = config.budgets()
    G = read_graph(args.graph)
    patterns = [p.to_graph() for p in read_model(args.patterns, PatternsFile).patterns if isinstance(p, GraphModel)]
    if args.query == "split":
        if len(patterns) != 2:
            raise InputError("a split query needs exactly two graph patterns")
        found = is_split(G, patterns[0], patterns[1], budgets)
        if found is not None and not verify_split(G, patterns[0], patterns[1], found):
            raise InvariantViolation("oracle split failed self-verification")
        result = OracleFile(
            query="split",
            n=G.n,
            found=found is not None,
            X=list(bits(found.X)) if found else None,
            Y=list(bits(found.Y)) if found else None,
        )
    else:
        found_partition: Optional[FPartition] = exists_partition(G, patterns, args.k, budgets=budgets)
        if found_partition is not None:
            require_valid(verify_partition(G, patterns, found_partition), "oracle partition")
        result = OracleFile(
            query="partition",
            n=G.n,
            k=args.k,
            found=found_partition is not None,
            partition=(
                PartitionFile(
                    n=G.n,
                    patterns=[GraphModel.from_graph(p) for p in patterns],
                    classes=[ClassModel.from_class(c) for c in found_partition],
                )
                if found_partition is not None
                else None
            ),
        )
    emit(args, result, f"{args.query} oracle answer ({'found' if result.found else 'none'})")
    return EXIT_OK


COMMANDS = {
    "partition": cmd_partition,
    "cosplit": cmd_cosplit,
    "universal": cmd_universal,
    "tpartition": cmd_tpartition,
    "thero": cmd_thero,
    "construct": cmd_construct,
    "audit": cmd_audit,
    "verify": cmd_verify,
    "oracle": cmd_oracle,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hj-partition",
        description="Constructive partitions of {H, J}-free graphs and tournaments, with brute-force verification",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Enable debug logging")
    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    def output(sub, dot: bool = False) -> None:
        sub.add_argument("--out", "-o", help="Artifact path (default: print to stdout)")
        sub.add_argument("--witness", help="Witness path on hypothesis violation (default: <out>.witness.json)")
        if dot:
            sub.add_argument("--dot", help="Also write a Graphviz DOT export with classes coloured")

    p = subparsers.add_parser("partition", help="Partition an {H, J}-free graph")
    p.add_argument("--graph", required=True, help="Host graph JSON")
    p.add_argument("--H", required=True, help="Disconnected forbidden graph H")
    p.add_argument("--J", required=True, help="Forbidden graph J with disconnected complement")
    p.add_argument("--mode", choices=["pair", "components"], default="pair", help="Two-part split or per-component driver")
    p.add_argument("--h1", help="Comma-separated component indices forming H1 (pair mode)")
    p.add_argument("--j1", help="Comma-separated anticomponent indices forming J1 (pair mode)")
    output(p, dot=True)

    p = subparsers.add_parser("cosplit", help="Split an {H, J}-free graph for cographs H and J")
    p.add_argument("--graph", required=True, help="Host graph JSON")
    p.add_argument("--H", required=True, help="Anticonnected cograph H (cotree or graph JSON)")
    p.add_argument("--J", required=True, help="Connected cograph J (cotree or graph JSON)")
    output(p, dot=True)

    p = subparsers.add_parser("universal", help="Build an (F, P)-universal cograph")
    p.add_argument("--patterns", required=True, help="Patterns JSON (graphs or cotrees)")
    p.add_argument("--P", type=int, required=True, help="Number of classes")
    p.add_argument("--k", type=int, required=True, help="Height")
    p.add_argument("--check", action="store_true", help="Confirm universality exhaustively")
    output(p)

    for name, help_text in (("tpartition", "Partition an (H1 => H2)-free tournament"), ("thero", "Hero coloring")):
        p = subparsers.add_parser(name, help=help_text)
        p.add_argument("--tournament", required=True, help="Host tournament JSON")
        p.add_argument("--H1", required=True, help="Tournament H1")
        p.add_argument("--H2", required=True, help="Tournament H2")
        if name == "thero":
            p.add_argument("--c", type=int, required=True, help="Transitive sets allowed per class")
        output(p)

    p = subparsers.add_parser("construct", help="Randomized locally split construction")
    p.add_argument("--L", required=True, help="Graph L (at least one edge)")
    p.add_argument("--M", required=True, help="Graph M (at least one edge)")
    p.add_argument("--n", type=int, required=True, help="Vertices before removal")
    p.add_argument("--r", type=int, required=True, help="Local splitness radius")
    p.add_argument("--k", type=int, required=True, help="Partition size to defeat")
    p.add_argument("--epsilon", type=float, help="Probability exponent slack (default 1/(r+2))")
    p.add_argument("--seed", type=int, default=0, help="Root seed (HJ_SEED overrides)")
    p.add_argument("--complemented", action="store_true", help="Build for the complements and complement the result")
    p.add_argument("--samples", type=int, default=0, help="Subsets per audit (0 skips the sampled audits)")
    p.add_argument("--graph-out", help="Also write the constructed graph as a graph JSON")
    output(p, dot=True)

    p = subparsers.add_parser("audit", help="Audit a graph for local splitness or density")
    p.add_argument("--graph", required=True, help="Graph JSON")
    p.add_argument("--L", required=True, help="Graph L")
    p.add_argument("--M", required=True, help="Graph M")
    p.add_argument("--mode", choices=["local", "density"], required=True, help="Which property to sample")
    p.add_argument("--samples", type=int, default=1000, help="Number of subsets")
    p.add_argument("--r", type=int, default=5, help="Subset size for local mode")
    p.add_argument("--k", type=int, default=2, help="Subsets of size ceil(n/2k) in density mode")
    p.add_argument("--seed", type=int, default=0, help="Root seed (HJ_SEED overrides)")
    output(p)

    p = subparsers.add_parser("verify", help="Verify a partition file")
    p.add_argument("--host", required=True, help="Host graph or tournament JSON")
    p.add_argument("--partition", required=True, help="Partition JSON")
    p.add_argument("--patterns", help="Patterns JSON (default: the patterns embedded in the partition)")
    output(p)

    p = subparsers.add_parser("oracle", help="Exact split / partition oracle")
    p.add_argument("--graph", required=True, help="Graph JSON")
    p.add_argument("--patterns", required=True, help="Patterns JSON")
    p.add_argument("--query", choices=["split", "partition"], required=True, help="Which question to answer")
    p.add_argument("--k", type=int, default=2, help="Class count for partition queries")
    output(p)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    """Main entry point for the CLI."""
    parser = build_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        return EXIT_INTERNAL

    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    return run_command(COMMANDS[args.command], args)


if __name__ == "__main__":
    sys.exit(main())
