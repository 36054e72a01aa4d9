"""JSON artifact formats, all versioned with a `schema_version` field."""

import os
from pathlib import Path
from typing import Annotated, Any, Literal, Optional, TypeVar, Union

from annotated_types import Ge, Gt
from pydantic import BaseModel, ConfigDict, Field, RootModel, ValidationError, field_validator

from .cograph import EMPTY, LEAF, Cotree, DisjointUnion, Join, cotree_of, join_of, union_of
from .config import Budgets, get_seed
from .errors import InputError, Witness
from .graph import Graph, bits, mask_of
from .oracles import Certificate, CertificateKind, FPartition, PartitionClass
from .tournament import Tournament

SCHEMA_VERSION = 1

NonNegative = Annotated[int, Ge(0)]
Positive = Annotated[int, Gt(0)]


class Artifact(BaseModel):
    """Base of every top-level file model."""

    model_config = ConfigDict(extra="forbid")

    schema_version: Literal[1] = Field(SCHEMA_VERSION, description="Artifact schema version")


# ---------------------------------------------------------------------------
# Structures
# ---------------------------------------------------------------------------


class GraphModel(Artifact):
    kind: Literal["graph"] = Field("graph", description="Structure discriminator")
    n: NonNegative = Field(..., description="Number of vertices 0..n-1")
    edges: list[tuple[NonNegative, NonNegative]] = Field(default_factory=list, description="Undirected edges [u, v] with u < v")

    @field_validator("edges")
    @classmethod
    def edges_are_ordered_and_unique(cls, edges: list[tuple[int, int]]) -> list[tuple[int, int]]:
        """Each edge is written once, smaller endpoint first."""
        seen = set()
        for u, v in edges:
            if u >= v:
                raise ValueError(f"edge [{u}, {v}] must list the smaller endpoint first")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge [{u}, {v}]")
            seen.add((u, v))
        return edges

    def to_graph(self) -> Graph:
        return Graph.from_edges(self.n, self.edges)

    @classmethod
    def from_graph(cls, G: Graph) -> "GraphModel":
        return cls(n=G.n, edges=G.edges())


class TournamentModel(Artifact):
    kind: Literal["tournament"] = Field("tournament", description="Structure discriminator")
    n: NonNegative = Field(..., description="Number of vertices 0..n-1")
    arcs: list[tuple[NonNegative, NonNegative]] = Field(default_factory=list, description="Arcs [u, v]: u beats v")

    def to_tournament(self) -> Tournament:
        return Tournament.from_arcs(self.n, self.arcs)

    @classmethod
    def from_tournament(cls, G: Tournament) -> "TournamentModel":
        return cls(n=G.n, arcs=G.arcs())


Structure = Annotated[Union[GraphModel, TournamentModel], Field(discriminator="kind")]


def structure_of(model: Union[GraphModel, TournamentModel]) -> Union[Graph, Tournament]:
    return model.to_graph() if isinstance(model, GraphModel) else model.to_tournament()


def model_of(structure: Union[Graph, Tournament]) -> Union[GraphModel, TournamentModel]:
    if isinstance(structure, Tournament):
        return TournamentModel.from_tournament(structure)
    return GraphModel.from_graph(structure)


class CotreeNode(BaseModel):
    model_config = ConfigDict(extra="forbid")

    op: Literal["empty", "leaf", "union", "join"] = Field(..., description="Node kind; empty is the null cograph")
    children: list["CotreeNode"] = Field(default_factory=list, description="Child nodes (empty for leaves)")

    def to_cotree(self) -> Cotree:
        if self.op in ("empty", "leaf"):
            if self.children:
                raise InputError(f"an {self.op} node has no children")
            return EMPTY if self.op == "empty" else LEAF
        if len(self.children) < 2:
            raise InputError(f"a {self.op} node needs at least two children")
        children = [child.to_cotree() for child in self.children]
        return union_of(*children) if self.op == "union" else join_of(*children)

    @classmethod
    def from_cotree(cls, t: Cotree) -> "CotreeNode":
        if isinstance(t, DisjointUnion):
            return cls(op="union", children=[cls.from_cotree(c) for c in t.children])
        if isinstance(t, Join):
            return cls(op="join", children=[cls.from_cotree(c) for c in t.children])
        return cls(op="empty" if t == EMPTY else "leaf")


class CotreeFile(Artifact, CotreeNode):
    """A cotree at the top level of a file: {"op": ..., "children": [...]}."""

    @classmethod
    def from_cotree(cls, t: Cotree) -> "CotreeFile":
        node = CotreeNode.from_cotree(t)
        return cls(op=node.op, children=node.children)


class CotreeOrGraphFile(RootModel[Union[GraphModel, CotreeFile]]):
    """Either a graph file or a cotree file."""


class PatternsFile(Artifact):
    patterns: list[Union[GraphModel, TournamentModel, CotreeNode]] = Field(..., description="Pattern list F, in certificate order")


# ---------------------------------------------------------------------------
# Partitions and witnesses
# ---------------------------------------------------------------------------


class ClassModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    vertices: list[NonNegative] = Field(..., description="Vertices of the class, ascending")
    certificate: Literal["singleton", "avoids", "transitive"] = Field(..., description="Why the class is admissible")
    pattern: Optional[NonNegative] = Field(None, description="Index into the pattern list for 'avoids'")

    @classmethod
    def from_class(cls, c: PartitionClass) -> "ClassModel":
        return cls(vertices=list(bits(c.vertices)), certificate=c.certificate.kind.value, pattern=c.certificate.pattern)

    def to_class(self) -> PartitionClass:
        kind = CertificateKind(self.certificate)
        if (kind is CertificateKind.AVOIDS) != (self.pattern is not None):
            raise InputError("'pattern' must be set exactly for 'avoids' certificates")
        if len(set(self.vertices)) != len(self.vertices):
            raise InputError("class lists a vertex twice")
        return PartitionClass(mask_of(self.vertices), Certificate(kind, self.pattern))


class NormalizationModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    complemented: bool = Field(..., description="Host and patterns were complemented")
    side_swapped: bool = Field(..., description="H1 and H2 were exchanged")
    component_choice: str = Field(..., description="How H and J were cut")
    certificate_map: list[int] = Field(..., description="Engine pattern index -> caller pattern index")


class PartitionFile(Artifact):
    host_kind: Literal["graph", "tournament"] = Field("graph", description="Kind of the partitioned structure")
    n: NonNegative = Field(..., description="Host vertex count")
    patterns: list[Structure] = Field(default_factory=list, description="Pattern list F the certificates index")
    pattern_names: list[str] = Field(default_factory=list, description="Human-readable names of the patterns")
    classes: list[ClassModel] = Field(..., description="Ordered classes")
    bound: Optional[Positive] = Field(None, description="Class-count bound guaranteed by the construction")
    normalization: Optional[NormalizationModel] = Field(None, description="Pair normalization, when applicable")

    def to_partition(self) -> FPartition:
        return FPartition(tuple(c.to_class() for c in self.classes))

    @staticmethod
    def classes_of(p: FPartition) -> list[ClassModel]:
        return [ClassModel.from_class(c) for c in p]


class WitnessFile(Artifact):
    message: str = Field(..., description="The violated hypothesis")
    pattern: Optional[Structure] = Field(None, description="The forbidden structure that was found")
    mapping: list[NonNegative] = Field(default_factory=list, description="mapping[i] is the host vertex for pattern vertex i")
    note: str = Field("", description="Which pattern or class the witness concerns")

    @classmethod
    def from_witness(cls, message: str, witness: Optional[Witness]) -> "WitnessFile":
        if witness is None:
            return cls(message=message)
        return cls(message=message, pattern=model_of(witness.pattern), mapping=list(witness.mapping), note=witness.note)


class SplitFile(Artifact):
    n: NonNegative
    X: list[NonNegative] = Field(..., description="Htilde-free side")
    Y: list[NonNegative] = Field(..., description="Jtilde-free side")
    P: Positive = Field(..., description="Number of classes of the underlying partition")
    k: Positive = Field(..., description="Height of Htilde and Jtilde")
    Htilde: CotreeNode
    Jtilde: CotreeNode
    partition: PartitionFile


class HeroFile(Artifact):
    n: NonNegative
    classes: list[list[NonNegative]] = Field(..., description="Transitive classes")
    per_class: list[NonNegative] = Field(..., description="Transitive sets used for each partition class")
    optimal: bool = Field(..., description="Every per-class count is exactly minimal")
    c: Positive = Field(..., description="Color budget per class")
    bound: Positive = Field(..., description="2(m+1)^m times the largest per-class count")
    partition: PartitionFile


class SubsetAuditModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: str
    subset_size: NonNegative
    checked: NonNegative
    failures: NonNegative
    failure_rate: float
    exhaustive: bool
    first_failure: Optional[list[NonNegative]] = None


class AuditFile(Artifact):
    seed: int
    samples: Positive
    audit: SubsetAuditModel
    tiny_has_partition: Optional[bool] = Field(None, description="Exact ({L,M},k)-partition answer for density audits of tiny graphs")


class ParamsModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n: Positive
    r: Positive
    k: Positive
    epsilon: Optional[float] = None
    seed: int = 0
    complemented: bool = False


class HyperedgeModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    vertices: list[NonNegative]
    labels: list[str]


class ConstructionAuditModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    hyperedges_sampled: NonNegative
    hyperedges_kept: NonNegative
    violations_before: list[NonNegative] = Field(..., description="[multilabel, 2-cycles, longer cycles]")
    violations_after: list[NonNegative]
    removed: NonNegative
    removal_ratio: Optional[float] = Field(None, description="|R| / (n / ln n)")
    rounds: NonNegative
    girth: Optional[Positive] = Field(None, description="Girth of the realized graph (None: acyclic)")
    blocks_faithful: bool
    tiny_has_partition: Optional[bool] = Field(None, description="Exact ({L,M},k)-partition answer on tiny instances")
    local_split: Optional[SubsetAuditModel] = None
    density: Optional[SubsetAuditModel] = None
    coverage: Optional[SubsetAuditModel] = None


class ConstructionFile(Artifact):
    params: ParamsModel
    r_effective: Positive
    epsilon: float
    swapped: bool = Field(..., description="L and M were exchanged so that L holds the largest block")
    pieces: list[str] = Field(..., description="Piece names with their block sizes")
    graph: GraphModel
    kept: list[NonNegative] = Field(..., description="Original label of each vertex of the graph")
    removed: list[NonNegative]
    hyperedges: list[HyperedgeModel]
    audit: ConstructionAuditModel


class OracleFile(Artifact):
    query: Literal["split", "partition"]
    n: NonNegative
    k: Optional[Positive] = None
    found: bool
    X: Optional[list[NonNegative]] = None
    Y: Optional[list[NonNegative]] = None
    partition: Optional[PartitionFile] = None


# ---------------------------------------------------------------------------
# Run configuration and file I/O
# ---------------------------------------------------------------------------


class RunConfig(BaseModel):
    """Everything a CLI command depends on; outputs are deterministic given it."""

    model_config = ConfigDict(extra="forbid")

    command: str = Field(..., description="Subcommand name")
    inputs: dict[str, Path] = Field(default_factory=dict, description="Named input files")
    out: Optional[Path] = Field(None, description="Artifact path")
    seed: int = Field(0, description="Root seed; HJ_SEED overrides it")
    work: Positive = Field(..., description="Exhaustive-search budget")
    split_max_vertices: Positive
    memo_limit: Positive
    hyperedge_limit: Positive
    realize_limit: Positive
    transitive_budget: Positive
    max_workers: Positive
    verbose: bool = False

    @classmethod
    def create(cls, command: str, inputs: dict[str, Any], out: Any = None, seed: int = 0, verbose: bool = False) -> "RunConfig":
        budgets = Budgets.from_env()
        if os.getenv("HJ_SEED") is not None:
            seed = get_seed(seed)
        return cls(
            command=command,
            inputs={k: v for k, v in inputs.items() if v is not None},
            out=out,
            seed=seed,
            work=budgets.work,
            split_max_vertices=budgets.split_max_vertices,
            memo_limit=budgets.memo_limit,
            hyperedge_limit=budgets.hyperedge_limit,
            realize_limit=budgets.realize_limit,
            transitive_budget=budgets.transitive_budget,
            max_workers=budgets.max_workers,
            verbose=verbose,
        )

    def budgets(self) -> Budgets:
        return Budgets(
            work=self.work,
            split_max_vertices=self.split_max_vertices,
            memo_limit=self.memo_limit,
            hyperedge_limit=self.hyperedge_limit,
            realize_limit=self.realize_limit,
            transitive_budget=self.transitive_budget,
            max_workers=self.max_workers,
        )


M = TypeVar("M", bound=BaseModel)


def read_model(path: Path, model: type[M]) -> M:
    """Parse a JSON file; I/O and schema problems become InputError."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        return model.model_validate_json(text)
    except ValidationError as exc:
        raise InputError(f"{path} does not match the {model.__name__} schema: {exc.error_count()} error(s)") from exc


def write_model(path: Path, model: BaseModel) -> Path:
    """Write deterministic JSON (fixed field order, two-space indent, trailing newline)."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(model.model_dump_json(indent=2) + "\n", encoding="utf-8")
    return target


def read_graph(path: Path) -> Graph:
    return read_model(path, GraphModel).to_graph()


def read_tournament(path: Path) -> Tournament:
    return read_model(path, TournamentModel).to_tournament()


def read_cotree(path: Path) -> Cotree:
    """A cotree file, or a graph file holding a cograph."""
    model = read_model(path, CotreeOrGraphFile).root
    if isinstance(model, GraphModel):
        return cotree_of(model.to_graph())
    return model.to_cotree()
