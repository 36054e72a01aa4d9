"""Tests for the JSON artifact models."""

import json

import pytest
from pydantic import ValidationError

from hj_partition.cograph import EMPTY, LEAF, join_of, union_of
from hj_partition.errors import InputError, Witness
from hj_partition.graph import Graph, complete, cycle
from hj_partition.oracles import Certificate, FPartition, PartitionClass
from hj_partition.schemas import (
    SCHEMA_VERSION,
    ClassModel,
    CotreeFile,
    GraphModel,
    PartitionFile,
    PatternsFile,
    RunConfig,
    TournamentModel,
    WitnessFile,
    model_of,
    read_cotree,
    read_graph,
    read_model,
    read_tournament,
    write_model,
)
from hj_partition.tournament import cyclic_triangle


class TestStructures:
    """Test graph and tournament files."""

    def test_graph_file(self, tmp_path):
        """Test writing and reading a graph file."""
        path = write_model(tmp_path / "c5.json", GraphModel.from_graph(cycle(5)))
        data = json.loads(path.read_text())
        assert data["schema_version"] == SCHEMA_VERSION
        assert data["kind"] == "graph"
        assert read_graph(path) == cycle(5)

    def test_tournament_file(self, tmp_path):
        """Test reading a tournament file."""
        path = tmp_path / "c3.json"
        path.write_text(json.dumps({"n": 3, "arcs": [[0, 1], [1, 2], [2, 0]]}))
        assert read_tournament(path) == cyclic_triangle()

    def test_graph_without_kind(self, tmp_path):
        """Test that the kind field may be omitted in hand-written files."""
        path = tmp_path / "k2.json"
        path.write_text('{"n": 2, "edges": [[0, 1]]}')
        assert read_graph(path) == complete(2)

    def test_schema_errors(self, tmp_path):
        """Test that malformed files become input errors."""
        bad = tmp_path / "bad.json"
        bad.write_text('{"n": -1, "edges": []}')
        with pytest.raises(InputError):
            read_graph(bad)
        bad.write_text('{"n": 2, "edges": [], "extra": 1}')
        with pytest.raises(InputError):
            read_graph(bad)
        with pytest.raises(InputError):
            read_graph(tmp_path / "missing.json")

    def test_graph_errors_propagate(self, tmp_path):
        """Test that an out-of-range edge is an input error."""
        bad = tmp_path / "bad.json"
        bad.write_text('{"n": 2, "edges": [[0, 5]]}')
        with pytest.raises(InputError):
            read_graph(bad)

    def test_edge_order_and_duplicates(self, tmp_path):
        """Test that reversed and repeated edges are input errors."""
        bad = tmp_path / "bad.json"
        for edges in ("[[1, 0]]", "[[0, 1], [0, 1]]", "[[1, 1]]"):
            bad.write_text(f'{{"n": 3, "edges": {edges}}}')
            with pytest.raises(InputError):
                read_graph(bad)
        with pytest.raises(ValidationError):
            GraphModel(n=3, edges=[(2, 0)])

    def test_model_of(self):
        """Test choosing the model by structure type."""
        assert isinstance(model_of(cycle(4)), GraphModel)
        assert isinstance(model_of(cyclic_triangle()), TournamentModel)


class TestCotrees:
    """Test cotree files."""

    def test_cotree_file(self, tmp_path):
        """Test a cotree round trip through a file."""
        t = union_of(join_of(LEAF, LEAF), LEAF)
        path = write_model(tmp_path / "t.json", CotreeFile.from_cotree(t))
        assert read_cotree(path) == t

    def test_cotree_from_graph_file(self, tmp_path):
        """Test that a graph file holding a cograph is accepted."""
        path = write_model(tmp_path / "c4.json", GraphModel.from_graph(cycle(4)))
        assert read_cotree(path).height == 2

    def test_null_cotree(self, tmp_path):
        """Test that the null graph is read as the empty cotree."""
        path = write_model(tmp_path / "null.json", CotreeFile.from_cotree(EMPTY))
        assert json.loads(path.read_text())["op"] == "empty"
        assert read_cotree(path) == EMPTY
        graph = write_model(tmp_path / "null-graph.json", GraphModel.from_graph(Graph.null()))
        assert read_cotree(graph) == EMPTY

    def test_bad_cotree(self, tmp_path):
        """Test a join with one child."""
        path = tmp_path / "t.json"
        path.write_text('{"op": "join", "children": [{"op": "leaf"}]}')
        with pytest.raises(InputError):
            read_cotree(path)

    def test_patterns_file(self, tmp_path):
        """Test a mixed pattern list."""
        path = tmp_path / "patterns.json"
        path.write_text(
            json.dumps(
                {
                    "patterns": [
                        {"kind": "graph", "n": 2, "edges": [[0, 1]]},
                        {"op": "join", "children": [{"op": "leaf"}, {"op": "leaf"}]},
                    ]
                }
            )
        )
        patterns = read_model(path, PatternsFile).patterns
        assert isinstance(patterns[0], GraphModel)
        assert patterns[1].to_cotree() == join_of(LEAF, LEAF)


class TestPartitions:
    """Test partition and witness files."""

    def test_partition_round_trip(self):
        """Test converting classes to the file model and back."""
        p = FPartition((PartitionClass(0b011, Certificate.avoids(1)), PartitionClass(0b100, Certificate.singleton())))
        model = PartitionFile(n=3, patterns=[model_of(complete(2))], classes=PartitionFile.classes_of(p))
        again = PartitionFile.model_validate_json(model.model_dump_json())
        assert again.to_partition() == p

    def test_class_certificate_consistency(self):
        """Test that 'pattern' is required exactly for avoids."""
        with pytest.raises(InputError):
            ClassModel(vertices=[0], certificate="avoids").to_class()
        with pytest.raises(InputError):
            ClassModel(vertices=[0], certificate="singleton", pattern=1).to_class()
        with pytest.raises(InputError):
            ClassModel(vertices=[0, 0], certificate="singleton").to_class()
        with pytest.raises(ValidationError):
            ClassModel(vertices=[0], certificate="clique")

    def test_witness_file(self):
        """Test storing a witness."""
        model = WitnessFile.from_witness("G contains J", Witness(cycle(4), (3, 1, 0, 2), "J"))
        assert model.mapping == [3, 1, 0, 2]
        assert model.pattern.n == 4
        assert WitnessFile.from_witness("no witness", None).pattern is None

    def test_deterministic_bytes(self, tmp_path):
        """Test that writing the same model twice gives identical bytes."""
        model = GraphModel.from_graph(Graph.from_edges(4, [(2, 3), (0, 1)]))
        a = write_model(tmp_path / "a.json", model).read_bytes()
        b = write_model(tmp_path / "b.json", model).read_bytes()
        assert a == b
        assert a.endswith(b"\n")


class TestRunConfig:
    """Test run configuration."""

    def test_defaults(self):
        """Test that budgets come from the environment defaults."""
        config = RunConfig.create("partition", {"graph": "g.json", "H": None})
        assert config.seed == 0
        assert "H" not in config.inputs
        assert config.budgets().split_max_vertices == 30

    def test_seed_override(self, monkeypatch):
        """Test that HJ_SEED overrides the seed."""
        monkeypatch.setenv("HJ_SEED", "17")
        assert RunConfig.create("construct", {}, seed=3).seed == 17

    def test_budget_env(self, monkeypatch):
        """Test that HJ_* budgets feed the config."""
        monkeypatch.setenv("HJ_WORK_BUDGET", "1234")
        monkeypatch.setenv("HJ_MEMO_LIMIT", "not-a-number")
        budgets = RunConfig.create("oracle", {}).budgets()
        assert budgets.work == 1234
        assert budgets.memo_limit == 200_000
