"""Tests for the hj-partition command-line interface."""

import json
from pathlib import Path

import pytest

from hj_partition.cograph import LEAF, union_of
from hj_partition.decorators import EXIT_BUDGET, EXIT_HYPOTHESIS, EXIT_INTERNAL, EXIT_IO, EXIT_OK
from hj_partition.graph import Graph, complete, cycle, disjoint_union, edgeless
from hj_partition.oracles import Certificate, FPartition, PartitionClass, SplitWitness, verify_partition
from hj_partition.schemas import CotreeFile, GraphModel, PartitionFile, TournamentModel, write_model
from hj_partition.tournament import cyclic_triangle, transitive
from hj_partition_cli.cli import build_parser, main


def graph_file(tmp_path: Path, name: str, G: Graph) -> str:
    return str(write_model(tmp_path / f"{name}.json", GraphModel.from_graph(G)))


def tournament_file(tmp_path: Path, name: str, T) -> str:
    return str(write_model(tmp_path / f"{name}.json", TournamentModel.from_tournament(T)))


@pytest.fixture
def pair_files(tmp_path):
    """C_5 with H = 2K_2 and J = C_4."""
    return {
        "graph": graph_file(tmp_path, "c5", cycle(5)),
        "H": graph_file(tmp_path, "2k2", disjoint_union(complete(2), complete(2))),
        "J": graph_file(tmp_path, "c4", cycle(4)),
    }


class TestParser:
    def test_commands(self):
        """Test that every subcommand is registered."""
        parser = build_parser()
        for command in ("partition", "cosplit", "universal", "tpartition", "thero", "construct", "audit", "verify", "oracle"):
            assert command in parser.format_help()

    def test_no_command(self, capsys):
        """Test that running without a command prints help."""
        assert main([]) == EXIT_INTERNAL
        assert "usage" in capsys.readouterr().out


class TestPartitionCommand:
    """Test the partition command."""

    def test_pair_mode(self, tmp_path, pair_files, capsys):
        """Test a verified partition written to a file."""
        out = tmp_path / "partition.json"
        dot = tmp_path / "partition.dot"
        code = main(
            ["partition", "--graph", pair_files["graph"], "--H", pair_files["H"], "--J", pair_files["J"],
             "--out", str(out), "--dot", str(dot)]
        )
        assert code == EXIT_OK
        data = json.loads(out.read_text())
        assert data["schema_version"] == 1
        assert data["bound"] == 18
        assert len(data["classes"]) <= 18
        assert data["pattern_names"] == ["H1", "H2", "J1", "J2"]
        assert dot.read_text().startswith("graph G {")
        assert "✓" in capsys.readouterr().out

        assert main(["verify", "--host", pair_files["graph"], "--partition", str(out)]) == EXIT_OK

    def test_components_mode_stdout(self, pair_files, capsys):
        """Test the driver mode printing JSON to stdout."""
        code = main(["partition", "--graph", pair_files["graph"], "--H", pair_files["H"], "--J", pair_files["J"], "--mode", "components"])
        assert code == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["pattern_names"] == ["c(H)[0]", "c(H)[1]", "ac(J)[0]", "ac(J)[1]"]

    def test_hypothesis_violation_writes_witness(self, tmp_path, pair_files):
        """Test that a host containing J exits 2 with a witness file."""
        host = graph_file(tmp_path, "host", disjoint_union(cycle(4), complete(1)))
        out = tmp_path / "result.json"
        code = main(["partition", "--graph", host, "--H", pair_files["H"], "--J", pair_files["J"], "--out", str(out)])
        assert code == EXIT_HYPOTHESIS
        assert not out.exists()
        witness = json.loads((tmp_path / "result.witness.json").read_text())
        assert witness["note"] == "J"
        assert len(witness["mapping"]) == 4

    def test_missing_file(self, tmp_path, pair_files):
        """Test that an unreadable input exits 4."""
        code = main(["partition", "--graph", str(tmp_path / "nope.json"), "--H", pair_files["H"], "--J", pair_files["J"]])
        assert code == EXIT_IO

    def test_bad_choice(self, pair_files):
        """Test that an invalid component choice exits 4."""
        code = main(["partition", "--graph", pair_files["graph"], "--H", pair_files["H"], "--J", pair_files["J"], "--h1", "0,1"])
        assert code == EXIT_IO

    def test_deterministic(self, tmp_path, pair_files):
        """Test that two runs write identical bytes."""
        outputs = []
        for name in ("a.json", "b.json"):
            out = tmp_path / name
            main(["partition", "--graph", pair_files["graph"], "--H", pair_files["H"], "--J", pair_files["J"], "--out", str(out)])
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1]


class TestVerifyCommand:
    def test_invalid_partition(self, tmp_path):
        """Test that a hand-edited invalid partition exits 2 with a witness."""
        host = graph_file(tmp_path, "p3", Graph.from_edges(3, [(0, 1), (1, 2)]))
        partition = tmp_path / "partition.json"
        partition.write_text(
            json.dumps(
                {
                    "schema_version": 1,
                    "n": 3,
                    "patterns": [{"kind": "graph", "n": 2, "edges": [[0, 1]]}],
                    "classes": [{"vertices": [0, 1, 2], "certificate": "avoids", "pattern": 0}],
                }
            )
        )
        witness = tmp_path / "w.json"
        code = main(["verify", "--host", host, "--partition", str(partition), "--witness", str(witness)])
        assert code == EXIT_HYPOTHESIS
        data = json.loads(witness.read_text())
        assert data["note"] == "class 0"
        assert data["pattern"]["n"] == 2


class TestCographCommands:
    def test_cosplit(self, tmp_path, pair_files):
        """Test the cograph split command."""
        out = tmp_path / "split.json"
        assert main(["cosplit", "--graph", pair_files["graph"], "--H", pair_files["H"], "--J", pair_files["J"], "--out", str(out)]) == EXIT_OK
        data = json.loads(out.read_text())
        assert sorted(data["X"] + data["Y"]) == [0, 1, 2, 3, 4]
        assert data["k"] == 1

    def test_universal_with_check(self, tmp_path):
        """Test building and checking K_4."""
        patterns = tmp_path / "patterns.json"
        patterns.write_text(json.dumps({"patterns": [{"kind": "graph", "n": 2, "edges": [[0, 1]]}]}))
        out = tmp_path / "universal.json"
        code = main(["universal", "--patterns", str(patterns), "--P", "2", "--k", "1", "--check", "--out", str(out)])
        assert code == EXIT_OK
        data = json.loads(out.read_text())
        assert data["op"] == "join"
        assert len(data["children"]) == 4

    def test_universal_disconnected_member(self, tmp_path):
        """Test that a disconnected member exits 2."""
        patterns = tmp_path / "patterns.json"
        S2 = CotreeFile.from_cotree(union_of(LEAF, LEAF)).model_dump(exclude={"schema_version"})
        patterns.write_text(json.dumps({"patterns": [S2]}))
        code = main(["universal", "--patterns", str(patterns), "--P", "2", "--k", "1", "--witness", str(tmp_path / "w.json")])
        assert code == EXIT_HYPOTHESIS


class TestTournamentCommands:
    def test_tpartition(self, tmp_path):
        """Test the tournament partition command."""
        host = tournament_file(tmp_path, "t5", transitive(5))
        c3 = tournament_file(tmp_path, "c3", cyclic_triangle())
        out = tmp_path / "tp.json"
        assert main(["tpartition", "--tournament", host, "--H1", c3, "--H2", c3, "--out", str(out)]) == EXIT_OK
        data = json.loads(out.read_text())
        assert data["host_kind"] == "tournament"
        assert data["bound"] == 128
        assert main(["verify", "--host", host, "--partition", str(out)]) == EXIT_OK

    def test_thero_budget(self, tmp_path):
        """Test that a class needing more than c transitive sets exits 2."""
        host = tournament_file(tmp_path, "c3", cyclic_triangle())
        t3 = tournament_file(tmp_path, "t3", transitive(3))
        witness = tmp_path / "w.json"
        code = main(["thero", "--tournament", host, "--H1", t3, "--H2", t3, "--c", "1", "--witness", str(witness)])
        assert code == EXIT_HYPOTHESIS
        assert "transitive sets" in json.loads(witness.read_text())["message"]

    def test_thero(self, tmp_path):
        """Test a successful hero coloring."""
        host = tournament_file(tmp_path, "c3", cyclic_triangle())
        t3 = tournament_file(tmp_path, "t3", transitive(3))
        out = tmp_path / "hero.json"
        assert main(["thero", "--tournament", host, "--H1", t3, "--H2", t3, "--c", "2", "--out", str(out)]) == EXIT_OK
        assert json.loads(out.read_text())["per_class"] == [2]


class TestConstructCommands:
    def test_construct_deterministic(self, tmp_path):
        """Test that two seeded runs write identical bytes."""
        k2 = graph_file(tmp_path, "k2", complete(2))
        outputs = []
        for name in ("a.json", "b.json"):
            out = tmp_path / name
            code = main(["construct", "--L", k2, "--M", k2, "--n", "40", "--r", "5", "--k", "3", "--seed", "7",
                         "--samples", "50", "--out", str(out)])
            assert code == EXIT_OK
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1]
        data = json.loads(outputs[0])
        assert data["r_effective"] == 6
        assert data["audit"]["violations_after"] == [0, 0, 0]
        assert data["audit"]["local_split"]["failures"] == 0

    def test_construct_edgeless(self, tmp_path):
        """Test that an edgeless L exits 2."""
        s2 = graph_file(tmp_path, "s2", edgeless(2))
        code = main(["construct", "--L", s2, "--M", s2, "--n", "10", "--r", "5", "--k", "2", "--witness", str(tmp_path / "w.json")])
        assert code == EXIT_HYPOTHESIS

    def test_audit(self, tmp_path):
        """Test the audit command on a cycle."""
        g = graph_file(tmp_path, "c7", cycle(7))
        k2 = graph_file(tmp_path, "k2", complete(2))
        out = tmp_path / "audit.json"
        code = main(["audit", "--graph", g, "--L", k2, "--M", k2, "--mode", "local", "--r", "3", "--samples", "100", "--out", str(out)])
        assert code == EXIT_OK
        data = json.loads(out.read_text())
        assert data["audit"]["exhaustive"]
        assert data["audit"]["failures"] == 0
        assert data["tiny_has_partition"] is None

    def test_audit_density_exact_check(self, tmp_path):
        """Test that density audits of tiny graphs carry the exact partition answer."""
        k2 = graph_file(tmp_path, "k2", complete(2))
        answers = {}
        for name, G, k in (("c5-2", cycle(5), 2), ("c5-3", cycle(5), 3), ("c13", cycle(13), 2), ("c5-4", cycle(5), 4)):
            out = tmp_path / f"{name}.audit.json"
            g = graph_file(tmp_path, name, G)
            code = main(["audit", "--graph", g, "--L", k2, "--M", k2, "--mode", "density", "--k", str(k), "--samples", "20", "--out", str(out)])
            assert code == EXIT_OK
            answers[name] = json.loads(out.read_text())["tiny_has_partition"]
        assert answers == {"c5-2": False, "c5-3": True, "c13": None, "c5-4": None}


class TestOracleCommand:
    def test_split(self, tmp_path, capsys):
        """Test that C_5 is reported as not split."""
        g = graph_file(tmp_path, "c5", cycle(5))
        patterns = tmp_path / "patterns.json"
        patterns.write_text(json.dumps({"patterns": [GraphModel.from_graph(complete(2)).model_dump(), GraphModel.from_graph(edgeless(2)).model_dump()]}))
        assert main(["oracle", "--graph", g, "--patterns", str(patterns), "--query", "split"]) == EXIT_OK
        assert json.loads(capsys.readouterr().out)["found"] is False

    def test_partition(self, tmp_path, capsys):
        """Test a three-class partition of C_5."""
        g = graph_file(tmp_path, "c5", cycle(5))
        patterns = tmp_path / "patterns.json"
        patterns.write_text(json.dumps({"patterns": [GraphModel.from_graph(complete(2)).model_dump(), GraphModel.from_graph(edgeless(2)).model_dump()]}))
        assert main(["oracle", "--graph", g, "--patterns", str(patterns), "--query", "partition", "--k", "3"]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["found"] is True
        assert len(data["partition"]["classes"]) <= 3

    def test_budget_refusal(self, tmp_path):
        """Test that an oversized split query exits 3."""
        g = graph_file(tmp_path, "big", edgeless(31))
        patterns = tmp_path / "patterns.json"
        patterns.write_text(json.dumps({"patterns": [GraphModel.from_graph(complete(2)).model_dump(), GraphModel.from_graph(edgeless(2)).model_dump()]}))
        assert main(["oracle", "--graph", g, "--patterns", str(patterns), "--query", "split"]) == EXIT_BUDGET

    def test_partition_output_verifies(self, tmp_path):
        """Test that the embedded partition passes verify against the host."""
        g = graph_file(tmp_path, "c5", cycle(5))
        patterns = tmp_path / "patterns.json"
        patterns.write_text(json.dumps({"patterns": [GraphModel.from_graph(complete(2)).model_dump(), GraphModel.from_graph(edgeless(2)).model_dump()]}))
        out = tmp_path / "oracle.json"
        assert main(["oracle", "--graph", g, "--patterns", str(patterns), "--query", "partition", "--k", "3", "--out", str(out)]) == EXIT_OK
        embedded = tmp_path / "embedded.json"
        embedded.write_text(json.dumps(json.loads(out.read_text())["partition"]))
        stored = PartitionFile.model_validate_json(embedded.read_text())
        assert verify_partition(cycle(5), [complete(2), edgeless(2)], stored.to_partition()).valid
        assert main(["verify", "--host", g, "--partition", str(embedded)]) == EXIT_OK

    def test_wrong_partition_is_refused(self, tmp_path, monkeypatch):
        """Test that an oracle answer failing verification exits 1 and writes nothing."""
        whole = FPartition((PartitionClass(0b11111, Certificate.avoids(0)),))
        monkeypatch.setattr("hj_partition_cli.cli.exists_partition", lambda *args, **kwargs: whole)
        g = graph_file(tmp_path, "c5", cycle(5))
        patterns = tmp_path / "patterns.json"
        patterns.write_text(json.dumps({"patterns": [GraphModel.from_graph(complete(2)).model_dump()]}))
        out = tmp_path / "oracle.json"
        assert main(["oracle", "--graph", g, "--patterns", str(patterns), "--query", "partition", "--k", "1", "--out", str(out)]) == EXIT_INTERNAL
        assert not out.exists()

    def test_wrong_split_is_refused(self, tmp_path, monkeypatch):
        """Test that a split answer failing verification exits 1 and writes nothing."""
        monkeypatch.setattr("hj_partition_cli.cli.is_split", lambda *args: SplitWitness(0b11111, 0))
        g = graph_file(tmp_path, "c5", cycle(5))
        patterns = tmp_path / "patterns.json"
        patterns.write_text(json.dumps({"patterns": [GraphModel.from_graph(complete(2)).model_dump(), GraphModel.from_graph(edgeless(2)).model_dump()]}))
        out = tmp_path / "oracle.json"
        assert main(["oracle", "--graph", g, "--patterns", str(patterns), "--query", "split", "--out", str(out)]) == EXIT_INTERNAL
        assert not out.exists()


def invalid_partition_file(tmp_path: Path) -> str:
    """A P_3 partition whose single class claims to avoid K_2."""
    partition = tmp_path / "bad-partition.json"
    partition.write_text(
        json.dumps(
            {
                "n": 3,
                "patterns": [{"kind": "graph", "n": 2, "edges": [[0, 1]]}],
                "classes": [{"vertices": [0, 1, 2], "certificate": "avoids", "pattern": 0}],
            }
        )
    )
    return str(partition)


def command_runs(tmp_path: Path) -> dict[str, tuple[list[str], Path]]:
    """Arguments for every subcommand and the file each one writes."""
    c5 = graph_file(tmp_path, "c5", cycle(5))
    two_k2 = graph_file(tmp_path, "2k2", disjoint_union(complete(2), complete(2)))
    c4 = graph_file(tmp_path, "c4", cycle(4))
    k2 = graph_file(tmp_path, "k2", complete(2))
    c7 = graph_file(tmp_path, "c7", cycle(7))
    p3 = graph_file(tmp_path, "p3", Graph.from_edges(3, [(0, 1), (1, 2)]))
    c3 = tournament_file(tmp_path, "c3", cyclic_triangle())
    t3 = tournament_file(tmp_path, "t3", transitive(3))
    t5 = tournament_file(tmp_path, "t5", transitive(5))
    patterns = tmp_path / "patterns.json"
    patterns.write_text(json.dumps({"patterns": [GraphModel.from_graph(complete(2)).model_dump(), GraphModel.from_graph(edgeless(2)).model_dump()]}))
    k2_patterns = tmp_path / "k2-patterns.json"
    k2_patterns.write_text(json.dumps({"patterns": [GraphModel.from_graph(complete(2)).model_dump()]}))
    out = tmp_path / "out.json"
    witness = tmp_path / "witness.json"
    return {
        "partition": (["partition", "--graph", c5, "--H", two_k2, "--J", c4, "--out", str(out)], out),
        "cosplit": (["cosplit", "--graph", c5, "--H", two_k2, "--J", c4, "--out", str(out)], out),
        "universal": (["universal", "--patterns", str(k2_patterns), "--P", "2", "--k", "2", "--out", str(out)], out),
        "tpartition": (["tpartition", "--tournament", t5, "--H1", c3, "--H2", c3, "--out", str(out)], out),
        "thero": (["thero", "--tournament", c3, "--H1", t3, "--H2", t3, "--c", "2", "--out", str(out)], out),
        "construct": (
            ["construct", "--L", k2, "--M", k2, "--n", "40", "--r", "5", "--k", "3", "--seed", "11", "--samples", "20", "--out", str(out)],
            out,
        ),
        "audit": (["audit", "--graph", c7, "--L", k2, "--M", k2, "--mode", "density", "--k", "2", "--samples", "30", "--seed", "5", "--out", str(out)], out),
        "verify": (["verify", "--host", p3, "--partition", invalid_partition_file(tmp_path), "--witness", str(witness)], witness),
        "oracle": (["oracle", "--graph", c5, "--patterns", str(patterns), "--query", "partition", "--k", "3", "--out", str(out)], out),
    }


class TestDeterminism:
    @pytest.mark.parametrize(
        "command", ["partition", "cosplit", "universal", "tpartition", "thero", "construct", "audit", "verify", "oracle"]
    )
    def test_repeated_runs_are_identical(self, tmp_path, command):
        """Test that running a command twice writes the same bytes."""
        argv, written = command_runs(tmp_path)[command]
        outputs = []
        codes = []
        for _ in range(2):
            written.unlink(missing_ok=True)
            codes.append(main(argv))
            outputs.append(written.read_bytes())
        assert codes[0] == codes[1]
        assert outputs[0] == outputs[1]
        assert codes[0] == (EXIT_HYPOTHESIS if command == "verify" else EXIT_OK)
