import json
from fractions import Fraction

import pytest

from thompsonf import MarkedSet, z_family
from thompsonf.cli import main, parse_word
from thompsonf.errors import MalformedInput
from thompsonf.folner import family_to_lines

F = Fraction


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def write_family(path, family):
    path.write_text("\n".join(family_to_lines(family)) + "\n", encoding="ascii")


GRID = MarkedSet(F(k, 16) for k in range(17))


class TestWordParsing:
    def test_single_generator(self):
        assert parse_word("x0").apply(F(3, 4)) == F(1, 2)

    def test_inverse_and_powers(self):
        assert parse_word("x0 x0^-1").is_identity()
        assert parse_word("x0^2") == parse_word("x0 x0")
        assert parse_word("x0^-2 x0^2").is_identity()
        assert parse_word("x0*x1").breaks == parse_word("x0 x1").breaks

    def test_rejects_garbage(self):
        with pytest.raises(MalformedInput):
            parse_word("x2")
        with pytest.raises(MalformedInput):
            parse_word("x0^")


class TestSimpleCommands:
    def test_tower(self, capsys):
        code, out = run(capsys, "tower", "5")
        assert code == 0
        assert json.loads(out) == {"n": 5, "value": "65536"}

    def test_tower_too_tall_is_precondition(self, capsys):
        assert main(["tower", "7"]) == 3

    def test_eval(self, capsys):
        code, out = run(capsys, "eval", "x0", "7/8")
        assert code == 0
        assert json.loads(out)["image"] == "3/4"

    def test_eval_bad_point(self, capsys):
        assert main(["eval", "x0", "9/8"]) == 2

    def test_compose(self, capsys):
        code, out = run(capsys, "compose", "x0", "x0^-1")
        assert code == 0
        assert json.loads(out) == {"breaks": [["0", "0"], ["1", "1"]]}

    def test_ball_size(self, capsys):
        code, out = run(capsys, "ball", "1")
        assert code == 0
        assert json.loads(out) == {"radius": 1, "size": 5}

    def test_ball_full_listing(self, capsys):
        code, out = run(capsys, "ball", "1", "--full")
        doc = json.loads(out)
        assert len(doc["elements"]) == 5

    def test_ball_radius_limit(self, capsys):
        assert main(["ball", "3", "--max-radius", "2"]) == 3

    def test_zfamily_count(self, capsys):
        code, out = run(capsys, "zfamily", "--count", "2")
        assert code == 0
        assert out.splitlines() == ['["0", "3/4", "1"]', '["0", "7/8", "1"]']

    def test_zfamily_explicit_indices(self, capsys):
        code, out = run(capsys, "zfamily", "1")
        assert code == 0
        assert out.splitlines() == ['["0", "7/8", "1"]']

    def test_zfamily_without_indices(self, capsys):
        assert main(["zfamily"]) == 2


class TestTof:
    def test_three_point_set(self, tmp_path, capsys):
        path = tmp_path / "in.json"
        path.write_text('["0","1/2","1"]', encoding="ascii")
        code, out = run(capsys, "tof", "--input", str(path))
        doc = json.loads(out)
        assert code == 0
        assert doc["t_of"] == ["0", "1/2", "1"]
        assert doc["mesh"] == "1/2"
        assert doc["is_standard"] is True

    def test_degenerate_set(self, tmp_path, capsys):
        path = tmp_path / "in.json"
        path.write_text('["0","1"]', encoding="ascii")
        code, out = run(capsys, "tof", "--input", str(path))
        assert code == 0
        assert json.loads(out)["t_of"] == ["0", "1"]

    def test_grid_is_fixed(self, tmp_path, capsys):
        path = tmp_path / "in.json"
        path.write_text(json.dumps(GRID.to_strings()), encoding="ascii")
        code, out = run(capsys, "tof", "--input", str(path))
        assert json.loads(out)["t_of"] == GRID.to_strings()

    def test_parse_failure(self, tmp_path):
        path = tmp_path / "in.json"
        path.write_text('["0","nope","1"]', encoding="ascii")
        assert main(["tof", "--input", str(path)]) == 2

    def test_missing_file(self):
        assert main(["tof", "--input", "/nonexistent/x.json"]) == 2


class TestReduce:
    def test_z_family_fails_mesh_gate(self, tmp_path):
        path = tmp_path / "fam.jsonl"
        write_family(path, z_family(range(4)))
        assert main(["reduce", "--input", str(path), "--epsilon", "1"]) == 3

    def test_grid_family_reduces(self, tmp_path, capsys):
        path = tmp_path / "fam.jsonl"
        write_family(path, {GRID})
        code, out = run(capsys, "reduce", "--input", str(path), "--epsilon", "3")
        doc = json.loads(out)
        assert code == 0
        assert doc["reduction"]["element_count"] == 1
        # every generator moves the lone member: count 2, defect 2
        assert all(e["count"] == 2 for e in doc["element_defect"]["generators"])
        assert doc["certificate"]["verdict"] == "PASS"
        assert doc["certificate"]["mesh_ok"] is True

    def test_certificate_failure_exit_code(self, tmp_path, capsys):
        path = tmp_path / "fam.jsonl"
        write_family(path, {GRID})
        code, out = run(capsys, "reduce", "--input", str(path), "--epsilon", "1/2")
        assert code == 1
        assert json.loads(out)["certificate"]["verdict"] == "FAIL"

    def test_empty_file(self, tmp_path):
        path = tmp_path / "fam.jsonl"
        path.write_text("", encoding="ascii")
        assert main(["reduce", "--input", str(path), "--epsilon", "1"]) == 2

    def test_element_family_rejected(self, tmp_path):
        path = tmp_path / "fam.jsonl"
        path.write_text('{"breaks": [["0","0"],["1","1"]]}\n', encoding="ascii")
        assert main(["reduce", "--input", str(path), "--epsilon", "1"]) == 2

    def test_deterministic_output(self, tmp_path):
        fam = tmp_path / "fam.jsonl"
        write_family(fam, {GRID, MarkedSet(F(k, 32) for k in range(33))})
        outs = []
        for name in ("a.json", "b.json"):
            out = tmp_path / name
            code = main(
                ["reduce", "--input", str(fam), "--epsilon", "3", "--output", str(out)]
            )
            assert code == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_workers_identical_output(self, tmp_path):
        fam = tmp_path / "fam.jsonl"
        write_family(fam, {GRID, MarkedSet(F(k, 32) for k in range(33))})
        docs = []
        for workers in ("1", "3"):
            out = tmp_path / f"w{workers}.json"
            code = main(
                [
                    "reduce",
                    "--input",
                    str(fam),
                    "--epsilon",
                    "3",
                    "--workers",
                    workers,
                    "--output",
                    str(out),
                ]
            )
            assert code == 0
            docs.append(out.read_bytes())
        assert docs[0] == docs[1]


class TestDefectCommand:
    def test_marked_family(self, tmp_path, capsys):
        path = tmp_path / "fam.jsonl"
        write_family(path, z_family(range(4)))
        code, out = run(capsys, "defect", "--input", str(path))
        doc = json.loads(out)
        assert code == 0
        assert doc["kind"] == "marked"
        assert doc["report"]["max_defect"] == "1/2"
        assert doc["report"]["mesh_max"] == "31/32"

    def test_element_family(self, tmp_path, capsys):
        path = tmp_path / "fam.jsonl"
        path.write_text('{"breaks": [["0","0"],["1","1"]]}\n', encoding="ascii")
        code, out = run(capsys, "defect", "--input", str(path))
        doc = json.loads(out)
        assert code == 0
        assert doc["kind"] == "elements"
        assert doc["report"]["max_defect"] == "2"

    def test_mixed_family_rejected(self, tmp_path):
        path = tmp_path / "fam.jsonl"
        path.write_text(
            '["0","1"]\n{"breaks": [["0","0"],["1","1"]]}\n', encoding="ascii"
        )
        assert main(["defect", "--input", str(path)]) == 2


class TestMeasureMono:
    def test_point_mass(self, tmp_path, capsys):
        measure = tmp_path / "mu.json"
        chain = tmp_path / "chain.json"
        measure.write_text(
            json.dumps(
                [{"partition": ["0", "1/2", "3/4", "7/8", "1"], "weight": "1"}]
            ),
            encoding="ascii",
        )
        chain.write_text(
            json.dumps([["1/4", "3/8"], ["5/8", "15/16"]]), encoding="ascii"
        )
        code, out = run(
            capsys, "measure-mono", "--measure", str(measure), "--chain", str(chain)
        )
        assert code == 0
        assert json.loads(out)["monotone_mass"] == "1"

    def test_bad_measure(self, tmp_path):
        measure = tmp_path / "mu.json"
        chain = tmp_path / "chain.json"
        measure.write_text(
            json.dumps([{"partition": ["0", "1/2", "1"], "weight": "1/2"}]),
            encoding="ascii",
        )
        chain.write_text(json.dumps([["1/4", "3/8"], ["5/8", "7/8"]]), encoding="ascii")
        assert main(["measure-mono", "--measure", str(measure), "--chain", str(chain)]) == 2


class TestVerifyCommand:
    def test_default_passes(self, tmp_path):
        out = tmp_path / "r.json"
        code = main(
            ["verify", "--seed", "5", "--cases", "25", "--output", str(out)]
        )
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["all_passed"] is True
        assert {s["name"] for s in doc["suites"]} >= {
            "generator_sanity",
            "defining_relations",
            "partition_action_composition",
            "action_commutes_with_max_partition",
            "max_partition_mesh_bound",
            "family_reduction_identity",
        }

    def test_same_seed_is_byte_identical(self, tmp_path):
        blobs = []
        for name in ("a.json", "b.json"):
            out = tmp_path / name
            assert (
                main(["verify", "--seed", "9", "--cases", "40", "--output", str(out)])
                == 0
            )
            blobs.append(out.read_bytes())
        assert blobs[0] == blobs[1]

    def test_different_seed_changes_report(self, tmp_path):
        blobs = []
        for seed in ("9", "10"):
            out = tmp_path / f"s{seed}.json"
            main(["verify", "--seed", seed, "--cases", "40", "--output", str(out)])
            blobs.append(out.read_bytes())
        assert blobs[0] != blobs[1]

    def test_corrupted_table_fails_with_counterexample(self, tmp_path):
        out = tmp_path / "r.json"
        code = main(
            [
                "verify",
                "--seed",
                "5",
                "--cases",
                "10",
                "--corrupt",
                "--output",
                str(out),
            ]
        )
        assert code == 1
        doc = json.loads(out.read_text())
        assert doc["all_passed"] is False
        failed = [s for s in doc["suites"] if s["failures"]]
        assert failed
        assert any(s["counterexample"] is not None for s in failed)
