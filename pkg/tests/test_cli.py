"""End-to-end command-line checks, run in process via main(argv)."""

import json

import pytest

from conftest import ECHO_X_TEXT, PUSH_FOREVER_TEXT, SEESAW_TEXT, echo_x_spec
from kslab.cli import main
from kslab.machine import serialize_machine


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestKsCommands:
    def test_pair_encode(self, capsys):
        code, out, err = run(capsys, "ks", "pair-encode", "0", "1")
        assert (code, out, err) == (0, "00011\n", "")

    def test_compute_text(self, capsys):
        code, out, _ = run(capsys, "ks", "compute", "101")
        assert code == 0
        assert out == "value: 4\nwitness: 0101\n"

    def test_compute_with_condition_and_json(self, capsys):
        code, out, _ = run(
            capsys, "ks", "compute", "10110", "--x", "101", "--s", "4", "--format", "json"
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["value"] == 4 and payload["witness"] == "1010"

    def test_compute_not_found_has_no_witness_line(self, capsys):
        code, out, _ = run(capsys, "ks", "compute", "1" * 20)
        assert code == 0
        assert out == "value: NotFound(cap=14)\n"

    def test_table_shape_and_determinism(self, capsys):
        argv = ("ks", "table", "--targets-to", "2", "--s-grid", "8,16", "--cap", "14")
        code, first, _ = run(capsys, *argv)
        assert code == 0
        lines = first.splitlines()
        assert lines[0] == "y,x,s,cap,value,witness"
        assert len(lines) == 1 + 7 * 2  # 7 strings of length <= 2, two bounds
        code, second, _ = run(capsys, *argv)
        assert code == 0 and second == first

    def test_table_workers_do_not_change_the_bytes(self, capsys):
        argv = ("ks", "table", "--targets-to", "2", "--conditions-to", "1", "--s-grid", "8")
        _, serial, _ = run(capsys, *argv)
        code, parallel, _ = run(capsys, *argv, "--workers", "2")
        assert code == 0 and parallel == serial

    def test_table_json_format(self, capsys):
        code, out, _ = run(
            capsys, "ks", "table", "--targets-to", "1", "--s-grid", "8", "--format", "json"
        )
        assert code == 0
        rows = json.loads(out)
        assert len(rows) == 3 and {"y", "x", "s", "cap", "value", "witness"} <= set(rows[0])


class TestCache:
    def test_cache_is_transparent_and_persistent(self, capsys, tmp_path):
        argv = (
            "ks", "compute", "10110", "--x", "101",
            "--cache-dir", str(tmp_path), "--format", "json",
        )
        _, cold, _ = run(capsys, *argv)
        assert (tmp_path / "complexity.tsv").exists()
        _, warm, _ = run(capsys, *argv)
        assert warm == cold

    def test_cache_stats_reports_entries(self, capsys, tmp_path):
        code, out, _ = run(capsys, "cache", "stats", "--cache-dir", str(tmp_path))
        assert code == 0 and "entries: 0" in out
        run(capsys, "ks", "compute", "101", "--cache-dir", str(tmp_path))
        code, out, _ = run(capsys, "cache", "stats", "--cache-dir", str(tmp_path))
        assert code == 0
        assert "entries: 1" in out and "found: 1" in out and "tag kslab-v1: 1" in out

    def test_cache_dir_environment_variable(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("KSLAB_CACHE_DIR", str(tmp_path))
        code, _, _ = run(capsys, "ks", "compute", "11")
        assert code == 0
        assert (tmp_path / "complexity.tsv").exists()
        code, out, _ = run(capsys, "cache", "stats")
        assert code == 0 and "entries: 1" in out


class TestHaltCommands:
    @pytest.fixture()
    def machine_file(self, tmp_path):
        path = tmp_path / "echo.txt"
        path.write_text(ECHO_X_TEXT)
        return str(path)

    def test_decide_true(self, capsys, machine_file):
        code, out, _ = run(
            capsys, "halt", "decide", "--machine", machine_file, "--x", "10", "--s", "6"
        )
        assert (code, out) == (0, "terminates: true\n")

    def test_decide_false_on_loops_and_space_overruns(self, capsys, tmp_path):
        for name, text in [("seesaw", SEESAW_TEXT), ("pf", PUSH_FOREVER_TEXT)]:
            path = tmp_path / f"{name}.txt"
            path.write_text(text)
            code, out, _ = run(
                capsys, "halt", "decide", "--machine", str(path), "--s", "4"
            )
            assert (code, out) == (0, "terminates: false\n")

    @pytest.mark.parametrize("method", ["backward", "forward", "counter"])
    def test_methods_agree(self, capsys, machine_file, method):
        code, out, _ = run(
            capsys, "halt", "decide", "--machine", machine_file,
            "--x", "1", "--s", "5", "--method", method,
        )
        assert (code, out) == (0, "terminates: true\n")

    def test_serialized_machine_files_are_detected(self, capsys, tmp_path):
        path = tmp_path / "echo.bits"
        path.write_text(serialize_machine(echo_x_spec()) + "\n")
        code, out, _ = run(
            capsys, "halt", "decide", "--machine", str(path), "--x", "0", "--s", "4"
        )
        assert (code, out) == (0, "terminates: true\n")

    def test_missing_machine_file_is_a_domain_error(self, capsys, tmp_path):
        code, _, err = run(
            capsys, "halt", "decide", "--machine", str(tmp_path / "nope"), "--s", "2"
        )
        assert code == 1 and err.startswith("error:")


class TestLawCommands:
    def test_verify_json(self, capsys):
        code, out, _ = run(capsys, "law", "verify", "pair_swap", "--n", "1", "--s-grid", "32,64")
        assert code == 0
        payload = json.loads(out)
        assert payload["law"] == "pair_swap" and payload["minimal_c"] >= 0
        assert payload["violations"] == []

    def test_verify_csv(self, capsys):
        code, out, _ = run(
            capsys, "law", "verify", "symmetry", "--n", "1", "--s-grid", "32",
            "--format", "csv",
        )
        assert code == 0
        assert out.startswith("law,n,cap,s_grid,minimal_c,")

    def test_verify_basic_law_flags(self, capsys):
        code, out, _ = run(
            capsys, "law", "verify", "basic", "--n", "1", "--s-grid", "32",
            "--i", "1", "--j", "2", "--k", "2",
        )
        assert code == 0
        assert json.loads(out)["law"] == "basic(I={1},J={2},k=2)"

    def test_verify_shannon_requires_a_member(self, capsys):
        code, _, err = run(
            capsys, "law", "verify", "shannon", "--n", "1", "--s-grid", "32",
            "--inequality", "k=2; {1}:1 {2}:-1",
        )
        assert code == 1 and "error:" in err
        code, out, _ = run(
            capsys, "law", "verify", "shannon", "--n", "1", "--s-grid", "32",
            "--inequality", "k=2; {1}:1 {2}:1 {1,2}:-1",
        )
        assert code == 0 and json.loads(out)["minimal_c"] >= 0

    def test_verify_baseline_cycle(self, capsys, tmp_path):
        argv = (
            "law", "verify", "pair_swap", "--n", "1", "--s-grid", "32",
            "--baseline-dir", str(tmp_path),
        )
        code, _, err = run(capsys, *argv)
        assert code == 0 and "baseline: created" in err
        code, _, err = run(capsys, *argv)
        assert code == 0 and "baseline: matched" in err
        stored = next(tmp_path.glob("law__pair-swap__*.json"))
        stored.write_text(stored.read_text().replace('"minimal_c": ', '"minimal_c": 9'))
        code, _, err = run(capsys, *argv)
        assert code == 1 and err.startswith("error:")

    def test_staged(self, capsys):
        code, out, _ = run(
            capsys, "law", "staged", "--x", "", "--target-y", "", "--m", "3", "--n", "1"
        )
        assert code == 0
        assert out.startswith("ordinal: 0\nstage: 0\ntotal: ")
        code, out, _ = run(
            capsys, "law", "staged", "--x", "", "--target-y", "", "--m", "3", "--n", "1",
            "--format", "json",
        )
        assert json.loads(out)["ordinal"] == 0

    def test_staged_unreachable_is_a_domain_error(self, capsys):
        code, _, err = run(
            capsys, "law", "staged", "--x", "", "--target-y", "1", "--m", "1", "--n", "1"
        )
        assert code == 1 and err.startswith("error:")

    def test_typical_set(self, capsys):
        code, out, _ = run(
            capsys, "law", "typical-set", "--xs", "01,1", "--u", "8", "--n", "2"
        )
        assert code == 0
        assert "members: 21" in out and "u_star: 1056" in out

    def test_typical_set_gap_report(self, capsys):
        code, out, _ = run(
            capsys, "law", "typical-set", "--xs", "01,1", "--u", "8", "--n", "2",
            "--gap-report",
        )
        assert code == 0
        assert out.splitlines()[1] == "I\tJ\tH_bits\tKS\tgap"

    def test_mutual_info(self, capsys):
        code, out, _ = run(
            capsys, "law", "mutual-info", "--a", "01", "--b", "01", "--s-grid", "8,64"
        )
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "s,info" and len(lines) == 3


class TestConeCommands:
    def test_elemental_count(self, capsys):
        code, out, _ = run(capsys, "cone", "elemental", "--k", "3")
        assert code == 0 and len(out.splitlines()) == 9
        code, out, _ = run(capsys, "cone", "elemental", "--k", "3", "--format", "json")
        assert len(json.loads(out)["inequalities"]) == 9

    def test_check_member(self, capsys):
        code, out, _ = run(capsys, "cone", "check", "k=2; {1}:1 {2}:1 {1,2}:-1")
        assert code == 0
        assert out.splitlines()[0] == "member: true"
        assert out.splitlines()[1].startswith("weights: ")

    def test_check_non_member_prints_witness(self, capsys):
        code, out, _ = run(capsys, "cone", "check", "k=2; {1}:1 {2}:-1")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "member: false" and lines[1].startswith("witness: {")

    def test_check_json(self, capsys):
        code, out, _ = run(
            capsys, "cone", "check", "k=1; {1}:1", "--format", "json"
        )
        payload = json.loads(out)
        assert payload["member"] is True

    def test_check_reads_files(self, capsys, tmp_path):
        path = tmp_path / "ineq.txt"
        path.write_text("k=2; {1}:1\n")
        code, out, _ = run(capsys, "cone", "check", "--file", str(path))
        assert code == 0 and "member: true" in out

    def test_check_requires_an_inequality(self, capsys):
        code, _, err = run(capsys, "cone", "check")
        assert code == 1 and err.startswith("error:")


class TestLemmaCommand:
    def test_iterate(self, capsys):
        code, out, _ = run(
            capsys, "lemma", "iterate", "--s", "4", "--c", "1", "--k", "0", "--n", "1"
        )
        assert (code, out) == (0, "iterate: 6.0\n")

    def test_iterate_against_bound(self, capsys):
        code, out, _ = run(
            capsys, "lemma", "iterate", "--s", "4", "--c", "1", "--k", "2", "--n", "10",
            "--c1", "2", "--c2", "1",
        )
        assert code == 0
        lines = out.splitlines()
        assert lines[0].startswith("iterate: ") and lines[1].startswith("bound: ")
        assert lines[2] == "within: true"

    def test_half_specified_bound_is_an_error(self, capsys):
        code, _, err = run(
            capsys, "lemma", "iterate", "--s", "4", "--c", "1", "--k", "0", "--n", "1",
            "--c1", "2",
        )
        assert code == 1 and err.startswith("error:")


class TestExitCodes:
    def test_usage_errors_exit_two(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["ks"])
        assert exc.value.code == 2
        capsys.readouterr()
        with pytest.raises(SystemExit) as exc:
            main(["law", "verify", "no_such_law", "--n", "1", "--s-grid", "8"])
        assert exc.value.code == 2
        capsys.readouterr()

    def test_domain_errors_exit_one(self, capsys):
        code, _, err = run(capsys, "ks", "compute", "102")
        assert code == 1 and err.startswith("error:")
        code, _, err = run(capsys, "ks", "compute", "1", "--cap", "99")
        assert code == 1 and err.startswith("error:")
