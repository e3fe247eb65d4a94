# coding: utf-8

import json

import pytest
from assertpy import assert_that
from deepdiff import DeepDiff

from zslab import cli
from zslab.charsum import IdentityReport
from zslab.environment import Environment
from zslab.program import read_run_record
from zslab.sequence import read_sequence_file

ZERO_SUMFREE = "group 7 2\n1 0 * 6\n0 1 * 6\n"
WITH_ZERO_SUM = "# g and -g\ngroup 5 2\n1 2\n4 3\n0 1\n"


class AnalyzeTestCase:

    def test_zero_sumfree(self, seq_file, capsys):
        code = cli.main(["analyze", seq_file(ZERO_SUMFREE)])
        out = capsys.readouterr().out
        assert_that(code).is_equal_to(0)
        assert_that(out).starts_with("# analyze\n")
        assert_that(out).contains("zero-sumfree: true", "seed: 0", "h: 6", "witness: -")

    def test_zero_sum_with_output_dir(self, seq_file, tmp_path, capsys):
        out_dir = tmp_path.joinpath("out")
        code = cli.main(["analyze", seq_file(WITH_ZERO_SUM), "--output-dir", str(out_dir)])
        assert_that(code).is_equal_to(1)
        assert_that(capsys.readouterr().out).contains("zero-sumfree: false", "witness_length: 2")

        witness = read_sequence_file(out_dir.joinpath("witness.seq"))
        assert_that(witness.sigma).is_equal_to((0, 0))
        assert_that(cli.main(["analyze", str(out_dir.joinpath("witness.seq"))])).is_equal_to(1)

        record = read_run_record(out_dir.joinpath("run_record.json"))
        assert_that(record.exit_code).is_equal_to(1)
        assert_that(record.summary).contains_entry({"zero_sumfree": False})
        assert_that(record.artifacts).is_length(1)
        assert_that(out_dir.joinpath("main.log").exists()).is_true()

    def test_short_constraint(self, seq_file, capsys):
        code = cli.main(["analyze", seq_file("group 3 2\n1 0 * 3\n"), "--constraint", "short"])
        assert_that(code).is_equal_to(1)
        assert_that(capsys.readouterr().out).contains("constraint: short(<=3)")

    def test_malformed(self, seq_file, capsys):
        assert_that(cli.main(["analyze", seq_file("group 3 2\n1 x\n")])).is_equal_to(2)
        assert_that(capsys.readouterr().err).contains("line 2")

    def test_missing_file(self, tmp_path):
        assert_that(cli.main(["analyze", str(tmp_path.joinpath("nope.seq"))])).is_equal_to(2)

    def test_json_is_reproducible(self, seq_file, capsys):
        path = seq_file(WITH_ZERO_SUM)
        cli.main(["analyze", path, "--json", "--seed", "7"])
        first = json.loads(capsys.readouterr().out)
        cli.main(["analyze", path, "--json", "--seed", "7"])
        second = json.loads(capsys.readouterr().out)
        assert_that(first).contains_entry({"command": "analyze"}, {"seed": 7})
        assert_that(DeepDiff(first, second)).is_empty()

    def test_json_carries_the_text_fields(self, seq_file, capsys):
        path = seq_file(WITH_ZERO_SUM)
        cli.main(["analyze", path])
        lines = capsys.readouterr().out.splitlines()[1:]
        text_keys = [line.split(":", 1)[0] for line in lines if line and not line[0].isspace()]
        cli.main(["analyze", path, "--json"])
        assert_that(list(json.loads(capsys.readouterr().out))).is_equal_to(text_keys)


class ReplayTestCase:

    def test_replay(self, seq_file, tmp_path, capsys):
        out_dir = tmp_path.joinpath("out")
        code = cli.main(["analyze", seq_file(WITH_ZERO_SUM), "--output-dir", str(out_dir)])
        first = capsys.readouterr().out
        replayed = cli.main(["replay", str(out_dir.joinpath("run_record.json"))])
        assert_that(replayed).is_equal_to(code)
        assert_that(capsys.readouterr().out).is_equal_to(first)

    def test_not_a_record(self, tmp_path):
        path = tmp_path.joinpath("record.json")
        path.write_text(json.dumps({"()": "os.system", "command": "true"}), encoding="utf-8")
        assert_that(cli.main(["replay", str(path)])).is_equal_to(2)


class LemmaCommandTestCase:

    def test_lemma_3_2_part_3(self, seq_file, capsys):
        code = cli.main(["lemma", "3.2", seq_file("group 7 1\n0\n1\n2\n3\n4\n"), "--k", "2", "--part", "3"])
        assert_that(code).is_equal_to(0)
        assert_that(capsys.readouterr().out).contains("claim: true", "certificate-verified: true")

    def test_hypothesis_fails(self, seq_file, capsys):
        code = cli.main(["lemma", "3.1", seq_file("group 5 1\n0\n1\n2\n3\n4\n")])
        assert_that(code).is_equal_to(1)
        assert_that(capsys.readouterr().out).contains("hypothesis: false")

    def test_not_squarefree(self, seq_file):
        assert_that(cli.main(["lemma", "3.2", seq_file("group 7 1\n1 * 2\n"), "--k", "1"])).is_equal_to(1)

    def test_unknown_lemma(self, seq_file):
        with pytest.raises(SystemExit) as exc_info:
            cli.main(["lemma", "9.9", seq_file(ZERO_SUMFREE)])
        assert_that(exc_info.value.code).is_equal_to(2)


class CharsumCommandTestCase:

    def test_csv(self, seq_file, tmp_path, capsys):
        csv_path = tmp_path.joinpath("spectrum.csv")
        code = cli.main(["charsum", seq_file("group 3 2\n1 0 * 2\n0 1\n"), "--csv", str(csv_path)])
        assert_that(code).is_equal_to(0)
        assert_that(capsys.readouterr().out).contains("identity: true", "rows: 9")
        lines = csv_path.read_text(encoding="utf-8").splitlines()
        assert_that(lines).is_length(10)
        assert_that(lines[0]).is_equal_to("j1,j2,re_f,im_f,abs_f,envelope,holds")
        assert_that(lines[1]).starts_with("0,0,8.0,0.0,8.0,,")

    def test_identity_failure_is_a_violation(self, seq_file, monkeypatch):
        broken = IdentityReport(s=1, order=9, sum_over_chi=1.0, sum_imag=0.0, zero_sum_count=1, expected=9,
                                relative_error=0.9, holds=False)
        monkeypatch.setattr(cli, "spectrum_identity_check", lambda seq: broken)
        assert_that(cli.main(["charsum", seq_file("group 3 2\n1 0\n")])).is_equal_to(3)


class ThresholdCommandTestCase:

    def test_found(self, capsys):
        assert_that(cli.main(["threshold", "--eps", "0.3", "--c", "1"])).is_equal_to(0)
        assert_that(capsys.readouterr().out).contains("p_threshold: ")

    def test_not_found(self, capsys):
        assert_that(cli.main(["threshold", "--eps", "0.2", "--c", "1", "--cap", "1000"])).is_equal_to(1)
        assert_that(capsys.readouterr().out).contains("p_threshold: -")

    def test_invalid_params(self):
        assert_that(cli.main(["threshold", "--eps", "0.7", "--c", "1"])).is_equal_to(2)

    def test_cap_above_limit(self):
        assert_that(cli.main(["threshold", "--eps", "0.2", "--c", "1", "--cap", "3000000000"])).is_equal_to(2)


class TheoremCommandTestCase:

    def test_theorem_1_1(self, seq_file, capsys):
        code = cli.main(["theorem", "1.1", seq_file(ZERO_SUMFREE), "--eps", "0.1", "--c", "2"])
        assert_that(code).is_equal_to(0)
        assert_that(capsys.readouterr().out).contains("verdict: ConclusionHolds")

    def test_theorem_1_2_bound_override(self, seq_file, capsys):
        code = cli.main(["theorem", "1.2", seq_file("group 3 2\n1 0 * 2\n0 1 * 2\n1 1\n"),
                         "--eps", "0.1", "--c", "2", "--bound", "5"])
        assert_that(code).is_equal_to(0)
        assert_that(capsys.readouterr().out).contains("theorem_1_1.verdict: SmallPrimeCounterexample")

    def test_theorem_1_2(self, seq_file, capsys):
        code = cli.main(["theorem", "1.2", seq_file("group 3 2\n1 0 * 2\n0 1 * 2\n1 1\n"), "--eps", "0.1", "--c", "2"])
        assert_that(code).is_equal_to(0)
        assert_that(capsys.readouterr().out).contains("steps: pad=PASSED", "theorem_1_1.verdict: ConclusionHolds")

    def test_theorem_1_2_hypothesis(self, seq_file, capsys):
        code = cli.main(["theorem", "1.2", seq_file("group 3 2\n1 0 * 3\n0 1 * 3\n1 1\n"), "--eps", "0.1", "--c", "2"])
        assert_that(code).is_equal_to(1)
        assert_that(capsys.readouterr().out).contains("hypothesis: false")

    def test_theorem_1_3(self, seq_file, capsys):
        code = cli.main(["theorem", "1.3", seq_file("group 2 2\n1 0 * 3\n0 1\n1 1\n"), "--eps", "0.1", "--c", "2"])
        assert_that(code).is_equal_to(0)
        assert_that(capsys.readouterr().out).contains("h_S: 3", "h_T: 1")


class SearchCommandTestCase:

    def test_search(self, tmp_path, capsys):
        catalog = tmp_path.joinpath("catalog.seq")
        code = cli.main(["search", "--p", "3", "--catalog", str(catalog)])
        assert_that(code).is_equal_to(0)
        assert_that(capsys.readouterr().out).contains("max_length: 4", "exhaustive: true")
        assert_that(catalog.read_text(encoding="utf-8")).contains("group 3 2")

    def test_property_b(self, capsys):
        assert_that(cli.main(["search", "--p", "3", "--property-b"])).is_equal_to(0)
        assert_that(capsys.readouterr().out).contains("property_b: true")

    def test_exhaustive_too_large(self):
        assert_that(cli.main(["search", "--p", "7"])).is_equal_to(2)

    def test_random(self, tmp_path, capsys):
        out = tmp_path.joinpath("random.seq")
        code = cli.main(["random", "--p", "7", "--length", "8", "--seed", "1", "--out", str(out)])
        assert_that(code).is_equal_to(0)
        assert_that(capsys.readouterr().out).contains("seed: 1", "zero-sumfree: true")
        assert_that(len(read_sequence_file(out))).is_equal_to(8)

    def test_random_impossible(self):
        assert_that(cli.main(["random", "--p", "7", "--length", "13"])).is_equal_to(1)


class SettingsTestCase:

    def test_config_file(self, seq_file, tmp_path):
        config = tmp_path.joinpath("settings.yml")
        config.write_text("log-level: debug\nthreads: 2\nmem-cap: 64M\n", encoding="utf-8")
        assert_that(cli.main(["analyze", seq_file(ZERO_SUMFREE), "--config", str(config)])).is_equal_to(0)
        settings = Environment.instance().settings
        assert_that(settings.threads).is_equal_to(2)
        assert_that(settings.mem_cap).is_equal_to(64 * 1024 * 1024)

    def test_command_line_wins(self, seq_file, tmp_path):
        config = tmp_path.joinpath("settings.yml")
        config.write_text("threads: 2\n", encoding="utf-8")
        cli.main(["analyze", seq_file(ZERO_SUMFREE), "--config", str(config), "--threads", "3"])
        assert_that(Environment.instance().threads).is_equal_to(3)

    def test_bad_config(self, seq_file, tmp_path):
        config = tmp_path.joinpath("settings.txt")
        config.write_text("threads: 2\n", encoding="utf-8")
        assert_that(cli.main(["analyze", seq_file(ZERO_SUMFREE), "--config", str(config)])).is_equal_to(2)

    def test_bad_mem_cap(self, seq_file):
        assert_that(cli.main(["analyze", seq_file(ZERO_SUMFREE), "--mem-cap", "lots"])).is_equal_to(2)

    def test_no_command(self, capsys):
        assert_that(cli.main([])).is_equal_to(2)
