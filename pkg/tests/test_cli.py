import json

import pytest

from equibase.cli import main

K4_DOC = {
    "type": "graphic",
    "num_vertices": 4,
    "edges": [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]],
}


@pytest.fixture
def files(tmp_path):
    def write(name, doc):
        path = tmp_path / name
        path.write_text(json.dumps(doc))
        return str(path)

    return write


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    report = json.loads(captured.out) if captured.out else None
    return code, report, captured.err


class TestEquitable:
    def test_k4_running_example(self, files, capsys):
        matroid = files("k4.json", K4_DOC)
        target = files("s.json", [0, 5])
        code, report, _ = run(
            capsys, ["equitable", "--matroid", matroid, "--k", "2", "--set", target]
        )
        assert code == 0
        assert report["conditions"]["bounds_met"]
        assert report["conditions"]["counts"] == [1, 1]
        assert "oracle_calls" in report["stats"]
        assert "exchanges" in report["stats"]

    def test_oracle_flag(self, files, capsys):
        matroid = files("k4.json", K4_DOC)
        target = files("s.json", [0, 1, 2])
        code, report, _ = run(
            capsys,
            ["equitable", "--matroid", matroid, "--k", "2", "--set", target, "--oracle"],
        )
        assert code == 0
        assert report["oracle"]["equitable_partition_exists"]


class TestEquitable2:
    def test_k4_tight_example(self, files, capsys):
        matroid = files("k4.json", K4_DOC)
        s1 = files("s1.json", [0, 5])
        s2 = files("s2.json", [1, 4])
        code, report, _ = run(
            capsys,
            ["equitable2", "--matroid", matroid, "--set1", s1, "--set2", s2],
        )
        assert code == 0
        cond = report["conditions"]
        assert cond["condition_i"] and cond["condition_ii"] and cond["condition_iii"]
        assert cond["parity_case"] == "both_even"
        assert cond["parity_case_ok"]
        assert sorted(cond["counts_first"]) == [1, 1]
        assert sorted(cond["counts_second"]) in ([0, 2],)


class TestPartition:
    def test_wrong_size_exits_infeasible(self, files, capsys):
        bad = dict(K4_DOC, edges=K4_DOC["edges"] + [[0, 1]])
        matroid = files("bad.json", bad)
        code, report, err = run(capsys, ["partition", "--matroid", matroid, "--k", "2"])
        assert code == 2
        assert report is None

    def test_valid_partition(self, files, capsys):
        matroid = files("k4.json", K4_DOC)
        code, report, _ = run(capsys, ["partition", "--matroid", matroid, "--k", "2"])
        assert code == 0
        assert len(report["parts"]) == 2


class TestExchange:
    def test_k4_running_example(self, files, capsys):
        matroid = files("k4.json", K4_DOC)
        b1 = files("b1.json", [2, 3, 5])
        b2 = files("b2.json", [0, 1, 4])
        target = files("s.json", [1, 4])
        code, report, _ = run(
            capsys,
            [
                "exchange", "--matroid", matroid,
                "--b1", b1, "--b2", b2, "--set", target, "--oracle",
            ],
        )
        assert code == 0
        assert report["pivot"] == 5
        assert report["exchange"] == [1, 5]
        assert report["b1_after"] == [1, 2, 3]
        assert report["b2_after"] == [0, 4, 5]
        assert report["oracle"]["exchange_exists"]

    def test_balanced_target_is_infeasible(self, files, capsys):
        matroid = files("k4.json", K4_DOC)
        b1 = files("b1.json", [0, 1, 4])
        b2 = files("b2.json", [2, 3, 5])
        target = files("s.json", [0, 5])
        code, _, _ = run(
            capsys,
            ["exchange", "--matroid", matroid, "--b1", b1, "--b2", b2, "--set", target],
        )
        assert code == 2

    def test_budget_exceeded_on_oracle(self, files, capsys):
        matroid = files("u.json", {"type": "uniform", "num_elements": 26, "rank": 13})
        b1 = files("b1.json", list(range(13)))
        b2 = files("b2.json", list(range(13, 26)))
        target = files("s.json", list(range(13, 26)))
        code, _, _ = run(
            capsys,
            [
                "exchange", "--matroid", matroid,
                "--b1", b1, "--b2", b2, "--set", target, "--oracle",
            ],
        )
        assert code == 4


class TestFairDivision:
    def test_ef1_identical(self, files, capsys):
        instance = files(
            "inst.json",
            {
                "matroid": K4_DOC,
                "agents": [
                    {"values": ["3", "2", "0", "0", "2", "3"]},
                    {"values": ["3", "2", "0", "0", "2", "3"]},
                ],
            },
        )
        code, report, _ = run(capsys, ["ef1", "--instance", instance])
        assert code == 0
        assert report["report"]["ef1"] is True
        assert report["report"]["mms_thresholds"] is None
        assert len(report["bundles"]) == 2

    def test_ef1_two_agents_cut_and_choose(self, files, capsys):
        instance = files(
            "inst.json",
            {
                "matroid": K4_DOC,
                "agents": [
                    {"values": ["1", "0", "0", "0", "0", "1"]},
                    {"values": ["0", "5", "1/2", "1", "5", "0"]},
                ],
            },
        )
        code, report, _ = run(capsys, ["ef1", "--instance", instance])
        assert code == 0
        assert report["report"]["ef1"] is True

    def test_ef1_three_distinct_agents_rejected(self, files, capsys):
        instance = files(
            "inst.json",
            {
                "matroid": {"type": "uniform", "num_elements": 6, "rank": 2},
                "agents": [
                    {"values": ["1", "0", "0", "0", "0", "1"]},
                    {"values": ["0", "1", "0", "0", "1", "0"]},
                    {"values": ["0", "0", "1", "1", "0", "0"]},
                ],
            },
        )
        code, _, _ = run(capsys, ["ef1", "--instance", instance])
        assert code == 2

    def test_mms_with_oracle(self, files, capsys):
        instance = files(
            "inst.json",
            {
                "matroid": K4_DOC,
                "agents": [
                    {"values": ["1", "1", "0", "0", "0", "1"]},
                    {"values": ["-1", "2", "2", "-1", "-1", "2"]},
                ],
            },
        )
        code, report, _ = run(capsys, ["mms", "--instance", instance, "--oracle"])
        assert code == 0
        assert report["report"]["mms_thresholds"] == report["oracle"]["mms_values"]
        for value, threshold in zip(
            report["report"]["bundle_values"], report["report"]["mms_thresholds"]
        ):
            from fractions import Fraction

            assert Fraction(value) >= Fraction(threshold)

    def test_mms_rejects_three_values(self, files, capsys):
        instance = files(
            "inst.json",
            {
                "matroid": K4_DOC,
                "agents": [
                    {"values": ["0", "1", "2", "0", "1", "2"]},
                    {"values": ["0", "1", "2", "0", "1", "2"]},
                ],
            },
        )
        code, _, _ = run(capsys, ["mms", "--instance", instance])
        assert code == 2


class TestErrorsAndDeterminism:
    def test_malformed_json(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{nope")
        code, _, _ = run(capsys, ["partition", "--matroid", str(path), "--k", "2"])
        assert code == 3

    def test_missing_file(self, capsys):
        code, _, _ = run(capsys, ["partition", "--matroid", "no-such.json", "--k", "2"])
        assert code == 3

    def test_unknown_flag(self, capsys):
        code, _, _ = run(capsys, ["partition", "--frobnicate"])
        assert code == 3

    def test_bad_element_ids(self, files, capsys):
        matroid = files("k4.json", K4_DOC)
        target = files("s.json", [0, 99])
        code, _, _ = run(
            capsys, ["equitable", "--matroid", matroid, "--k", "2", "--set", target]
        )
        assert code == 3

    def test_byte_identical_reports(self, files, tmp_path, capsys):
        matroid = files("k4.json", K4_DOC)
        s1 = files("s1.json", [0, 5])
        s2 = files("s2.json", [1, 4])
        out1, out2 = str(tmp_path / "r1.json"), str(tmp_path / "r2.json")
        for out in (out1, out2):
            assert (
                main(
                    [
                        "equitable2", "--matroid", matroid,
                        "--set1", s1, "--set2", s2, "--output", out,
                    ]
                )
                == 0
            )
        capsys.readouterr()
        with open(out1, "rb") as f1, open(out2, "rb") as f2:
            assert f1.read() == f2.read()


class TestVerify:
    def test_verify_passes(self, tmp_path, capsys):
        out = str(tmp_path / "verify.json")
        code = main(["verify", "--seed", "1", "--output", out])
        err = capsys.readouterr().err
        assert code == 0
        with open(out, "r", encoding="utf-8") as handle:
            report = json.load(handle)
        assert all(check["passed"] for check in report["checks"])
        assert "PASS" in err

    def test_verify_deterministic(self, tmp_path, capsys):
        out1, out2 = str(tmp_path / "v1.json"), str(tmp_path / "v2.json")
        assert main(["verify", "--seed", "7", "--output", out1]) == 0
        assert main(["verify", "--seed", "7", "--output", out2]) == 0
        capsys.readouterr()
        with open(out1, "rb") as f1, open(out2, "rb") as f2:
            assert f1.read() == f2.read()
