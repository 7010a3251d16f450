import io
import json
import subprocess
import sys

import pytest

from lowhom import cli
from lowhom.cli import RunConfig, UsageError, main, run
from lowhom.abelian import PrimeField


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    args = cli.build_parser().parse_args(argv)
    cfg = RunConfig(
        command=args.command, input_path=args.input, prime=args.prime,
        max_equations=getattr(args, "max_eqns", 500_000),
        tidy_interval=getattr(args, "tidy", 100),
        max_seconds=getattr(args, "max_seconds", None),
        max_passes=getattr(args, "max_passes", 8),
        sublist_indices=getattr(args, "sublist", None),
        output_format="json" if args.json else "text",
        simplify_first=args.simplify_first,
        dump_rules=getattr(args, "dump_rules", None),
        load_rules=getattr(args, "load_rules", None),
        word=getattr(args, "word", None),
    )
    code = run(cfg, out, err)
    return code, out.getvalue(), err.getvalue()


def test_h2_sigma5_text():
    code, out, _ = invoke("h2", "sigma5.pres", "-p", "2")
    assert code == 0
    assert out.rstrip().endswith("d = 2 (exact: rewriting confluent)")
    assert "a = 1" in out and "c = 3" in out and "e = 3" in out


def test_h2_json_is_deterministic_apart_from_timings():
    docs = []
    for _ in range(2):
        code, out, _ = invoke("h2", "sigma5", "-p", "2", "--json")
        assert code == 0
        doc = json.loads(out)
        doc.pop("wall_times_ms")
        docs.append(doc)
    assert docs[0] == docs[1]
    assert docs[0]["d"] == 2 and docs[0]["exact"] is True
    assert docs[0]["sublist"] == ["a^5", "b^2", "a^-1 b a^-1 b a^-1 b a^-1 b",
                                  "a^2 b a^-2 b a^2 b a^-2 b"]


def test_h2_sublist_and_file_input(tmp_path):
    path = tmp_path / "z4.pres"
    path.write_text("generators: a\nrelators: a^4; a^8\n")
    code, out, _ = invoke("h2", str(path), "-p", "2", "--sublist", "1", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["d"] == 1 and len(doc["sublist"]) == 1


@pytest.mark.parametrize("argv, expected", [
    (("h1", "free2"), "[0, 0]"),
    (("h1", "sigma5"), "[2]"),
    (("h1modp", "zxz", "-p", "3"), "2"),
    (("tor", "z4", "-p", "2"), "1"),
    (("prank", "z4", "-p", "2"), "2"),
])
def test_small_commands(argv, expected):
    code, out, _ = invoke(*argv)
    assert (code, out.strip()) == (0, expected)


def test_h1_json():
    code, out, _ = invoke("h1", "z2xz2", "--json")
    assert json.loads(out) == {"invariants": [2, 2]}


def test_kb_and_reduce():
    code, out, _ = invoke("kb", "sigma5", "--word", "a^5 b a b^-1")
    assert code == 0
    assert "status: confluent" in out and "normal forms: 120" in out
    assert out.rstrip().endswith("reduced: b a b")
    code, out, _ = invoke("reduce", "z4", "-p", "2", "--word", "a^4", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["reduced"] == "a^4" and doc["identity"] is False
    code, out, _ = invoke("reduce", "z4", "-p", "2", "--word", "a^8", "--json")
    assert json.loads(out)["identity"] is True


def test_kb_dump_and_load(tmp_path):
    rules = tmp_path / "s5.rules"
    code, out1, _ = invoke("kb", "sigma5", "--dump-rules", str(rules))
    assert code == 0 and rules.exists()
    code, out2, _ = invoke("kb", "sigma5", "--load-rules", str(rules))
    assert code == 0 and out1 == out2
    code, _, err = invoke("kb", "z4", "--load-rules", str(rules))
    assert code == 1 and "generators" in err


def test_h2_dump_directory_reuse(tmp_path):
    code, out1, _ = invoke("h2", "sigma5", "-p", "2", "--dump-rules", str(tmp_path))
    assert code == 0 and list(tmp_path.glob("*.rules"))
    code, out2, _ = invoke("h2", "sigma5", "-p", "2", "--load-rules", str(tmp_path))
    assert code == 0 and out1 == out2


def test_simplify():
    code, out, _ = invoke("simplify", "z4_redundant", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["generators"] == ["a"]


def test_exit_1_on_bad_input(tmp_path):
    bad = tmp_path / "bad.pres"
    bad.write_text("generators: a\nrelators: a^\n")
    code, out, err = invoke("h1", str(bad))
    assert code == 1 and out == "" and "line 2" in err
    code, _, err = invoke("h1", "no_such_fixture")
    assert code == 1
    code, _, _ = invoke("h2", "sigma5", "-p", "2", "--sublist", "9")
    assert code == 1


def test_exit_1_on_usage_errors(capsys):
    assert main(["h2", "sigma5"]) == 1
    with pytest.raises(SystemExit) as info:
        main(["h2", "sigma5", "-p", "4"])
    assert info.value.code == 1
    with pytest.raises(UsageError):
        RunConfig(command="tor", input_path="z4")


def test_exit_2_when_capped():
    code, out, _ = invoke("h2", "sigma5", "-p", "2", "--max-eqns", "20")
    assert code == 2
    assert "d <= " in out and "upper bound" in out


def test_exit_2_when_interrupted():
    cfg = RunConfig(command="h2", input_path="sigma5", prime=PrimeField(2))
    cfg.cancel.set()
    out = io.StringIO()
    assert run(cfg, out, io.StringIO()) == 2
    assert "interrupted" in out.getvalue()


def test_exit_3_on_invariant_violation(monkeypatch):
    real = cli.second_homology_bound

    def broken(*args, **kwargs):
        report = real(*args, **kwargs)
        report.d += 1
        return report

    monkeypatch.setattr(cli, "second_homology_bound", broken)
    code, _, err = invoke("h2", "z4", "-p", "2")
    assert code == 3 and "internal error" in err


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lowhom", "h1", "sigma5"],
                          capture_output=True, text=True, timeout=60)
    assert proc.returncode == 0 and proc.stdout.strip() == "[2]"
