import json
from random import Random

from asmgram import Word, bounds_report
from asmgram.cli import main
from helpers import DATA


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_compute_exact_golden(capsys):
    code, out, _ = run(capsys, "compute", "01010", "--exact")
    assert code == 0
    assert "value: 3" in out
    assert "optimal" in out


def test_compute_exact_json(capsys):
    code, out, _ = run(capsys, "compute", "01010", "--exact", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["schema_version"] == 1
    assert payload["value"] == 3
    assert payload["optimal"] is True
    assert payload["bounds"]["best_lower"] == 3


def test_compute_single_letter(capsys):
    code, out, _ = run(capsys, "compute", "0", "--exact")
    assert code == 0
    assert "value: 0" in out


def test_compute_approx_random_within_sandwich(capsys):
    rng = Random(77)
    text = "".join(rng.choice("01") for _ in range(200))
    code, out, _ = run(capsys, "compute", text, "--approx", "--json")
    assert code == 0
    payload = json.loads(out)
    word = Word.from_text(text)
    report = bounds_report(word)
    assert report.log_lower <= payload["value"] <= word.n - 1
    assert payload["optimal"] is False


def test_compute_bounds_only(capsys):
    code, out, _ = run(capsys, "compute", "01010", "--bounds-only", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["value"] is None
    assert payload["bounds"]["trivial_upper"] == 4


def test_compute_empty_word_is_malformed(capsys):
    code, _, err = run(capsys, "compute", "", "--exact")
    assert code == 2
    assert "error" in err


def test_compute_word_outside_alphabet_is_malformed(capsys):
    code, _, err = run(capsys, "compute", "012", "--alphabet", "01")
    assert code == 2
    assert "not in the alphabet" in err


def test_compute_exact_over_length_limit(capsys):
    code, _, err = run(capsys, "compute", "01" * 20, "--exact")
    assert code == 2
    assert "exceeds" in err
    code, out, _ = run(capsys, "compute", "01" * 20, "--exact", "--max-exact-len", "40", "--json")
    assert code == 0


def test_compute_strict_budget_exhaustion_exits_3(capsys):
    rng = Random(4)
    text = "".join(rng.choice("01") for _ in range(60))
    code, out, _ = run(
        capsys,
        "compute", text,
        "--exact", "--strict", "--json",
        "--node-budget", "10",
        "--max-exact-len", "60",
    )
    assert code == 3
    payload = json.loads(out)
    assert payload["optimal"] is False
    assert payload["value"] is not None


def test_emitted_witnesses_reverify(capsys, tmp_path):
    plan_path = tmp_path / "w.plan"
    slp_path = tmp_path / "w.slp"
    witness_path = tmp_path / "w.bits"
    code, _, _ = run(
        capsys,
        "compute", "01010", "--exact",
        "--emit-plan", str(plan_path),
        "--emit-grammar", str(slp_path),
        "--emit-witness", str(witness_path),
    )
    assert code == 0
    code, out, _ = run(capsys, "verify", "--plan", str(plan_path), "--target", "01010", "--k", "3")
    assert code == 0 and "accepted" in out
    code, out, _ = run(capsys, "verify", "--witness", str(witness_path), "--target", "01010", "--k", "3")
    assert code == 0 and "accepted" in out
    assert slp_path.read_text().startswith("alphabet:")


def test_verify_golden_plan_file(capsys):
    path = DATA / "golden_01010.plan"
    code, out, _ = run(capsys, "verify", "--plan", str(path), "--target", "01010", "--k", "3")
    assert code == 0
    code, out, _ = run(capsys, "verify", "--plan", str(path), "--target", "01010", "--k", "2")
    assert code == 1
    assert "rejected" in out


def test_verify_rejection_prints_product(capsys, tmp_path):
    bad = tmp_path / "bad.plan"
    bad.write_text("alphabet: 0 1\ns1 = '0' + '1'\n")
    code, out, _ = run(capsys, "verify", "--plan", str(bad), "--target", "10", "--k", "1")
    assert code == 1
    assert "produced: 01" in out


def test_verify_forward_reference_reports_line(capsys, tmp_path):
    bad = tmp_path / "bad.plan"
    bad.write_text("alphabet: 0 1\ns1 = s2 + '0'\ns2 = '0' + '1'\n")
    code, _, err = run(capsys, "verify", "--plan", str(bad), "--target", "01", "--k", "2")
    assert code == 2
    assert "line 2" in err


def test_convert_roundtrip_is_stable_after_one_pass(capsys, tmp_path):
    grammar1 = tmp_path / "g1.slp"
    plan1 = tmp_path / "p1.plan"
    grammar2 = tmp_path / "g2.slp"
    plan2 = tmp_path / "p2.plan"
    assert run(capsys, "convert", "--plan", str(DATA / "golden_01010.plan"), "--out", str(grammar1))[0] == 0
    assert run(capsys, "convert", "--grammar", str(grammar1), "--out", str(plan1))[0] == 0
    assert run(capsys, "convert", "--plan", str(plan1), "--out", str(grammar2))[0] == 0
    assert run(capsys, "convert", "--grammar", str(grammar2), "--out", str(plan2))[0] == 0
    assert grammar1.read_bytes() == grammar2.read_bytes()
    assert plan1.read_bytes() == plan2.read_bytes()


def test_convert_singleton_grammar_to_empty_plan(capsys, tmp_path):
    grammar = tmp_path / "one.slp"
    grammar.write_text("alphabet: a\nstart: R1\nR1 -> 'a'\n")
    out_plan = tmp_path / "one.plan"
    code, _, _ = run(capsys, "convert", "--grammar", str(grammar), "--out", str(out_plan))
    assert code == 0
    assert out_plan.read_text() == "alphabet: a\ntarget: a\n"


def test_convert_cyclic_grammar_fails(capsys, tmp_path):
    grammar = tmp_path / "cyc.slp"
    grammar.write_text("alphabet: a\nstart: R1\nR1 -> R2 'a'\nR2 -> R1 'a'\n")
    code, _, err = run(capsys, "convert", "--grammar", str(grammar), "--out", str(tmp_path / "x"))
    assert code == 2
    assert "cycle" in err


def test_decide_exit_codes(capsys):
    assert run(capsys, "decide", "01010", "3")[0] == 0
    assert run(capsys, "decide", "01010", "2")[0] == 1
    code, out, _ = run(capsys, "decide", "010011", "5")
    assert code == 0 and out.strip() == "YES"


def test_decide_unknown_exit_code(capsys):
    rng = Random(5)
    text = "".join(rng.choice("01") for _ in range(64))
    k = bounds_report(Word.from_text(text)).best_lower + 1
    code, out, _ = run(capsys, "decide", text, str(k), "--node-budget", "5")
    assert code == 4
    assert out.strip() == "UNKNOWN"


def test_oracle_command(capsys):
    code, out, _ = run(capsys, "oracle", "01010")
    assert code == 0
    assert out.strip() == "3"


def test_audit_command_writes_csv_and_figure(capsys, tmp_path):
    report = tmp_path / "audit.csv"
    code, out, _ = run(capsys, "audit", "--alphabet", "01", "--max-n", "4", "--report", str(report))
    assert code == 0
    assert "violations: 0" in out
    assert report.exists()
    assert (tmp_path / "audit_values.png").exists()


def test_audit_no_figures_flag(capsys, tmp_path):
    report = tmp_path / "audit.csv"
    code, _, _ = run(
        capsys, "audit", "--alphabet", "01", "--max-n", "3", "--report", str(report), "--no-figures"
    )
    assert code == 0
    assert not (tmp_path / "audit_values.png").exists()


def test_bench_random_is_deterministic(capsys, tmp_path):
    first = tmp_path / "a.csv"
    second = tmp_path / "b.csv"
    for path in (first, second):
        code, _, _ = run(
            capsys, "bench", "--random", "16", "5", "7", "--csv", str(path), "--no-figures"
        )
        assert code == 0
    assert first.read_bytes() == second.read_bytes()


def test_bench_unary_corpus_balanced_column(capsys, tmp_path):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    for k in range(1, 7):
        (corpus / f"a{1 << k:03d}.txt").write_text("a" * (1 << k))
    out_csv = tmp_path / "bench.csv"
    code, _, _ = run(capsys, "bench", "--corpus", str(corpus), "--csv", str(out_csv), "--times")
    assert code == 0
    lines = out_csv.read_text().splitlines()
    header = lines[0].split(",")
    assert "balanced_time_s" in header
    balanced = header.index("balanced_size")
    ks = [int(line.split(",")[balanced]) for line in lines[1:]]
    assert ks == [1, 2, 3, 4, 5, 6]
    assert (tmp_path / "bench_sizes.png").exists()
    assert (tmp_path / "bench_times.png").exists()


def test_bench_rows_within_sandwich(capsys, tmp_path):
    out_csv = tmp_path / "r.csv"
    code, _, _ = run(
        capsys, "bench", "--random", "100", "4", "11", "--csv", str(out_csv), "--no-figures"
    )
    assert code == 0
    lines = out_csv.read_text().splitlines()
    header = lines[0].split(",")
    for line in lines[1:]:
        row = dict(zip(header, line.split(",")))
        for method in ("repair", "balanced"):
            size = int(row[f"{method}_size"])
            assert int(row["log_lower"]) <= size <= int(row["trivial_upper"])
            assert int(row["lz_lower"]) <= size


def test_bench_unreadable_corpus(capsys, tmp_path):
    code, _, err = run(capsys, "bench", "--corpus", str(tmp_path / "nope"), "--csv", str(tmp_path / "x.csv"))
    assert code == 2
    assert "corpus" in err
