import json

from todalab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


class TestPq:
    def test_b3_document(self, capsys):
        doc = run_json(capsys, "pq", "--type", "B3")
        assert doc["schema_version"] == 1
        assert doc["p"] == "(q-1)(q^2-1)(q^3-1)"
        assert doc["coeffs"] == [-1, 1, 1, 0, -1, -1, 1]
        assert doc["matches_closed_form"] is True

    def test_mixed_sign(self, capsys):
        doc = run_json(capsys, "pq", "--type", "A2", "--sign", "-+")
        assert doc["coeffs"] == []
        assert "matches_closed_form" not in doc

    def test_text_format(self, capsys):
        code, out, _ = run(capsys, "pq", "--type", "A2", "--format", "text")
        assert code == 0
        assert out.strip() == "A2 --: q^2 - 1"


class TestEta:
    def test_csv(self, capsys):
        code, out, _ = run(capsys, "eta", "--type", "A2", "--sign", "--",
                           "--format", "csv")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "word,length,eta,sign"
        assert len(lines) == 7

    def test_json_max(self, capsys):
        doc = run_json(capsys, "eta", "--type", "G2")
        assert doc["max_eta"] == 4
        assert len(doc["table"]) == 12


class TestGraph:
    def test_dot_header(self, capsys):
        code, out, _ = run(capsys, "graph", "--type", "A3", "--sign", "---",
                           "--format", "dot")
        assert code == 0
        assert out.count("[label=") == 24
        assert "components=10" in out

    def test_json_betti(self, capsys):
        doc = run_json(capsys, "graph", "--type", "A2")
        assert doc["matching"] is True
        assert doc["betti"] == [1, 0, 0, 1]
        doc3 = run_json(capsys, "graph", "--type", "A3")
        assert doc3["matching"] is False
        assert "betti" not in doc3


class TestSchur:
    def test_experiment(self, capsys):
        doc = run_json(capsys, "schur", "--type", "G2", "--experiment",
                       "real-roots", "--samples", "20", "--seed", "7")
        assert doc["modal_count"] == 4
        assert doc["matches_expected"] is True

    def test_tau_document(self, capsys):
        doc = run_json(capsys, "schur", "--type", "B2", "--hirota")
        assert doc["minimal_degrees"] == [2, 1]
        assert doc["nu_degrees"] == [4, 3]
        assert doc["hirota"] == [
            {"a0": "-1", "k": 1, "residual_zero": True},
            {"a0": "-1/2", "k": 2, "residual_zero": True},
        ]


class TestAffine:
    def test_guess(self, capsys):
        doc = run_json(capsys, "affine", "--rank", "1", "--lmax", "12", "--guess")
        assert doc["coeffs"][:5] == [1, -2, 2, -2, 2]
        assert doc["rational_guess"] == "(-q + 1) / (q + 1)"
        assert doc["counts_per_length"][:3] == [1, 2, 2]

    def test_insufficient_data_reported(self, capsys):
        doc = run_json(capsys, "affine", "--rank", "1", "--lmax", "6", "--guess")
        assert doc["rational_guess"] is None
        assert doc["rational_guess_error"] == "insufficient-data"

    def test_bad_sign_length(self, capsys):
        code, _, err = run(capsys, "affine", "--rank", "2", "--sign", "--", "--lmax", "4")
        assert code == 1
        assert "validation" in err


class TestOde:
    def test_csv_trajectory(self, capsys):
        code, out, _ = run(capsys, "ode", "--type", "A1", "--a", "1", "--b", "0",
                           "--t1", "2", "--format", "csv")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "t,a1,b1,tau1"
        assert len(lines) > 100

    def test_negative_initial_data(self, capsys):
        doc = run_json(capsys, "ode", "--type", "A2", "--a", "-1,-1",
                       "--b", "1,-1", "--t1", "10")
        assert doc["status"] == "blow-up"
        assert len(doc["events"]) == 1

    def test_json_summary(self, capsys):
        doc = run_json(capsys, "ode", "--type", "A1", "--a", "1", "--b", "0",
                       "--t1", "2")
        assert doc["status"] == "complete"
        assert doc["invariant_drift"] < 1e-8


class TestChevalley:
    def test_brute_match(self, capsys):
        doc = run_json(capsys, "chevalley", "--type", "A2", "--q", "5", "--brute")
        assert doc["order"] == doc["brute_force_order"] == 120
        assert doc["matches"] is True

    def test_invalid_q_is_computational_error(self, capsys):
        code, _, err = run(capsys, "chevalley", "--type", "A2", "--q", "4")
        assert code == 2
        assert "invalid-q" in err


class TestErrorsAndPlumbing:
    def test_unknown_type_exit_1(self, capsys):
        code, _, err = run(capsys, "pq", "--type", "Q9")
        assert code == 1

    def test_bad_sign_length_exit_1(self, capsys):
        code, _, err = run(capsys, "pq", "--type", "A2", "--sign", "---")
        assert code == 1

    def test_unsupported_tau_type_exit_2(self, capsys):
        code, _, err = run(capsys, "schur", "--type", "E6")
        assert code == 2
        assert "unsupported-type" in err

    def test_cap_exceeded_exit_2(self, capsys):
        code, _, err = run(capsys, "pq", "--type", "E7")
        assert code == 2
        assert "cap-exceeded" in err

    def test_missing_subcommand_exit_1(self, capsys):
        assert run(capsys, )[0] == 1

    def test_deterministic_bytes(self, capsys):
        _, out1, _ = run(capsys, "graph", "--type", "B2", "--format", "dot")
        _, out2, _ = run(capsys, "graph", "--type", "B2", "--format", "dot")
        assert out1 == out2

    def test_csv_uses_crlf(self, tmp_path, capsys):
        target = tmp_path / "eta.csv"
        code, _, _ = run(capsys, "eta", "--type", "A1", "--sign", "-",
                         "--format", "csv", "--out", str(target))
        assert code == 0
        raw = target.read_bytes()
        assert raw == b"word,length,eta,sign\r\ne,0,0,-\r\n1,1,1,-\r\n"

    def test_out_file(self, tmp_path, capsys):
        target = tmp_path / "pq.json"
        code, out, _ = run(capsys, "pq", "--type", "A2", "--out", str(target))
        assert code == 0 and out == ""
        assert json.loads(target.read_text())["p"] == "(q^2-1)"

    def test_conventions(self, capsys):
        doc = run_json(capsys, "conventions")
        assert doc["types"]["G2"]["cartan"] == [[2, -1], [-3, 2]]


class TestCache:
    def test_list_and_clear(self, tmp_path, capsys):
        run_json(capsys, "pq", "--type", "B2", "--cache-dir", str(tmp_path))
        doc = run_json(capsys, "cache", "list", "--cache-dir", str(tmp_path))
        assert len(doc["entries"]) == 1
        assert doc["entries"][0]["file"].startswith("weyl_B2")
        doc = run_json(capsys, "cache", "clear", "--cache-dir", str(tmp_path))
        assert doc["removed"] == 1
        doc = run_json(capsys, "cache", "clear", "--cache-dir", str(tmp_path))
        assert doc["removed"] == 0

    def test_corrupted_entry_recovered(self, tmp_path, capsys):
        run_json(capsys, "pq", "--type", "A2", "--cache-dir", str(tmp_path))
        victim = next(tmp_path.glob("weyl_*.json"))
        victim.write_text("not json at all")
        doc = run_json(capsys, "pq", "--type", "A2", "--cache-dir", str(tmp_path))
        assert doc["matches_closed_form"] is True


def test_verify_rejects_bad_scope(capsys):
    code, _, err = run(capsys, "verify", "--scope", "")
    assert code == 1


def test_verify_fast_scope(capsys):
    code, out, _ = run(capsys, "verify", "--scope", "fast")
    assert code == 0
    lines = [ln for ln in out.splitlines() if ln.startswith("[")]
    assert len(lines) == 13
    assert all(ln.startswith("[PASS]") for ln in lines)


def test_verify_out_file_is_json_only(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = run(capsys, "verify", "--scope", "fast", "--out", str(target))
    assert code == 0
    assert out == ""  # stdout is used only when --out is absent
    doc = json.loads(target.read_text())
    assert doc["failed"] == 0 and doc["passed"] == 13
