"""End-to-end CLI tests: output formats, exit codes, oracle diffs, CSV."""

import os
import subprocess
import sys

from amckit import compile_to_mods, read_dimacs, write_d4
from amckit.bench import CSV_HEADER
from amckit.cli import main

DATA = os.path.join(os.path.dirname(__file__), "..", "data")


def data_path(name):
    return os.path.join(DATA, name)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_amc_prob(capsys):
    code, out, _ = run_cli(capsys, "amc",
                           "--circuit", data_path("example2.nnf"),
                           "--weights", data_path("example1.w"),
                           "--semiring", "prob", "--smooth")
    assert code == 0
    assert abs(float(out.strip()) - 0.44) < 1e-12


def test_amc_nat_unit_weights(capsys):
    code, out, _ = run_cli(capsys, "amc",
                           "--circuit", data_path("example2.nnf"),
                           "--semiring", "nat", "--smooth")
    assert code == 0
    assert out.strip() == "3"


def test_amc_bool(capsys):
    code, out, _ = run_cli(capsys, "amc",
                           "--circuit", data_path("example2.nnf"),
                           "--semiring", "bool", "--smooth")
    assert code == 0
    assert out.strip() == "T"


def test_amc_log_prefix(capsys):
    code, out, _ = run_cli(capsys, "amc",
                           "--circuit", data_path("example2.nnf"),
                           "--weights", data_path("example1.w"),
                           "--semiring", "log", "--smooth")
    assert code == 0
    assert out.strip().startswith("log:")


def test_amc_gate_failure_exit_code(capsys):
    code, out, err = run_cli(capsys, "amc",
                             "--circuit", data_path("example2.nnf"),
                             "--weights", data_path("example1.w"),
                             "--semiring", "prob")
    assert code == 4
    assert "smooth" in err


def test_grad_lines(capsys):
    code, out, _ = run_cli(capsys, "grad",
                           "--circuit", data_path("example2.nnf"),
                           "--weights", data_path("example1.w"),
                           "--semiring", "prob", "--smooth")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 6
    got = dict(line.split() for line in lines)
    assert abs(float(got["3"]) - 0.55) < 1e-12
    assert float(got["-3"]) == 0.0
    assert [line.split()[0] for line in lines] == ["1", "2", "3", "-1", "-2", "-3"]


def test_grad_per_variable(capsys):
    code, out, _ = run_cli(capsys, "grad",
                           "--circuit", data_path("example2.nnf"),
                           "--weights", data_path("example1.w"),
                           "--semiring", "prob", "--smooth", "--per-variable")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 3
    assert abs(float(lines[0].split()[1]) - 0.72) < 1e-12


def test_grad_per_variable_non_ring_exit_code(capsys):
    code, _, err = run_cli(capsys, "grad",
                           "--circuit", data_path("example2.nnf"),
                           "--weights", data_path("example1.w"),
                           "--semiring", "fuzzy", "--smooth", "--per-variable")
    assert code == 5
    assert "inverse" in err


def test_grad_variants_agree_end_to_end(capsys):
    outputs = []
    for algo in ("naive", "cancel", "dynamic", "opt"):
        code, out, _ = run_cli(capsys, "grad",
                               "--circuit", data_path("example2.nnf"),
                               "--weights", data_path("example1.w"),
                               "--semiring", "prob", "--smooth",
                               "--algo", algo)
        assert code == 0
        outputs.append(out)
    assert len(set(outputs)) == 1


def test_oracle_amc(capsys):
    code, out, _ = run_cli(capsys, "oracle",
                           "--cnf", data_path("example1.cnf"),
                           "--weights", data_path("example1.w"),
                           "--semiring", "prob")
    assert code == 0
    assert abs(float(out.strip()) - 0.44) < 1e-12


def test_oracle_grad_diffs_empty_against_engine(capsys, tmp_path):
    # compile the CNF to a DNF-of-models circuit; cube and model orders
    # match, so the recomputation variant associates its products exactly
    # like the oracle fold and text outputs diff empty
    phi, _ = read_dimacs(data_path("example1.cnf"))
    circuit = compile_to_mods(phi)
    nnf = tmp_path / "mods.nnf"
    write_d4(circuit, str(nnf))
    code, oracle_out, _ = run_cli(capsys, "oracle",
                                  "--cnf", data_path("example1.cnf"),
                                  "--weights", data_path("example1.w"),
                                  "--semiring", "prob", "--mode", "grad")
    assert code == 0
    code, engine_out, _ = run_cli(capsys, "grad",
                                  "--circuit", str(nnf),
                                  "--weights", data_path("example1.w"),
                                  "--semiring", "prob", "--algo", "naive")
    assert code == 0
    assert oracle_out == engine_out


def test_oracle_scale_guard(capsys, tmp_path):
    lines = [f"p cnf 30 1", "1 0"]
    big = tmp_path / "big.cnf"
    big.write_text("\n".join(lines) + "\n")
    # formula mentions one variable; force failure via a wide clause instead
    wide = tmp_path / "wide.cnf"
    clause = " ".join(str(v) for v in range(1, 26)) + " 0"
    wide.write_text("p cnf 25 1\n" + clause + "\n")
    code, _, err = run_cli(capsys, "oracle", "--cnf", str(wide),
                           "--semiring", "prob")
    assert code == 6
    assert "24" in err


def test_oracle_hessian_matches_matrix(capsys, tmp_path):
    import numpy as np
    from amckit import matrix_to_circuit
    m = np.array([[1, 0, 1, 0],
                  [0, 0, 1, 1],
                  [1, 1, 1, 0],
                  [0, 1, 0, 0]])
    circuit = matrix_to_circuit(m)
    nnf = tmp_path / "matrix.nnf"
    write_d4(circuit, str(nnf))
    code, out, _ = run_cli(capsys, "oracle", "--circuit", str(nnf),
                           "--semiring", "gf2", "--mode", "hessian")
    assert code == 0
    got = np.array([[int(tok) for tok in line.split()]
                    for line in out.strip().splitlines()])
    assert (got == m).all()


def test_validate_smooth_circuit(capsys):
    code, out, _ = run_cli(capsys, "validate",
                           "--circuit", data_path("example2_smooth.nnf"))
    assert code == 0
    assert "smooth: true" in out
    assert "decomposable: true" in out
    assert "deterministic: verified" in out


def test_validate_reports_unsmooth(capsys):
    code, out, _ = run_cli(capsys, "validate",
                           "--circuit", data_path("example2.nnf"))
    assert code == 4
    assert "smooth: false" in out


def test_validate_budget_flag(capsys):
    code, out, _ = run_cli(capsys, "validate",
                           "--circuit", data_path("example2_smooth.nnf"),
                           "--determinism-budget", "0")
    assert code == 0
    assert "deterministic: unverified" in out


def test_validate_parse_error_exit(capsys, tmp_path):
    bad = tmp_path / "bad.nnf"
    bad.write_text("nonsense\n")
    code, _, err = run_cli(capsys, "validate", "--circuit", str(bad))
    assert code == 3
    assert "bad.nnf" in err


def test_bench_csv_schema(capsys):
    code, out, _ = run_cli(capsys, "bench",
                           "--circuit", data_path("example2_smooth.nnf"),
                           "--semiring", "prob",
                           "--algos", "naive,dynamic",
                           "--repeat", "3", "--warmup", "1")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == CSV_HEADER
    rows = [line.split(",") for line in lines[1:]]
    assert len(rows) == 6  # 2 variants x 3 reps
    for row in rows:
        assert row[3] == "prob"
        assert float(row[7]) > 0.0  # backward_ms
        assert int(row[8]) > 0


def test_bench_non_timing_columns_reproducible(capsys):
    def run():
        code, out, _ = run_cli(capsys, "bench",
                               "--circuit", data_path("example2_smooth.nnf"),
                               "--semiring", "nat", "--algos", "dynamic,opt",
                               "--repeat", "2", "--warmup", "0", "--seed", "99")
        assert code == 0
        rows = [line.split(",") for line in out.strip().splitlines()[1:]]
        # everything except the two timing fields must be bit-identical
        return [r[:6] + r[8:] for r in rows]

    assert run() == run()


def test_bench_error_rows_keep_running(capsys, tmp_path):
    suite = tmp_path / "suite"
    suite.mkdir()
    (suite / "ok.nnf").write_text(
        open(data_path("example2_smooth.nnf")).read())
    (suite / "broken.nnf").write_text("garbage\n")
    code, out, _ = run_cli(capsys, "bench", "--suite", str(suite),
                           "--semiring", "prob", "--algos", "dynamic",
                           "--repeat", "2", "--warmup", "0")
    assert code == 0
    lines = out.strip().splitlines()[1:]
    errors = [l for l in lines if l.split(",")[0] == "broken.nnf"]
    ok = [l for l in lines if l.split(",")[0] == "ok.nnf"]
    assert len(errors) == 1 and errors[0].split(",")[-1] != ""
    assert len(ok) == 2


def test_cli_module_entry_point():
    result = subprocess.run(
        [sys.executable, "-m", "amckit.cli", "amc",
         "--circuit", data_path("example2.nnf"),
         "--weights", data_path("example1.w"),
         "--semiring", "prob", "--smooth"],
        capture_output=True, text=True,
    )
    assert result.returncode == 0
    assert abs(float(result.stdout.strip()) - 0.44) < 1e-12
