import pandas as pd
import pytest

import artifacts
import config
import solver


@pytest.fixture(autouse=True)
def isolated(monkeypatch, tmp_path):
    monkeypatch.setattr(config, "LOG_FILE", tmp_path / "solver.log")
    monkeypatch.setattr(config, "ENV_FILE", tmp_path / ".env")
    for name in (config.ENV_OUT_DIR, config.ENV_THREADS, config.ENV_CONFIG_DIR, config.ENV_LOG_LEVEL):
        monkeypatch.delenv(name, raising=False)


def read_csv(path):
    return pd.read_csv(path, comment="#")


def test_write_table_requires_init():
    artifacts.close_output()
    with pytest.raises(RuntimeError):
        artifacts.write_table("x", pd.DataFrame({"a": [1.0]}))


def test_write_table_with_timestamp(tmp_path):
    artifacts.init_output(tmp_path, timestamp=True)
    path = artifacts.write_table("t", pd.DataFrame({"R": [5.0], "err": [0.1], "seconds": [1.5]}), "note line")
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# generated ")
    assert lines[1] == "# note line"
    assert lines[2] == "R,err,seconds"
    assert artifacts.close_output() == [path]


def test_write_table_without_timestamp(tmp_path):
    artifacts.init_output(tmp_path, timestamp=False)
    path = artifacts.write_table("t", pd.DataFrame({"R": [5.0], "err": [0.1], "seconds": [1.5]}))
    artifacts.close_output()
    assert path.read_text() == "R,err\n5,0.10000000000000001\n"


def test_run_table2_is_reproducible(tmp_path):
    first, second = tmp_path / "first", tmp_path / "second"
    assert solver.main(["run", "table2", "--out", str(first), "--no-timestamp"]) == config.EXIT_OK
    assert solver.main(["run", "table2", "--out", str(second), "--no-timestamp"]) == config.EXIT_OK
    assert (first / "table2.csv").read_bytes() == (second / "table2.csv").read_bytes()
    frame = read_csv(first / "table2.csv")
    assert list(frame.columns) == ["R", "abs_err_u1", "abs_err_u2"]
    assert len(frame) == 6


def test_out_dir_from_environment(monkeypatch, tmp_path):
    monkeypatch.setenv(config.ENV_OUT_DIR, str(tmp_path / "env_out"))
    assert solver.main(["run", "table3"]) == config.EXIT_OK
    assert (tmp_path / "env_out" / "table3.csv").exists()


def test_select_radius_command(tmp_path, capsys):
    assert solver.main(["select-R", "--tol", "1e-2", "--out", str(tmp_path), "--no-timestamp"]) == config.EXIT_OK
    advice = read_csv(tmp_path / "select_R.csv")
    assert advice.loc[0, "certified_error"] <= 1e-2
    assert capsys.readouterr().out.startswith("R = ")


def test_radius_overflow_exit_code(tmp_path):
    assert solver.main(["select-R", "--tol", "1e-6", "--out", str(tmp_path)]) == config.EXIT_NUMERICAL_FAILURE


def test_bad_config_exit_code(tmp_path):
    path = tmp_path / "bad.toml"
    path.write_text('experiment = "custom"\n[quadrature]\nR = -5.0\nwidth = 3\n')
    assert solver.main(["solve", "--config", str(path), "--out", str(tmp_path)]) == config.EXIT_CONFIG_ERROR


def test_bad_thread_count_in_environment(monkeypatch, tmp_path):
    monkeypatch.setenv(config.ENV_THREADS, "many")
    assert solver.main(["solve", "--out", str(tmp_path)]) == config.EXIT_CONFIG_ERROR


def test_spectral_failure_exit_code(tmp_path):
    path = tmp_path / "inviscid.toml"
    path.write_text(
        'experiment = "custom"\n'
        "[monte_carlo]\nK = 8\n"
        '[nu_dist]\nkind = "gamma"\nshape = 4.0\nrate = 2.0\nlo = 0.0\nhi = 1.5\n'
        "[grid]\nz_range = [0.0, 1.0, 0.5]\n"
    )
    assert solver.main(["moments", "--config", str(path), "--out", str(tmp_path)]) == config.EXIT_HYPOTHESIS_FAILURE


def test_solve_and_moments_commands(tmp_path):
    path = tmp_path / "small.toml"
    path.write_text(
        'experiment = "custom"\n'
        "[monte_carlo]\nK = 16\n"
        "[grid]\nz_range = [0.0, 1.0, 0.5]\nt_range = [0.0, 1.0, 0.5]\n"
    )
    assert solver.main(["solve", "--config", str(path), "--out", str(tmp_path), "--no-timestamp"]) == config.EXIT_OK
    assert solver.main(["moments", "--config", str(path), "--out", str(tmp_path), "--seed", "3"]) == config.EXIT_OK
    assert len(read_csv(tmp_path / "solution.csv")) == 9
    assert read_csv(tmp_path / "moments.csv")["z"].tolist() == [0.0, 0.5, 1.0]


def test_wrongly_typed_config_exit_code(tmp_path):
    path = tmp_path / "typed.toml"
    path.write_text('experiment = "table2"\n[quadrature]\nR_list = ["x"]\n[monte_carlo]\nthreads = "two"\n')
    assert solver.main(["run", "table2", "--config", str(path), "--out", str(tmp_path)]) == config.EXIT_CONFIG_ERROR


def test_moments_identical_across_thread_counts(tmp_path):
    path = tmp_path / "threads.toml"
    path.write_text('experiment = "custom"\n[monte_carlo]\nK = 200\nseed = 5\n[grid]\nz_range = [0.0, 2.0, 0.5]\n')
    single, pooled = tmp_path / "single", tmp_path / "pooled"
    common = ["moments", "--config", str(path), "--no-timestamp"]
    assert solver.main(common + ["--threads", "1", "--out", str(single)]) == config.EXIT_OK
    assert solver.main(common + ["--threads", "4", "--out", str(pooled)]) == config.EXIT_OK
    assert (single / "moments.csv").read_bytes() == (pooled / "moments.csv").read_bytes()
