import numpy as np
import polars as pl
import pytest
from pydantic import ValidationError

from quiverflow.cli import RunConfig, _parse_args, main
from quiverflow.config import Window
from quiverflow.cyclic_systems import DarbouxChart, from_darboux
from quiverflow.kp_solutions import SolutionSeed
from quiverflow.operator_algebra import CherednikAlgebra, HBarElement, hbar_mul
from quiverflow.quiver_core import reflect_dim
from quiverflow.rep_variety import (
    TracePolynomial,
    TraceWord,
    poisson_bracket,
    relation_residual,
)
from quiverflow.utils.common import ChartKind
from quiverflow.utils.json_io import (
    chart_to_dict,
    decode_array,
    decode_complex,
    hbar_from_dict,
    hbar_to_dict,
    point_from_dict,
    point_to_dict,
    read_json,
    seed_to_dict,
    write_json,
)

X = (0.6, -0.7 + 0.3j)
P = (0.2, -0.1)


def _cm_chart(x=X, p=P):
    n = len(x)
    return DarbouxChart.normalized(
        ChartKind.JORDAN, 1, x, p, np.ones((n, 1, 1)), np.zeros((n, 1, 1)), (1.0,)
    )


@pytest.fixture
def cm_files(tmp_path):
    chart = _cm_chart()
    chart_path = write_json(tmp_path / "chart.json", chart_to_dict(chart))
    point = from_darboux(chart, (1.0,)).point
    point_path = write_json(tmp_path / "point.json", point_to_dict(point))
    return chart_path, point_path


def test_roots_classify(capsys, tmp_path):
    out = tmp_path / "root.json"
    argv = ["roots", "classify", "--quiver", "cyclic:3", "--dim", "1,1,1"]
    assert main([*argv, "--output", str(out)]) == 0
    assert "imaginary(+)" in capsys.readouterr().out
    data = read_json(out, "roots")
    assert data["class"] == "imaginary(+)"
    assert (data["q"], data["p"]) == (0, 1)

    assert main(["roots", "classify", "--quiver", "cyclic:2", "--dim", "2,0"]) == 0
    assert "not-root" in capsys.readouterr().out


def test_roots_regular(tmp_path):
    out = tmp_path / "regular.json"
    argv = ["roots", "regular", "--quiver", "cyclic:2", "--weight", "1,-1"]
    assert main([*argv, "--output", str(out)]) == 0
    data = read_json(out, "regularity")
    assert data["regular"] is False
    assert data["witness"] == [1, 1]

    argv = ["roots", "regular", "--quiver", "cyclic:2", "--weight", "1,2"]
    assert main([*argv, "--output", str(out)]) == 0
    assert read_json(out, "regularity")["regular"] is True


def test_roots_exists(tmp_path):
    out = tmp_path / "exists.json"
    argv = ["roots", "exists", "--quiver", "cyclic:2", "--weight", "1,-1"]
    assert main([*argv, "--dim", "1,1", "--output", str(out)]) == 0
    data = read_json(out, "existence")
    assert data["R+(lam)"]["state"] == "yes"
    assert data["Sigma(lam)"]["state"] == "yes"


def test_orbit_scan_csv(tmp_path):
    out = tmp_path / "scan.csv"
    argv = ["roots", "orbit-scan", "--m", "2", "--height", "4", "--format", "csv"]
    assert main([*argv, "--output", str(out)]) == 0
    frame = pl.read_csv(out)
    assert frame.columns == ["alpha", "q", "p", "reached", "n", "chain"]
    assert frame.height > 0


def test_rep_commands(cm_files, tmp_path):
    _, point_path = cm_files
    out = tmp_path / "check.json"
    base = ["rep", "verify", "--point", str(point_path)]
    assert main([*base, "--weight", "-2,1", "--output", str(out)]) == 0
    assert read_json(out, "check")["passed"] is True
    assert main([*base, "--weight", "1"]) == 0
    assert main([*base, "--weight", "-2,3"]) == 1

    argv = ["rep", "simple", "--point", str(point_path)]
    assert main([*argv, "--output", str(out)]) == 0
    assert read_json(out, "check")["simple"] is True

    argv = ["rep", "bracket", "--point", str(point_path), "--f", "tr:x0*,x0*"]
    assert main([*argv, "--g", "tr:x0", "--output", str(out)]) == 0
    point = point_from_dict(read_json(point_path, "point"))
    f = TracePolynomial.word(TraceWord.parse(point.quiver, "tr:x0*,x0*"))
    g = TracePolynomial.word(TraceWord.parse(point.quiver, "tr:x0"))
    found = decode_complex(read_json(out, "bracket")["value"])
    np.testing.assert_allclose(found, poisson_bracket(point, f, g), atol=1e-12)


def test_cm_build_and_extract(cm_files, tmp_path):
    chart_path, _ = cm_files
    built, extracted = tmp_path / "built.json", tmp_path / "extracted.json"
    argv = ["cm", "build", "--coords", str(chart_path), "--weight", "1"]
    assert main([*argv, "--output", str(built)]) == 0
    argv = ["cm", "extract", "--point", str(built), "--weight", "1"]
    assert main([*argv, "--output", str(extracted)]) == 0
    x = decode_array(read_json(extracted, "chart")["x"], (2,))
    np.testing.assert_allclose(np.sort_complex(x), np.sort_complex(X), atol=1e-9)


def test_cm_random_build_and_rank(tmp_path):
    point_path, rank_path = tmp_path / "delta.json", tmp_path / "rank.json"
    argv = ["cm", "build", "--m", "2", "--n", "1", "--d", "1", "--zeta", "delta"]
    argv += ["--weight", "1,0.5", "--seed", "3"]
    assert main([*argv, "--output", str(point_path)]) == 0
    point = point_from_dict(read_json(point_path, "point"))
    assert point.dims == (1, 1, 1)

    argv = ["cm", "rank", "--point", str(point_path), "--weight", "1,0.5"]
    assert main([*argv, "--family", "Hlr", "--output", str(rank_path)]) == 0
    assert read_json(rank_path, "rank")["rank"] == 2


def test_reflect(tmp_path):
    point_path = tmp_path / "delta.json"
    argv = ["cm", "build", "--m", "2", "--n", "2", "--zeta", "delta"]
    assert main([*argv, "--weight", "1,0.5", "--output", str(point_path)]) == 0
    point = point_from_dict(read_json(point_path, "point"))

    out = tmp_path / "reflected.json"
    argv = ["reflect", "--point", str(point_path), "--vertex", "0"]
    assert main([*argv, "--weight", "1,0.5", "--output", str(out)]) == 0
    data = read_json(out, "point")
    reflected = point_from_dict(data)
    np.testing.assert_array_equal(
        reflected.dims, reflect_dim(point.quiver, "0", point.dims)
    )
    weight = [decode_complex(v) for v in data["weight"]]
    scale = max(1.0, reflected.scale()) ** 2
    assert relation_residual(reflected, weight) <= 1e-9 * scale

    argv = ["reflect", "chain", "--point", str(point_path), "--chain", "inf,0,inf"]
    assert main([*argv, "--weight", "1,0.5", "--output", str(out)]) == 0
    assert len(read_json(out, "point")["transport"]) == 3

    assert main(["reflect", "--point", str(point_path), "--weight", "1,0.5"]) == 1


def test_flow_Hp(cm_files, tmp_path):
    _, point_path = cm_files
    moved_path, log_path = tmp_path / "moved.json", tmp_path / "log.csv"
    argv = ["flow", "--point", str(point_path), "--hamiltonian", "Hp:x0*,x0*"]
    argv += ["--t", "0.5", "--weight", "1", "--log", str(log_path)]
    assert main([*argv, "--output", str(moved_path)]) == 0
    point = point_from_dict(read_json(point_path, "point"))
    moved = point_from_dict(read_json(moved_path, "point"))
    np.testing.assert_allclose(
        moved.mat("x0"), point.mat("x0") - 2 * 0.5 * point.mat("x0*"), atol=1e-12
    )
    log = pl.read_csv(log_path)
    assert log["residual"].max() <= 1e-9

    argv = ["flow", "--point", str(point_path), "--hamiltonian", "H:1", "--t", "1"]
    assert main(argv) == 1


def test_flow_Hlr(tmp_path):
    point_path, log_path = tmp_path / "delta.json", tmp_path / "log.csv"
    argv = ["cm", "build", "--m", "2", "--n", "1", "--zeta", "delta"]
    assert main([*argv, "--weight", "1,0.5", "--output", str(point_path)]) == 0
    argv = ["flow", "--point", str(point_path), "--hamiltonian", "Hlr:1,1"]
    argv += ["--t", "0.5", "--steps", "2", "--weight", "1,0.5", "--log", str(log_path)]
    assert main(argv) == 0
    log = pl.read_csv(log_path)
    assert log.height == 3
    assert log["I_A_drift"].max() <= 1e-7


def test_op_commands(tmp_path):
    algebra = CherednikAlgebra((1.0,), -4, 3)
    y, x = HBarElement.y(algebra), HBarElement.x(algebra)
    left = write_json(tmp_path / "y.json", hbar_to_dict(y))
    right = write_json(tmp_path / "x.json", hbar_to_dict(x))
    out = tmp_path / "product.json"
    assert main(["op", "mul", str(left), str(right), "--output", str(out)]) == 0
    product = hbar_from_dict(read_json(out, "operator"))
    assert (product - hbar_mul(y, x)).is_zero

    report = tmp_path / "assoc.json"
    argv = ["op", "check-assoc", "--seed", "7", "--window", "-5,4", "--samples", "2"]
    assert main([*argv, "--output", str(report)]) == 0
    assert read_json(report, "report")["passed"] is True


def test_kp_emit(capsys, tmp_path):
    x1, p = 0.3 - 0.2j, 0.7
    seed = SolutionSeed.calogero_moser([[x1]], [[p]], [[1.0]], [[1.0]])
    seed_path = write_json(tmp_path / "cm1.json", seed_to_dict(seed))

    assert main(["kp", "emit", "--seed", str(seed_path), "--t", "0"]) == 0
    assert "u = -(" in capsys.readouterr().out

    out = tmp_path / "solution.json"
    argv = ["kp", "emit", "--seed", str(seed_path), "--t", "0,0.3"]
    assert main([*argv, "--output", str(out)]) == 0
    poles = decode_array(read_json(out, "solution")["poles"], (1,))
    np.testing.assert_allclose(poles, [x1 - 2 * 0.3 * p], atol=1e-12)

    csv = tmp_path / "u.csv"
    argv = ["kp", "emit", "--seed", str(seed_path), "--format", "csv", "--x", "1.5,2"]
    assert main([*argv, "--output", str(csv)]) == 0
    assert pl.read_csv(csv).columns == ["x", "re_u", "im_u"]


def test_kp_verify(tmp_path):
    seed = SolutionSeed.from_chart(_cm_chart(), (1.0,), Window(low=-4, high=4))
    seed_path = write_json(tmp_path / "seed.json", seed_to_dict(seed))
    report, samples = tmp_path / "report.json", tmp_path / "samples.csv"
    argv = ["kp", "verify", "--seed", str(seed_path), "--flows", "2", "--h", "5e-4"]
    argv += ["--bound", "1e-5", "--window", "-4,4"]
    argv += ["--report", str(report), "--samples", str(samples)]
    assert main(argv) == 0
    data = read_json(report, "report")
    assert data["passed"] is True
    assert {item["check"] for item in data["items"]} == {"lax l=2", "kp equation"}
    frame = pl.read_csv(samples)
    assert frame.columns == ["x", "t2", "t3", "Re u", "Im u", "residual"]


def test_verify_is_deterministic(tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["verify", "moment", "dimension", "--seed", "7", "--quick"]
    assert main([*argv, "--report", str(first)]) == 0
    assert main([*argv, "--report", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()
    data = read_json(first, "report")
    assert data["seed"] == 7
    assert {item["suite"] for item in data["items"]} == {"moment", "dimension"}

    assert main(["verify", "bogus"]) == 1


def test_malformed_input(capsys, tmp_path):
    missing = tmp_path / "missing.json"
    assert main(["rep", "simple", "--point", str(missing)]) == 1
    assert "does not exist" in capsys.readouterr().out

    assert main(["roots", "classify", "--quiver", "bogus", "--dim", "1"]) == 1
    assert "error" in capsys.readouterr().out

    with pytest.raises(SystemExit):
        main(["roots", "classify", "--quiver", "jordan", "--dim", "a,b"])


def test_run_config():
    config = RunConfig.from_args(_parse_args(["verify", "--seed", "5"]))
    assert config.command == "verify"
    assert config.action is None
    assert config.seed == 5
    assert config.window == Window(low=-12, high=6)

    args = _parse_args(["rep", "verify", "--point", "p.json", "--weight", "-2,1"])
    config = RunConfig.from_args(args)
    assert config.options["weight"] == (-2, 1)
    assert config.input("point").name == "p.json"
    with pytest.raises(ValueError):
        config.input("seed_file")

    with pytest.raises(ValidationError):
        RunConfig(command="verify", format="yaml")
