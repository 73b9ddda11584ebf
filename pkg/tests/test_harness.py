import csv
import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adaseq.core import AlgoParams, ValidationError
from adaseq.functions import CoverageFunction, ModularFunction
from adaseq.harness import cli
from adaseq.harness.instances import (ConstraintSpec, InstanceFormatError, InstanceSpec,
                                      constraint_spec_of, function_spec_of, parse_constraint_text,
                                      parse_function_text, parse_instance, serialize_constraint,
                                      serialize_function, write_instance)
from adaseq.harness.runner import COLUMNS, read_rows, run_experiment, write_rows
from adaseq.matroids import GraphicMatroid, IntersectionConstraint, PartitionMatroid, UniformMatroid


def test_parse_modular():
    spec = parse_function_text("modular\n3\n1 2 3\n")
    assert spec.kind == "modular" and spec.n == 3
    assert spec.build()(frozenset({0, 2})) == 4


def test_parse_partition():
    spec = parse_constraint_text("partition\n2\n0 0 1\n1 1")
    m = spec.build()
    assert m.part_of == [0, 0, 1] and m.capacities == [1, 1]


def test_parse_coverage_graphic_intersection_hidden():
    f = parse_function_text("coverage\n3\n0 1\n-\n1 2 5\n").build()
    assert f(frozenset({0, 2})) == 4 and f(frozenset({1})) == 0
    g = parse_constraint_text("graphic\n3 3\n0 1\n1 2\n2 0\n").build()
    assert isinstance(g, GraphicMatroid) and g.rank() == 2
    text = "intersect\nuniform\n3\n2\n--\npartition\n2\n0 0 1\n1 1\n"
    m = parse_constraint_text(text).build()
    assert isinstance(m, IntersectionConstraint)
    assert m.is_independent({0, 2}) and not m.is_independent({0, 1})
    h = parse_constraint_text("hidden-partition\n12 3 1 5\n").build()
    assert h.n == 12 and not h.has_rank


@pytest.mark.parametrize("text, line", [
    ("modular\n3\n", 3),
    ("modular\n3\n1 2\n", 3),
    ("modular\nthree\n1 2 3\n", 2),
    ("coverage\n2\n0 1\n", 4),
    ("triangle\n3\n", 1),
])
def test_malformed_function_names_line(text, line):
    with pytest.raises(InstanceFormatError) as exc:
        parse_function_text(text, "f.txt")
    assert exc.value.line == line
    assert f"f.txt:{line}:" in str(exc.value)


@pytest.mark.parametrize("text", [
    "uniform\n3\n",
    "partition\n2\n0 0 2\n1 1\n",
    "graphic\n3 2\n0 1\n",
    "graphic\n3 1\n0 7\n",
    "partition\n2\n0 0 1\n1\n",
])
def test_malformed_constraint(text):
    with pytest.raises(InstanceFormatError):
        parse_constraint_text(text)


def test_n_mismatch(tmp_path):
    (tmp_path / "f.txt").write_text("modular\n3\n1 2 3\n")
    (tmp_path / "m.txt").write_text("uniform\n4\n2\n")
    with pytest.raises(ValidationError):
        parse_instance(tmp_path / "f.txt", tmp_path / "m.txt")


weights = st.lists(st.integers(0, 1000).map(float), min_size=1, max_size=8)
covers = st.lists(st.frozensets(st.integers(0, 9), max_size=4), min_size=1, max_size=8)


@st.composite
def constraints(draw, n, depth=0):
    kinds = ["uniform", "partition", "graphic"] + (["intersect"] if depth == 0 else [])
    kind = draw(st.sampled_from(kinds))
    if kind == "uniform":
        return constraint_spec_of(UniformMatroid(n, draw(st.integers(0, n))))
    if kind == "partition":
        p = draw(st.integers(1, 3))
        part_of = draw(st.lists(st.integers(0, p - 1), min_size=n, max_size=n))
        caps = draw(st.lists(st.integers(0, 3), min_size=p, max_size=p))
        return constraint_spec_of(PartitionMatroid(part_of, caps))
    if kind == "graphic":
        edges = [tuple(draw(st.lists(st.integers(0, 3), min_size=2, max_size=2, unique=True))) for _ in range(n)]
        return constraint_spec_of(GraphicMatroid(4, edges))
    parts = [draw(constraints(n, 1)) for _ in range(draw(st.integers(1, 3)))]
    return ConstraintSpec("intersect", tuple(parts))


@settings(max_examples=60, deadline=None)
@given(st.one_of(weights.map(ModularFunction), covers.map(lambda c: CoverageFunction(c, 10))), st.data())
def test_round_trip(f, data):
    fs = function_spec_of(f)
    cs = data.draw(constraints(f.n))
    assert parse_function_text(serialize_function(fs)) == fs
    assert parse_constraint_text(serialize_constraint(cs)) == cs
    assert InstanceSpec(fs, cs).n == f.n


def test_write_and_parse_instance(tmp_path):
    spec = InstanceSpec(function_spec_of(ModularFunction([1, 2, 3])),
                        constraint_spec_of(PartitionMatroid([0, 1, 1], [1, 1])))
    write_instance(spec, tmp_path / "f.txt", tmp_path / "m.txt")
    assert parse_instance(tmp_path / "f.txt", tmp_path / "m.txt") == spec


def small_instance():
    return ModularFunction([4.0, 7.0, 1.0, 3.0, 6.0, 2.0]), UniformMatroid(6, 2)


def test_greedy_row():
    f, m = small_instance()
    (row,) = run_experiment(f, m, "greedy", AlgoParams(seed=1))
    assert row.f_rounds >= 2 and row.value == 13 and row.k == 2


def test_trials_and_summary(tmp_path):
    f, m = small_instance()
    rows = run_experiment(f, m, "aseq-pp", AlgoParams(seed=10, rho=3), trials=20, with_opt=True)
    assert len(rows) == 21
    assert [r.seed for r in rows[:20]] == list(range(10, 30))
    summary = rows[-1]
    assert summary.algo == "aseq-pp+summary"
    assert summary.value == pytest.approx(np.mean([r.value for r in rows[:20]]))
    assert all(r.ratio == pytest.approx(r.value / 13) for r in rows)
    out = tmp_path / "rows.csv"
    write_rows(out, rows[:5])
    write_rows(out, rows[5:])
    back = read_rows(out)
    assert len(back) == 21 and list(back[0]) == COLUMNS
    assert back[-1]["algo"] == "aseq-pp+summary" and back[0]["value_std"] == ""


def test_seed_isolation():
    f, m = small_instance()
    a, = run_experiment(f, m, "aseq", AlgoParams(seed=1))
    b, = run_experiment(f, m, "aseq", AlgoParams(seed=2))
    for col in ("algo", "n", "k", "epsilon", "lambda_", "rho"):
        assert getattr(a, col) == getattr(b, col)


def test_refusals():
    m = IntersectionConstraint([UniformMatroid(3, 1)])
    with pytest.raises(ValidationError):
        run_experiment(ModularFunction([1, 2, 3]), m, "acg", AlgoParams())
    with pytest.raises(ValidationError):
        run_experiment(ModularFunction(np.ones(25)), UniformMatroid(25, 2), "brute", AlgoParams())
    with pytest.raises(ValidationError):
        run_experiment(ModularFunction([1]), UniformMatroid(1, 1), "magic", AlgoParams())


def test_acg_ratio_against_brute():
    f, m = small_instance()
    (row,) = run_experiment(f, m, "acg", AlgoParams(epsilon=0.05, step_size=0.25, seed=0), with_opt=True,
                            surrogate="exact")
    assert row.ratio >= 1 - 1 / np.e - 0.15
    assert row.lambda_ == 0.25


@pytest.fixture
def files(tmp_path):
    (tmp_path / "f.txt").write_text("modular\n6\n4 7 1 3 6 2\n")
    (tmp_path / "m.txt").write_text("partition\n2\n0 0 0 1 1 1\n1 1\n")
    (tmp_path / "bad.txt").write_text("partition\n2\n0 0\n")
    (tmp_path / "x.txt").write_text("intersect\nuniform\n6\n2\n--\npartition\n2\n0 0 0 1 1 1\n1 1\n")
    return tmp_path


def test_cli_run_to_csv(files):
    out = files / "out.csv"
    code = cli.main(["run", "--function", str(files / "f.txt"), "--matroid", str(files / "m.txt"),
                     "--algo", "aseq-pp", "--eps", "0.1", "--rho", "4", "--trials", "3", "--seed", "0",
                     "--out", str(out), "--opt"])
    assert code == 0
    rows = read_rows(out)
    assert len(rows) == 4 and float(rows[0]["opt"]) == 13


def test_cli_run_stdout_and_brute(files, capsys):
    assert cli.main(["brute", "--function", str(files / "f.txt"), "--matroid", str(files / "m.txt")]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert rows[0]["algo"] == "brute" and float(rows[0]["value"]) == 13


def test_cli_acg_on_intersection_refused(files, capsys):
    code = cli.main(["run", "--function", str(files / "f.txt"), "--matroid", str(files / "x.txt"),
                     "--algo", "acg", "--seed", "0"])
    assert code == 2
    assert "intersection" in capsys.readouterr().err


def test_cli_exit_codes(files):
    base = ["run", "--function", str(files / "f.txt"), "--algo", "greedy", "--seed", "0", "--matroid"]
    assert cli.main(base + [str(files / "bad.txt")]) == 2
    assert cli.main(base + [str(files / "missing.txt")]) == 2
    assert cli.main(["run", "--function", str(files / "f.txt"), "--matroid", str(files / "m.txt"),
                     "--algo", "acg", "--lambda", "0.3", "--seed", "0"]) == 2


def test_cli_verify_sequence(files, capsys):
    assert cli.main(["verify-sequence", "--matroid", str(files / "m.txt"), "--samples", "3000"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 3
    assert cli.main(["verify-sequence", "--matroid", str(files / "x.txt"), "--samples", "2000"]) == 0
    assert "skipped" in capsys.readouterr().out


def test_cli_bench(capsys):
    assert cli.main(["bench", "--suite", "scaling", "--sizes", "50", "200", "--k", "4"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert [r["algo"] for r in rows] == ["aseq", "greedy", "aseq", "greedy"]
    assert all(float(r["f_rounds"]) == 4 for r in rows if r["algo"] == "greedy")
    assert cli.main(["bench", "--suite", "hard-partition", "--sizes", "64"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert len(rows) == 1 and float(rows[0]["ratio"]) <= 1


def test_module_entry_point():
    import subprocess
    import sys
    proc = subprocess.run([sys.executable, "-m", "adaseq", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "verify-sequence" in proc.stdout
