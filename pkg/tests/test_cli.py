import io

import numpy as np
import pytest

from afclip import load_cache, save_off
from afclip.afl import auto_specs
from afclip.cli import main

from conftest import CUBE_QUADS, CUBE_V, TET_F, TET_V


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


@pytest.fixture()
def cube_files(tmp_path):
    mesh = tmp_path / "cube.off"
    save_off(mesh, CUBE_V, CUBE_QUADS)
    cache = tmp_path / "cube.afl"
    assert run("preprocess", str(mesh), "-o", str(cache), "--grid", "16x16")[0] == 0
    return mesh, cache


def test_preprocess_tetrahedron(tmp_path):
    mesh = tmp_path / "tet.off"
    save_off(mesh, TET_V, TET_F)
    code, out = run("preprocess", str(mesh), "-o", str(tmp_path / "t.afl"), "--grid", "8x8")
    assert code == 0 and "N=4" in out.splitlines()[0]
    assert out.count("grid=8x8") == 6 and "elapsed=" in out
    assert load_cache(tmp_path / "t.afl").n_facets == 4


def test_preprocess_nonconvex(tmp_path, capsys):
    mesh = tmp_path / "bad.off"
    v = [[1, 0, 0], [-0.5, 0.8, 0], [-0.5, -0.8, 0], [0, 0, 1], [0, 0, 0.5]]
    f = [[0, 1, 3], [1, 2, 3], [2, 0, 3], [1, 0, 4], [2, 1, 4], [0, 2, 4]]
    save_off(mesh, v, f)
    code, _ = run("preprocess", str(mesh), "-o", str(tmp_path / "x.afl"))
    assert code == 2
    assert "NonConvex" in capsys.readouterr().err


def test_preprocess_bad_file(tmp_path):
    assert run("preprocess", str(tmp_path / "missing.off"), "-o", str(tmp_path / "x.afl"))[0] == 2
    (tmp_path / "bad.off").write_text("OFF\n4 4 0\n1 2\n")
    assert run("preprocess", str(tmp_path / "bad.off"), "-o", str(tmp_path / "x.afl"))[0] == 2


def test_preprocess_auto_matches_suggest_grid(tmp_path, cube):
    mesh = tmp_path / "cube.off"
    save_off(mesh, CUBE_V, CUBE_QUADS)
    assert run("preprocess", str(mesh), "-o", str(tmp_path / "a.afl"), "--auto")[0] == 0
    assert [g.spec for g in load_cache(tmp_path / "a.afl").grids] == auto_specs(cube)


def test_preprocess_unwritable(tmp_path, cube_files):
    mesh, _ = cube_files
    assert run("preprocess", str(mesh), "-o", str(tmp_path / "no" / "x.afl"))[0] == 4


def test_clip_cube(cube_files):
    _, cache = cube_files
    code, out = run("clip", str(cache), "--line", "-1,0.5,0.5:1,0,0")
    assert code == 0 and out.splitlines()[0] == "SEGMENT t=[1,2]"
    assert "in=(0,0.5,0.5)" in out and "out=(1,0.5,0.5)" in out


def test_clip_compare_and_stats(cube_files):
    mesh, cache = cube_files
    code, out = run("clip", str(cache), "--line", "-1,0.5,0.5:1,0,0", "--compare-cb", str(mesh), "--stats")
    assert code == 0 and out.rstrip().endswith("AGREE") and "|omega|=" in out


def test_clip_through_and_segment(cube_files):
    _, cache = cube_files
    code, out = run("clip", str(cache), "--through", "-1,0.5,0.5", "0,0.5,0.5")
    assert out.startswith("SEGMENT t=[1,2]")
    code, out = run("clip", str(cache), "--through", "-1,0.5,0.5", "0,0.5,0.5", "--segment")
    assert out.startswith("POINT t=1")
    assert run("clip", str(cache), "--line", "5,5,5:1,0,0")[1].startswith("EMPTY")


def test_clip_lines_file(tmp_path, cube_files):
    _, cache = cube_files
    lf = tmp_path / "lines.txt"
    lf.write_text("# two lines\n-1,0.5,0.5:1,0,0\n5,5,5:0,1,0\n")
    code, out = run("clip", str(cache), "--lines-file", str(lf))
    assert code == 0 and out.count("SEGMENT") == 1 and out.count("EMPTY") == 1


@pytest.mark.parametrize("spec", ["0,0,0:0,0,0", "1,2:1,0,0", "a,b,c:1,0,0", "1,2,3", "1,2,3:4,5,nan"])
def test_clip_bad_line(cube_files, spec):
    _, cache = cube_files
    assert run("clip", str(cache), "--line", spec)[0] == 3


def test_clip_bad_cache(tmp_path):
    (tmp_path / "x.afl").write_bytes(b"junk")
    assert run("clip", str(tmp_path / "x.afl"), "--line", "0,0,0:1,0,0")[0] == 2


def test_bench_csv_deterministic(tmp_path):
    args = ["bench", "--n", "4,12", "--grid", "4x4,8x8", "--lines", "100", "--seed", "3", "--repeats", "1"]
    assert run(*args, "--csv", str(tmp_path / "a.csv"), "--svg", str(tmp_path / "a.svg"))[0] == 0
    assert run(*args, "--csv", str(tmp_path / "b.csv"))[0] == 0
    a = np.genfromtxt(tmp_path / "a.csv", delimiter=",", names=True)
    b = np.genfromtxt(tmp_path / "b.csv", delimiter=",", names=True)
    assert len(a) == 4
    for col in ("n_facets", "grid_k", "grid_q", "omega_mean", "omega_median", "omega_max", "omega1_mean", "seed"):
        assert np.array_equal(a[col], b[col])
    assert (tmp_path / "a.svg").exists()


def test_bench_unwritable(tmp_path):
    assert run("bench", "--n", "4", "--grid", "4x4", "--lines", "10",
               "--csv", str(tmp_path / "no" / "x.csv"))[0] == 4
