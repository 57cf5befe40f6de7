import numpy as np
import pytest

from casimir_lab import forms3 as f3
from casimir_lab.errors import FormatError
from casimir_lab.forms3 import io


@pytest.mark.parametrize("rank", [0, 1, 2, 3])
def test_form_roundtrip(tmp_path, grid16, rng, rank):
    a = f3.random_form(grid16, rank, 3, rng)
    path = tmp_path / f"form{rank}.f3rm"
    io.save(path, a)
    b = io.load(path)
    assert type(b) is type(a)
    assert b.grid.n == 16
    np.testing.assert_array_equal(a.data, b.data)


def test_vector_field_roundtrip(tmp_path, grid16, rng):
    v = f3.random_vector_field(grid16, 3, rng)
    path = tmp_path / "field.f3rm"
    io.save(path, v)
    w = io.load(path)
    assert isinstance(w, f3.VectorField)
    np.testing.assert_array_equal(v.data, w.data)


def test_header_layout(tmp_path, grid16, rng):
    path = tmp_path / "probe.f3rm"
    io.save(path, f3.random_form1(grid16, 3, rng))
    raw = path.read_bytes()
    assert raw[:4] == b"F3RM"
    version, n, rank, ncomp = np.frombuffer(raw[4:20], dtype="<u4")
    assert (version, n, rank, ncomp) == (1, 16, 1, 3)
    assert len(raw) == 20 + 3 * 16 ** 3 * 8


def test_bad_magic(tmp_path):
    path = tmp_path / "junk.f3rm"
    path.write_bytes(b"NOPE" + b"\x00" * 64)
    with pytest.raises(FormatError, match="magic"):
        io.load(path)


def test_truncated_body(tmp_path, grid16, rng):
    path = tmp_path / "short.f3rm"
    io.save(path, f3.random_form0(grid16, 3, rng))
    data = path.read_bytes()
    path.write_bytes(data[:-16])
    with pytest.raises(FormatError, match="body"):
        io.load(path)


def test_csv_dump(tmp_path, rng):
    g = f3.Grid(4)
    a = f3.random_form1(g, 1, rng)
    path = tmp_path / "small.csv"
    io.to_csv(path, a)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "i,j,k,c0,c1,c2"
    assert len(lines) == 1 + 4 ** 3
    i, j, k, c0, c1, c2 = lines[1].split(",")
    assert float(c0) == a.data[0, int(i), int(j), int(k)]


def test_loop_csv_roundtrip(tmp_path):
    pts = f3.circle_loop(0, (0.0, 0.25, 0.75), m=32)
    t = np.arange(33) / 32
    path = tmp_path / "loop.csv"
    with open(path, "w") as fh:
        fh.write("t,x,y,z\n")
        for ti, p in zip(t, pts):
            fh.write(f"{float(ti)!r},{float(p[0])!r},{float(p[1])!r},{float(p[2])!r}\n")
    back = io.read_loop_csv(path)
    np.testing.assert_array_equal(back, pts)


def test_loop_csv_rejects_nonuniform(tmp_path):
    path = tmp_path / "bad.csv"
    with open(path, "w") as fh:
        fh.write("t,x,y,z\n")
        ts = [0.0, 0.1, 0.25, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0]
        for ti in ts:
            fh.write(f"{ti},{ti % 1.0},0.5,0.5\n")
    with pytest.raises(FormatError, match="uniform"):
        io.read_loop_csv(path)
