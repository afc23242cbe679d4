import numpy as np
import pytest

from conftest import harmonic_tone
from helixtone.apps import CompressedTone
from helixtone.audio import AudioFile, read_wav, write_curve, write_wav
from helixtone.cli import main

T = 8.0


@pytest.fixture
def wav(tmp_path):
    p = tmp_path / "in.wav"
    write_wav(p, AudioFile(8000, 0.5 * harmonic_tone(T, 40, seed=2), "float32"))
    return p


@pytest.fixture
def long_wav(tmp_path):
    p = tmp_path / "long.wav"
    write_wav(p, AudioFile(8000, 0.5 * harmonic_tone(T, 700, seed=2), "float32"))
    return p


def run(*argv):
    return main([str(a) for a in argv])


def base(cmd, wav, out, *extra):
    return [cmd, "--in", wav, "--out", out, "--period", T, *extra]


def out_of(tmp_path, name="out.wav"):
    return tmp_path / name


def test_shift_and_stretch(wav, tmp_path):
    o = out_of(tmp_path)
    assert run(*base("shift", wav, o, "--freq-factor", 1.5)) == 0
    assert len(read_wav(o).samples) == len(read_wav(wav).samples)
    assert run(*base("stretch", wav, o, "--time-factor", 0.5)) == 0
    assert len(read_wav(o).samples) == 2 * (len(read_wav(wav).samples) - 1) + 1


def test_shift_with_curve_files(wav, tmp_path):
    c = tmp_path / "f.txt"
    write_curve(c, np.linspace(1, 2, 100))
    o = out_of(tmp_path)
    for unit in ("factor", "waves", "cycles", "increments"):
        assert run(*base("shift", wav, o, "--freq-factor", f"csv:{c}", "--curve-unit", unit)) == 0
        assert len(read_wav(o).samples) == 100


def test_streaming_flag_matches_batch(wav, tmp_path):
    a, b = out_of(tmp_path, "a.wav"), out_of(tmp_path, "b.wav")
    assert run(*base("shift", wav, a, "--freq-factor", 1.3, "--time-factor", 0.8)) == 0
    assert run(*base("shift", wav, b, "--freq-factor", 1.3, "--time-factor", 0.8, "--streaming")) == 0
    assert np.array_equal(read_wav(a).samples, read_wav(b).samples)


def test_compress_decompress(long_wav, tmp_path):
    c, o = tmp_path / "x.htc", out_of(tmp_path)
    assert run(*base("compress", long_wav, c, "--factor", 4, "--max-deviation", 0.05)) == 0
    ct = CompressedTone.load(c)
    assert ct.factor == 4
    assert run("decompress", "--in", c, "--out", o, "--rate", 8000) == 0
    back = read_wav(o)
    assert back.sample_rate == 8000
    assert abs(len(back.samples) - len(read_wav(long_wav).samples)) <= 4


def test_compress_with_smoothing(long_wav, tmp_path):
    w = tmp_path / "w.txt"
    write_curve(w, [0.25, 0.5, 0.25])
    assert run(*base("compress", long_wav, tmp_path / "x.htc", "--factor", 2, "--smooth", w)) == 0


def test_loop(wav, tmp_path):
    o = out_of(tmp_path)
    assert run(*base("loop", wav, o, "--cycle", 4, "--intro", 2, "--mode", "sine", "--cycles", 3)) == 0
    assert len(read_wav(o).samples) == 16 + 3 * 32


def test_fm(wav, tmp_path):
    o = out_of(tmp_path)
    assert run(*base("fm", wav, o, "--carrier", 2, "--mod", "sine:0.05:0.3")) == 0
    c = tmp_path / "m.txt"
    write_curve(c, 0.01 * np.sin(np.arange(200) / 5))
    assert run(*base("fm", wav, o, "--carrier", 2, "--mod", f"csv:{c}")) == 0
    assert len(read_wav(o).samples) == 200


def test_noisetone(wav, tmp_path):
    o = out_of(tmp_path)
    assert run(*base("noisetone", wav, o, "--stretch", 3)) == 0
    assert len(read_wav(o).samples) == 3 * (len(read_wav(wav).samples) - 1) + 1


def test_spectrum_writes_csv_and_plot(long_wav, tmp_path, capsys):
    c, p = tmp_path / "s.csv", tmp_path / "s.png"
    assert run("spectrum", "--in", long_wav, "--period", T, "--csv-out", c, "--plot-out", p) == 0
    assert c.read_text().startswith("bin,freq_per_wave,magnitude")
    assert p.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    assert "peak at bin" in capsys.readouterr().out


@pytest.mark.parametrize("method", ["helix", "wavetable"])
def test_bench_report(long_wav, tmp_path, method, capsys):
    prefix = tmp_path / "rep"
    assert run("bench", "--in", long_wav, "--period", T, "--method", method,
               "--freq-factor", 2, "--report", prefix) == 0
    lines = (tmp_path / "rep.csv").read_text().splitlines()
    assert lines[0].startswith("method,period,freq_factor")
    assert lines[1].startswith(method)
    assert (tmp_path / "rep.png").read_bytes()[:4] == b"\x89PNG"
    assert "THD" in capsys.readouterr().out


def test_pcm16_output(wav, tmp_path):
    o = out_of(tmp_path)
    assert run(*base("shift", wav, o, "--encoding", "pcm16")) == 0
    assert read_wav(o).encoding == "pcm16"


def test_deterministic(wav, tmp_path):
    a, b = out_of(tmp_path, "a.wav"), out_of(tmp_path, "b.wav")
    for o in (a, b):
        assert run(*base("fm", wav, o, "--carrier", 1.5, "--mod", "sine:0.1")) == 0
    assert a.read_bytes() == b.read_bytes()


def test_usage_errors_exit_2(wav, tmp_path, capsys):
    o = out_of(tmp_path)
    assert run(*base("shift", wav, o, "--bogus")) == 2
    assert run("shift", "--in", wav, "--out", o) == 2  # no period
    assert run(*base("shift", wav, o, "--step-kernel", "quintic")) == 2
    assert run(*base("fm", wav, o, "--carrier", 1, "--mod", "tri:1")) == 2
    assert run(*base("shift", wav, o, "--oracle", "--streaming")) == 2
    assert run() == 2
    capsys.readouterr()


def test_data_errors_exit_3(wav, tmp_path, capsys):
    o = out_of(tmp_path)
    bad = tmp_path / "bad.wav"
    bad.write_bytes(b"nope")
    assert run(*base("shift", bad, o)) == 3
    assert run(*base("shift", tmp_path / "missing.wav", o)) == 3
    assert run(*base("compress", wav, tmp_path / "x.htc", "--factor", 12, "--max-deviation", 0.05)) == 3
    assert run(*base("loop", wav, o, "--cycle", 2.5)) == 3
    junk = tmp_path / "junk.htc"
    junk.write_bytes(b"HTC0" + bytes(40))
    assert run("decompress", "--in", junk, "--out", o) == 3
    err = capsys.readouterr().err
    assert "error" in err and "1/(2b) = 10" in err


def test_help_exits_0(capsys):
    assert run("--help") == 0
    assert "shift" in capsys.readouterr().out


def _close(a, b):
    # WAV output is float32: allow the rounding of values that differ by < 1e-9
    return np.all(np.abs(a - b) <= 1e-9 + np.spacing(np.float32(np.abs(a)).astype(float)))


ORACLE_CASES = [
    ("shift", ["--freq-factor", 1.7, "--time-factor", 0.9]),
    ("stretch", ["--time-factor", 0.6, "--step-kernel", "cubic"]),
    ("loop", ["--cycle", 4, "--intro", 2]),
    ("fm", ["--carrier", 1.5, "--mod", "sine:0.05"]),
    ("noisetone", ["--stretch", 2, "--leap-kernel", "cubic"]),
]


@pytest.mark.parametrize("cmd, extra", ORACLE_CASES, ids=[c[0] for c in ORACLE_CASES])
def test_oracle_flag_agrees(wav, tmp_path, cmd, extra):
    a, b = out_of(tmp_path, "a.wav"), out_of(tmp_path, "b.wav")
    assert run(*base(cmd, wav, a, *extra)) == 0
    assert run(*base(cmd, wav, b, *extra, "--oracle")) == 0
    x, y = read_wav(a).samples, read_wav(b).samples
    assert len(x) == len(y) and _close(x, y)


def test_oracle_flag_agrees_for_codec(tmp_path):
    src = tmp_path / "c.wav"
    write_wav(src, AudioFile(8000, 0.5 * harmonic_tone(T, 60, seed=4), "float32"))
    c1, c2 = tmp_path / "a.htc", tmp_path / "b.htc"
    assert run(*base("compress", src, c1, "--factor", 2)) == 0
    assert run(*base("compress", src, c2, "--factor", 2, "--oracle")) == 0
    p, q = CompressedTone.load(c1).payload, CompressedTone.load(c2).payload
    assert _close(p, q)
    d1, d2 = out_of(tmp_path, "a.wav"), out_of(tmp_path, "b.wav")
    assert run("decompress", "--in", c1, "--out", d1) == 0
    assert run("decompress", "--in", c1, "--out", d2, "--oracle") == 0
    assert _close(read_wav(d1).samples, read_wav(d2).samples)
