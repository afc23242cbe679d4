"""Command line front end.

Exit status: 0 on success, 2 for usage errors, 3 for data errors (bad files,
too-short tones, inadmissible parameters).
"""

import argparse
import csv
import sys
import time

import numpy as np

from . import apps, wavetable
from .audio import AudioFile, read_curve, read_wav, write_wav
from .errors import HelixError
from .grid import SampledTone
from .kernels import CUBIC, HAT, parse_kernel
from .oscillator import AccumulatedCurve, ExplicitCurve, RampCurve, RenderConfig, render
from .spectral import spectrum, thd

PROG = "helixtone"


class UsageError(Exception):
    pass


def _kernel(text):
    try:
        return parse_kernel(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _curve_arg(text):
    """A real number or ``csv:FILE``."""
    if text.startswith("csv:"):
        if len(text) == 4:
            raise argparse.ArgumentTypeError("csv: needs a file name")
        return text
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number or csv:FILE, got {text!r}") from None


def _common(p, need_in=True, need_out=True):
    p.add_argument("--in", dest="inp", required=need_in, metavar="FILE", help="input file")
    p.add_argument("--out", required=need_out, metavar="FILE", help="output file")
    p.add_argument("--period", type=float, help="input samples per wave (may be fractional)")
    p.add_argument("--step-kernel", type=_kernel, help="constant, linear, cubic or sinc:<radius>")
    p.add_argument("--leap-kernel", type=_kernel, help="constant, linear, cubic or sinc:<radius>")
    p.add_argument("--oracle", action="store_true",
                   help="evaluate through the continuous reference construction (slow)")
    p.add_argument("--encoding", choices=("float32", "pcm16"),
                   help="output WAV encoding (default: same as input)")


def build_parser():
    ap = argparse.ArgumentParser(prog=PROG, description="Pitch shifting and time scaling of monophonic tones.")
    sub = ap.add_subparsers(dest="cmd", required=True, metavar="COMMAND")

    for name, helptext in (("shift", "change pitch (and optionally duration)"),
                           ("stretch", "change duration (and optionally pitch)")):
        p = sub.add_parser(name, help=helptext)
        _common(p)
        p.add_argument("--freq-factor", type=_curve_arg, default=1.0, metavar="X|csv:FILE")
        p.add_argument("--time-factor", type=_curve_arg, default=1.0, metavar="X|csv:FILE")
        p.add_argument("--curve-unit", choices=("factor", "waves", "cycles", "increments"),
                       default="factor",
                       help="meaning of csv curves: per-sample factors (default), absolute "
                            "positions in waves/cycles, or per-sample increments")
        p.add_argument("--streaming", action="store_true", help="render with the streaming renderer")

    p = sub.add_parser("compress", help="shrink the time axis into a compressed container")
    _common(p)
    p.add_argument("--factor", type=float, required=True)
    p.add_argument("--max-deviation", type=float, default=0.0)
    p.add_argument("--smooth", metavar="FILE", help="smoothing window weights, one per line")

    p = sub.add_parser("decompress", help="expand a compressed container to WAV")
    _common(p)
    p.add_argument("--rate", type=int, default=44100, help="sample rate of the output WAV")

    p = sub.add_parser("loop", help="build a seamlessly loopable sample")
    _common(p)
    p.add_argument("--mode", choices=("sine", "zigzag"), default="zigzag")
    p.add_argument("--cycle", type=float, required=True, help="loop cycle in waves")
    p.add_argument("--intro", type=float, default=2.0, help="verbatim intro in waves")
    p.add_argument("--depth", type=float, help="shape-time excursion in waves (default cycle/2)")
    p.add_argument("--cycles", type=int, default=2, help="number of cycles written")

    p = sub.add_parser("fm", help="pitch shift with phase modulation")
    _common(p)
    p.add_argument("--carrier", type=float, required=True, help="frequency factor of the carrier")
    p.add_argument("--mod", default=None, metavar="csv:FILE|sine:DEPTH[:FREQ]",
                   help="phase modulator in cycles per output sample")
    p.add_argument("--time-factor", type=float, default=1.0)

    p = sub.add_parser("noisetone", help="turn a noisy sound into a tone")
    _common(p)
    p.add_argument("--stretch", type=float, required=True)

    p = sub.add_parser("spectrum", help="magnitude spectrum of a WAV file")
    _common(p, need_out=False)
    p.add_argument("--size", type=int, default=4096)
    p.add_argument("--csv-out", metavar="FILE")
    p.add_argument("--plot-out", metavar="FILE")

    p = sub.add_parser("bench", help="time a render and measure its distortion")
    _common(p, need_out=False)
    p.add_argument("--method", choices=("helix", "wavetable"), default="helix")
    p.add_argument("--freq-factor", type=float, default=1.0)
    p.add_argument("--time-factor", type=float, default=1.0)
    p.add_argument("--report", metavar="PREFIX", help="write PREFIX.csv and PREFIX.png")
    return ap


def _cfg(args, default_kernel=HAT, streaming=False):
    if args.oracle and streaming:
        raise UsageError("--oracle cannot be combined with --streaming")
    return RenderConfig(args.step_kernel or default_kernel, args.leap_kernel or default_kernel,
                        mode="streaming" if streaming else "batch",
                        engine="oracle" if args.oracle else "grid")


def _load_tone(args):
    if args.period is None:
        raise UsageError(f"{args.cmd} needs --period")
    audio = read_wav(args.inp)
    return audio, SampledTone(audio.samples, args.period)


def _save(args, audio, samples):
    write_wav(args.out, AudioFile(audio.sample_rate, samples, args.encoding or audio.encoding))


def _curve(value, unit, period):
    """Shape or phase path for a number or ``csv:FILE`` argument, plus its data length."""
    if not isinstance(value, str):
        return apps.factor_path(value, period), None
    data = read_curve(value[4:])
    if unit == "factor":
        return apps.factor_path(ExplicitCurve(data), period), len(data)
    if unit == "increments":
        return AccumulatedCurve(ExplicitCurve(data)), len(data)
    return ExplicitCurve(data), len(data)


def cmd_shift(args):
    audio, tone = _load_tone(args)
    cfg = _cfg(args, streaming=args.streaming)
    g, g_len = _curve(args.freq_factor, args.curve_unit, tone.period)
    h, h_len = _curve(args.time_factor, args.curve_unit, tone.period)
    lens = [n for n in (g_len, h_len) if n is not None]
    if lens:
        count = min(lens)
    elif args.time_factor <= 0:
        raise UsageError("--time-factor must be positive")
    else:
        count = int((len(tone) - 1) / args.time_factor + 1e-9) + 1
    _save(args, audio, render(tone, h, g, count, cfg))


def cmd_compress(args):
    audio, tone = _load_tone(args)
    smooth = read_curve(args.smooth) if args.smooth else None
    ct = apps.compress(tone, args.factor, args.max_deviation, _cfg(args, CUBIC), smooth)
    ct.save(args.out)


def cmd_decompress(args):
    ct = apps.CompressedTone.load(args.inp)
    tone = apps.decompress(ct, _cfg(args, CUBIC))
    write_wav(args.out, AudioFile(args.rate, tone.samples, args.encoding or "float32"))


def cmd_loop(args):
    audio, tone = _load_tone(args)
    spec = apps.LoopSpec(args.intro, args.cycle, args.mode, args.depth)
    _save(args, audio, apps.build_loop(tone, spec, args.cycles, _cfg(args)))


def _modulator(text, period):
    if text is None:
        return 0.0
    if text.startswith("csv:"):
        return ExplicitCurve(read_curve(text[4:]))
    if text.startswith("sine:"):
        parts = text[5:].split(":")
        try:
            depth = float(parts[0])
            freq = float(parts[1]) if len(parts) > 1 else 1.0
        except (ValueError, IndexError):
            raise UsageError(f"bad modulator {text!r}; expected sine:DEPTH[:FREQ]") from None
        return apps.sine_modulator(depth, freq, period)
    raise UsageError(f"bad modulator {text!r}; expected csv:FILE or sine:DEPTH[:FREQ]")


def cmd_fm(args):
    audio, tone = _load_tone(args)
    mod = _modulator(args.mod, tone.period)
    out = apps.fm_render(tone, args.carrier, mod, args.time_factor, cfg=_cfg(args))
    _save(args, audio, out)


def cmd_noisetone(args):
    audio, tone = _load_tone(args)
    _save(args, audio, apps.tone_from_noise(tone, args.stretch, cfg=_cfg(args)))


def cmd_spectrum(args):
    audio = read_wav(args.inp)
    rep = spectrum(audio.samples, args.size, args.period, audio.sample_rate)
    if args.csv_out:
        rep.write_csv(args.csv_out)
    if args.plot_out:
        from .plotting import plot_spectrum
        plot_spectrum(rep, args.plot_out)
    k = rep.peak_bin()
    where = f" = {rep.freq_per_wave[k]:.4f} cycles/wave" if args.period else ""
    print(f"peak at bin {k}{where} ({rep.hz[k]:.2f} Hz), magnitude {rep.magnitude[k]:.6g}")


def cmd_bench(args):
    audio, tone = _load_tone(args)
    T, a, v = tone.period, args.freq_factor, args.time_factor
    count = int((len(tone) - 1) / v) + 1
    t0 = time.perf_counter()
    if args.method == "wavetable":
        wt = wavetable.WavetableTone(tone.samples, T)
        out = wavetable.render(wt, RampCurve(0.0, v / T), RampCurve(0.0, a / T), count)
    else:
        out = apps.shift_and_scale(tone, a, v, count, _cfg(args))
    seconds = time.perf_counter() - t0
    distortion = thd(out) if len(out) >= 4096 else float("nan")
    row = {"method": args.method, "period": T, "freq_factor": a, "time_factor": v,
           "samples": len(out), "seconds": seconds, "ns_per_sample": 1e9 * seconds / len(out),
           "thd": distortion}
    if args.out:
        _save(args, audio, out)
    if args.report:
        with open(args.report + ".csv", "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(row))
            w.writeheader()
            w.writerow(row)
        from .plotting import plot_spectrum
        size = 1 << int(np.floor(np.log2(len(out))))
        plot_spectrum(spectrum(out, min(size, 1 << 16), T, audio.sample_rate),
                      args.report + ".png", title=f"{args.method}: THD {distortion:.3g}")
    print(f"{args.method}: {len(out)} samples in {seconds:.4f} s, THD {distortion:.4g}")


COMMANDS = {"shift": cmd_shift, "stretch": cmd_shift, "compress": cmd_compress,
            "decompress": cmd_decompress, "loop": cmd_loop, "fm": cmd_fm,
            "noisetone": cmd_noisetone, "spectrum": cmd_spectrum, "bench": cmd_bench}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        COMMANDS[args.cmd](args)
    except UsageError as exc:
        print(f"{PROG} {args.cmd}: error: {exc}", file=sys.stderr)
        return 2
    except (HelixError, OSError) as exc:
        print(f"{PROG} {args.cmd}: error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
