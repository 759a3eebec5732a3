"""Command-line front end: ``jointspec {jc,toric,classical,converge,recover,plot}``.

Every run is described by its invocation line. An optional ``--config``
file of ``key = value`` lines supplies defaults that explicit flags
override. Argument errors exit with status 2, computation and I/O errors
with status 1.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from . import io
from .classical import catalog, classical_spectrum
from .errors import ConfigurationError, JointSpecError, SpectrumFormatError
from .geometry import hausdorff
from .inverse import fit_lattice, recover
from .quantize import ToricModel, jc_full_family, toric_family
from .spectra import (
    convergence_study,
    jc_joint_spectrum,
    joint_spectrum,
    random_combination_check,
)

COMMANDS = ("jc", "toric", "classical", "converge", "recover", "plot")
# dense oracle cost grows as dim^3
ORACLE_MAX_DIM = 500


@dataclass
class RunConfig:
    """Validated settings of one invocation."""

    command: str
    model: Optional[str] = None
    n: Optional[int] = None
    k: Optional[int] = None
    t_max: Optional[int] = None
    trunc: Optional[int] = None
    k_list: Tuple[int, ...] = ()
    tol: Optional[float] = None
    window: Optional[float] = None
    out: str = "-"
    inputs: Tuple[str, ...] = ()
    svg: Optional[str] = None
    hull: Optional[str] = None
    seed: int = 0
    resolution: int = 16
    order: int = 1
    cap: int = 20

    def validate(self) -> "RunConfig":
        if self.tol is not None and not self.tol > 0:
            raise ConfigurationError(f"--tol must be positive, got {self.tol}")
        for name in ("n", "t_max"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise ConfigurationError(f"--{name.replace('_', '-')} must be >= 0, got {v}")
        if self.k is not None and self.k < 1:
            raise ConfigurationError(f"--k must be >= 1, got {self.k}")
        if self.trunc is not None and self.trunc < 1:
            raise ConfigurationError(f"--trunc must be >= 1, got {self.trunc}")
        if any(b <= a for a, b in zip(self.k_list, self.k_list[1:])):
            raise ConfigurationError("--k-list must be strictly increasing")
        if any(k < 1 for k in self.k_list):
            raise ConfigurationError("--k-list entries must be >= 1")
        if self.resolution < 16:
            raise ConfigurationError("--resolution must be >= 16")
        if self.order not in (1, 2):
            raise ConfigurationError("--order must be 1 or 2")
        if self.cap < 1:
            raise ConfigurationError("--cap must be >= 1")
        need = {
            "toric": ("k",),
            "converge": ("k_list",),
        }.get(self.command, ())
        for name in need:
            if not getattr(self, name):
                raise ConfigurationError(f"{self.command} requires --{name.replace('_', '-')}")
        if self.command == "converge" and len(self.k_list) < 4:
            raise ConfigurationError("converge needs at least 4 values in --k-list")
        if self.command == "recover" and len(self.inputs) < 3:
            raise ConfigurationError("recover needs at least 3 --in spectrum files")
        if self.command == "plot" and len(self.inputs) != 1:
            raise ConfigurationError("plot takes exactly one --in file")
        return self


def _int_list(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.replace(",", " ").split())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated integer list, got {text!r}")


def _common(parser: argparse.ArgumentParser, **defaults) -> None:
    parser.add_argument("--config", help="key=value defaults file (flags take precedence)")
    parser.add_argument("--model", help="catalog model (S2, S2xS2, JC)")
    parser.add_argument("--n", type=int, help="spin size (number of two-mode quanta)")
    parser.add_argument("--k", type=int, help="Toeplitz power, hbar = 1/k")
    parser.add_argument("--k-list", type=_int_list, help="comma-separated increasing k values")
    parser.add_argument("--t-max", type=int, help="largest total excitation T")
    parser.add_argument("--trunc", type=int, help="oscillator truncation for cross-checks")
    parser.add_argument("--window", type=float, help="bound c on f1 for noncompact models")
    parser.add_argument("--tol", type=float, help="eigenvalue clustering tolerance")
    parser.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    parser.add_argument("--out", default="-", help="output path ('-' for stdout)")
    parser.add_argument("--in", dest="inputs", action="append", default=None,
                        help="input spectrum CSV (repeatable)")
    parser.add_argument("--svg", help="also write an SVG scatter plot here")
    parser.add_argument("--hull", help="hull JSON output path")
    parser.add_argument("--resolution", type=int, default=16, help="classical grid points per axis")
    parser.add_argument("--order", type=int, default=1, help="support extrapolation order")
    parser.add_argument("--cap", type=int, default=20, help="rational denominator cap")
    parser.set_defaults(**defaults)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jointspec",
        description="Joint spectra of commuting quantum families and their classical limits.")
    sub = parser.add_subparsers(dest="command", required=True)
    _common(sub.add_parser("jc", help="Jaynes-Cummings joint spectrum"), n=5, t_max=40)
    _common(sub.add_parser("toric", help="joint spectrum of a toric model"), model="S2")
    _common(sub.add_parser("classical", help="sampled classical spectrum and hull"),
            model="S2", hull="-")
    _common(sub.add_parser("converge", help="hull convergence table and fitted exponent"),
            model="S2")
    _common(sub.add_parser("recover", help="recover a polytope from spectrum CSVs"))
    _common(sub.add_parser("plot", help="SVG scatter plot of a spectrum CSV"))
    return parser


def read_config_file(path: str) -> Dict[str, object]:
    """Parse ``key = value`` lines; blank lines and ``#`` comments are ignored."""
    out: Dict[str, object] = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigurationError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key == "in":
                out["inputs"] = value.replace(",", " ").split()
            else:
                out[key] = value
    return out


def _subparsers(parser: argparse.ArgumentParser) -> Dict[str, argparse.ArgumentParser]:
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices
    return {}


def parse_config(argv: Optional[Sequence[str]] = None) -> RunConfig:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if known.config:
        try:
            values = read_config_file(known.config)
        except (OSError, ConfigurationError) as exc:
            parser.error(str(exc))
        subs = _subparsers(parser)
        dests = {a.dest for a in subs["jc"]._actions}
        unknown = sorted(set(values) - dests)
        if unknown:
            parser.error(f"unknown config keys: {', '.join(unknown)}")
        for sp in subs.values():
            sp.set_defaults(**values)
    ns = parser.parse_args(argv)
    try:
        return RunConfig(
            command=ns.command, model=ns.model, n=ns.n, k=ns.k, t_max=ns.t_max,
            trunc=ns.trunc, k_list=tuple(ns.k_list or ()), tol=ns.tol,
            window=ns.window, out=ns.out, inputs=tuple(ns.inputs or ()), svg=ns.svg,
            hull=ns.hull, seed=int(ns.seed), resolution=int(ns.resolution),
            order=int(ns.order), cap=int(ns.cap),
        ).validate()
    except ConfigurationError as exc:
        parser.error(str(exc))


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


# --------------------------------------------------------------------------
# commands


def cmd_jc(cfg: RunConfig) -> int:
    js = jc_joint_spectrum(cfg.n, cfg.t_max)
    io.write_text(cfg.out, io.format_spectrum_csv(js))
    lines = len(np.unique(js.points[:, 0]))
    _log(f"jc: n={cfg.n} t_max={cfg.t_max} hbar={io.fmt(js.param.hbar)} "
         f"points={len(js)} f1_lines={lines}")
    if cfg.svg:
        title = f"Jaynes-Cummings joint spectrum (n={cfg.n}, T<={cfg.t_max})"
        io.write_text(cfg.svg, io.svg_for_spectrum(js, title))
    if cfg.trunc is not None:
        return _jc_cross_check(cfg, js)
    return 0


def _jc_cross_check(cfg: RunConfig, js) -> int:
    """Compare block eigenvalues with the truncated tensor build on ``T < trunc``."""
    full = joint_spectrum(jc_full_family(cfg.n, cfg.trunc), cfg.tol)
    t_top = min(cfg.trunc - 1, cfg.t_max)
    h = js.param.hbar
    cut = h * (t_top + 0.5 * (1 - cfg.n)) + 0.25 * h
    a = js.points[js.points[:, 0] <= cut]
    b = np.repeat(full.points, full.multiplicities, axis=0)
    b = b[b[:, 0] <= cut]
    b = b[np.lexsort(b.T[::-1])]
    if a.shape != b.shape:
        _log(f"jc cross-check: FAILED, {len(a)} block points vs {len(b)} tensor points")
        return 1
    err = float(np.abs(a - b).max()) if len(a) else 0.0
    ok = err <= 1e-10
    _log(f"jc cross-check: trunc={cfg.trunc} T<={t_top} points={len(a)} "
         f"max_deviation={err:.3e} {'ok' if ok else 'FAILED'}")
    return 0 if ok else 1


def cmd_toric(cfg: RunConfig) -> int:
    fam = toric_family(ToricModel(cfg.model, cfg.k))
    js = joint_spectrum(fam, cfg.tol)
    io.write_text(cfg.out, io.format_spectrum_csv(js))
    fit = fit_lattice(js)
    _log(f"toric: model={cfg.model} k={cfg.k} points={len(js)} "
         f"multiplicity_sum={js.total_multiplicity}")
    _log("lattice: origin=" + ",".join(io.fmt(c) for c in fit.origin)
         + " spacing=" + ",".join(io.fmt(c) for c in fit.spacing)
         + f" residual={fit.residual:.3e} isolated={str(fit.isolated).lower()}")
    if fam.dim <= ORACLE_MAX_DIM:
        oracle = random_combination_check(fam, seed=cfg.seed)
        _log(f"oracle: seed={cfg.seed} hausdorff={hausdorff(js.points, oracle.points):.3e}")
    else:
        _log(f"oracle: skipped (dim {fam.dim} > {ORACLE_MAX_DIM})")
    return 0


def _samples_csv(samples: np.ndarray) -> str:
    d = samples.shape[1]
    lines = [",".join(f"f{i + 1}" for i in range(d))]
    lines += [",".join(io.fmt(c) for c in row) for row in samples]
    return "\n".join(lines) + "\n"


def cmd_classical(cfg: RunConfig) -> int:
    sys_ = catalog(cfg.model)
    cs = classical_spectrum(sys_, cfg.resolution, cfg.window)
    if cfg.out != "-":
        io.write_text(cfg.out, _samples_csv(cs.samples))
    if cfg.hull:
        io.write_text(cfg.hull, io.dumps(io.hull_to_dict(cs.hull)))
    _log(f"classical: model={cfg.model} samples={len(cs.samples)} "
         f"hull_vertices={len(cs.hull.vertices)}")
    return 0


def cmd_converge(cfg: RunConfig) -> int:
    res = convergence_study(cfg.model, cfg.k_list, resolution=cfg.resolution)
    lines = ["k,hbar,d_H"]
    lines += [f"{k},{io.fmt(h)},{io.fmt(d)}" for k, h, d in res.rows()]
    lines.append(f"# alpha={io.fmt(res.alpha)},intercept={io.fmt(res.intercept)}")
    io.write_text(cfg.out, "\n".join(lines) + "\n")
    _log(f"converge: model={cfg.model} alpha={res.alpha:.6f} intercept={res.intercept:.6f}")
    return 0


def cmd_recover(cfg: RunConfig) -> int:
    spectra = [io.read_spectrum_csv(p) for p in cfg.inputs]
    report = recover(spectra, order=cfg.order, denominator_cap=cfg.cap)
    io.write_text(cfg.out, io.dumps(io.report_to_dict(report)))
    verts = ";".join(",".join(str(c) for c in v) for v in report.recovered.vertices)
    _log(f"recover: inputs={len(spectra)} vertices={verts} "
         f"delzant={str(report.delzant.delzant).lower()}")
    return 0


def cmd_plot(cfg: RunConfig) -> int:
    path = cfg.inputs[0]
    with open(path) as fh:
        hbar, pts, mult = io.parse_spectrum_rows(fh, source=path)
    if pts.shape[1] not in (1, 2):
        raise SpectrumFormatError(f"{path}: plot supports d in {{1, 2}}, got d={pts.shape[1]}")
    title = "" if hbar is None else f"joint spectrum (hbar={hbar:.6g})"
    labels = [f"lambda{i + 1}" for i in range(2)]
    io.write_text(cfg.out, io.svg_scatter(pts, mult, title, labels))
    return 0


_DISPATCH = {
    "jc": cmd_jc,
    "toric": cmd_toric,
    "classical": cmd_classical,
    "converge": cmd_converge,
    "recover": cmd_recover,
    "plot": cmd_plot,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    cfg = parse_config(argv)
    try:
        return _DISPATCH[cfg.command](cfg)
    except (JointSpecError, OSError, ValueError) as exc:
        _log(f"jointspec {cfg.command}: error: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
