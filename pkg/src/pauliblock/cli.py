"""Command-line entry point: compile, bench gen, verify, compare."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .bench import GraphSpec, LatticeSpec, gen_lattice, gen_qaoa_maxcut, gen_random_hamiltonian
from .circuit import Circuit, emit_qasm, metrics, swap_count
from .device import DeviceError, DeviceModel, load_device
from .pauli import ParseError, Program, UnboundParameterError, emit_program, parse_program
from .schedule import Schedule, do_schedule, gco_schedule
from .synth_ft import ft_synthesize_with_order, naive_synthesize_with_order
from .synth_sc import naive_route, sc_synthesize_with_order
from .verify import MAX_QUBITS, check_equivalence

log = logging.getLogger("pauliblock")

VERIFY_TOL = 1e-8
SEED_ENV = "PAULI_SEED"
EXIT_OK, EXIT_VERIFY, EXIT_USAGE = 0, 1, 2

SCHEDULERS = {"gco": gco_schedule, "do": do_schedule}


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class CompileConfig:
    input: Path
    schedule: str = "gco"
    backend: str = "ft"
    device: str | None = None
    bindings: tuple[tuple[str, float], ...] = ()
    out: Path | None = None
    verify: bool = False
    pretty: bool = False

    def __post_init__(self):
        if self.schedule not in SCHEDULERS:
            raise ConfigError(f"unknown schedule {self.schedule!r}")
        if self.backend not in ("ft", "sc"):
            raise ConfigError(f"unknown backend {self.backend!r}")
        if self.backend == "sc" and not self.device:
            raise ConfigError("the sc backend needs --device")


def parse_bindings(items: Sequence[str] | None) -> tuple[tuple[str, float], ...]:
    out = []
    for item in items or ():
        name, sep, value = item.partition("=")
        if not sep or not name:
            raise ConfigError(f"binding {item!r} is not of the form name=value")
        try:
            out.append((name.strip(), float(value)))
        except ValueError:
            raise ConfigError(f"binding {item!r} has a non-numeric value") from None
    return tuple(out)


def read_program(path: Path) -> Program:
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_program(text)
    except ParseError as exc:
        lines = text.splitlines()
        context = lines[exc.line - 1] if 0 < exc.line <= len(lines) else ""
        caret = " " * (exc.column - 1) + "^"
        raise ConfigError(f"{path}:{exc.line}:{exc.column}: {exc.message}\n  {context}\n  {caret}") from None
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def _device(name: str | None) -> DeviceModel | None:
    if name is None:
        return None
    try:
        return load_device(name)
    except (DeviceError, OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"device {name}: {exc}") from None


def synthesize(s: Schedule, backend: str, device: DeviceModel | None, bindings: dict[str, float]):
    if backend == "ft":
        return ft_synthesize_with_order(s, bindings)
    return sc_synthesize_with_order(s, device, bindings)


def _stats(c: Circuit, backend: str) -> dict[str, int]:
    st = metrics(c)
    if backend == "sc":
        st["swap"] = swap_count(c)
    return st


def _qasm_text(c: Circuit) -> str:
    text = emit_qasm(c)
    if c.initial_layout is None:
        return text
    lines = text.splitlines(keepends=True)
    note = [
        f"// initial layout (logical -> physical): {list(c.initial_layout)}\n",
        f"// final layout (logical -> physical): {list(c.final_layout)}\n",
    ]
    return "".join(lines[:3] + note + lines[3:])


def _print_stats(st: dict[str, int], pretty: bool) -> None:
    if pretty:
        width = max(len(k) for k in st)
        for k, v in st.items():
            print(f"{k:<{width}}  {v}")
    else:
        print(json.dumps(st, separators=(",", ":")))


def _verify(c: Circuit, order) -> int:
    if c.n_qubits > MAX_QUBITS:
        print(f"verify: skipped, {c.n_qubits} qubits exceeds the oracle cap of {MAX_QUBITS}", file=sys.stderr)
        return EXIT_OK
    dev = check_equivalence(c, order)
    print(f"verify: deviation {dev:.3e}", file=sys.stderr)
    return EXIT_OK if dev <= VERIFY_TOL else EXIT_VERIFY


def cmd_compile(cfg: CompileConfig) -> int:
    prog = read_program(cfg.input)
    device = _device(cfg.device)
    s = SCHEDULERS[cfg.schedule](prog)
    c, order = synthesize(s, cfg.backend, device, dict(cfg.bindings))
    if cfg.out is not None:
        try:
            cfg.out.write_text(_qasm_text(c))
        except OSError as exc:
            raise ConfigError(f"cannot write {cfg.out}: {exc.strerror}") from None
    _print_stats(_stats(c, cfg.backend), cfg.pretty)
    if cfg.verify:
        return _verify(c, order)
    return EXIT_OK


def _pct(new: float, old: float) -> str:
    if old == 0:
        return "+0.00%" if new == 0 else "n/a"
    return f"{100.0 * (new - old) / old:+.2f}%"


def compare_grid(prog: Program, device: DeviceModel | None, bindings: dict[str, float]) -> dict[str, dict[str, int]]:
    rows: dict[str, dict[str, int]] = {}
    for sname, sched in SCHEDULERS.items():
        s = sched(prog)
        rows[f"{sname}/ft"] = _stats(ft_synthesize_with_order(s, bindings)[0], "ft")
        naive = naive_synthesize_with_order(s, bindings)[0]
        rows[f"{sname}/naive"] = _stats(naive, "ft")
        if device is not None:
            rows[f"{sname}/sc"] = _stats(sc_synthesize_with_order(s, device, bindings)[0], "sc")
            rows[f"{sname}/naive-route"] = _stats(naive_route(naive, device), "sc")
    return rows


def compare_report(rows: dict[str, dict[str, int]]) -> str:
    keys = ["cnot", "single", "total", "depth"]
    has_sc = any("swap" in r for r in rows.values())
    if has_sc:
        keys.append("swap")
    out = [f"{'cell':<16}" + "".join(f"{k:>10}" for k in keys)]
    for name, r in rows.items():
        out.append(f"{name:<16}" + "".join(f"{r.get(k, 0):>10}" for k in keys))
    out.append("")

    def delta(label: str, new: dict, old: dict, ks: Sequence[str]) -> str:
        return f"{label:<32}" + "  ".join(f"{k} {_pct(new[k], old[k])}" for k in ks)

    base = ["cnot", "single", "total", "depth"]
    out.append(delta("DO vs GCO (ft)", rows["do/ft"], rows["gco/ft"], base))
    out.append(delta("ft vs naive (gco)", rows["gco/ft"], rows["gco/naive"], base))
    out.append(delta("ft vs naive (do)", rows["do/ft"], rows["do/naive"], base))
    if has_sc:
        out.append(delta("DO vs GCO (sc)", rows["do/sc"], rows["gco/sc"], base))
        for sname in SCHEDULERS:
            out.append(delta(f"sc vs naive-route ({sname})", rows[f"{sname}/sc"], rows[f"{sname}/naive-route"], base + ["swap"]))
    return "\n".join(out) + "\n"


def cmd_compare(path: Path, device_name: str | None, bindings: dict[str, float]) -> int:
    prog = read_program(path)
    rows = compare_grid(prog, _device(device_name), bindings)
    sys.stdout.write(compare_report(rows))
    return EXIT_OK


def _ints(text: str, sep: str = ",") -> list[int]:
    try:
        return [int(x) for x in text.replace("x", sep).split(sep) if x]
    except ValueError:
        raise ConfigError(f"bad integer list {text!r}") from None


def generate(family: str, params: str, seed: int) -> Program:
    try:
        if family in ("ising", "heisenberg"):
            return gen_lattice(LatticeSpec(tuple(_ints(params)), family))
        if family == "rand":
            (n,) = _ints(params)
            return gen_random_hamiltonian(n, seed)
        if family == "qaoa-reg":
            n, deg = _ints(params)
            return gen_qaoa_maxcut(GraphSpec("regular", n, degree=deg, seed=seed))
        if family == "qaoa-rand":
            n_txt, p_txt = params.split(",")
            return gen_qaoa_maxcut(GraphSpec("random", int(n_txt), edge_prob=float(p_txt), seed=seed))
    except (ValueError, RuntimeError) as exc:
        raise ConfigError(f"bench {family} {params}: {exc}") from None
    raise ConfigError(f"unknown family {family!r}")


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{SEED_ENV}={raw!r} is not an integer") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pauliblock", description="Block-wise Pauli-IR compiler")
    ap.add_argument("-v", "--verbose", action="store_true", help="log warnings and progress")
    sub = ap.add_subparsers(dest="command", required=True)

    def compile_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--schedule", choices=sorted(SCHEDULERS), default="gco")
        p.add_argument("--backend", choices=["ft", "sc"], default="ft")
        p.add_argument("--device", help="device JSON path or built-in name (linear:N, grid:RxC, full:N, manhattan65)")
        p.add_argument("--bind", action="append", metavar="NAME=VALUE", help="bind a symbolic parameter")

    pc = sub.add_parser("compile", help="compile a Pauli IR program to QASM")
    pc.add_argument("input", type=Path)
    compile_flags(pc)
    pc.add_argument("--out", type=Path, help="QASM output path")
    pc.add_argument("--verify", action="store_true", help="check the circuit against the dense oracle (n <= 10)")
    pc.add_argument("--pretty", action="store_true", help="print stats as a table instead of JSON")

    pb = sub.add_parser("bench", help="benchmark programs")
    bsub = pb.add_subparsers(dest="bench_command", required=True)
    pg = bsub.add_parser("gen", help="generate a benchmark program")
    pg.add_argument("--family", required=True, choices=["ising", "heisenberg", "rand", "qaoa-reg", "qaoa-rand"])
    pg.add_argument(
        "--params",
        required=True,
        help="lattice dims (5x6), qubit count (rand), n,degree (qaoa-reg) or n,prob (qaoa-rand)",
    )
    pg.add_argument("--seed", type=int, help=f"generator seed (default ${SEED_ENV} or 0)")
    pg.add_argument("--out", type=Path, help="output path (stdout if omitted)")

    pv = sub.add_parser("verify", help="compile and check equivalence against the dense oracle")
    pv.add_argument("--input", type=Path, required=True)
    compile_flags(pv)

    pm = sub.add_parser("compare", help="tabulate schedule and backend variants")
    pm.add_argument("input", type=Path)
    pm.add_argument("--device")
    pm.add_argument("--bind", action="append", metavar="NAME=VALUE")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s: %(message)s")
    try:
        if args.command == "compile":
            cfg = CompileConfig(
                args.input, args.schedule, args.backend, args.device,
                parse_bindings(args.bind), args.out, args.verify, args.pretty,
            )
            return cmd_compile(cfg)
        if args.command == "verify":
            cfg = CompileConfig(args.input, args.schedule, args.backend, args.device, parse_bindings(args.bind), verify=True)
            prog = read_program(cfg.input)
            s = SCHEDULERS[cfg.schedule](prog)
            c, order = synthesize(s, cfg.backend, _device(cfg.device), dict(cfg.bindings))
            return _verify(c, order)
        if args.command == "bench":
            seed = args.seed if args.seed is not None else default_seed()
            text = emit_program(generate(args.family, args.params, seed))
            if args.out is None:
                sys.stdout.write(text)
            else:
                args.out.write_text(text)
            return EXIT_OK
        if args.command == "compare":
            return cmd_compare(args.input, args.device, dict(parse_bindings(args.bind)))
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnboundParameterError as exc:
        print(f"error: {exc.args[0]} (bind it with --bind NAME=VALUE)", file=sys.stderr)
        return EXIT_USAGE
    except DeviceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
