"""
Command-line front door: configure attacker/protocol/parameters, run
experiments and demos, emit CSV and human-readable summaries.

Commands: simulate, curve, histogram, compare, swap-demo, keygen.
CSV goes to --output (default stdout); the one-line summary goes to
stderr when the CSV occupies stdout, otherwise to stdout. The default
seed is 42 and can be overridden by the ENTVERIFY_SEED environment
variable; an explicit --seed wins over both.
"""
from __future__ import annotations

import argparse
import os
import sys
from cmath import exp as cexp
from dataclasses import dataclass
from math import cos, sin
from typing import Sequence, TextIO

from .adversary import (
    AttackerPolicy,
    BASIS_COMPUTATIONAL,
    BASIS_DIAGONAL,
    BASIS_HAAR_PER_PAIR,
    HONEST_PROTOCOL,
    RANDOM_BITS,
)
from .experiments import (
    DEFAULT_BINS,
    DEFAULT_DETECTION_TRIALS,
    DEFAULT_HISTOGRAM_SAMPLES,
    DEFAULT_SEED,
    REFERENCE_MEANS,
    SAMPLING_SCHEMES,
    SCHEME_HAAR,
    comparison_csv,
    comparison_table,
    detection_csv,
    fp_histogram,
    histogram_csv,
    mc_detection,
)
from .keys import bits_to_hex, estimate_qber, sift_raw_key
from .netmem import build_network, distribute_pair, parse_topology
from .qsim import BellVariant, RandomSource, SingleQubitBasis, bell_state, fidelity
from .teleport import swap_chain
from .verify import AC1, AC2, NA2010, PROTOCOLS

__all__ = ["CliConfig", "parse_attacker_basis", "parse_args", "run", "main"]

SEED_ENV_VAR = "ENTVERIFY_SEED"

_VARIANT_CYCLE = ((0, 0), (0, 1), (1, 0), (1, 1))


@dataclass(frozen=True)
class CliConfig:
    """Validated command-line configuration; one instance per invocation."""

    command: str
    protocol: str | None = None
    m: int = 10
    trials: int = DEFAULT_DETECTION_TRIALS
    samples: int = DEFAULT_HISTOGRAM_SAMPLES
    seed: int = DEFAULT_SEED
    attacker_basis: str = BASIS_COMPUTATIONAL
    attacker_classical: str = "honest"
    sampling_scheme: str = SCHEME_HAAR
    id_bits: int = 16
    output: str | None = None
    bins: int = DEFAULT_BINS
    jobs: int = 1
    m_max: int = 20
    max_pairs: int = 40
    chain: int | None = None
    topology: str | None = None
    pairs: int = 32
    sample_fraction: float = 0.25


def parse_attacker_basis(text: str) -> str | SingleQubitBasis | None:
    """Resolve an attacker-basis flag value.

    Accepts `computational`, `diagonal`, `haar` (fresh Haar-random basis per
    pair), `angle:<theta>,<phi>` with radians mapped to a = cos(theta/2),
    b = e^{i phi} sin(theta/2), or `none` (no compromise).
    """
    if text == "none":
        return None
    if text in (BASIS_COMPUTATIONAL, BASIS_DIAGONAL, BASIS_HAAR_PER_PAIR):
        return text
    if text == "haar":
        return BASIS_HAAR_PER_PAIR
    if text.startswith("angle:"):
        parts = text[len("angle:") :].split(",")
        if len(parts) != 2:
            raise ValueError("angle basis must be angle:<theta>,<phi>")
        theta, phi = float(parts[0]), float(parts[1])
        return SingleQubitBasis(
            complex(cos(theta / 2.0)), cexp(1j * phi) * sin(theta / 2.0)
        )
    raise ValueError(f"unrecognized attacker basis {text!r}")


def _add_seed_and_output(p: argparse.ArgumentParser, output: bool = True) -> None:
    p.add_argument(
        "--seed",
        type=int,
        default=None,
        help=f"RNG seed (default {DEFAULT_SEED}, or ${SEED_ENV_VAR} if set)",
    )
    if output:
        p.add_argument(
            "--output", default=None, help="write CSV here instead of stdout"
        )


def _add_attacker_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--attacker-basis",
        default=BASIS_COMPUTATIONAL,
        help=(
            "attacker measurement basis: computational | diagonal | haar | "
            "angle:<theta>,<phi> (radians; a=cos(theta/2), "
            "b=e^{i phi} sin(theta/2)) | none (no compromise); "
            f"default {BASIS_COMPUTATIONAL}"
        ),
    )
    p.add_argument(
        "--attacker-classical",
        choices=("honest", "random"),
        default="honest",
        help="attacker reply behavior: follow the protocol honestly or send random bits (default honest)",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entverify",
        description=(
            "Entanglement verification over quantum memories: Monte Carlo "
            "detection experiments, verdict-probability histograms, protocol "
            "comparison tables, swapping demos, and raw-key sifting."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "simulate", help="Monte Carlo detection estimate for one protocol"
    )
    p.add_argument("--protocol", choices=PROTOCOLS, required=True)
    p.add_argument("--m", type=int, default=10, help="verification rounds (default 10)")
    p.add_argument(
        "--trials",
        type=int,
        default=DEFAULT_DETECTION_TRIALS,
        help=f"independent sessions (default {DEFAULT_DETECTION_TRIALS})",
    )
    _add_attacker_flags(p)
    p.add_argument("--id-bits", type=int, default=16, help="pair-id width k (default 16)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    _add_seed_and_output(p)

    p = sub.add_parser(
        "curve", help="detection estimates for m = 1..m-max as one CSV"
    )
    p.add_argument("--protocol", choices=PROTOCOLS, required=True)
    p.add_argument("--m-max", type=int, default=20, help="largest round count (default 20)")
    p.add_argument(
        "--trials",
        type=int,
        default=10_000,
        help="sessions per point (default 10000)",
    )
    _add_attacker_flags(p)
    p.add_argument("--id-bits", type=int, default=16, help="pair-id width k (default 16)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    _add_seed_and_output(p)

    p = sub.add_parser(
        "histogram",
        help="verdict-probability frequency distribution (ac1 or ac2)",
    )
    p.add_argument("--protocol", choices=(AC1, AC2), required=True)
    p.add_argument(
        "--samples",
        type=int,
        default=DEFAULT_HISTOGRAM_SAMPLES,
        help=f"amplitude draws (default {DEFAULT_HISTOGRAM_SAMPLES})",
    )
    p.add_argument(
        "--scheme",
        choices=SAMPLING_SCHEMES,
        default=SCHEME_HAAR,
        help=f"amplitude sampling law (default {SCHEME_HAAR})",
    )
    p.add_argument("--bins", type=int, default=DEFAULT_BINS, help=f"histogram bins (default {DEFAULT_BINS})")
    _add_seed_and_output(p)

    p = sub.add_parser(
        "compare", help="closed-form detection vs sacrificed pairs for all protocols"
    )
    p.add_argument("--max-pairs", type=int, default=40, help="largest pair budget (default 40)")
    _add_seed_and_output(p)

    p = sub.add_parser(
        "swap-demo", help="entanglement swapping along a chain, with fidelity check"
    )
    group = p.add_mutually_exclusive_group()
    group.add_argument("--chain", type=int, default=None, help="number of nodes in a line topology (default 4)")
    group.add_argument(
        "--topology",
        default=None,
        help="topology file, one 'nodeA nodeB' link per line; nodes in first-appearance order form the chain",
    )
    _add_seed_and_output(p, output=False)

    p = sub.add_parser(
        "keygen", help="sift a raw key from surviving pairs and estimate QBER"
    )
    p.add_argument("--pairs", type=int, default=32, help="pairs to sift (default 32)")
    p.add_argument(
        "--sample-fraction",
        type=float,
        default=0.25,
        help="fraction of positions disclosed for QBER (default 0.25)",
    )
    _add_seed_and_output(p, output=False)

    return parser


def _default_seed(parser: argparse.ArgumentParser) -> int:
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        parser.error(f"{SEED_ENV_VAR} must be an integer, got {raw!r}")
        raise AssertionError("unreachable")


def parse_args(argv: Sequence[str]) -> CliConfig:
    """Parse argv into a CliConfig; exits with status 2 on usage errors."""
    parser = _build_parser()
    ns = parser.parse_args(list(argv))
    seed = ns.seed if ns.seed is not None else _default_seed(parser)

    kwargs: dict[str, object] = {"command": ns.command, "seed": seed}
    if ns.command in ("simulate", "curve"):
        try:
            parse_attacker_basis(ns.attacker_basis)
        except ValueError as err:
            parser.error(str(err))
        kwargs.update(
            protocol=ns.protocol,
            trials=ns.trials,
            attacker_basis=ns.attacker_basis,
            attacker_classical=ns.attacker_classical,
            id_bits=ns.id_bits,
            jobs=ns.jobs,
            output=ns.output,
        )
        if ns.command == "simulate":
            kwargs.update(m=ns.m)
        else:
            kwargs.update(m_max=ns.m_max)
    elif ns.command == "histogram":
        kwargs.update(
            protocol=ns.protocol,
            samples=ns.samples,
            sampling_scheme=ns.scheme,
            bins=ns.bins,
            output=ns.output,
        )
    elif ns.command == "compare":
        kwargs.update(max_pairs=ns.max_pairs, output=ns.output)
    elif ns.command == "swap-demo":
        chain = ns.chain
        if chain is None and ns.topology is None:
            chain = 4
        if chain is not None and chain < 3:
            parser.error("--chain needs at least 3 nodes")
        kwargs.update(chain=chain, topology=ns.topology)
    elif ns.command == "keygen":
        if ns.pairs < 1:
            parser.error("--pairs must be positive")
        if not 0.0 < ns.sample_fraction < 1.0:
            parser.error("--sample-fraction must be in (0, 1)")
        kwargs.update(pairs=ns.pairs, sample_fraction=ns.sample_fraction)
    return CliConfig(**kwargs)


def _policy_from_config(config: CliConfig) -> AttackerPolicy | None:
    basis = parse_attacker_basis(config.attacker_basis)
    if basis is None:
        return None
    behavior = HONEST_PROTOCOL if config.attacker_classical == "honest" else RANDOM_BITS
    return AttackerPolicy(basis=basis, classical_behavior=behavior)


def _emit(csv_text: str, summary: str, output: str | None) -> None:
    """CSV to the output path or stdout; summary to whichever stream is free."""
    if output is None:
        sys.stdout.write(csv_text)
        sys.stdout.flush()
        print(summary, file=sys.stderr)
    else:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(csv_text)
        print(summary)


def _fmt_closed(p_closed: float | None) -> str:
    return f"{p_closed:.6f}" if p_closed is not None else "n/a"


def _run_simulate(config: CliConfig) -> int:
    policy = _policy_from_config(config)
    est = mc_detection(
        config.protocol,
        policy,
        config.m,
        config.trials,
        seed=config.seed,
        id_bits=config.id_bits,
        jobs=config.jobs,
    )
    summary = (
        f"{est.protocol} m={est.m} trials={est.trials} p_hat={est.p_hat:.6f} "
        f"ci=[{est.ci_low:.6f},{est.ci_high:.6f}] p_closed={_fmt_closed(est.p_closed)}"
    )
    _emit(detection_csv([est]), summary, config.output)
    return 0


def _run_curve(config: CliConfig) -> int:
    policy = _policy_from_config(config)
    estimates = [
        mc_detection(
            config.protocol,
            policy,
            m,
            config.trials,
            seed=config.seed,
            id_bits=config.id_bits,
            jobs=config.jobs,
        )
        for m in range(1, config.m_max + 1)
    ]
    last = estimates[-1]
    summary = (
        f"{config.protocol} m=1..{config.m_max} trials={config.trials} "
        f"final p_hat={last.p_hat:.6f} p_closed={_fmt_closed(last.p_closed)}"
    )
    _emit(detection_csv(estimates), summary, config.output)
    return 0


def _run_histogram(config: CliConfig) -> int:
    hist = fp_histogram(
        config.protocol,
        samples=config.samples,
        scheme=config.sampling_scheme,
        bins=config.bins,
        seed=config.seed,
    )
    summary = (
        f"{config.protocol} scheme={config.sampling_scheme} samples={hist.total} "
        f"measured_mean={hist.empirical_mean:.6f} "
        f"reference_mean={REFERENCE_MEANS[config.protocol]:.6f} "
        f"min={hist.empirical_min:.6f} max={hist.empirical_max:.6f}"
    )
    _emit(histogram_csv(hist), summary, config.output)
    return 0


def _run_compare(config: CliConfig) -> int:
    rows = comparison_table(config.max_pairs)
    summary = f"comparison max_pairs={config.max_pairs} rows={len(rows)}"
    _emit(comparison_csv(rows), summary, config.output)
    return 0


def _chain_spec(config: CliConfig) -> tuple[tuple[str, ...], tuple[tuple[str, str], ...]]:
    if config.topology is not None:
        with open(config.topology, "r", encoding="utf-8") as fh:
            nodes, links = parse_topology(fh.read())
        order = list(nodes)
        for left, right in zip(order[:-1], order[1:]):
            if frozenset((left, right)) not in {frozenset(l) for l in links}:
                raise ValueError(
                    f"topology is not a chain: no link between {left} and {right}"
                )
        return tuple(order), tuple(links)
    n = config.chain if config.chain is not None else 4
    names = tuple(f"n{i}" for i in range(n))
    return names, tuple(zip(names[:-1], names[1:]))


def _run_swap_demo(config: CliConfig) -> int:
    path, links = _chain_spec(config)
    net = build_network(path, links)
    pairs = []
    for hop, (left, right) in enumerate(zip(path[:-1], path[1:])):
        variant = BellVariant(*_VARIANT_CYCLE[hop % 4])
        pairs.append(distribute_pair(net, left, right, variant))
    r = RandomSource(config.seed)
    end_id, announced = swap_chain(net, path, pairs, r)
    end_state = net.pairs[end_id].joint
    fid = fidelity(end_state, bell_state(announced))
    print(f"variant=({announced.i},{announced.j}) fidelity={fid:.6f}")
    return 0


def _run_keygen(config: CliConfig) -> int:
    net = build_network(("alice", "bob"), (("alice", "bob"),))
    pair_ids = [
        distribute_pair(net, "alice", "bob", BellVariant(*_VARIANT_CYCLE[k % 4]))
        for k in range(config.pairs)
    ]
    r = RandomSource(config.seed)
    key_a, key_b = sift_raw_key(net, "alice", "bob", pair_ids, r)
    est = estimate_qber(key_a, key_b, config.sample_fraction, r)
    print(f"key_a={bits_to_hex(est.remaining_key_a)}")
    print(f"key_b={bits_to_hex(est.remaining_key_b)}")
    print(f"key_bits={len(est.remaining_key_a)}")
    print(f"epsilon={est.epsilon:.6f}")
    return 0


_RUNNERS = {
    "simulate": _run_simulate,
    "curve": _run_curve,
    "histogram": _run_histogram,
    "compare": _run_compare,
    "swap-demo": _run_swap_demo,
    "keygen": _run_keygen,
}


def run(config: CliConfig) -> int:
    """Execute a parsed configuration; returns the process exit status."""
    return _RUNNERS[config.command](config)


def main(argv: Sequence[str] | None = None) -> int:
    config = parse_args(sys.argv[1:] if argv is None else argv)
    try:
        return run(config)
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
