"""Command-line entry point wiring the verification suites together.

Subcommands:

    verify all [--config FILE] [--seed N] [--timings]
    cheby verify [--max-n N]
    ncverify [--max-n N] [--route a|b|both]
    skein resolve <file> | multiply <a> <b> | verify-fixture <dir>
    chvar scan [--tangles ...] [--t-samples N] [--b-samples N] [--n-max N] [--seed N]
    chvar fricke [--trials N] [--seed N]
    fixtures emit --dir DIR [--force]

Exit codes: 0 when everything passed (SKIPPED allowed), 1 when any check
failed, 2 for configuration or input errors.
"""

from __future__ import annotations

import argparse
import cmath
import math
import random
import sys
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from . import cheby, chvar, ncrewrite
from .fixtures import (
    ManifestError,
    emit_fixture_templates,
    shipped_diagram,
    verify_fixture_dir,
)
from .skein import (
    Board,
    DiagramError,
    SkeinElement,
    canonical_diagram,
    epsilon_of_element,
    is_laminar,
    multiply,
    parse_diagram,
    resolve,
    verify_skein_identity,
)

__all__ = [
    "ConfigError",
    "SuiteItem",
    "VerificationReport",
    "main",
    "parse_config",
    "run_all",
]


class ConfigError(ValueError):
    """Configuration file or parameter problem; maps to exit code 2."""


_CONFIG_DEFAULTS: Dict[str, Union[int, str]] = {
    "max_n": 12,
    "b_samples": 40,
    "t_samples": 2,
    "fixture_dir": "fixtures",
    "seed": 0,
    "state_cap": 24,
}
_INT_KEYS = ("max_n", "b_samples", "t_samples", "seed", "state_cap")


def parse_config(text: str, source: str = "config") -> Dict[str, Union[int, str]]:
    """Parse line-oriented `key = value` configuration text."""
    values = dict(_CONFIG_DEFAULTS)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{source} line {lineno}: expected key = value")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _CONFIG_DEFAULTS:
            raise ConfigError(f"{source} line {lineno}: unknown key {key!r}")
        if key in _INT_KEYS:
            try:
                values[key] = int(value)
            except ValueError:
                raise ConfigError(
                    f"{source} line {lineno}: {key} expects an integer, got {value!r}"
                ) from None
        else:
            values[key] = value
    if int(values["max_n"]) < 1:
        raise ConfigError(f"{source}: max_n must be at least 1")
    if int(values["b_samples"]) < 32:
        raise ConfigError(f"{source}: b_samples must be at least 32")
    if int(values["t_samples"]) < 1:
        raise ConfigError(f"{source}: t_samples must be at least 1")
    if int(values["state_cap"]) < 1:
        raise ConfigError(f"{source}: state_cap must be at least 1")
    return values


# ---------------------------------------------------------------------------
# Report types


@dataclass(frozen=True)
class SuiteItem:
    suite: str
    name: str
    status: str  # PASS, FAIL, or SKIPPED
    detail: str
    seconds: float


@dataclass(frozen=True)
class VerificationReport:
    seed: int
    items: Tuple[SuiteItem, ...]

    @property
    def failed(self) -> bool:
        return any(item.status == "FAIL" for item in self.items)

    @property
    def first_failure(self) -> Optional[SuiteItem]:
        for item in self.items:
            if item.status == "FAIL":
                return item
        return None

    def exit_code(self) -> int:
        return 1 if self.failed else 0

    def render(self, include_timings: bool = False) -> str:
        # timings are excluded by default so reports are byte-identical
        lines = [f"seed={self.seed}"]
        for item in self.items:
            line = f"{item.suite}.{item.name}: {item.status}"
            if item.detail:
                line += f" ({item.detail})"
            if include_timings:
                line += f" [{item.seconds:.3f}s]"
            lines.append(line)
        lines.append(f"result: {'FAIL' if self.failed else 'PASS'}")
        return "\n".join(lines)


def _timed(suite: str, name: str, check: Callable[[], Tuple[str, str]]) -> SuiteItem:
    start = time.perf_counter()
    try:
        status, detail = check()
    except Exception as exc:  # isolate the failing item
        status, detail = "FAIL", f"{type(exc).__name__}: {exc}"
    return SuiteItem(suite, name, status, detail, time.perf_counter() - start)


# the symbolic caches in cheby/ncrewrite are grown in place, so the two
# suites that touch them are serialized against each other
_SYMBOLIC_LOCK = threading.Lock()


# ---------------------------------------------------------------------------
# Suites


def _cheby_identity_checks(max_n: int) -> List[Tuple[str, Callable[[], Tuple[str, str]]]]:
    def closed_form() -> Tuple[str, str]:
        for n in range(max_n + 1):
            if cheby.qdiff_sine_sum(n) != cheby.qdiff_sine_sum_closed(n):
                return "FAIL", f"first failure at n={n}"
        return "PASS", f"n <= {max_n}"

    def cosine_from_sines() -> Tuple[str, str]:
        for n in range(max_n + 1):
            if cheby.cheb_cosine(n) != cheby.cheb_sine(n + 1) - cheby.cheb_sine(n - 1):
                return "FAIL", f"first failure at n={n}"
        return "PASS", f"n <= {max_n}"

    def sine_cosine_product() -> Tuple[str, str]:
        for n in range(max_n + 1):
            if cheby.cheb_sine(n) * cheby.cheb_cosine(n) != cheby.cheb_sine(2 * n):
                return "FAIL", f"first failure at n={n}"
        return "PASS", f"n <= {max_n}"

    return [
        ("qdiff_closed_form", closed_form),
        ("cosine_from_sines", cosine_from_sines),
        ("sine_cosine_product", sine_cosine_product),
    ]


def _cheby_suite(max_n: int) -> List[SuiteItem]:
    with _SYMBOLIC_LOCK:
        return [
            _timed("cheby", name, check)
            for name, check in _cheby_identity_checks(max_n)
        ]


def _ncrewrite_suite(max_n: int) -> List[SuiteItem]:
    def matrix_lemma() -> Tuple[str, str]:
        report = ncrewrite.verify_matrix_lemma(max_n)
        if report.ok:
            return "PASS", f"n <= {max_n}"
        return "FAIL", f"first failure at n={report.first_failure}"

    def commute_many() -> Tuple[str, str]:
        for n in range(1, max_n + 1):
            result = ncrewrite.verify_commute_many(n)
            if not result.ok:
                return "FAIL", f"n={n}: {result.residual}"
        return "PASS", f"n <= {max_n}, both routes"

    def e_n_derivation() -> Tuple[str, str]:
        for n in range(1, max_n + 1):
            derivation = ncrewrite.derive_e_n(n)
            if not derivation.ok:
                return "FAIL", f"n={n}: {derivation.detail}"
        return "PASS", f"n <= {max_n}"

    def mutation_detected() -> Tuple[str, str]:
        mutated = ncrewrite.verify_commute_many(2, mutate=True)
        if mutated.ok or mutated.residual is None:
            return "FAIL", "mutated coefficient went unnoticed"
        return "PASS", "single-coefficient mutation caught"

    checks = [
        ("matrix_lemma", matrix_lemma),
        ("commute_many", commute_many),
        ("e_n_derivation", e_n_derivation),
        ("mutation_detected", mutation_detected),
    ]
    with _SYMBOLIC_LOCK:
        return [_timed("ncrewrite", name, check) for name, check in checks]


def _random_laminar(rng: random.Random, n_holes: int, max_comps: int) -> Tuple[Tuple[int, ...], ...]:
    while True:
        comps = []
        for _ in range(rng.randint(1, max_comps)):
            size = rng.randint(1, n_holes)
            comps.append(tuple(sorted(rng.sample(range(1, n_holes + 1), size))))
        if is_laminar(comps):
            return tuple(sorted(comps))


def _random_sl2_int(rng: random.Random) -> Tuple[Tuple[int, int], Tuple[int, int]]:
    m = ((1, 0), (0, 1))
    for _ in range(rng.randint(2, 5)):
        k = rng.randint(-3, 3)
        e = ((1, k), (0, 1)) if rng.random() < 0.5 else ((1, 0), (k, 1))
        m = (
            (
                m[0][0] * e[0][0] + m[0][1] * e[1][0],
                m[0][0] * e[0][1] + m[0][1] * e[1][1],
            ),
            (
                m[1][0] * e[0][0] + m[1][1] * e[1][0],
                m[1][0] * e[0][1] + m[1][1] * e[1][1],
            ),
        )
    return m


def _skein_suite(seed: int, state_cap: int, fixture_dir: str) -> List[SuiteItem]:
    items: List[SuiteItem] = []

    def roundtrip() -> Tuple[str, str]:
        rng = random.Random(f"{seed}:skein-roundtrip")
        board = Board(3)
        for _ in range(12):
            m = _random_laminar(rng, 3, 3)
            element = resolve(canonical_diagram(m, board), state_cap=state_cap)
            if element != SkeinElement.basis(board, m):
                return "FAIL", f"roundtrip broke on {m}"
        return "PASS", "12 random multicurves on 3 holes"

    def annulus() -> Tuple[str, str]:
        board = Board(1)
        for i in range(0, 3):
            for j in range(0, 5 - i):
                a = SkeinElement.basis(board, [(1,)] * i)
                b = SkeinElement.basis(board, [(1,)] * j)
                if multiply(a, b, board=board) != SkeinElement.basis(
                    board, [(1,)] * (i + j)
                ):
                    return "FAIL", f"power product {i}+{j} broke"
        return "PASS", "basis powers multiply like a polynomial algebra"

    def strand_slide() -> Tuple[str, str]:
        report = verify_skein_identity(
            [(1, shipped_diagram("r2poked"))],
            [(1, shipped_diagram("r2nested"))],
            state_cap=state_cap,
        )
        if report.ok:
            return "PASS", "poked loop equals plain nesting"
        return "FAIL", report.first_discrepancy or "mismatch"

    def epsilon_factorization() -> Tuple[str, str]:
        rng = random.Random(f"{seed}:skein-epsilon")
        board = Board(3)
        for _ in range(10):
            union = _random_laminar(rng, 3, 4)
            mask = [rng.random() < 0.5 for _ in union]
            part_a = tuple(c for c, keep in zip(union, mask) if keep)
            part_b = tuple(c for c, keep in zip(union, mask) if not keep)
            a = SkeinElement.basis(board, part_a)
            b = SkeinElement.basis(board, part_b)
            product = multiply(a, b, board=board, state_cap=state_cap)
            for _ in range(3):
                rho = [_random_sl2_int(rng) for _ in range(3)]
                lhs = epsilon_of_element(product, rho)
                rhs = epsilon_of_element(a, rho) * epsilon_of_element(b, rho)
                if abs(lhs - rhs) > 1e-9:
                    return "FAIL", f"deviation {abs(lhs - rhs)} on {union}"
        return "PASS", "laminar-union pairs factor exactly"

    checks = [
        ("roundtrip", roundtrip),
        ("annulus", annulus),
        ("strand_slide", strand_slide),
        ("epsilon_factorization", epsilon_factorization),
    ]
    items.extend(_timed("skein", name, check) for name, check in checks)

    manifest = Path(fixture_dir) / "manifest.txt"
    if manifest.is_file():
        start = time.perf_counter()
        try:
            results = verify_fixture_dir(fixture_dir)
        except ManifestError as exc:
            items.append(
                SuiteItem(
                    "skein",
                    "fixtures",
                    "FAIL",
                    str(exc),
                    time.perf_counter() - start,
                )
            )
        else:
            elapsed = time.perf_counter() - start
            for result in results:
                items.append(
                    SuiteItem(
                        "skein",
                        f"fixture {result.name}",
                        result.status,
                        result.detail,
                        elapsed / max(1, len(results)),
                    )
                )
    else:
        items.append(
            SuiteItem(
                "skein",
                "fixtures",
                "SKIPPED",
                f"{fixture_dir} has no manifest.txt",
                0.0,
            )
        )
    return items


def _sample_t(rng: random.Random) -> float:
    return 2 * math.cos(rng.uniform(0.3, math.pi - 0.3))


def _sample_b(rng: random.Random, t: complex) -> complex:
    radius = rng.uniform(0.5, 2.5)
    phase = rng.uniform(0, 2 * math.pi)
    return t * t + radius * cmath.exp(1j * phase)


def _random_trace_t(rng: random.Random, t: complex):
    import numpy as np

    lam = (t + cmath.sqrt(t * t - 4)) / 2
    while True:
        g = np.array(
            [
                [rng.gauss(0, 1) + 1j * rng.gauss(0, 1) for _ in range(2)]
                for _ in range(2)
            ],
            dtype=complex,
        )
        det = g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0]
        if abs(det) > 1e-3:
            g = g / np.sqrt(det)
            break
    inv = np.array([[g[1, 1], -g[0, 1]], [-g[1, 0], g[0, 0]]], dtype=complex)
    return g @ np.diag([lam, 1 / lam]).astype(complex) @ inv


def _fricke_max_residual(seed: int, trials: int) -> float:
    import numpy as np

    rng = random.Random(f"{seed}:fricke")
    worst = 0.0
    per_t = max(1, trials // 10)
    for _ in range(10):
        t = _sample_t(rng)
        for _ in range(per_t):
            a1, a2, a3 = (_random_trace_t(rng, t) for _ in range(3))
            value = chvar.fricke_f(
                complex(np.trace(a1 @ a2)),
                complex(np.trace(a1 @ a3)),
                complex(np.trace(a2 @ a3)),
                complex(np.trace(a1 @ a2 @ a3)),
                t,
            )
            worst = max(worst, abs(value))
    return worst


def _scan_once(
    tangles: Sequence[Union[complex, Tuple[int, int]]],
    t: complex,
    seed_token: str,
    b_samples: int,
    n_max: int,
):
    rng = random.Random(seed_token)
    grid = [_sample_b(rng, t) for _ in range(b_samples)]
    return chvar.nonvanishing_scan(tangles, t, grid, n_max)


def _scan_healthy(report) -> Tuple[bool, str]:
    if report.nonvanish_fraction < 0.95:
        return False, f"nonvanish fraction {report.nonvanish_fraction:.3f}"
    for rec in report.records:
        if not rec.ratio_ok:
            return False, f"ratio check broke at b={rec.b}"
        if rec.built and rec.eps_e_min_abs <= 1e-6:
            if min(abs(rec.b - root) for root in report.quad_roots) >= 1e-6:
                return False, f"stray zero at b={rec.b}"
    for label, fractions in report.sibling_fractions:
        if max(fractions) < 0.95:
            return False, f"{label} vanishes on every branch"
        for frac in fractions:
            if frac < 0.95 and frac != 0.0:
                return False, f"{label} has a half-vanishing branch ({frac:.3f})"
    return True, ""


def _chvar_suite(seed: int, t_samples: int, b_samples: int, n_max: int) -> List[SuiteItem]:
    def fricke() -> Tuple[str, str]:
        worst = _fricke_max_residual(seed, 200)
        if worst < 1e-8:
            return "PASS", f"max |f| = {worst:.2e} over 200 triples"
        return "FAIL", f"max |f| = {worst:.2e}"

    def x1_scan() -> Tuple[str, str]:
        rng = random.Random(f"{seed}:chvar-t")
        worst_fraction = 1.0
        for k in range(t_samples):
            t = _sample_t(rng)
            report = _scan_once(
                ((1, 3),) * 4, t, f"{seed}:chvar-grid:{k}", b_samples, n_max
            )
            healthy, why = _scan_healthy(report)
            if not healthy:
                return "FAIL", f"t={t:.6g}: {why}"
            worst_fraction = min(worst_fraction, report.nonvanish_fraction)
        return (
            "PASS",
            f"{t_samples} scans x {b_samples} samples, "
            f"min nonvanish fraction {worst_fraction:.3f}",
        )

    checks = [("fricke_random", fricke), ("x1_scan", x1_scan)]
    return [_timed("chvar", name, check) for name, check in checks]


def run_all(config: Dict[str, Union[int, str]]) -> VerificationReport:
    """Run every suite concurrently and assemble a deterministic report."""
    seed = int(config["seed"])
    max_n = int(config["max_n"])
    scan_n_max = min(16, max_n)
    jobs: List[Tuple[str, Callable[[], List[SuiteItem]]]] = [
        ("cheby", lambda: _cheby_suite(max_n)),
        ("ncrewrite", lambda: _ncrewrite_suite(max_n)),
        (
            "skein",
            lambda: _skein_suite(
                seed, int(config["state_cap"]), str(config["fixture_dir"])
            ),
        ),
        (
            "chvar",
            lambda: _chvar_suite(
                seed, int(config["t_samples"]), int(config["b_samples"]), scan_n_max
            ),
        ),
    ]
    with ThreadPoolExecutor(max_workers=len(jobs)) as pool:
        futures = [(name, pool.submit(job)) for name, job in jobs]
        results = [future.result() for _, future in futures]
    items: List[SuiteItem] = []
    for chunk in results:
        items.extend(chunk)
    return VerificationReport(seed, tuple(items))


# ---------------------------------------------------------------------------
# Command handlers


def _cmd_verify(args: argparse.Namespace) -> int:
    if args.what != "all":
        print(f"unknown verify target {args.what!r}", file=sys.stderr)
        return 2
    config_text = ""
    source = "defaults"
    if args.config is not None:
        path = Path(args.config)
        if not path.is_file():
            print(f"config file {args.config} not found", file=sys.stderr)
            return 2
        config_text = path.read_text(encoding="utf-8")
        source = str(path)
    config = parse_config(config_text, source=source)
    if args.seed is not None:
        config["seed"] = args.seed
    report = run_all(config)
    print(report.render(include_timings=args.timings))
    return report.exit_code()


def _cmd_cheby(args: argparse.Namespace) -> int:
    if args.what != "verify":
        print(f"unknown cheby action {args.what!r}", file=sys.stderr)
        return 2
    failed = False
    for name, check in _cheby_identity_checks(args.max_n):
        status, detail = check()
        failed = failed or status == "FAIL"
        print(f"{name} n<={args.max_n}: {status}" + (f" ({detail})" if status == "FAIL" else ""))
    print(f"result: {'FAIL' if failed else 'PASS'}")
    return 1 if failed else 0


def _cmd_ncverify(args: argparse.Namespace) -> int:
    failed = False
    for n in range(1, args.max_n + 1):
        result = ncrewrite.verify_commute_many(n, route=args.route)
        commute = "PASS" if result.ok else "FAIL"
        derivation = ncrewrite.derive_e_n(n)
        e_n = "PASS" if derivation.ok else "FAIL"
        failed = failed or not (result.ok and derivation.ok)
        print(f"n={n} commute_many={commute} e_n={e_n}")
    mutated = ncrewrite.verify_commute_many(2, route=args.route, mutate=True)
    caught = not mutated.ok and mutated.residual is not None
    failed = failed or not caught
    print(f"mutation_detected={'PASS' if caught else 'FAIL'}")
    print(f"result: {'FAIL' if failed else 'PASS'}")
    return 1 if failed else 0


def _read_diagram(path: str):
    file_path = Path(path)
    if not file_path.is_file():
        raise DiagramError(f"diagram file {path} not found")
    return parse_diagram(file_path.read_text(encoding="utf-8"))


def _cmd_skein(args: argparse.Namespace) -> int:
    if args.action == "resolve":
        element = resolve(_read_diagram(args.file), state_cap=args.state_cap)
        print(element.render())
        return 0
    if args.action == "multiply":
        ea = resolve(_read_diagram(args.file_a), state_cap=args.state_cap)
        eb = resolve(_read_diagram(args.file_b), state_cap=args.state_cap)
        print(multiply(ea, eb, state_cap=args.state_cap).render())
        return 0
    # verify-fixture
    results = verify_fixture_dir(args.dir)
    failed = False
    for result in results:
        failed = failed or result.status == "FAIL"
        print(result.render())
    print(f"result: {'FAIL' if failed else 'PASS'}")
    return 1 if failed else 0


def _parse_tangles(text: str) -> Tuple[Union[complex, Tuple[int, int]], ...]:
    out: List[Union[complex, Tuple[int, int]]] = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            raise ConfigError(f"empty tangle entry in {text!r}")
        if "/" in chunk:
            num, _, den = chunk.partition("/")
            try:
                out.append((int(num), int(den)))
            except ValueError:
                raise ConfigError(f"bad tangle fraction {chunk!r}") from None
        else:
            try:
                out.append(complex(chunk))
            except ValueError:
                raise ConfigError(f"bad tangle trace {chunk!r}") from None
    if len(out) != 4:
        raise ConfigError(f"need exactly 4 tangles, got {len(out)}")
    return tuple(out)


def _cmd_chvar(args: argparse.Namespace) -> int:
    if args.action == "fricke":
        worst = _fricke_max_residual(args.seed, args.trials)
        ok = worst < 1e-8
        print(f"trials={args.trials} max_abs_f={worst:.3e}")
        print(f"result: {'PASS' if ok else 'FAIL'}")
        return 0 if ok else 1
    # scan
    tangles = _parse_tangles(args.tangles)
    if args.b_samples < 32:
        raise ConfigError("--b-samples must be at least 32")
    rng = random.Random(f"{args.seed}:chvar-t")
    print(
        f"# tangles={args.tangles} t_samples={args.t_samples} "
        f"b_samples={args.b_samples} n_max={args.n_max} seed={args.seed}"
    )
    failed = False
    for k in range(args.t_samples):
        t = _sample_t(rng)
        report = _scan_once(
            tangles, t, f"{args.seed}:chvar-grid:{k}", args.b_samples, args.n_max
        )
        print(f"# t={t:.9g}")
        print(report.render())
        healthy, why = _scan_healthy(report)
        if not healthy:
            failed = True
            print(f"# unhealthy: {why}")
    print(f"result: {'FAIL' if failed else 'PASS'}")
    return 1 if failed else 0


def _cmd_fixtures(args: argparse.Namespace) -> int:
    if args.action != "emit":
        print(f"unknown fixtures action {args.action!r}", file=sys.stderr)
        return 2
    written = emit_fixture_templates(args.dir, force=args.force)
    print(f"wrote {len(written)} files to {args.dir}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skeinlab",
        description="verification suites for the holed-disk skein engine",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run every suite")
    p_verify.add_argument("what", choices=["all"])
    p_verify.add_argument("--config", default=None)
    p_verify.add_argument("--seed", type=int, default=None)
    p_verify.add_argument("--timings", action="store_true")
    p_verify.set_defaults(func=_cmd_verify)

    p_cheby = sub.add_parser("cheby", help="polynomial family identities")
    p_cheby.add_argument("what", choices=["verify"])
    p_cheby.add_argument("--max-n", type=int, default=32)
    p_cheby.set_defaults(func=_cmd_cheby)

    p_nc = sub.add_parser("ncverify", help="rewriting identities")
    p_nc.add_argument("--max-n", type=int, default=16)
    p_nc.add_argument("--route", choices=["a", "b", "both"], default="both")
    p_nc.set_defaults(func=_cmd_ncverify)

    p_skein = sub.add_parser("skein", help="diagram engine")
    skein_sub = p_skein.add_subparsers(dest="action", required=True)
    p_resolve = skein_sub.add_parser("resolve")
    p_resolve.add_argument("file")
    p_resolve.add_argument("--state-cap", type=int, default=24)
    p_mult = skein_sub.add_parser("multiply")
    p_mult.add_argument("file_a")
    p_mult.add_argument("file_b")
    p_mult.add_argument("--state-cap", type=int, default=24)
    p_fix = skein_sub.add_parser("verify-fixture")
    p_fix.add_argument("dir")
    p_skein.set_defaults(func=_cmd_skein)

    p_chvar = sub.add_parser("chvar", help="trace-calculus scans")
    chvar_sub = p_chvar.add_subparsers(dest="action", required=True)
    p_scan = chvar_sub.add_parser("scan")
    p_scan.add_argument("--tangles", default="1/3,1/3,1/3,1/3")
    p_scan.add_argument("--t-samples", type=int, default=8)
    p_scan.add_argument("--b-samples", type=int, default=100)
    p_scan.add_argument("--n-max", type=int, default=16)
    p_scan.add_argument("--seed", type=int, default=0)
    p_fricke = chvar_sub.add_parser("fricke")
    p_fricke.add_argument("--trials", type=int, default=1000)
    p_fricke.add_argument("--seed", type=int, default=0)
    p_chvar.set_defaults(func=_cmd_chvar)

    p_fixtures = sub.add_parser("fixtures", help="transcription templates")
    fixtures_sub = p_fixtures.add_subparsers(dest="action", required=True)
    p_emit = fixtures_sub.add_parser("emit")
    p_emit.add_argument("--dir", required=True)
    p_emit.add_argument("--force", action="store_true")
    p_fixtures.set_defaults(func=_cmd_fixtures)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except (DiagramError, ManifestError) as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
