"""Command-line interface: build, verify, search, and the sharp-example demo.

Exit codes: 0 success, 1 a verification or analysis check failed, 2 bad usage
or configuration, 3 an enumeration exceeded its budget.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import analysis
from .errors import (
    BudgetExceededError,
    ConfigError,
    ExpanderLtcError,
    PreconditionViolationError,
)
from .formats import matrix_to_alist, matrix_to_dense_text
from .graphs import (
    certify_expansion,
    check_unique_neighbor_lemma,
    graph_to_edge_list,
)
from .groups import group_from_spec
from .products import (
    BalancedProductComplex,
    complex_manifest,
    left_right_cayley,
    one_d_subgraph,
    inherited_expansion,
    verify_chain_identity,
    verify_copy_decomposition,
)
from .search import SearchSpec, search_pair

EXIT_OK = 0
EXIT_ANALYSIS = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

_BUILD_KEYS = {
    "construction",
    "group",
    "a_set",
    "b_set",
    "c_x",
    "c_y",
    "max_c1_weight",
    "soundness",
    "small_set",
}
_SEARCH_KEYS = {
    "group",
    "w_down",
    "w_up",
    "w_right",
    "w_left",
    "c_x",
    "c_y",
    "trials",
    "eps_target",
    "ratio_x_interval",
    "ratio_y_interval",
}


def _load_config(path: str, allowed: set[str], required: set[str]) -> dict:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}", path)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}", path)
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object", path)
    unknown = set(cfg) - allowed
    if unknown:
        key = sorted(unknown)[0]
        raise ConfigError(f"unknown config key {key!r}", key)
    missing = required - set(cfg)
    if missing:
        key = sorted(missing)[0]
        raise ConfigError(f"missing required config key {key!r}", key)
    return cfg


def _fraction(cfg: dict, key: str, default: Fraction | None = None) -> Fraction:
    if key not in cfg:
        if default is None:
            raise ConfigError(f"missing required config key {key!r}", key)
        return default
    try:
        return Fraction(str(cfg[key]))
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"config key {key!r} is not a rational number", key)


def _build_complex(cfg: dict) -> BalancedProductComplex:
    construction = cfg.get("construction", "left_right_cayley")
    if construction != "left_right_cayley":
        raise ConfigError(
            f"unknown construction {construction!r}", "construction"
        )
    group = group_from_spec(cfg["group"])
    a_set = cfg.get("a_set")
    b_set = cfg.get("b_set")
    if not a_set or not b_set:
        raise ConfigError("a_set and b_set must be nonempty lists", "a_set")
    return left_right_cayley(group, list(a_set), list(b_set))


def build_report(
    bp: BalancedProductComplex,
    c_x: Fraction,
    c_y: Fraction,
    max_c1_weight: int | None = None,
    budget: int | None = None,
    run_soundness: bool = True,
    run_small_set: bool = True,
) -> dict:
    """The full analysis record of one complex, as a JSON-ready dict."""
    enum_budget = budget or analysis.DEFAULT_KERNEL_BUDGET
    code = analysis.code_from_complex(bp)
    cert_x = certify_expansion(bp.x, c_x)
    cert_y = certify_expansion(bp.y, c_y)
    sub_cert = inherited_expansion(bp, cert_x, "*0")

    dist = analysis.distance_certificate(code, bp, sub_cert, budget=enum_budget)
    lmd = analysis.locally_minimal_distance(bp, budget=enum_budget)
    max_w = max_c1_weight if max_c1_weight is not None else code.m
    ltp = analysis.lt_profile(bp, max_w, budget=enum_budget)

    report: dict = {
        "n": code.n,
        "k": code.k,
        "locality": code.locality,
        "rate": str(code.rate),
        "degrees": {
            "w_down": bp.w_down,
            "w_up": bp.w_up,
            "w_right": bp.w_right,
            "w_left": bp.w_left,
        },
        "d": {
            "bound": str(dist.bound),
            "exact": dist.exact,
            "witness": dist.witness.support() if dist.witness else None,
        },
        "d_lm": lmd.d_lm,
        "lt_profile": {
            "table": {str(k): v for k, v in sorted(ltp.table.items())},
            "kappa": str(ltp.kappa),
            "d_lt": ltp.d_lt,
            "soundness_bound": str(analysis.soundness_from_lt(code, ltp)),
        },
        "expansion": {"x": cert_x.to_json(), "y": cert_y.to_json()},
    }
    if run_soundness:
        budget_s = budget or analysis.DEFAULT_SOUNDNESS_BUDGET
        snd = analysis.soundness_exhaustive(code, budget=budget_s)
        report["soundness"] = {
            "s": str(snd.s),
            "method": snd.method,
            "witness": snd.witness.support(),
        }
    else:
        report["soundness"] = None
    if run_small_set:
        checks = analysis.small_set_suite(bp, cert_x, cert_y)
        report["small_set_checks"] = [
            {
                "c1_weight": c.c1_weight,
                "lhs": str(c.lhs),
                "rhs": str(c.rhs),
                "holds": c.holds,
                "epsilon": str(c.epsilon),
                "unique_to_v10": c.unique_to_v10,
                "unique_to_v01": c.unique_to_v01,
                "squares": c.squares,
            }
            for c in checks
        ]
    else:
        report["small_set_checks"] = None
    return report


def _write_outputs(
    out_dir: Path, report: dict, bp: BalancedProductComplex, deterministic: bool
) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    if not deterministic:
        report = dict(report)
        report["generated_at"] = time.strftime("%Y-%m-%dT%H:%M:%S")
    (out_dir / "report.json").write_text(
        json.dumps(report, indent=2, sort_keys=True) + "\n"
    )
    with open(out_dir / "summary.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        fields = ["n", "k", "d_bound", "d_exact", "locality", "s", "d_lm", "kappa", "d_lt"]
        writer.writerow(fields)
        writer.writerow(
            [
                report["n"],
                report["k"],
                report["d"]["bound"],
                report["d"]["exact"],
                report["locality"],
                report["soundness"]["s"] if report["soundness"] else "",
                report["d_lm"],
                report["lt_profile"]["kappa"],
                report["lt_profile"]["d_lt"],
            ]
        )
    (out_dir / "h_matrix.alist").write_text(matrix_to_alist(bp.d2))
    (out_dir / "h_matrix.txt").write_text(matrix_to_dense_text(bp.d2))
    (out_dir / "d1_matrix.alist").write_text(matrix_to_alist(bp.d1))
    (out_dir / "d1_matrix.txt").write_text(matrix_to_dense_text(bp.d1))
    (out_dir / "manifest.json").write_text(
        json.dumps(complex_manifest(bp), indent=2, sort_keys=True) + "\n"
    )
    graphs_dir = out_dir / "graphs"
    graphs_dir.mkdir(exist_ok=True)
    (graphs_dir / "factor_x.edges").write_text(graph_to_edge_list(bp.x))
    (graphs_dir / "factor_y.edges").write_text(graph_to_edge_list(bp.y))
    for name, tag in (("*0", "down"), ("*1", "up"), ("0*", "right"), ("1*", "left")):
        sub = one_d_subgraph(bp, name)
        (graphs_dir / f"sub_{tag}.edges").write_text(graph_to_edge_list(sub.graph))


def cmd_build(args) -> int:
    cfg = _load_config(args.config, _BUILD_KEYS, {"group", "a_set", "b_set"})
    if args.dry_run:
        group_from_spec(cfg["group"])
        print("config ok")
        return EXIT_OK
    bp = _build_complex(cfg)
    report = build_report(
        bp,
        c_x=_fraction(cfg, "c_x", Fraction(1, 2)),
        c_y=_fraction(cfg, "c_y", Fraction(1, 2)),
        max_c1_weight=cfg.get("max_c1_weight"),
        budget=args.budget,
        run_soundness=cfg.get("soundness", True),
        run_small_set=cfg.get("small_set", True),
    )
    _write_outputs(Path(args.out), report, bp, args.deterministic)
    print(f"built n={report['n']} k={report['k']} -> {args.out}")
    if report["small_set_checks"] is not None and not all(
        c["holds"] for c in report["small_set_checks"]
    ):
        print("small-set inequality FAILED on at least one vector", file=sys.stderr)
        return EXIT_ANALYSIS
    return EXIT_OK


_VERIFY_SUITES = ("chain", "copies", "unique", "small-set")


def cmd_verify(args) -> int:
    cfg = _load_config(args.config, _BUILD_KEYS, {"group", "a_set", "b_set"})
    suites = [s for s in args.suites.split(",") if s]
    if not suites:
        print("error: empty suite selection", file=sys.stderr)
        return EXIT_USAGE
    unknown = set(suites) - set(_VERIFY_SUITES)
    if unknown:
        print(f"error: unknown suite {sorted(unknown)[0]!r}", file=sys.stderr)
        return EXIT_USAGE
    if args.dry_run:
        group_from_spec(cfg["group"])
        print("config ok")
        return EXIT_OK
    bp = _build_complex(cfg)
    c_x = _fraction(cfg, "c_x", Fraction(1, 2))
    c_y = _fraction(cfg, "c_y", Fraction(1, 2))
    failed = 0

    def check(name: str, ok: bool, detail: str = "") -> None:
        nonlocal failed
        line = f"[{'PASS' if ok else 'FAIL'}] {name}"
        if detail and not ok:
            line += f" ({detail})"
        print(line)
        if not ok:
            failed += 1

    if "chain" in suites:
        ok, witness = verify_chain_identity(bp.d1, bp.d2)
        check("chain identity d1.d2 = 0", ok, f"entry {witness}")
    if "copies" in suites:
        for name in ("*0", "*1", "0*", "1*"):
            sub = one_d_subgraph(bp, name)
            check(
                f"copy decomposition of subgraph {name}",
                verify_copy_decomposition(sub),
            )
    if "unique" in suites or "small-set" in suites:
        cert_x = certify_expansion(bp.x, c_x)
        cert_y = certify_expansion(bp.y, c_y)
    if "unique" in suites:
        for tag, graph, cert in (("x", bp.x, cert_x), ("y", bp.y, cert_y)):
            ok, worst = check_unique_neighbor_lemma(graph, cert)
            check(f"unique-neighbor bound on factor {tag}", ok, str(worst))
    if "small-set" in suites:
        checks = analysis.small_set_suite(bp, cert_x, cert_y)
        check(
            f"small-set inequality on {len(checks)} locally minimal vectors",
            all(c.holds for c in checks),
        )
    return EXIT_OK if failed == 0 else EXIT_ANALYSIS


def cmd_search(args) -> int:
    cfg = _load_config(
        args.config,
        _SEARCH_KEYS,
        {"group", "w_down", "w_up", "w_right", "w_left"},
    )
    if args.dry_run:
        group_from_spec(cfg["group"])
        print("config ok")
        return EXIT_OK
    eps_target = (
        _fraction(cfg, "eps_target") if "eps_target" in cfg else None
    )

    def interval(key):
        if key not in cfg:
            return None
        lo, hi = cfg[key]
        return (Fraction(str(lo)), Fraction(str(hi)))

    spec = SearchSpec(
        group=group_from_spec(cfg["group"]),
        w_down=int(cfg["w_down"]),
        w_up=int(cfg["w_up"]),
        w_right=int(cfg["w_right"]),
        w_left=int(cfg["w_left"]),
        c_x=_fraction(cfg, "c_x", Fraction(1, 2)),
        c_y=_fraction(cfg, "c_y", Fraction(1, 2)),
        trials=int(cfg.get("trials", 50)),
        seed=args.seed,
        eps_target=eps_target,
        ratio_x_interval=interval("ratio_x_interval"),
        ratio_y_interval=interval("ratio_y_interval"),
    )
    result = search_pair(spec)
    out = {
        "trial": result.trial,
        "seed": result.seed,
        "epsilon": str(result.epsilon),
        "gen_sets_x": [list(s) for s in result.gen_sets_x],
        "gen_sets_y": [list(s) for s in result.gen_sets_y],
        "cert_x": result.cert_x.to_json(),
        "cert_y": result.cert_y.to_json(),
        "inequalities": result.inequalities,
        "log": list(result.log),
    }
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "search_result.json").write_text(
        json.dumps(out, indent=2, sort_keys=True) + "\n"
    )
    print(
        f"best trial {result.trial}: epsilon={result.epsilon} -> {out_dir}"
    )
    return EXIT_OK


def cmd_demo_sharp(args) -> int:
    from .analysis import (
        boundary_1,
        c0_weighted_norm,
        sharp_example,
        weighted_norm,
    )
    from .groups import make_cyclic

    if args.config:
        cfg = _load_config(args.config, _BUILD_KEYS, {"group", "a_set", "b_set"})
        bp = _build_complex(cfg)
        g = bp.group
    else:
        g = make_cyclic(8)
        bp = left_right_cayley(g, [1, 2], [1, 3])
    c1 = sharp_example(bp, 0)
    norm1 = weighted_norm(c1, bp)
    norm0 = c0_weighted_norm(boundary_1(bp, c1), bp)
    print(f"half-neighborhood vector on |G|={g.order}:")
    print(f"  weighted norm of c1      = {norm1}")
    print(f"  weighted norm of its boundary = {norm0}")
    print(f"  ratio = {norm0 / norm1} (the inequality's constant is sharp at 1/2)")
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="expander-ltc",
        description="Build and certify product codes from expanding Cayley factors.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--budget", type=int, default=None)
        p.add_argument("--deterministic", action="store_true")
        p.add_argument("--dry-run", action="store_true")
        p.add_argument("--out", default="out")

    p_build = sub.add_parser("build", help="construct a code and write its report")
    p_build.add_argument("--config", required=True)
    common(p_build)
    p_build.set_defaults(func=cmd_build)

    p_verify = sub.add_parser("verify", help="run the structural check suite")
    p_verify.add_argument("--config", required=True)
    p_verify.add_argument(
        "--suites",
        default=",".join(_VERIFY_SUITES),
        help="comma-separated subset of: " + ", ".join(_VERIFY_SUITES),
    )
    common(p_verify)
    p_verify.set_defaults(func=cmd_verify)

    p_search = sub.add_parser("search", help="random search for expanding factors")
    p_search.add_argument("--config", required=True)
    common(p_search)
    p_search.set_defaults(func=cmd_search)

    p_demo = sub.add_parser(
        "demo-sharp", help="show the half-neighborhood vector attaining ratio 1/2"
    )
    p_demo.add_argument("--config", default=None)
    common(p_demo)
    p_demo.set_defaults(func=cmd_demo_sharp)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    if args.jobs < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except PreconditionViolationError as exc:
        print(f"analysis failure: {exc}", file=sys.stderr)
        return EXIT_ANALYSIS
    except ExpanderLtcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
