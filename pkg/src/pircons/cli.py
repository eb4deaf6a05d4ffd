"""Command line front end.

Each subcommand writes its reports under out/<command>/<n>/ together with
a manifest listing the files produced.  Output is fully deterministic:
JSON is dumped with sorted keys, rows are emitted in canonical element
order, and parallel runs merge worker results in task order, so reports
are byte-identical for any --jobs value.  Failures print a machine
readable error object and exit nonzero.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import covers as covers_mod
from . import matchings, shellability, topology
from . import signed_perms as sp
from .fixed_points import verify_fixed_pircon
from .poset import poset_from_json

MAX_SIGNED_N = 6
MAX_UNSIGNED_N = 5  # 2n letters, so 2n <= 10


@dataclass(frozen=True)
class RunConfig:
    command: str
    n: int
    n_max: int | None = None
    family: str = "fpf-signed-involutions"
    order: str = "bruhat"
    labeling: str = "ci-candidate"
    label_file: str | None = None
    format: str = "json"
    jobs: int = 1
    seed: int = 0
    strict_claims: bool = True
    out_dir: str = "out"

    def __post_init__(self):
        family = sp.canonical_family(self.family)
        limit = (
            MAX_SIGNED_N
            if family.endswith("signed-involutions")
            else MAX_UNSIGNED_N
        )
        top = self.n if self.n_max is None else max(self.n, self.n_max)
        if not (0 <= self.n and top <= limit):
            raise ValueError(
                f"n={top} outside the supported range 0..{limit} for {family}"
            )
        if self.jobs < 1:
            raise ValueError("--jobs must be at least 1")
        bad = set(self.formats()) - {"json", "dot", "csv"}
        if bad:
            raise ValueError(f"unknown format(s): {', '.join(sorted(bad))}")

    def formats(self) -> tuple[str, ...]:
        return tuple(part.strip() for part in self.format.split(",") if part.strip())


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _dump(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _finish(cfg: RunConfig, outputs: dict[str, str]) -> Path:
    base = Path(cfg.out_dir) / cfg.command / str(cfg.n)
    for fname, text in outputs.items():
        _write(base / fname, text)
    manifest = {
        "command": cfg.command,
        "config": {
            "n": cfg.n,
            "n_max": cfg.n_max,
            "family": sp.canonical_family(cfg.family),
            "order": cfg.order,
            "labeling": cfg.labeling,
            "format": cfg.format,
            "seed": cfg.seed,
            "strict_claims": cfg.strict_claims,
        },
        "outputs": sorted(outputs),
    }
    _write(base / "manifest.json", _dump(manifest))
    return base


def _family_poset(cfg: RunConfig):
    elements = sp.generate_family(cfg.family, cfg.n)
    name = f"{sp.canonical_family(cfg.family)}-n{cfg.n}-{cfg.order}"
    return elements, sp.build_bruhat_poset(elements, cfg.order, name=name)


# -- subcommands ---------------------------------------------------------


def cmd_gen(cfg: RunConfig) -> int:
    elements, poset = _family_poset(cfg)
    outputs = {"elements.json": _dump([p.display() for p in elements])}
    for fmt in cfg.formats():
        if fmt == "dot":
            outputs["poset.dot"] = poset.to_dot()
        elif fmt == "csv":
            outputs["covers.csv"] = covers_mod.covers_csv(
                covers_mod.family_covers(elements)
            )
        else:
            outputs["poset.json"] = _dump(poset.to_json())
    base = _finish(cfg, outputs)
    print(f"{poset.name}: {poset.n} elements, {len(poset.covers)} covers -> {base}")
    return 0


def cmd_check_spm(cfg: RunConfig, poset_file: str, matching_file: str) -> int:
    P = poset_from_json(json.loads(Path(poset_file).read_text()))
    matching = matchings.matching_from_json(
        P, json.loads(Path(matching_file).read_text())
    )
    verdict = matchings.check_spm(P, matching)
    payload = matchings.verdict_to_json(P, verdict)
    _finish(cfg, {"verdict.json": _dump(payload)})
    print(_dump(payload), end="")
    return 0 if verdict.valid else 1


def cmd_pircon(cfg: RunConfig) -> int:
    _, poset = _family_poset(cfg)
    report = matchings.classify(poset, jobs=cfg.jobs)
    payload = report.to_json()
    payload["poset"] = poset.name
    base = _finish(cfg, {"classify.json": _dump(payload)})
    print(
        f"{poset.name}: pircon={report.pircon} zircon={report.zircon} -> {base}"
    )
    return 0


def cmd_fixed_spm(cfg: RunConfig) -> int:
    elements = sp.generate_family("fpf-involutions", cfg.n)
    P = sp.build_bruhat_poset(elements, "dual", name=f"dual-fpf-involutions-n{cfg.n}")
    tau = sp.index_map(elements, sp.conjugate_by_longest)
    report = verify_fixed_pircon(
        P, tau, check_claims=cfg.strict_claims, jobs=cfg.jobs
    )
    payload = report.to_json()
    payload["poset"] = P.name
    payload["n"] = cfg.n
    base = _finish(cfg, {"fixed-spm.json": _dump(payload)})
    print(f"{P.name}: ideals={len(report.entries)} ok={report.ok} -> {base}")
    return 0 if report.ok else 1


def cmd_el_verify(cfg: RunConfig) -> int:
    if cfg.order != "bruhat":
        raise ValueError("EL verification runs on the plain Bruhat order")
    second = "covering-value" if cfg.labeling == "cv-candidate" else "scan-index"
    poset, labelling, _ = shellability.candidate_labelling(
        cfg.n, cfg.family, second=second
    )
    if cfg.labeling == "from-file":
        if not cfg.label_file:
            raise ValueError("--labeling from-file needs --label-file")
        raw = json.loads(Path(cfg.label_file).read_text())
        labels = {(int(a), int(b)): (int(i), int(j)) for a, b, i, j in raw}
        labelling = shellability.EdgeLabelling(
            labels=labels, direction=labelling.direction
        )
    report = shellability.verify_el_poset(poset, labelling, jobs=cfg.jobs)
    base = _finish(cfg, {"el-report.json": _dump(report.to_json(poset))})
    cex = report.minimal_counterexample()
    note = "" if cex is None else (
        f" counterexample=({poset.elements[cex.x]}, {poset.elements[cex.y]})"
    )
    print(f"{poset.name}: el_passed={report.passed}{note} -> {base}")
    return 0 if report.passed else 1


def cmd_homology(cfg: RunConfig) -> int:
    elements, poset = _family_poset(cfg)
    proper = poset.proper_part()
    K = topology.order_complex(proper)
    sig = topology.homology_z2(K)
    expected = topology.expected_dimension(cfg.n)
    verdict = topology.ball_sphere_signature(K, expected)
    payload = {
        "n": cfg.n,
        "dim": K.dim,
        "expected_dim": expected,
        "euler_characteristic": topology.euler_characteristic(K),
        "betti": {str(d): sig.betti_at(d) for d in range(-1, sig.dim + 1)},
        "verdict": verdict,
    }
    base = _finish(
        cfg,
        {
            "homology.json": _dump(payload),
            "homology.csv": topology.homology_csv_row(cfg.n, sig, verdict),
            "complex.json": _dump(topology.complex_to_json(K)),
        },
    )
    print(f"{poset.name}: dim={K.dim} verdict={verdict} -> {base}")
    return 0


def cmd_stats(cfg: RunConfig) -> int:
    hi = cfg.n if cfg.n_max is None else cfg.n_max
    table = sp.stats_csv(cfg.family, range(cfg.n, hi + 1))
    _finish(cfg, {"stats.csv": table})
    print(table, end="")
    return 0


# -- argument handling ----------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="pircons")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, default_family: str) -> None:
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--n-max", type=int, default=None)
        p.add_argument("--family", default=default_family)
        p.add_argument("--order", choices=["bruhat", "dual"], default="bruhat")
        p.add_argument(
            "--labeling",
            choices=["ci-candidate", "cv-candidate", "from-file"],
            default="ci-candidate",
        )
        p.add_argument("--label-file", default=None)
        p.add_argument(
            "--format",
            default="json",
            help="comma separated subset of json,dot,csv",
        )
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument(
            "--strict-claims",
            action=argparse.BooleanOptionalAction,
            default=True,
        )
        p.add_argument("--out", dest="out_dir", default="out")

    common(sub.add_parser("gen"), "fpf-signed-involutions")
    check = sub.add_parser("check-spm")
    common(check, "fpf-signed-involutions")
    check.add_argument("--poset", required=True)
    check.add_argument("--matching", required=True)
    common(sub.add_parser("pircon"), "fpf-signed-involutions")
    common(sub.add_parser("fixed-spm"), "fpf-involutions")
    common(sub.add_parser("el-verify"), "fpf-signed-involutions")
    common(sub.add_parser("homology"), "fpf-signed-involutions")
    common(sub.add_parser("stats"), "fpf-signed-involutions")
    return top


def run(config: RunConfig, **extra) -> int:
    handlers = {
        "gen": cmd_gen,
        "pircon": cmd_pircon,
        "fixed-spm": cmd_fixed_spm,
        "el-verify": cmd_el_verify,
        "homology": cmd_homology,
        "stats": cmd_stats,
    }
    if config.command == "check-spm":
        return cmd_check_spm(config, extra["poset"], extra["matching"])
    return handlers[config.command](config)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = RunConfig(
            command=args.command,
            n=args.n,
            n_max=args.n_max,
            family=args.family,
            order=args.order,
            labeling=args.labeling,
            label_file=args.label_file,
            format=args.format,
            jobs=args.jobs,
            seed=args.seed,
            strict_claims=args.strict_claims,
            out_dir=args.out_dir,
        )
        extra = {}
        if args.command == "check-spm":
            extra = {"poset": args.poset, "matching": args.matching}
        return run(cfg, **extra)
    except Exception as exc:  # pragma: no cover - exercised via CLI tests
        print(
            json.dumps(
                {"error": type(exc).__name__, "message": str(exc)}, sort_keys=True
            )
        )
        return 2


if __name__ == "__main__":
    sys.exit(main())
