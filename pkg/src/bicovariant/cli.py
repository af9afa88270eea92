"""Command-line front end.

    bicovariant run sp4 --suites classical,jacobi --preset A2 --format markdown

Exit status: 0 when no expected-pass check failed and no expected-fail check
passed, 1 otherwise, 2 for configuration errors.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from gmpy2 import mpq

from .checks import SUITES, RunConfig, build_checks, run_check
from .presets import PRESET_TAGS
from .report import VerificationReport, render

log = logging.getLogger("bicovariant")

#: read for compatibility; checks run in-process and in order
THREADS_ENV = "BICOVARIANT_THREADS"


def _csv(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _params(text: str) -> dict:
    out = {}
    for item in _csv(text):
        if "=" not in item:
            raise ValueError(f"bad --params entry {item!r}; expected key=value")
        k, v = item.split("=", 1)
        out[k.strip()] = mpq(v.strip())
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bicovariant", description="Verify graded bicovariant brackets and their q-deformation.")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run verification suites")
    r.add_argument("group_pos", nargs="?", metavar="GROUP", help="group tag (sp4, so5, sp6, so7)")
    r.add_argument("--group", help="group tag; same as the positional argument")
    r.add_argument("--suites", help=f"comma list from {','.join(SUITES)} (default classical)")
    r.add_argument("--mode", choices=("symbolic", "randomized"))
    r.add_argument("--seed", action="append", type=int, help="random seed; repeatable")
    r.add_argument("--q", action="append", help="rational q sample for quantum probes; repeatable")
    r.add_argument("--degree", action="append", type=int, help="PBW degree (2 or 3); repeatable")
    r.add_argument("--preset", help=f"comma list from {','.join(PRESET_TAGS)} (default all)")
    r.add_argument("--params", help="bracket parameters key=val,... for an extra custom check")
    r.add_argument("--samples", type=int, help="number of random off-family mu tuples (default 200)")
    r.add_argument("--format", choices=("json", "markdown"))
    r.add_argument("--out", help="write the report here instead of stdout")
    r.add_argument("--config", help="JSON file with any of the above keys; flags take precedence")
    r.add_argument("--timings", action="store_true", help="include per-check wall time (breaks byte-identity)")
    r.add_argument("-v", "--verbose", action="store_true")
    return p


def config_from_args(a: argparse.Namespace) -> RunConfig:
    base: dict = {}
    if a.config:
        with open(a.config) as fh:
            base = json.load(fh)
        if not isinstance(base, dict):
            raise ValueError("config file must hold a JSON object")

    def pick(flag, key, conv=lambda x: x):
        if flag is not None:
            return conv(flag)
        if key in base:
            return conv(base[key])
        return None

    def listish(x):
        return _csv(x) if isinstance(x, str) else list(x)

    cfg = RunConfig()
    group = a.group_pos or a.group or base.get("group")
    if a.group_pos and a.group and a.group_pos != a.group:
        raise ValueError("conflicting group arguments")
    if group:
        cfg.group = group.lower()
    v = pick(a.suites, "suites", listish)
    if v is not None:
        cfg.suites = tuple(v)
    v = pick(a.mode, "mode")
    if v is not None:
        cfg.mode = v
    v = pick(a.seed, "seeds", lambda x: [int(s) for s in (x if isinstance(x, list) else [x])])
    if v is not None:
        cfg.seeds = tuple(v)
    v = pick(a.q, "q_samples", lambda x: [mpq(str(s)) for s in (x if isinstance(x, list) else [x])])
    if v is not None:
        cfg.q_samples = tuple(v)
    v = pick(a.degree, "degrees", lambda x: [int(s) for s in (x if isinstance(x, list) else [x])])
    if v is not None:
        cfg.degrees = tuple(v)
    v = pick(a.preset, "presets", listish)
    if v is not None:
        cfg.presets = tuple(v)
    v = pick(a.params, "params", lambda x: _params(x) if isinstance(x, str) else {k: mpq(str(s)) for k, s in x.items()})
    if v is not None:
        cfg.params = v
    v = pick(a.samples, "samples", int)
    if v is not None:
        cfg.samples = v
    v = pick(a.format, "format")
    if v is not None:
        cfg.fmt = v
    cfg.validate()
    return cfg


def config_dict(cfg: RunConfig) -> dict:
    return {
        "group": cfg.group,
        "suites": list(cfg.suites),
        "mode": cfg.mode,
        "seeds": list(cfg.seeds),
        "q_samples": [str(q) for q in cfg.q_samples],
        "degrees": list(cfg.degrees),
        "presets": list(cfg.presets),
        "params": {k: str(v) for k, v in sorted(cfg.params.items())},
        "samples": cfg.samples,
    }


def run(cfg: RunConfig, timings: bool = False) -> VerificationReport:
    checks = build_checks(cfg)
    recs = []
    for c in checks:
        log.info("running %s", c.id)
        rec = run_check(c, cfg, timings)
        log.info("  %s", rec.status)
        recs.append(rec)
    return VerificationReport(config_dict(cfg), recs).sorted()


def main(argv=None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING, format="%(message)s")
    if os.environ.get(THREADS_ENV):
        log.info("%s is set; checks still run sequentially", THREADS_ENV)
    try:
        cfg = config_from_args(a)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"bicovariant: configuration error: {exc}", file=sys.stderr)
        return 2
    rep = run(cfg, a.timings)
    text = render(rep, cfg.fmt)
    if a.out:
        with open(a.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return rep.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
