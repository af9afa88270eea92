"""Acceptance criteria 1-11, one PASS/FAIL line each.

Each test prints its line and appends it to the session summary.  Criteria
that cannot hold as stated raise :class:`CriterionUnmet` and are marked as
strict expected failures; any other assertion error is a real failure.
"""
import time

import pytest

from bicovariant.checks import RunConfig, build_checks, run_check
from bicovariant.groups import group_from_tag
from bicovariant.invariants import invariant_count, structure_rank, weyl_invariant_count

GROUPS = ("sp4", "so5")
PRESETS = ("A1i", "A1ii", "A1iii", "A2", "A3")


class CriterionUnmet(Exception):
    """The criterion, as stated, does not hold."""


def records(group, suites, select, **kw):
    cfg = RunConfig(group=group, suites=suites, **kw)
    cfg.validate()
    return [run_check(c, cfg, False) for c in build_checks(cfg) if select(c.id)]


def ids(*names):
    return lambda i: i in names


def ok_status(r):
    return r.status in ("pass", "fail-as-expected")


def report(log, n, ok, seconds, limit, note=""):
    line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {seconds:7.1f}s (limit {limit}s)  {note}".rstrip()
    print(line)
    log.append(line)


def run_criterion(log, n, limit, body):
    t0 = time.perf_counter()
    ok, note = body()
    dt = time.perf_counter() - t0
    report(log, n, ok and dt < limit, dt, limit, note)
    assert dt < limit, f"criterion {n} took {dt:.1f}s"
    return ok, note


def all_ok(recs):
    bad = [f"{r.group}:{r.id}={r.status}" for r in recs if not ok_status(r)]
    return not bad, bad


def test_criterion_01_structural(acceptance_log):
    def body():
        recs = [r for g in GROUPS for r in records(g, ("classical",), ids(
            "classical.tilde_involution", "classical.tilde_square_sign", "classical.y11a",
            "classical.c5_elimination", "classical.X_tilde_relabel", "classical.trace_omega_square"),
            mode="symbolic")]
        ok, bad = all_ok(recs)
        return ok and len(recs) == 12, f"{len(recs)} checks {bad or ''}"

    ok, note = run_criterion(acceptance_log, 1, 10, body)
    assert ok, note


def test_criterion_02_k4(acceptance_log):
    def body():
        recs = [r for g in GROUPS for r in records(g, ("differential",), ids("differential.k4"), mode="symbolic")]
        ok, bad = all_ok(recs)
        return ok and len(recs) == 2, "six mu polynomials, both groups" if ok else str(bad)

    ok, note = run_criterion(acceptance_log, 2, 120, body)
    assert ok, note


def test_criterion_03_k5_families(acceptance_log):
    def body():
        recs = [r for g in GROUPS for r in records(
            g, ("differential",), lambda i: i.startswith("differential.k5_"), samples=1000)]
        ok, bad = all_ok(recs)
        return ok and len(recs) == 10, "4 families pass (nil), 1000 off-family tuples fail" if ok else str(bad)

    ok, note = run_criterion(acceptance_log, 3, 120, body)
    assert ok, note


def _preset_select(i):
    return i.startswith("differential.preset_") and i.rsplit(".", 1)[1] in ("expansion", "nil", "dd")


def test_criterion_04_presets(acceptance_log):
    def body():
        notes, ok = [], True
        for mode, limit in (("symbolic", 600), ("randomized", 60)):
            t0 = time.perf_counter()
            recs = [r for g in GROUPS for r in records(g, ("differential",), _preset_select, mode=mode)]
            dt = time.perf_counter() - t0
            good, bad = all_ok(recs)
            ok = ok and good and len(recs) == 30 and dt < limit
            notes.append(f"{mode} {len(recs)} checks {dt:.1f}s/{limit}s{' ' + str(bad) if bad else ''}")
        return ok, "; ".join(notes)

    ok, note = run_criterion(acceptance_log, 4, 660, body)
    assert ok, note


def test_criterion_05_headline_no_go(acceptance_log):
    def body():
        recs = [r for g in GROUPS for r in records(
            g, ("jacobi",), lambda i: i.startswith("jacobi.preset_"), seeds=(0, 1, 2))]
        good = [r for r in recs if r.status == "fail-as-expected"]
        return len(recs) == len(good) == 2 * 5 * 3, f"{len(good)}/30 preset x seed x group Jacobi residuals nonzero"

    ok, note = run_criterion(acceptance_log, 5, 300, body)
    assert ok, note


def test_criterion_06_dichotomy(acceptance_log):
    def body():
        recs = [r for g in GROUPS for r in records(
            g, ("jacobi",), ids("jacobi.abelian_r", "jacobi.standard_r", "jacobi.jai_identity"))]
        st = {(r.group, r.id): r.status for r in recs}
        ok = len(st) == 6 and all(
            st[(g, "jacobi.abelian_r")] == "pass" and st[(g, "jacobi.standard_r")] == "fail-as-expected"
            and st[(g, "jacobi.jai_identity")] == "pass" for g in GROUPS)
        return ok, "abelian passes, standard fails, (jai) exact" if ok else str(st)

    ok, note = run_criterion(acceptance_log, 6, 120, body)
    assert ok, note


def test_criterion_07_quantum_identities(acceptance_log):
    def body():
        sel = lambda i: i.startswith("quantum.") and not i.startswith(("quantum.span", "quantum.weh"))
        recs = [r for g in GROUPS for r in records(g, ("quantum",), sel)]
        ok, bad = all_ok(recs)
        return ok and len(recs) == 2 * 14, f"{len(recs)} symbolic identities {bad or ''}"

    ok, note = run_criterion(acceptance_log, 7, 120, body)
    assert ok, note


def test_criterion_08_relation_spans(acceptance_log):
    def body():
        notes, ok = [], True
        for g in GROUPS:
            t0 = time.perf_counter()
            recs = records(g, ("quantum",), ids("quantum.span_w19c_w22", "quantum.span_w19c_rel1_wat"))
            dt = time.perf_counter() - t0
            for r in recs:
                samples = r.data["samples"]
                ok = ok and r.status == "pass" and len({s["q"] for s in samples}) >= 2 \
                    and len({s["prime"] for s in samples}) >= 2
            ok = ok and len(recs) == 2 and (g != "sp4" or dt < 60)
            notes.append(f"{g} {dt:.1f}s")
        return ok, "both equalities at 2 q x 2 primes; " + ", ".join(notes)

    ok, note = run_criterion(acceptance_log, 8, 120, body)
    assert ok, note


@pytest.mark.xfail(raises=CriterionUnmet, strict=True,
                   reason="for sp4 the (wat) relations have no order-hbar extraction; see ledger")
def test_criterion_09_semiclassical(acceptance_log):
    def body():
        sel = lambda i: i.startswith("semiclassical.") and ".fgf_eps_" not in i
        per = {}
        for g in GROUPS:
            recs = records(g, ("semiclassical",), sel)
            per[g] = (all_ok(recs), len(recs))
        ok = all(good for (good, _), _ in per.values())
        note = "; ".join(f"{g} {'ok' if good else 'unmet ' + ','.join(bad)}" for g, ((good, bad), _) in per.items())
        return ok, note

    ok, note = run_criterion(acceptance_log, 9, 600, body)
    # the SO part must hold in full; only the Sp part is a known finding
    assert "so5 ok" in note, note
    if not ok:
        raise CriterionUnmet(note)


def test_criterion_10_pbw(acceptance_log):
    def body():
        recs = records("sp4", ("pbw",), lambda i: i.startswith("pbw."), degrees=(2, 3))
        table = {r.id: (r.data["generic"], r.data["q1"], r.data["classical"]) for r in recs}
        ok = len(recs) == 4 and all(
            r.status == "pass" and r.data["stable"] and "verdict" in r.data for r in recs) \
            and {v[2] for v in table.values()} == {120, 560}
        return ok, " ".join(f"{k[4:]}={v[0]}/{v[1]}" for k, v in sorted(table.items()))

    ok, note = run_criterion(acceptance_log, 10, 1800, body)
    assert ok, note


@pytest.mark.xfail(raises=CriterionUnmet, strict=True,
                   reason="with V = Mat(4) the group is Sp(4), which has 16 invariants, not 20; see ledger")
def test_criterion_11_invariant_count(acceptance_log):
    def body():
        g = group_from_tag("sp4")
        direct = invariant_count(g)
        oracle = weyl_invariant_count(g)
        rank, dependent = structure_rank(g)
        so5 = weyl_invariant_count(group_from_tag("so5"))
        note = (f"sp4 (V=Mat(4)): nullspace {direct.count}, characters {oracle}, family rank {rank} "
                f"(dependent {','.join(dependent)}); so5 characters {so5}")
        assert direct.count == oracle == rank, note
        return direct.count == 20, note

    ok, note = run_criterion(acceptance_log, 11, 3600, body)
    if not ok:
        raise CriterionUnmet(note)
