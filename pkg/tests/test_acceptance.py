"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Criterion 5 asserts the universal parameter-freedom claim exactly as
stated; the real-projective families I_4..I_9 contain parameter vectors
whose ideals provably collapse below the orbit-space table (see the
worked example in test_families), so that test reports the failing
vectors and stays red on purpose rather than weakening the check.
"""

import json
import time
from pathlib import Path

import numpy as np
import pytest

from borelss import gf2
from borelss.algebra import (AlgebraPresentation, FiberPresentation,
                             PoincareSeries, parse_poly, series_product)
from borelss.cli import EXIT_CONFIG, EXIT_OK, main
from borelss.driver import merged_case_id, replay, search_cases
from borelss.families import catalog_for_field
from borelss.indices import co_index_set, volovikov_set
from borelss.local import (InducedAction, SkeletonInapplicable,
                           local_e2_column, nontrivial_action_obstruction,
                           twisted_rows)
from borelss.verify import sweep_field

import oracles

FIXTURES = Path(__file__).parent / "fixtures"

EQ_TABLE_R = {m: series_product([(1, 5), (1, m + 1)]) for m in range(1, 9)}
CASE_I_TABLE_R = {m: series_product([(1, 2), (2, (m + 1) // 2), (4, 2)])
                  for m in (1, 3, 5, 7)}
EQ_TABLE_C = {m: series_product([(1, 5), (2, m + 1)]) for m in range(1, 9)}
CASE_I_TABLE_C = {m: series_product([(1, 3), (4, (m + 1) // 2), (4, 2)])
                  for m in (1, 3, 5, 7)}
TABLE_H = {m: series_product([(1, 5), (4, m + 1)]) for m in range(1, 9)}
CASE_I_TABLE_H = {m: series_product([(1, 5), (8, (m + 1) // 2), (4, 2)])
                  for m in (1, 3, 5, 7)}


def _report(n, text):
    print(f"ACCEPTANCE {n} PASS: {text}")


def _enumerate_json(capsys, *argv):
    code = main(list(argv) + ["--format", "json"])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    return json.loads(out)


def test_criterion_1_theorem_rp_reproduction(capsys):
    t0 = time.monotonic()
    doc = _enumerate_json(capsys, "enumerate", "--field", "R", "--m", "5",
                          "--assume-trivial-action")
    elapsed = time.monotonic() - t0
    cases = {sc["case_id"]: tuple(sc["betti"]) for sc in doc["scenarios"]}
    assert len(doc["scenarios"]) == 9
    assert len(cases) == 9
    for cid, betti in cases.items():
        want = CASE_I_TABLE_R[5] if cid == "R.i" else EQ_TABLE_R[5]
        assert betti == want.coeffs, cid
    assert elapsed < 30.0
    _report(1, f"9 real scenarios at m=5, tables exact, {elapsed:.1f}s")


def test_criterion_2_theorem_cp_reproduction(capsys):
    doc3 = _enumerate_json(capsys, "enumerate", "--field", "C", "--m", "3",
                           "--assume-trivial-action")
    assert len(doc3["scenarios"]) == 3
    for sc in doc3["scenarios"]:
        want = CASE_I_TABLE_C[3] if sc["case_id"] == "C.i" else EQ_TABLE_C[3]
        assert tuple(sc["betti"]) == want.coeffs, sc["case_id"]
    doc2 = _enumerate_json(capsys, "enumerate", "--field", "C", "--m", "2")
    assert len(doc2["scenarios"]) == 2
    assert {sc["case_id"] for sc in doc2["scenarios"]} == {"C.ii", "C.iii"}
    for sc in doc2["scenarios"]:
        assert tuple(sc["betti"]) == EQ_TABLE_C[2].coeffs
    _report(2, "3 complex scenarios at m=3, 2 at m=2 (odd-m family absent), "
               "tables exact")


def test_criterion_3_theorem_hp_reproduction(capsys):
    doc3 = _enumerate_json(capsys, "enumerate", "--field", "H", "--m", "3",
                           "--assume-trivial-action")
    merged = {sc["merged_case_id"] for sc in doc3["scenarios"]}
    assert merged == {"H.i+ii", "H.iii"}
    fams = {ideal["family_id"] for sc in doc3["scenarios"]
            for ideal in sc["ideals"]}
    assert fams == {"thm-hp/I_1", "thm-hp/I_2"}
    for sc in doc3["scenarios"]:
        want = CASE_I_TABLE_H[3] if sc["merged_case_id"] == "H.i+ii" else TABLE_H[3]
        assert tuple(sc["betti"]) == want.coeffs
    doc2 = _enumerate_json(capsys, "enumerate", "--field", "H", "--m", "2")
    assert len(doc2["scenarios"]) == 1
    assert doc2["scenarios"][0]["case_id"] == "H.iii"
    _report(3, "quaternionic scenarios merge to 2 families at m=3, 1 at m=2")


def test_criterion_4_dead_branch_regression(scenarios):
    # (a) transgressing degree-lambda generator at even m dies on Leibniz
    res4 = scenarios("R", 4)
    nad = [p for p in res4.pruned if p.reason == "NotADerivation"]
    assert any(any(str(d) == "d2[a] = t^2" for d in p.decisions) for p in nad)
    # (b) the twisted transgression of b on top of case (i) dies on d after d
    res5 = scenarios("R", 5)
    dsq = [p for p in res5.pruned if p.reason == "DSquareNonzero"]
    assert len(dsq) == 1
    labels = {str(d) for d in dsq[0].decisions}
    assert {"d2[a] = t^2", "d2[b] = t^2*a^3"} <= labels
    # (c) the fully trivial branch survives to a terminal page and fails the
    # free-action vanishing verdict
    collapse = [p for p in res5.pruned
                if p.reason == "survivors-above-fiber-dimension"
                and all(not d.nonzero for d in p.decisions)]
    assert collapse
    _report(4, "even-m Leibniz death, d.d != 0 sub-branch, and all-trivial "
               "collapse all reached and pruned")


def test_criterion_5_presentation_sweep(scenarios):
    t0 = time.monotonic()
    failures = []
    checked = 0
    for field in ("R", "C", "H"):
        for m in range(1, 7):
            recs = sweep_field(field, m, scenarios(field, m).scenarios)
            checked += sum(r.params_checked for r in recs)
            for rec in recs:
                for f in rec.failures:
                    failures.append((rec.family_id, m, f.check,
                                     tuple(sorted(f.params.items()))))
    elapsed = time.monotonic() - t0
    assert elapsed < 120.0
    summary = {}
    for fid, m, check, _ in failures:
        summary[(fid, m, check)] = summary.get((fid, m, check), 0) + 1
    if failures:
        print(f"ACCEPTANCE 5 FAIL: {len(failures)} of {checked} instantiations "
              f"deviate from the matched scenario tables; the stated parameter "
              f"freedom over-approximates (e.g. alpha4=1 with zero betas kills "
              f"the top power of x). Kept red on purpose.")
    assert not failures, (
        f"{len(failures)} of {checked} instantiations deviate from the matched "
        f"scenario tables (the stated parameter freedom over-approximates); "
        f"per family/m/check: {sorted(summary.items())}")
    _report(5, f"{checked} instantiations, all series/nilpotency checks pass, "
               f"{elapsed:.1f}s")


def test_criterion_6_index_sets(scenarios):
    for m in (3, 5, 7):
        scen = scenarios("R", m).scenarios
        assert co_index_set(scen) == {1, 4, m + 2, m + 3, m + 4}
        assert volovikov_set(scen) == {2, 5, m + 3, m + 4, m + 5}
        scen = scenarios("C", m).scenarios
        assert co_index_set(scen) == {2, 4, 2 * m + 4}
        assert volovikov_set(scen) == {3, 5, 2 * m + 5}
        scen = scenarios("H", m).scenarios
        assert co_index_set(scen) == {4}
        assert volovikov_set(scen) == {5}
    _report(6, "co-index and spectral-index sets exact for odd m in {3,5,7}")


def test_criterion_7_local_coefficients():
    # nilpotent twisted stalk: rank 1 at k = 0 and 0 at k > 0
    act = InducedAction.b_to_power_plus_b(FiberPresentation("R", 5))
    for l in twisted_rows(act.fiber):
        prof = local_e2_column(act, l)
        assert (prof.at_zero, prof.at_positive) == (1, 0)
    # identity action: constant columns
    ident = InducedAction.identity(FiberPresentation("R", 5))
    for l in range(10):
        prof = local_e2_column(ident, l)
        assert prof.at_zero == prof.at_positive == ident.dim(l)
    # complex case with lambda*m >= 2n dies on the nonzero square of g(b)
    obs = nontrivial_action_obstruction(
        InducedAction.b_to_power_plus_b(FiberPresentation("C", 4)))
    assert obs.verdict == "action inadmissible"
    assert obs.mechanism == "not-multiplicative" and "a^4" in obs.detail
    _report(7, "twisted columns (1,0), identity columns constant, square "
               "obstruction inadmissible")


def test_criterion_8_property_suites(scenarios, capsys):
    routes = [("R", 5), ("C", 3), ("H", 3), ("R", 4)]
    pages_seen = 0
    for field, m in routes:
        fiber = FiberPresentation(field, m)
        for s in scenarios(field, m).scenarios:
            pages = []
            replay(fiber, s.decisions, collect=pages)
            assert s.betti.is_symmetric
            for prev, nxt in zip(pages, pages[1:]):
                pages_seen += 1
                for (k, l), space in nxt.spaces.items():
                    assert space.dim <= prev.dim(k, l), (s.case_id, k, l)
                d = nxt.history[-1]
                r = d.r
                for (k, l), m1 in d.blocks.items():
                    if k > prev.k_window:
                        continue
                    # d after d vanishes
                    m2 = d.block(k + r, l - r + 1)
                    if m2 is not None:
                        assert not ((m2 @ m1) % 2).any()
                    # t-linearity: blocks repeat one column to the right
                    nxt_block = d.block(k + 1, l)
                    if nxt_block is None:
                        assert not m1.any()
                    else:
                        assert (m1 == nxt_block).all()
                # char-2 square rule on every class of the acting page
                acting = prev if prev.r == r else None
                if acting is None:
                    continue
                for (k, l), space in acting.spaces.items():
                    if k > acting.k_window // 2:
                        continue
                    for idx in range(space.dim):
                        v = space.reps[idx]
                        pk, pl, pv = acting.rep_product(k, l, v, k, l, v)
                        coords = acting.express(pk, pl, pv)
                        if coords is None or not coords.any():
                            continue
                        block = d.block(pk, pl)
                        if block is not None:
                            assert not ((block @ coords) % 2).any()
    # figure-page dumps diff cleanly against the hand-transcribed fixtures
    dumps = [("R", "5", "R.i", "2", "dump_R_m5_case_i_r2.txt"),
             ("R", "5", "R.ii", "5", "dump_R_m5_case_ii_r5.txt"),
             ("R", "5", "R.iii", "4", "dump_R_m5_case_iii_r4.txt"),
             ("R", "5", "R.iv.1", "3", "dump_R_m5_case_iv_r3.txt"),
             ("R", "5", "R.v.1.1", "2", "dump_R_m5_case_v_r2.txt"),
             ("C", "3", "C.i", "3", "dump_C_m3_case_i_r3.txt"),
             ("C", "3", "C.iii", "3", "dump_C_m3_case_iii_r3.txt")]
    for field, m, case, r, fixture in dumps:
        code = main(["dump-page", "--field", field, "--m", m, "--case", case,
                     "--r", r, "--kmax", "4", "--assume-trivial-action"])
        out = capsys.readouterr().out
        assert code == EXIT_OK
        assert out == (FIXTURES / fixture).read_text(), fixture
    _report(8, f"d.d = 0, monotone dims, square rule, t-linearity over "
               f"{pages_seen} page turns; {len(dumps)} figure dumps match")


def test_criterion_9_oracle_equivalence():
    rng = np.random.default_rng(2024)
    rank_checks = kernel_checks = 0
    for _ in range(40):
        rows = int(rng.integers(1, 9))
        cols = int(rng.integers(1, 9))
        mat = rng.integers(0, 2, size=(rows, cols), dtype=np.uint8)
        assert gf2.rank(mat) == oracles.rank_by_enumeration(mat)
        rank_checks += 1
        basis = gf2.kernel_basis(mat)
        enumerated = oracles.kernel_by_enumeration(mat)
        assert len(enumerated) == 1 << len(basis)
        assert all(tuple(v) in enumerated for v in basis)
        kernel_checks += 1
    basis_checks = 0
    presentations = [
        FiberPresentation("R", 5).algebra(),
        FiberPresentation("C", 3).algebra(),
        AlgebraPresentation([("x", 1), ("y", 1)],
                            [parse_poly("x^5", "xy"),
                             parse_poly("y^4+x*y^3+x^2*y^2", "xy")], 12),
        AlgebraPresentation([("x", 1), ("y", 2)],
                            [parse_poly("x^7", "xy"),
                             parse_poly("y^3+x^2*y^2", "xy"),
                             parse_poly("x^4*y", "xy")], 12),
    ]
    for pres in presentations:
        for d in range(13):
            if d > pres.degree_cap:
                continue
            assert len(pres.monomial_basis(d)) == oracles.graded_dimension(pres, d)
            basis_checks += 1
    _report(9, f"{rank_checks} rank + {kernel_checks} kernel enumerations and "
               f"{basis_checks} graded-dimension checks agree 100%")
