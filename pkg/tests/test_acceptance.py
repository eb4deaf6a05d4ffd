"""End-to-end acceptance checks, one test per shipped guarantee.

Every test prints a single PASS/FAIL line through capsys.disabled() so a
plain ``pytest tests/test_acceptance.py -q`` doubles as a release
checklist.  All expected counts below were frozen from independent
enumeration (see brute.py and the unit-test modules); none are guessed.

Criterion 5 has a documented contingency: the transplanted interval
labelling is only expected to verify at n=2, and for larger n a failure
is acceptable provided a minimal counterexample certificate is written
to out/acceptance/.  That path prints DOCUMENTED-FAIL in the summary
line but does not fail the build.
"""

import json
import time
from contextlib import contextmanager
from functools import lru_cache
from pathlib import Path

import brute
from pircons.cli import main
from pircons.fixed_points import induced_spm, verify_fixed_pircon
from pircons.matchings import (
    check_lifting,
    check_spm,
    classify,
    enumerate_spms,
    matching_from_json,
    search_spm,
)
from pircons.poset import build_poset
from pircons.shellability import EdgeLabelling, candidate_labelling, verify_el_poset
from pircons.signed_perms import (
    build_bruhat_poset,
    conjugate_by_longest,
    generate_family,
    index_map,
    longest_element,
    minimal_fpf_involution,
    stats,
)
from pircons.topology import (
    ball_sphere_signature,
    euler_characteristic,
    expected_dimension,
    homology_z2,
    order_complex,
)

CERT_DIR = Path(__file__).resolve().parent.parent / "out" / "acceptance"

FAMILY_SIZES = {
    "signed-involutions": {2: 6, 3: 20, 4: 76, 5: 312},
    "fpf-signed-involutions": {2: 3, 3: 7, 4: 25, 5: 81},
}


@contextmanager
def criterion(capsys, num):
    start = time.perf_counter()
    note = {"detail": ""}
    try:
        yield note
    except BaseException:
        with capsys.disabled():
            print(f"\n[acceptance] criterion {num}: FAIL -- {note['detail'] or 'assertion failed'}")
        raise
    with capsys.disabled():
        print(
            f"\n[acceptance] criterion {num}: PASS -- "
            f"{note['detail']} [{time.perf_counter() - start:.1f}s]"
        )


def every_poset_with_top(max_inner=5):
    """Each labeled poset on <= max_inner points, with a fresh top appended.

    The insertion enumerator emits one representative per labeled poset,
    so together with the forced top this sweeps every isomorphism class
    of bounded-above posets on <= max_inner + 1 elements.
    """
    for k in range(max_inner + 1):
        for lt in brute.insertion_posets(k):
            pairs = brute.bitmask_pairs(lt) + [(i, k) for i in range(k)]
            yield build_poset([str(i) for i in range(k + 1)], pairs)


@lru_cache(maxsize=1)
def transport_sweep():
    """Run the induced-matching transport over the exhaustive poset list.

    Returns the counters plus every (poset, matching) pair encountered so
    the lifting criterion can reuse the exact same population.
    """
    counts = {"posets": 0, "spms": 0, "transports": 0}
    pool = []
    for P in every_poset_with_top():
        found = list(enumerate_spms(P, allow_fixed=True))
        autos = P.automorphisms()
        counts["posets"] += 1
        counts["spms"] += len(found)
        for m in found:
            pool.append((P, m))
            for tau in autos:
                out = induced_spm(P, m, tau, check_claims=True)
                verdict = check_spm(out.subposet, out.matching)
                assert verdict.valid, (P.elements, m, tau, verdict)
                counts["transports"] += 1
    return counts, tuple(pool)


def dual_class_setup(n):
    fam = generate_family("fpf-involutions", n)
    P = build_bruhat_poset(fam, "dual")
    return P, index_map(fam, conjugate_by_longest)


def test_criterion_01_matching_transport(capsys):
    """Induced matchings survive restriction to automorphism-fixed points."""
    with criterion(capsys, 1) as note:
        t0 = time.perf_counter()
        counts, _ = transport_sweep()
        assert counts == {"posets": 4474, "spms": 3895, "transports": 6177}

        ideal_counts = {}
        for n in [2, 3, 4]:
            P, tau = dual_class_setup(n)
            report = verify_fixed_pircon(P, tau, check_claims=True)
            assert report.ok
            assert all(
                e.spm_found and e.induced_valid and e.claims_checked
                for e in report.entries
            )
            ideal_counts[n] = len(report.entries)
        assert ideal_counts == {2: 2, 3: 6, 4: 24}

        note["detail"] = (
            f"{counts['posets']} posets, {counts['spms']} matchings, "
            f"{counts['transports']} transports; stable ideals {ideal_counts}"
        )
        assert time.perf_counter() - t0 < 300


def test_criterion_02_pircon_classification(capsys):
    """Dual fixed-point-free signed involutions form a pircon for n=2..4."""
    with criterion(capsys, 2) as note:
        t0 = time.perf_counter()
        # confirm the n=4 cardinality by raw window filtering before
        # trusting the generator
        brute_count = sum(
            1
            for w in brute.signed_windows(4)
            if brute.is_involution_window(w) and brute.is_fpf_window(w)
        )
        assert brute_count == 25

        sizes = {}
        for n in [2, 3, 4]:
            fam = generate_family("fpf-signed-involutions", n)
            sizes[n] = len(fam)
            report = classify(build_bruhat_poset(fam, "dual"))
            assert report.pircon is True
            assert report.zircon is False  # fixed points are genuinely needed
        assert sizes == {2: 3, 3: 7, 4: 25}

        note["detail"] = f"pircon at n=2,3,4; |family| = {sizes}, n=4 confirmed by enumeration"
        assert time.perf_counter() - t0 < 120


def test_criterion_03_rank_formulas(capsys):
    """Closed forms for the extreme ranks plus parity of the statistics."""
    with criterion(capsys, 3) as note:
        for n in range(2, 6):
            top = stats(longest_element(n))
            assert top.rank == n * (n + 1) // 2
            bottom = stats(minimal_fpf_involution(n))
            assert bottom.rank == (n // 2 if n % 2 == 0 else (n + 1) // 2)

        checked = 0
        for family, sizes in FAMILY_SIZES.items():
            for n, expected in sizes.items():
                elements = generate_family(family, n)
                assert len(elements) == expected
                for w in elements:
                    st = stats(w)
                    assert (st.inv + st.neg) % 2 == 0
                    assert (st.length + st.dna) % 2 == 0
                    assert st.rank * 2 == st.length + st.dna
                    checked += 1
        note["detail"] = f"rank formulas n=2..5; parity on {checked} elements"


def test_criterion_04_gradedness_and_closure(capsys):
    """Intervals are graded by rank; descending chains stay inside the family."""
    with criterion(capsys, 4) as note:
        chain_counts = {}
        for n in [2, 3]:
            fam = generate_family("fpf-signed-involutions", n)
            P = build_bruhat_poset(fam, "bruhat")
            rho = [stats(w).rank for w in fam]
            chains = 0
            for x in range(P.n):
                for y in range(P.n):
                    if x == y or not P.leq(x, y):
                        continue
                    expected_len = rho[y] - rho[x] + 1
                    for ch in P.interval(x, y).maximal_chains():
                        assert len(ch) == expected_len, (n, fam[x], fam[y])
                        chains += 1
            chain_counts[n] = chains
        assert chain_counts == {2: 3, 3: 25}

        from pircons.shellability import fpf_closure_check

        closure_pairs = {}
        for n in [2, 3]:
            rep = fpf_closure_check(n)
            assert rep.closed
            assert rep.escaped_pairs == ()
            closure_pairs[n] = rep.pairs_checked
        assert closure_pairs == {2: 3, 3: 18}

        note["detail"] = (
            f"maximal chains graded ({chain_counts}); "
            f"closure on {closure_pairs} endpoint pairs, zero escapes"
        )


# Tier 1 fixtures: the canonical good and bad labellings of the diamond.
GOOD_DIAMOND = {(0, 1): (0, 1), (0, 2): (0, 2), (1, 3): (0, 2), (2, 3): (0, 1)}
DOUBLE_INCREASING = {(0, 1): (1, 2), (0, 2): (1, 3), (1, 3): (2, 3), (2, 3): (2, 4)}


def write_certificate(n, P, report):
    CERT_DIR.mkdir(parents=True, exist_ok=True)
    worst = report.minimal_counterexample()
    payload = report.to_json(P)
    payload["minimal_counterexample"] = {
        "x": P.elements[worst.x],
        "y": P.elements[worst.y],
        "reason": worst.reason,
        "interval_size": worst.interval_size,
    }
    path = CERT_DIR / f"el-certificate-n{n}.json"
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return path, worst


def test_criterion_05_el_two_tiers(capsys):
    """Labelling verifier: exact fixtures, then the transplanted candidate."""
    with criterion(capsys, 5) as note:
        t0 = time.perf_counter()
        # tier 1: chains verify under the natural labelling
        chain = build_poset(["a", "b", "c", "d"], [(0, 1), (1, 2), (2, 3)])
        natural = EdgeLabelling({(i, i + 1): (i, i + 1) for i in range(3)})
        assert verify_el_poset(chain, natural).passed

        diamond = build_poset(["bot", "x", "y", "top"], [(0, 1), (0, 2), (1, 3), (2, 3)])
        bad = verify_el_poset(diamond, EdgeLabelling(DOUBLE_INCREASING))
        assert not bad.passed
        worst = bad.minimal_counterexample()
        assert (worst.x, worst.y) == (0, 3)
        assert worst.reason == "increasing-chain-count=2"
        assert verify_el_poset(diamond, EdgeLabelling(GOOD_DIAMOND)).passed

        # tier 2: reversed candidate on the signed family
        P2, lab2, _ = candidate_labelling(2)
        rep2 = verify_el_poset(P2, lab2)
        assert rep2.passed and rep2.intervals_checked == 3

        tier2 = ["n=2 pass"]
        for n, budget in [(3, 300.0), (4, 600.0)]:
            Pn, labn, _ = candidate_labelling(n)
            repn = verify_el_poset(Pn, labn)
            if repn.passed:
                tier2.append(f"n={n} pass")
                continue
            path, worst = write_certificate(n, Pn, repn)
            assert worst.reason.startswith("increasing-chain")
            if n == 3:
                # frozen minimal counterexample, re-checked by hand against
                # both label scans of the offending interval
                assert (Pn.elements[worst.x], Pn.elements[worst.y]) == ("-1,3,2", "-3,-2,-1")
                assert worst.reason == "increasing-chain-count=0"
                assert len(repn.failures) == 6
            tier2.append(f"n={n} DOCUMENTED-FAIL ({path.relative_to(path.parents[2])})")
            assert time.perf_counter() - t0 < budget

        note["detail"] = "tier1 fixtures exact; tier2 " + ", ".join(tier2)


def test_criterion_06_homology_ball_signature(capsys):
    """Order complexes of the proper parts look like balls over GF(2)."""
    with criterion(capsys, 6) as note:
        t0 = time.perf_counter()
        dims = {}
        for n in [2, 3, 4]:
            fam = generate_family("fpf-signed-involutions", n)
            P = build_bruhat_poset(fam, "bruhat")
            K = order_complex(P.proper_part())
            sig = homology_z2(K)
            assert sig.dim == expected_dimension(n)
            assert all(b == 0 for b in sig.betti)
            assert euler_characteristic(K) == 1
            assert ball_sphere_signature(K, expected_dimension(n)) == "ball-consistent"
            dims[n] = sig.dim
        assert dims == {2: 0, 3: 2, 4: 6}
        note["detail"] = f"reduced Betti all zero, Euler 1, dims {dims}"
        assert time.perf_counter() - t0 < 300


def test_criterion_07_lifting_everywhere(capsys):
    """Every matching produced anywhere in the run satisfies lifting."""
    with criterion(capsys, 7) as note:
        counts, pool = transport_sweep()
        checked = 0
        for P, m in pool:
            verdict = check_lifting(P, m)
            assert verdict.valid, (P.elements, m, verdict)
            checked += 1
        assert checked == counts["spms"] == 3895

        family_checked = 0
        for n in [2, 3, 4]:
            fam = generate_family("fpf-signed-involutions", n)
            P = build_bruhat_poset(fam, "dual")
            for cert in classify(P).ideals:
                ideal = P.principal_ideal(cert.top)
                m = matching_from_json(ideal, {"matching": cert.spm})
                assert check_lifting(ideal, m).valid
                family_checked += 1
        for n in [2, 3]:
            P, tau = dual_class_setup(n)
            for top in range(P.n):
                ideal = P.principal_ideal(top)
                if ideal.n == 1:
                    continue
                m = search_spm(ideal)
                if m is not None:
                    assert check_lifting(ideal, m).valid
                    family_checked += 1

        note["detail"] = f"{checked} searched matchings + {family_checked} family ideal matchings"


def test_criterion_08_determinism(capsys, tmp_path):
    """Parallel degree never changes a byte of any report."""
    with criterion(capsys, 8) as note:
        commands = [
            ["gen", "--n", "3", "--order", "dual", "--format", "json,dot,csv"],
            ["stats", "--n", "2", "--n-max", "4"],
            ["pircon", "--n", "3", "--order", "dual"],
            ["fixed-spm", "--n", "3"],
            ["el-verify", "--n", "3"],
            ["homology", "--n", "3"],
        ]
        outs = {}
        for jobs, sub in [(1, "a"), (8, "b")]:
            out = tmp_path / sub
            for argv in commands:
                code = main([*argv, "--jobs", str(jobs), "--out", str(out)])
                assert code in (0, 1)  # el-verify reports its documented failure
            outs[jobs] = out

        files_1 = sorted(p.relative_to(outs[1]) for p in outs[1].rglob("*") if p.is_file())
        files_8 = sorted(p.relative_to(outs[8]) for p in outs[8].rglob("*") if p.is_file())
        assert files_1 == files_8 and len(files_1) >= 12
        diffs = [
            str(rel)
            for rel in files_1
            if (outs[1] / rel).read_bytes() != (outs[8] / rel).read_bytes()
        ]
        assert diffs == []
        note["detail"] = f"{len(files_1)} report files byte-identical across --jobs 1/8"
