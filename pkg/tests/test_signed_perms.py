import itertools

import pytest
from hypothesis import given, strategies as st

import brute
from pircons.signed_perms import (
    FullPermutation,
    ParityViolation,
    SignedPermutation,
    SizeMismatch,
    bruhat_leq,
    bruhat_leq_matrix,
    build_bruhat_poset,
    canonical_family,
    conjugate_by_longest,
    generate_family,
    index_map,
    longest_element,
    minimal_fpf_involution,
    parse_element,
    permutation_order,
    positions,
    stats,
    stats_csv,
)


def signed_perm_strategy(max_n=4, pair=False):
    @st.composite
    def strat(draw):
        n = draw(st.integers(min_value=1, max_value=max_n))

        def one():
            perm = draw(st.permutations(list(range(1, n + 1))))
            signs = draw(
                st.lists(st.sampled_from((1, -1)), min_size=n, max_size=n)
            )
            return SignedPermutation.from_window(
                tuple(s * v for s, v in zip(signs, perm))
            )

        return (one(), one()) if pair else one()

    return strat()


class TestBasics:
    def test_positions(self):
        assert positions(3) == (-3, -2, -1, 1, 2, 3)

    def test_window_round_trip(self):
        w = (2, -1, 3)
        p = SignedPermutation.from_window(w)
        assert p.window == w
        assert p.window_str() == "2,-1,3"
        assert SignedPermutation.from_window_str("2,-1,3") == p

    def test_signed_symmetry(self):
        p = SignedPermutation.from_window((2, -1, 3))
        for i in positions(3):
            assert p(-i) == -p(i)

    def test_parse_element(self):
        p = parse_element("-2,-1")
        assert isinstance(p, SignedPermutation)
        assert p.window == (-2, -1)
        q = parse_element("-1, -2, 2, 1")  # full line for the 2-letter swap
        assert q.n == 2 and q(1) == 2
        with pytest.raises(ValueError):
            parse_element("1,2,3,4,5,x")

    def test_compose_inverse(self):
        p = SignedPermutation.from_window((2, -1, 3))
        q = p.inverse()
        assert p.compose(q).is_identity()
        assert q.compose(p).is_identity()

    def test_size_mismatch(self):
        p = SignedPermutation.from_window((1, 2))
        q = SignedPermutation.from_window((1, 2, 3))
        with pytest.raises(SizeMismatch):
            p.compose(q)

    def test_line_round_trip(self):
        p = SignedPermutation.from_window((-2, 1))
        assert FullPermutation.from_line_str(p.line_str()) == p

    def test_predicates(self):
        w0 = longest_element(3)
        assert w0.is_involution() and w0.is_fpf() and w0.is_signed()
        hat0 = minimal_fpf_involution(3)
        assert hat0.is_involution() and hat0.is_fpf()
        assert SignedPermutation.from_window((1, 2)).is_identity()


class TestSpecialElements:
    def test_longest_element(self):
        assert longest_element(2).window == (-1, -2)
        assert longest_element(3).window == (-1, -2, -3)

    def test_minimal_fpf(self):
        assert minimal_fpf_involution(2).window == (2, 1)
        assert minimal_fpf_involution(3).window == (-1, 3, 2)
        assert minimal_fpf_involution(4).window == (2, 1, 4, 3)

    def test_minimal_fpf_is_minimum(self):
        # unique Bruhat-minimum of its family
        for n in [2, 3, 4]:
            fam = generate_family("fpf-signed-involutions", n)
            hat0 = minimal_fpf_involution(n)
            assert sum(1 for p in fam if bruhat_leq(hat0, p)) == len(fam)

    def test_conjugate_by_longest(self):
        p = SignedPermutation.from_window((2, -1, 3))
        q = conjugate_by_longest(p)
        w0 = longest_element(3)
        direct = w0.compose(p).compose(w0)
        assert q == direct

    def test_conjugation_is_poset_automorphism(self):
        for family, n in [("fpf-signed-involutions", 3), ("fpf-involutions", 2)]:
            fam = generate_family(family, n)
            P = build_bruhat_poset(fam)
            tau = index_map(fam, conjugate_by_longest)
            assert P.is_automorphism(tau)
            assert permutation_order(tau) in (1, 2)


class TestDominance:
    @given(signed_perm_strategy(max_n=3, pair=True))
    def test_bruhat_leq_matches_loops(self, pair):
        a, b = pair
        assert bruhat_leq(a, b) == brute.dominance_leq(a, b)
        assert bruhat_leq(a, a) and bruhat_leq(b, b)

    def test_matrix_matches_pairwise(self):
        fam = generate_family("fpf-signed-involutions", 3)
        mat = bruhat_leq_matrix(fam)
        for i, a in enumerate(fam):
            for j, b in enumerate(fam):
                assert bool(mat[i, j]) == bruhat_leq(a, b)

    def test_order_axioms(self):
        fam = generate_family("signed-involutions", 2)
        for a in fam:
            assert bruhat_leq(a, a)
        for a, b in itertools.permutations(fam, 2):
            if bruhat_leq(a, b) and bruhat_leq(b, a):
                assert a == b
        for a, b, c in itertools.product(fam, repeat=3):
            if bruhat_leq(a, b) and bruhat_leq(b, c):
                assert bruhat_leq(a, c)


class TestFamilies:
    def test_aliases(self):
        assert canonical_family("fpf-signed-inv") == "fpf-signed-involutions"
        assert canonical_family("sym-inv") == "symmetric-involutions"
        with pytest.raises(ValueError):
            canonical_family("nonsense")

    def test_signed_involutions_vs_brute(self):
        for n in [1, 2, 3]:
            fam = generate_family("signed-involutions", n)
            expected = sorted(
                w for w in brute.signed_windows(n) if brute.is_involution_window(w)
            )
            assert sorted(p.window for p in fam) == expected

    def test_fpf_signed_vs_brute(self):
        for n in [1, 2, 3]:
            fam = generate_family("fpf-signed-involutions", n)
            expected = sorted(
                w
                for w in brute.signed_windows(n)
                if brute.is_involution_window(w) and brute.is_fpf_window(w)
            )
            assert sorted(p.window for p in fam) == expected

    def test_full_involutions_vs_brute(self):
        for n in [1, 2]:
            fam = generate_family("symmetric-involutions", n)
            expected = sorted(
                line for line in brute.full_lines(n) if brute.is_involution_line(line)
            )
            assert sorted(p.values for p in fam) == expected
            fpf = generate_family("fpf-involutions", n)
            expected_fpf = sorted(
                line
                for line in brute.full_lines(n)
                if brute.is_involution_line(line) and brute.is_fpf_line(line)
            )
            assert sorted(p.values for p in fpf) == expected_fpf

    def test_counts(self):
        # cross-checked against the pairing recurrences:
        # fpf signed  a(n) = a(n-1) + 2(n-1) a(n-2)
        # signed      b(n) = 2 b(n-1) + 2(n-1) b(n-2)
        fpf_counts = [len(generate_family("fpf-signed-involutions", n)) for n in range(1, 7)]
        assert fpf_counts == [1, 3, 7, 25, 81, 331]
        a = [1, 1, 3]
        for n in range(3, 7):
            a.append(a[-1] + 2 * (n - 1) * a[-2])
        assert fpf_counts == a[1:]

        inv_counts = [len(generate_family("signed-involutions", n)) for n in range(1, 5)]
        assert inv_counts == [2, 6, 20, 76]
        b = [1, 2]
        for n in range(2, 5):
            b.append(2 * b[-1] + 2 * (n - 1) * b[-2])
        assert inv_counts == b[1:]

        assert [
            len(generate_family("fpf-involutions", n)) for n in range(1, 5)
        ] == [1, 3, 15, 105]
        assert [
            len(generate_family("symmetric-involutions", n)) for n in range(1, 4)
        ] == [2, 10, 76]

    def test_deterministic_order(self):
        fam = generate_family("fpf-signed-involutions", 3)
        assert [p.window for p in fam] == sorted(p.window for p in fam)


class TestStats:
    def test_frozen_values(self):
        # (inv, neg, length, dna, rank)
        w0_2 = stats(longest_element(2))
        assert (w0_2.inv, w0_2.neg, w0_2.length, w0_2.dna, w0_2.rank) == (
            6,
            2,
            4,
            2,
            3,
        )
        hat0_2 = stats(minimal_fpf_involution(2))
        assert (hat0_2.inv, hat0_2.neg, hat0_2.length, hat0_2.dna, hat0_2.rank) == (
            2,
            0,
            1,
            1,
            1,
        )
        hat0_3 = stats(minimal_fpf_involution(3))
        assert (hat0_3.length, hat0_3.dna, hat0_3.rank) == (2, 2, 2)

    def test_inversions_match_loops(self):
        for p in generate_family("signed-involutions", 3):
            assert stats(p).inv == brute.inversions_by_loops(p)

    def test_parity_raise(self):
        # a non involution whose length and trace statistic disagree in parity
        with pytest.raises(ParityViolation):
            stats(SignedPermutation.from_window((2, -1)))

    def test_rank_formulas(self):
        for n in range(2, 6):
            assert stats(longest_element(n)).rank == (n * n + n) // 2
            expected = n // 2 if n % 2 == 0 else (n + 1) // 2
            assert stats(minimal_fpf_involution(n)).rank == expected

    @given(signed_perm_strategy(max_n=4))
    def test_parity_invariants(self, p):
        if not p.is_involution():
            return
        s = stats(p)
        assert (s.inv + s.neg) % 2 == 0
        assert (s.length + s.dna) % 2 == 0
        assert s.length == (s.inv + s.neg) // 2
        assert s.rank == (s.length + s.dna) // 2


class TestPosets:
    def test_f2_shape(self):
        fam = generate_family("fpf-signed-involutions", 2)
        P = build_bruhat_poset(fam)
        assert P.elements == ("-2,-1", "-1,-2", "2,1")
        assert P.covers == ((0, 1), (2, 0))
        assert P.top == 1 and P.bottom == 2

    def test_dual_flips(self):
        fam = generate_family("fpf-signed-involutions", 2)
        P = build_bruhat_poset(fam)
        D = build_bruhat_poset(fam, "dual")
        assert D.top == P.bottom and D.bottom == P.top
        assert sorted(D.covers) == sorted((b, a) for (a, b) in P.covers)

    def test_f3_graded_by_rank(self):
        fam = generate_family("fpf-signed-involutions", 3)
        P = build_bruhat_poset(fam)
        assert P.is_graded()
        base = stats(fam[P.bottom]).rank
        for i, p in enumerate(fam):
            assert P.heights()[i] == stats(p).rank - base

    def test_index_map_round_trip(self):
        fam = generate_family("fpf-involutions", 2)
        tau = index_map(fam, conjugate_by_longest)
        for i, p in enumerate(fam):
            assert fam[tau[i]] == conjugate_by_longest(p)


def test_stats_csv_snapshot():
    table = stats_csv("fpf-signed-involutions", [2])
    lines = table.strip().splitlines()
    assert lines[0] == "n,window,inv,neg,len,dna,rho"
    assert lines[1] == '2,"-2,-1",4,2,3,1,2'
    assert len(lines) == 4
