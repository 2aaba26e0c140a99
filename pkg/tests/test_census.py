import math

import numpy as np
import pytest

from dlcensus.census import (
    CountMatrix,
    Equation,
    build_ha_buckets,
    census_all,
    completion_sum,
    completions,
    count_fp,
    count_ha,
    count_tc,
)
from dlcensus.errors import InvalidInputError
from dlcensus.numtheory import is_prime, mod_pow
from dlcensus.oracle import oracle_fp, oracle_ha, oracle_tc
from dlcensus.residue_tables import CLASSES, build_tables, class_counts

ANY, PR, RP, RPPR = CLASSES

PRIMES_TO_100 = [p for p in range(2, 101) if is_prime(p)]


def census_for(p, workers=1):
    t = build_tables(p)
    b = build_ha_buckets(t)
    fp = count_fp(t, workers=workers)
    ha = count_ha(b, t, workers=workers)
    tc = count_tc(b, t, fp, workers=workers)
    return t, b, fp, ha, tc


class TestCountFp:
    def test_p5(self):
        fp = count_fp(build_tables(5))
        assert fp.entry("total", ANY, ANY) == 2  # (1,1) and (2,3)
        assert fp.entry("total", ANY, RP) == 2

    def test_p7(self):
        fp = count_fp(build_tables(7))
        assert fp.entry("total", ANY, ANY) == 6
        assert fp.entry("total", ANY, PR) == 1 == fp.entry("total", PR, PR)

    def test_p3(self):
        fp = count_fp(build_tables(3))
        assert fp.entry("total", ANY, ANY) == 1  # only (1,1)

    def test_no_split(self):
        fp = count_fp(build_tables(13))
        assert not fp.trivial.any()
        assert np.array_equal(fp.nontrivial, fp.total)


class TestHaBuckets:
    def test_p7_groups(self):
        b = build_ha_buckets(build_tables(7))
        groups = sorted(sorted(int(x) for x in b.bucket_members(i))
                        for i in range(b.num_buckets))
        assert groups == [[1, 6], [2, 4], [3], [5]]

    def test_p5_groups(self):
        b = build_ha_buckets(build_tables(5))
        groups = sorted(sorted(int(x) for x in b.bucket_members(i))
                        for i in range(b.num_buckets))
        assert groups == [[1, 4], [2], [3]]

    def test_p2_single_bucket(self):
        b = build_ha_buckets(build_tables(2))
        assert b.num_buckets == 1
        assert list(b.bucket_members(0)) == [1]

    @pytest.mark.parametrize("p", [p for p in range(2, 32) if is_prime(p)])
    def test_key_characterizes_solutions(self, p):
        b = build_ha_buckets(build_tables(p))
        for h in range(1, p):
            for a in range(1, p):
                same_key = int(b.key[h]) == int(b.key[a])
                assert same_key == (mod_pow(h, h, p) == mod_pow(a, a, p)), (h, a)
        assert int(b.sizes.sum()) == p - 1

    def test_per_bucket_class_counts(self):
        t = build_tables(7)
        b = build_ha_buckets(t)
        for i in range(b.num_buckets):
            members = [int(x) for x in b.bucket_members(i)]
            vec = b.class_counts_for_bucket(i)
            assert vec[0] == len(members)
            assert vec[1] == sum(t.is_pr(x) for x in members)
            assert vec[2] == sum(t.is_rp(x) for x in members)


class TestCountHa:
    def test_p7(self):
        _, _, _, ha, _ = census_for(7)
        assert ha.entry("nontrivial", ANY, ANY) == 4  # (1,6),(6,1),(2,4),(4,2)
        assert ha.entry("trivial", ANY, ANY) == 6

    def test_p2(self):
        _, _, _, ha, _ = census_for(2)
        assert ha.entry("trivial", ANY, ANY) == 1
        assert ha.entry("nontrivial", ANY, ANY) == 0

    def test_trivial_part_is_class_intersections(self):
        for p in (5, 13, 31):
            t, _, _, ha, _ = census_for(p)
            counts = class_counts(t)
            for i, r in enumerate(CLASSES):
                for j, c in enumerate(CLASSES):
                    assert ha.trivial[i, j] == counts.intersection(r, c)

    def test_rejects_mismatched_tables(self):
        b = build_ha_buckets(build_tables(7))
        with pytest.raises(InvalidInputError):
            count_ha(b, build_tables(11))


class TestCompletions:
    def test_p7_examples(self):
        t = build_tables(7)
        assert completions(2, 4, t) == [2, 5]  # gcd(2,4,6)=2, two completions
        assert completions(1, 6, t) == [6]
        assert completions(3, 5, t) == []  # 3^3=6, 5^5=3: different keys

    @pytest.mark.parametrize("p", [p for p in range(2, 32) if is_prime(p)])
    def test_matches_brute_force(self, p):
        t = build_tables(p)
        for h in range(1, p):
            for a in range(1, p):
                expected = [g for g in range(1, p)
                            if mod_pow(g, h, p) == a and mod_pow(g, a, p) == h]
                assert completions(h, a, t) == expected, (p, h, a)

    def test_count_is_gcd_when_solvable(self):
        t = build_tables(31)
        n = 30
        for h in range(1, 31):
            for a in range(1, 31):
                found = completions(h, a, t)
                if found:
                    assert len(found) == math.gcd(math.gcd(h, a), n)

    def test_rejects_out_of_range(self):
        with pytest.raises(InvalidInputError):
            completions(0, 3, build_tables(7))


class TestCountTc:
    def test_p7(self):
        _, _, fp, _, tc = census_for(7)
        assert tc.entry("nontrivial", ANY, ANY) == 6
        assert np.array_equal(tc.trivial, fp.total)

    def test_p5(self):
        _, _, _, _, tc = census_for(5)
        assert tc.entry("nontrivial", ANY, ANY) == 2  # (4,1) and (4,4)
        assert tc.entry("trivial", ANY, ANY) == 2

    def test_p3(self):
        # nontrivial solutions: (2,1) with a=2 and (2,2) with a=1
        _, _, _, _, tc = census_for(3)
        assert tc.entry("trivial", ANY, ANY) == 1
        assert tc.entry("nontrivial", ANY, ANY) == 2

    def test_rejects_foreign_fp(self):
        t = build_tables(7)
        b = build_ha_buckets(t)
        with pytest.raises(InvalidInputError):
            count_tc(b, t, count_fp(build_tables(11)))

    def test_ord_row_present_only_for_tc(self):
        _, _, fp, ha, tc = census_for(13)
        assert tc.ord_trivial is not None
        assert fp.ord_trivial is None and ha.ord_trivial is None
        with pytest.raises(InvalidInputError):
            fp.ord_entry("total", ANY)


class TestOracleEquivalence:
    @pytest.mark.parametrize("p", PRIMES_TO_100)
    def test_all_equations(self, p):
        _, _, fp, ha, tc = census_for(p)
        assert fp == oracle_fp(p)
        assert ha == oracle_ha(p)
        assert tc == oracle_tc(p)


class TestStructuralInvariants:
    @pytest.mark.parametrize("p", PRIMES_TO_100)
    def test_counts_are_consistent(self, p):
        t, b, fp, ha, tc = census_for(p)
        phi = class_counts(t).count(PR)
        # exact equality of the census with phi(p-1) for unconstrained g, h RP
        assert fp.entry("total", ANY, RP) == phi
        for m in (fp, ha, tc):
            assert np.array_equal(m.total, m.trivial + m.nontrivial)
            # monotonicity: adding a constraint never increases a count
            for part in ("trivial", "nontrivial", "total"):
                grid = m.part(part)
                for i, j in ((1, 0), (2, 0), (3, 1), (3, 2)):
                    assert (grid[i, :] <= grid[j, :]).all()
                    assert (grid[:, i] <= grid[:, j]).all()
        for part in ("trivial", "nontrivial", "total"):
            assert np.array_equal(ha.part(part), ha.part(part).T)

    @pytest.mark.parametrize("p", [p for p in range(2, 62) if is_prime(p)])
    def test_completion_sum_law(self, p):
        t, b, fp, ha, tc = census_for(p)
        total, gcd1_single = completion_sum(b, t)
        assert total == tc.entry("nontrivial", ANY, ANY)
        assert gcd1_single

    @pytest.mark.parametrize("p", [p for p in range(2, 62) if is_prime(p)])
    def test_tc_ha_correspondences(self, p):
        _, _, _, ha, tc = census_for(p)
        assert tc.entry("nontrivial", ANY, RP) == ha.entry("nontrivial", ANY, RP)
        assert tc.entry("nontrivial", PR, RP) == ha.entry("nontrivial", PR, RP)
        assert tc.entry("nontrivial", PR, PR) == ha.entry("nontrivial", RP, PR)
        for col in CLASSES:
            assert tc.ord_entry("nontrivial", col) == ha.entry("nontrivial", RP, col)
        rppr = tc.entry("nontrivial", PR, RPPR)
        for row in (ANY, PR, RP):
            assert ha.entry("nontrivial", row, RPPR) == rppr
        for col in CLASSES:
            assert ha.entry("nontrivial", RPPR, col) == rppr


class TestCensusAll:
    def test_worker_counts_agree(self):
        runs = {w: census_all(101, workers=w) for w in (1, 2, 5)}
        for eq_index in range(3):
            assert runs[1][eq_index] == runs[2][eq_index] == runs[5][eq_index]

    def test_rejects_bad_input(self):
        with pytest.raises(InvalidInputError):
            census_all(10)
        with pytest.raises(InvalidInputError):
            census_all(7, workers=0)

    def test_equations_labelled(self):
        fp, ha, tc = census_all(5)
        assert (fp.equation, ha.equation, tc.equation) == (Equation.FP, Equation.HA, Equation.TC)
        assert (fp.row_var, ha.row_var, tc.row_var) == ("g", "a", "g")


class TestCountMatrixPayload:
    def test_payload_round_structure(self):
        _, _, fp, _, tc = census_for(7)
        payload = tc.to_payload()
        assert payload["parts"]["nontrivial"]["ANY"]["ANY"] == 6
        assert payload["ord_row"]["trivial"]["ANY"] == 2
        assert fp.to_payload()["ord_row"] is None

    def test_entry_rejects_unknown_part(self):
        _, _, fp, _, _ = census_for(5)
        with pytest.raises(InvalidInputError):
            fp.entry("bogus", ANY, ANY)
