from fractions import Fraction

import pytest

from reebsys import analysis as an
from reebsys import potentials as pot
from reebsys.potentials import polynomial_potential

F = Fraction


class TestLemma51:
    def test_known_good(self):
        f = polynomial_potential([1, 0, F(1, 4)], 0, 1)
        rep = an.verify_lemma_5_1(f)
        assert rep.hypothesis_ok and rep.conclusion_ok
        assert rep.extremal_margin > 0

    def test_hypothesis_negative_f(self):
        f = polynomial_potential([F(-1, 10), 0, 1], 0, 1)
        rep = an.verify_lemma_5_1(f)
        assert not rep.hypothesis_ok
        assert rep.conclusion_ok is None

    def test_hypothesis_tau_nonpositive(self):
        f = polynomial_potential([0, 0, 1], 0, 1)
        rep = an.verify_lemma_5_1(f)
        assert not rep.hypothesis_ok

    def test_wrong_domain_rejected(self):
        with pytest.raises(ValueError):
            an.verify_lemma_5_1(polynomial_potential([1], 0, 2))

    def test_generated_instances(self):
        for seed in range(30):
            f = an.generate_admissible(seed, "lemma-5.1")
            rep = an.verify_lemma_5_1(f)
            assert rep.hypothesis_ok
            assert rep.conclusion_ok, seed


class TestLemma52:
    def test_generated_triple(self):
        f, a, b = an.generate_lemma_5_2_instance(0)
        assert 0 < a < F(1, 20)
        rep = an.verify_lemma_5_2(f, a, b)
        assert rep.hypothesis_ok
        assert rep.conclusion_ok
        assert rep.extremal_margin > 0

    def test_a_out_of_range(self):
        f, a, b = an.generate_lemma_5_2_instance(1)
        rep = an.verify_lemma_5_2(f, F(1, 10), b)
        assert not rep.hypothesis_ok
        assert any(k == "a-range" for k, _ in rep.hypothesis_witnesses)

    def test_far_from_linear_fails_hypothesis(self):
        f, a, b = an.generate_lemma_5_2_instance(2)
        rep = an.verify_lemma_5_2(f, a, b + 1)  # wrong slope reference
        assert not rep.hypothesis_ok

    def test_many_seeds(self):
        for seed in range(20):
            f, a, b = an.generate_lemma_5_2_instance(seed)
            rep = an.verify_lemma_5_2(f, a, b)
            assert rep.hypothesis_ok and rep.conclusion_ok, seed


class TestProp53:
    def test_generated_instances(self):
        for seed in range(20):
            J = an.generate_admissible(seed, "C1+C2+C3")
            rep = an.verify_prop_5_3(J)
            assert rep.hypothesis_ok
            assert rep.conclusion_ok, seed

    def test_c3_failure_reported(self):
        J = polynomial_potential([1, F(1, 2)], -1, 1)  # integral 2 >= 1/80
        rep = an.verify_prop_5_3(J)
        assert not rep.hypothesis_ok
        assert any(k == "C3" for k, _ in rep.hypothesis_witnesses)

    def test_c2_failure_reported(self):
        J = polynomial_potential([F(2, 5), F(1, 2)], -1, 1)
        rep = an.verify_prop_5_3(J)
        assert not rep.hypothesis_ok
        assert any(k in ("C2", "C3") for k, _ in rep.hypothesis_witnesses)


class TestSieveRational:
    def test_examples(self):
        assert an.sieve_rational((F(3, 10), F(1, 2))) == (1, 3)
        assert an.sieve_rational((F(2, 5), F(3, 5))) == (1, 2)

    def test_guarantee_small_cases(self):
        for d1 in range(1, 13):
            for n1 in range(0, d1):
                for d2 in range(1, 13):
                    for n2 in range(0, d2 + 1):
                        lo, hi = F(n1, d1), F(n2, d2)
                        if not 0 < hi - lo < 1:
                            continue
                        p, q = an.sieve_rational((lo, hi))
                        assert lo < F(p, q) < hi
                        assert F(1, q) >= (hi - lo) / 2

    def test_bad_interval(self):
        with pytest.raises(ValueError):
            an.sieve_rational((F(1, 2), F(1, 2)))
        with pytest.raises(ValueError):
            an.sieve_rational((0, 2))


class TestGenerators:
    def test_profiles_certify(self):
        for seed in range(5):
            J = an.generate_admissible(seed, "C1-only")
            assert pot.check_C1(J)
            J = an.generate_admissible(seed, "C1+C2")
            assert pot.check_C1(J) and pot.check_C2(J)
            J = an.generate_admissible(seed, "C1+C2+C3")
            assert pot.check_C3(J)

    def test_deterministic(self):
        a = an.generate_admissible(3, "C1+C2")
        b = an.generate_admissible(3, "C1+C2")
        assert a.piece_coeffs == b.piece_coeffs

    def test_unknown_profile(self):
        with pytest.raises(ValueError):
            an.generate_admissible(0, "bogus")

    def test_gap_instances_have_no_small_denominator_slopes(self):
        # the whole point of the Farey-gap construction
        J = an.generate_admissible(0, "C1+C2")
        d = J.deriv(0.37)
        f = Fraction(d).limit_denominator(200)
        assert abs(float(f) - d) > 0  # slope is not any q <= 200 rational


class TestLemmaTrial:
    def test_rows(self):
        for lemma in an.LEMMAS:
            row = an.lemma_trial(lemma, 0)
            assert row["hypothesis_ok"]
            assert row["conclusion_ok"]
            assert row["slack"] > 0

    def test_unknown_lemma(self):
        with pytest.raises(ValueError):
            an.lemma_trial("9.9", 0)
