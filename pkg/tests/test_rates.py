import math

import pytest
from hypothesis import given, strategies as st

from shrinktarget.rates import (
    AllTimes,
    Arithmetic,
    Exponential,
    Explicit,
    PiecewiseExponential,
    PowerLaw,
    RateError,
    RateExponents,
    SymbolSequence,
    Tabulated,
    TabulatedPeriodic,
    family_tau,
    first_member_at_least,
    restrict_rate,
    tau_exponents,
    time_set_members,
)


def sampled_exponent(phi, residue=None, period=1, lo=101, hi=160):
    """Independent check: evaluate -ln(phi(n))/n on a window where exp(-tau*n)
    is still representable in binary64."""
    ns = [n for n in range(lo, hi) if residue is None or n % period == residue]
    return [-math.log(phi.phi(n)) / n for n in ns]


class TestTauExponents:
    def test_exponential(self):
        assert tau_exponents(Exponential(0.5)) == RateExponents(0.5, 0.5)

    def test_power_law(self):
        assert tau_exponents(PowerLaw(2.0)) == RateExponents(0.0, 0.0)
        # -ln(n^-2)/n = 2 ln n / n -> 0; no underflow risk, sample far out
        assert max(sampled_exponent(PowerLaw(2.0), lo=10_000, hi=10_050)) < 1e-2

    def test_piecewise_exponential(self):
        phi = PiecewiseExponential(2, (1.0, 2.0))
        # derived: along even n the exponent is taus[0]=1, along odd n taus[1]=2
        even = sampled_exponent(phi, residue=0, period=2)
        odd = sampled_exponent(phi, residue=1, period=2)
        assert all(abs(e - 1.0) < 1e-12 for e in even)
        assert all(abs(e - 2.0) < 1e-12 for e in odd)
        assert tau_exponents(phi) == RateExponents(2.0, 1.0)

    def test_tabulated_prefix_is_ignored(self):
        phi = Tabulated(values=(0.9, 0.1, 1.0), tail_tau=0.25)
        assert tau_exponents(phi) == RateExponents(0.25, 0.25)

    def test_exponential_identity_exact(self):
        phi = Exponential(0.5)
        for n in (1, 7, 100):
            assert -math.log(phi.phi(n)) / n == pytest.approx(0.5, abs=1e-12)


class TestFamilyTau:
    def test_componentwise_sup(self):
        fam = [RateExponents(0.5, 0.5), RateExponents(0.3, 0.2)]
        assert family_tau(fam) == RateExponents(0.5, 0.5)

    def test_singleton(self):
        assert family_tau([RateExponents(0.0, 0.0)]) == RateExponents(0.0, 0.0)

    def test_mixed(self):
        fam = [RateExponents(2.0, 1.0), RateExponents(1.0, 1.0)]
        assert family_tau(fam) == RateExponents(2.0, 1.0)

    def test_empty_family_rejected(self):
        with pytest.raises(RateError, match="empty family"):
            family_tau([])


class TestRestrictRate:
    def test_even_restriction_of_exponential(self):
        # derived: limsup over even n of n*1.0/n = 1.0
        out = restrict_rate(Exponential(1.0), Arithmetic(0, 2))
        assert tau_exponents(out).tau_upper == pytest.approx(1.0)
        assert out.phi(4) == pytest.approx(math.exp(-4.0))
        assert out.phi(5) == 1.0

    def test_all_times_is_identity(self):
        phi = Exponential(0.3)
        assert restrict_rate(phi, AllTimes()) is phi

    def test_piecewise_picks_even_branch(self):
        out = restrict_rate(PiecewiseExponential(2, (1.0, 2.0)), Arithmetic(0, 2))
        assert tau_exponents(out).tau_upper == pytest.approx(1.0)

    def test_bounded_set_rejected(self):
        with pytest.raises(RateError, match="bounded"):
            restrict_rate(Exponential(1.0), Explicit((1, 2, 3)))

    def test_explicit_with_tail(self):
        s = Explicit((3, 5), tail=Arithmetic(10, 4))
        out = restrict_rate(Exponential(2.0), s)
        for n in range(1, 30):
            if s.contains(n):
                assert out.phi(n) == pytest.approx(math.exp(-2.0 * n))
            else:
                assert out.phi(n) == 1.0

    def test_offset_beyond_step_is_exact(self):
        s = Arithmetic(7, 2)
        out = restrict_rate(Exponential(1.0), s)
        for n in range(1, 20):
            expected = math.exp(-float(n)) if s.contains(n) else 1.0
            assert out.phi(n) == pytest.approx(expected)

    @given(
        tau=st.floats(min_value=0.0, max_value=5.0),
        offset=st.integers(min_value=0, max_value=6),
        step=st.integers(min_value=1, max_value=5),
    )
    def test_never_decreases_phi_pointwise(self, tau, offset, step):
        phi = Exponential(tau)
        out = restrict_rate(phi, Arithmetic(offset, step))
        for n in range(1, 60):
            assert out.phi(n) >= phi.phi(n) - 1e-15
        assert tau_exponents(out).tau_upper <= tau_exponents(phi).tau_upper + 1e-15


class TestInvariants:
    @given(st.integers(min_value=1, max_value=250))
    def test_phi_in_unit_interval(self, n):
        # n capped where exp(-tau*n) stays above the binary64 underflow floor
        for phi in (
            Exponential(0.7),
            PowerLaw(1.5),
            PiecewiseExponential(3, (0.0, 1.0, 2.5)),
            Tabulated((0.5, 1.0), 0.1),
            TabulatedPeriodic((0.25,), 2, (0.0, 1.0)),
        ):
            v = phi.phi(n)
            assert 0.0 < v <= 1.0

    @given(st.integers(min_value=1, max_value=10_000_000))
    def test_log_phi_total(self, n):
        # log-space evaluation never under/overflows
        for phi in (Exponential(0.7), PiecewiseExponential(2, (1.0, 2.0))):
            assert phi.log_phi(n) == pytest.approx(-phi.exponents().tau_upper * n, rel=1.0)
            assert phi.log_phi(n) <= 0.0

    @given(
        t1=st.floats(min_value=0.0, max_value=4.0),
        t2=st.floats(min_value=0.0, max_value=4.0),
    )
    def test_tau_monotone_in_pointwise_order(self, t1, t2):
        # phi1 <= phi2 pointwise iff t1 >= t2; then tau_lower(phi1) >= tau_lower(phi2)
        lo, hi = sorted((t1, t2))
        assert tau_exponents(Exponential(hi)).tau_lower >= tau_exponents(
            Exponential(lo)
        ).tau_lower

    def test_exponents_order_enforced(self):
        with pytest.raises(RateError):
            RateExponents(1.0, 2.0)

    def test_tabulated_rejects_out_of_range(self):
        with pytest.raises(RateError, match="rejected"):
            Tabulated((1.5,), 0.1)
        with pytest.raises(RateError, match="rejected"):
            Tabulated((0.0,), 0.1)

    def test_infinity_lives_on_exponents_only(self):
        exp = RateExponents(math.inf, math.inf)
        assert math.isinf(exp.tau_upper)
        with pytest.raises(RateError):
            Exponential(math.inf)


class TestTimeSets:
    def test_membership(self):
        s = Arithmetic(1, 3)
        assert [n for n in range(12) if s.contains(n)] == [1, 4, 7, 10]

    def test_members_iterator(self):
        assert list(time_set_members(Arithmetic(0, 2), 0, 9)) == [0, 2, 4, 6, 8]

    def test_first_member_at_least(self):
        assert first_member_at_least(Arithmetic(1, 3), 5) == 7
        assert first_member_at_least(AllTimes(), 9) == 9
        s = Explicit((2, 8), tail=Arithmetic(20, 5))
        assert first_member_at_least(s, 3) == 8
        assert first_member_at_least(s, 9) == 20
        assert first_member_at_least(s, 21) == 25

    def test_explicit_validation(self):
        with pytest.raises(RateError, match="strictly increasing"):
            Explicit((3, 3))
        with pytest.raises(RateError, match="strictly after"):
            Explicit((5,), tail=Arithmetic(4, 2))
        assert Explicit((1, 2)).bounded
        assert not Explicit((1, 2), tail=Arithmetic(10, 1)).bounded


class TestSymbolSequence:
    def test_eventually_periodic_lookup(self):
        z = SymbolSequence(head=(1, 0), cycle=(0, 0, 1))
        assert z.prefix(8) == (1, 0, 0, 0, 1, 0, 0, 1)

    def test_empty_cycle_rejected(self):
        with pytest.raises(RateError):
            SymbolSequence(head=(), cycle=())
