import math
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from shrinktarget.rates import (
    AllTimes,
    Arithmetic,
    ShiftTarget,
    SymbolSequence,
    constant_shift_target,
)
from shrinktarget.symbolic import (
    EmptyShiftError,
    IndexSet,
    NotMixingError,
    ReducibleShiftError,
    ShiftOfFiniteType,
    SoficPresentation,
    SymbolicError,
    count_sofic_words,
    count_words,
    full_shift,
    golden_mean_shift,
    index_set,
    indices_intersect,
    log_count_words,
    mixing_gap,
    period_decomposition,
    perron_root,
    sft_as_sofic,
    sft_entropy,
    sofic_entropy,
)

GOLDEN_ENTROPY = math.log((1.0 + math.sqrt(5.0)) / 2.0)  # 0.48121182505960347
FLIP = ShiftOfFiniteType(((0, 1), (1, 0)))  # period-2 permutation shift


def brute_force_words(shift, n):
    """Independent oracle: enumerate admissible words by direct product scan."""
    k = shift.alphabet_size
    return [w for w in product(range(k), repeat=n) if shift.word_admissible(w)]


class TestEntropy:
    def test_full_shift(self):
        assert sft_entropy(full_shift(2)) == pytest.approx(math.log(2.0), abs=1e-12)

    def test_golden_mean(self):
        assert sft_entropy(golden_mean_shift()) == pytest.approx(
            GOLDEN_ENTROPY, abs=1e-9
        )

    def test_permutation_matrix(self):
        assert sft_entropy(FLIP) == pytest.approx(0.0, abs=1e-9)

    def test_zero_matrix_rejected(self):
        with pytest.raises(EmptyShiftError):
            ShiftOfFiniteType(((0, 0), (0, 0)))

    def test_perron_root_values(self):
        assert perron_root(((1, 1), (1, 1))) == pytest.approx(2.0, abs=1e-10)
        assert perron_root(((1, 1), (1, 0))) == pytest.approx(
            (1.0 + math.sqrt(5.0)) / 2.0, abs=1e-10
        )


class TestCountWords:
    def test_full_shift_power(self):
        assert count_words(full_shift(2), 10) == 1024

    def test_golden_mean_small(self):
        # enumerated directly: 000, 001, 010, 100, 101
        words = brute_force_words(golden_mean_shift(), 3)
        assert len(words) == 5
        assert count_words(golden_mean_shift(), 3) == 5

    def test_single_letters(self):
        assert count_words(golden_mean_shift(), 1) == 2

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6, 7, 8])
    def test_matches_brute_force(self, n):
        for shift in (golden_mean_shift(), FLIP, full_shift(3)):
            assert count_words(shift, n) == len(brute_force_words(shift, n))

    def test_growth_approaches_entropy(self):
        w60 = count_words(golden_mean_shift(), 60)
        assert abs(math.log(w60) / 60.0 - GOLDEN_ENTROPY) < 0.01

    def test_log_count_words_consistent(self):
        g = golden_mean_shift()
        for n in (40, 4096, 5000, 6000):
            assert log_count_words(g, n) == pytest.approx(
                math.log(count_words(g, n)), rel=1e-10
            )

    @given(st.integers(min_value=1, max_value=20), st.integers(min_value=1, max_value=20))
    def test_submultiplicative(self, m, n):
        g = golden_mean_shift()
        assert count_words(g, m + n) <= count_words(g, m) * count_words(g, n)

    @given(st.integers(min_value=1, max_value=50))
    def test_word_rate_dominates_entropy(self, n):
        # submultiplicativity makes ln W(n)/n >= h for every n
        g = golden_mean_shift()
        assert math.log(count_words(g, n)) / n >= sft_entropy(g) - 1e-12


class TestMixingGap:
    def test_full_shift(self):
        assert mixing_gap(full_shift(2)) == 1

    def test_golden_mean(self):
        # M has a zero entry, M^2 = [[2,1],[1,1]] > 0
        assert mixing_gap(golden_mean_shift()) == 2

    def test_period_two_rejected(self):
        with pytest.raises(NotMixingError):
            mixing_gap(FLIP)

    def test_gap_iff_aperiodic(self):
        for shift in (full_shift(2), golden_mean_shift(), FLIP):
            n = period_decomposition(shift).period
            if n == 1:
                assert mixing_gap(shift) >= 1
            else:
                with pytest.raises(NotMixingError):
                    mixing_gap(shift)


class TestPeriodDecomposition:
    def test_flip(self):
        d = period_decomposition(FLIP)
        assert d.period == 2
        assert d.class_of == (0, 1)

    def test_full_shift(self):
        assert period_decomposition(full_shift(2)).period == 1

    def test_three_cycle(self):
        d = period_decomposition(
            ShiftOfFiniteType(((0, 1, 0), (0, 0, 1), (1, 0, 0)))
        )
        assert d.period == 3
        assert sorted(d.class_of) == [0, 1, 2]

    def test_edges_step_one_class(self):
        for shift in (FLIP, golden_mean_shift()):
            d = period_decomposition(shift)
            k = shift.alphabet_size
            for a in range(k):
                for b in range(k):
                    if shift.transition[a][b]:
                        assert d.class_of[b] == (d.class_of[a] + 1) % d.period

    def test_reducible_reports_components(self):
        reducible = ShiftOfFiniteType(((1, 1), (0, 1)))
        with pytest.raises(ReducibleShiftError) as exc:
            period_decomposition(reducible)
        assert len(exc.value.components) == 2


class TestIndexSets:
    def test_class_zero_even_times(self):
        d = period_decomposition(FLIP)
        z = constant_shift_target(SymbolSequence(head=(), cycle=(0, 1)))
        got = index_set(z, Arithmetic(0, 2), d)
        assert got.pairs == frozenset({(0, 0)})
        assert got.diffs == frozenset({0})

    def test_class_one_even_times(self):
        d = period_decomposition(FLIP)
        z = constant_shift_target(SymbolSequence(head=(), cycle=(1, 0)))
        got = index_set(z, Arithmetic(0, 2), d)
        assert got.pairs == frozenset({(1, 0)})
        assert got.diffs == frozenset({1})

    def test_trivial_period(self):
        d = period_decomposition(full_shift(2))
        z = constant_shift_target(SymbolSequence(head=(), cycle=(0,)))
        got = index_set(z, AllTimes(), d)
        assert got.pairs == frozenset({(0, 0)})
        assert got.diffs == frozenset({0})

    def test_pairs_nonempty_on_unbounded_sets(self):
        d = period_decomposition(FLIP)
        z = ShiftTarget(
            preperiod=(SymbolSequence((), (0, 1)),),
            cycle=(SymbolSequence((), (0, 1)), SymbolSequence((), (1, 0))),
        )
        for s in (AllTimes(), Arithmetic(0, 2), Arithmetic(3, 4)):
            assert index_set(z, s, d).pairs

    def test_counterexample_empty_intersection(self):
        # class-0 targets on even times vs class-1 targets on even times
        d = period_decomposition(FLIP)
        z1 = constant_shift_target(SymbolSequence(head=(), cycle=(0, 1)))
        z2 = constant_shift_target(SymbolSequence(head=(), cycle=(1, 0)))
        s = Arithmetic(0, 2)
        i1 = index_set(z1, s, d)
        i2 = index_set(z2, s, d)
        assert indices_intersect([i1, i2]) is None

    def test_intersection_picks_least(self):
        a = IndexSet(2, frozenset({(0, 0)}))
        b = IndexSet(2, frozenset({(0, 0), (1, 0)}))
        assert indices_intersect([a, b]) == 0
        assert indices_intersect([b]) == 0

    def test_mismatched_period_rejected(self):
        with pytest.raises(SymbolicError, match="period"):
            indices_intersect([IndexSet(2, frozenset({(0, 0)})), IndexSet(3, frozenset({(0, 0)}))])


class TestSofic:
    def even_shift(self):
        # between consecutive 1s there is an even number of 0s
        return SoficPresentation(
            states=2,
            edges=((0, 0, "1"), (0, 1, "0"), (1, 0, "0")),
        )

    def test_even_shift_entropy(self):
        # adjacency [[1,1],[1,0]]; cross-checked against word counts below
        assert sofic_entropy(self.even_shift()) == pytest.approx(
            GOLDEN_ENTROPY, abs=1e-9
        )

    def test_even_shift_entropy_vs_word_counts(self):
        p = self.even_shift()
        w30, w31 = count_sofic_words(p, 30), count_sofic_words(p, 31)
        assert math.log(w31 / w30) == pytest.approx(GOLDEN_ENTROPY, abs=1e-3)
        assert abs(math.log(w30) / 30 - GOLDEN_ENTROPY) < 0.03

    def test_identity_labeling_matches_sft(self):
        for shift in (golden_mean_shift(), full_shift(3), FLIP):
            assert sofic_entropy(sft_as_sofic(shift)) == pytest.approx(
                sft_entropy(shift), abs=1e-10
            )
            for n in range(1, 7):
                assert count_sofic_words(sft_as_sofic(shift), n) == count_words(
                    shift, n
                )

    def test_full_shift_presentation(self):
        p = SoficPresentation(states=1, edges=((0, 0, "a"), (0, 0, "b"), (0, 0, "c")))
        assert sofic_entropy(p) == pytest.approx(math.log(3.0), abs=1e-12)

    def test_right_resolving_enforced(self):
        with pytest.raises(SymbolicError, match="right-resolving"):
            SoficPresentation(states=2, edges=((0, 0, "a"), (0, 1, "a")))

    def test_dead_state_rejected(self):
        with pytest.raises(SymbolicError, match="no outgoing"):
            SoficPresentation(states=2, edges=((0, 0, "a"),))


class TestValidation:
    def test_zero_row_rejected(self):
        with pytest.raises(SymbolicError, match="successor"):
            ShiftOfFiniteType(((1, 1), (0, 0)))

    def test_zero_column_rejected(self):
        with pytest.raises(SymbolicError, match="predecessor"):
            ShiftOfFiniteType(((1, 0), (1, 0)))

    def test_non_binary_rejected(self):
        with pytest.raises(SymbolicError, match="0 or 1"):
            ShiftOfFiniteType(((2, 1), (1, 1)))

    def test_sequence_admissibility(self):
        g = golden_mean_shift()
        assert g.sequence_admissible(SymbolSequence((), (0,)))
        assert g.sequence_admissible(SymbolSequence((1,), (0, 1)))
        assert not g.sequence_admissible(SymbolSequence((1,), (1,)))


@settings(max_examples=40)
@given(st.integers(min_value=2, max_value=4), st.data())
def test_entropy_le_log_alphabet(k, data):
    rows = data.draw(
        st.lists(
            st.lists(st.integers(0, 1), min_size=k, max_size=k),
            min_size=k,
            max_size=k,
        )
    )
    # patch rows/columns so the matrix presents a nonempty shift
    for i in range(k):
        if not any(rows[i]):
            rows[i][i] = 1
        if not any(rows[j][i] for j in range(k)):
            rows[i][i] = 1
    shift = ShiftOfFiniteType(tuple(tuple(r) for r in rows))
    assert -1e-12 <= sft_entropy(shift) <= math.log(k) + 1e-12
