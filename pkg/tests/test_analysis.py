import math

import pytest

from catport import ProtocolKind, ProtocolSpec, cost_of, cost_table
from catport.analysis import collective_measurement_arity, nonzero_outcome_count


def hybrid(d, m, k):
    return ProtocolSpec(ProtocolKind.HYBRID, d, m, hybrid_k=k)


class TestCostOf:
    def test_collective_protocol_bits(self):
        row = cost_of(ProtocolSpec(ProtocolKind.GHZ, 3, 5), cross_check=False)
        assert row.nonzero_outcome_count == 9
        assert row.classical_bits == pytest.approx(2 * math.log2(3))
        assert row.classical_bits == pytest.approx(3.169925001442312)
        assert row.classical_bits_ceil == 4
        assert row.total_outcome_count == 3**6

    def test_bell_protocol_bits(self):
        row = cost_of(ProtocolSpec(ProtocolKind.BELL, 2, 3), cross_check=False)
        assert row.nonzero_outcome_count == 16
        assert row.classical_bits == 4.0
        assert row.classical_bits_ceil == 4
        assert row.collective_measurement_arity == 2

    def test_hybrid_boundaries_match_named_rows(self):
        d, m = 3, 4
        ghz = cost_of(ProtocolSpec(ProtocolKind.GHZ, d, m), cross_check=False)
        low = cost_of(hybrid(d, m, 2), cross_check=False)
        assert (low.nonzero_outcome_count, low.classical_bits, low.collective_measurement_arity) == (
            ghz.nonzero_outcome_count, ghz.classical_bits, ghz.collective_measurement_arity
        )
        bell = cost_of(ProtocolSpec(ProtocolKind.BELL, d, m), cross_check=False)
        high = cost_of(hybrid(d, m, m + 1), cross_check=False)
        assert (high.nonzero_outcome_count, high.classical_bits, high.collective_measurement_arity) == (
            bell.nonzero_outcome_count, bell.classical_bits, bell.collective_measurement_arity
        )

    @pytest.mark.parametrize("d,m", [(2, 2), (3, 2), (2, 3), (3, 3)])
    def test_cross_check_against_enumeration(self, d, m):
        specs = [
            ProtocolSpec(ProtocolKind.BELL, d, m),
            ProtocolSpec(ProtocolKind.GHZ, d, m),
            ProtocolSpec(ProtocolKind.BARRED, d, m),
        ] + [hybrid(d, m, k) for k in range(2, m + 2)]
        for spec in specs:
            for seed in range(5):
                cost_of(spec, cross_check=True, seed=seed)  # raises on mismatch

    def test_cross_check_skipped_over_cap(self):
        # register is 2**41; the analytic path must still succeed
        row = cost_of(ProtocolSpec(ProtocolKind.GHZ, 2, 20), cross_check=True)
        assert row.nonzero_outcome_count == 4


class TestCostTable:
    def test_hybrid_ladder_monotonicity(self):
        rows = [cost_of(hybrid(2, 4, k), cross_check=False) for k in range(2, 6)]
        assert [r.classical_bits for r in rows] == [2, 3, 4, 5]
        assert [r.collective_measurement_arity for r in rows] == [5, 4, 3, 2]

    def test_table_covers_bit_ladder(self):
        rows = cost_table([3], [2, 3], include_hybrids=True)
        for m in (2, 3):
            bits = {
                round(r.classical_bits / math.log2(3))
                for r in rows
                if r.spec.m == m
            }
            assert bits == set(range(2, m + 2))

    def test_table_ordering_and_single_row(self):
        rows = cost_table([2, 3], [2], include_hybrids=True)
        keys = [(r.spec.d, r.spec.m) for r in rows]
        assert keys == sorted(keys)
        solo = cost_table([3], [2], include_hybrids=False)
        assert [r.spec.kind for r in solo] == [
            ProtocolKind.BELL,
            ProtocolKind.GHZ,
            ProtocolKind.BARRED,
        ]
        assert solo[0].classical_bits == cost_of(
            ProtocolSpec(ProtocolKind.BELL, 3, 2), cross_check=False
        ).classical_bits

    def test_empty_ranges_rejected(self):
        with pytest.raises(ValueError):
            cost_table([], [2])


class TestTradeOffLaw:
    @pytest.mark.parametrize("d", [2, 3, 5])
    @pytest.mark.parametrize("m", [2, 3, 4])
    def test_bits_plus_collectivity_is_conserved(self, d, m):
        specs = [
            ProtocolSpec(ProtocolKind.BELL, d, m),
            ProtocolSpec(ProtocolKind.GHZ, d, m),
            ProtocolSpec(ProtocolKind.BARRED, d, m),
        ] + [hybrid(d, m, k) for k in range(2, m + 2)]
        for spec in specs:
            bits = math.log2(nonzero_outcome_count(spec))
            arity = collective_measurement_arity(spec)
            assert bits + math.log2(d) * (arity - 2) == pytest.approx(
                (m + 1) * math.log2(d), abs=1e-12
            )
