import math

import numpy as np
import pytest

from oracles import psnr_reference
from ubssvc import Frame, frame_mse, frame_psnr, sequence_report

# frozen: 10*log10(255^2 / 16^2) and 20*log10(2)
PSNR_DIFF16 = 24.04840395556061
DOUBLING_DROP = 6.020599913279624


def _const(value, shape=(4, 4)):
    return Frame(np.full(shape, float(value)))


class TestFrameMse:
    def test_identical(self):
        assert frame_mse(_const(7), _const(7)) == 0.0

    def test_full_range(self):
        assert frame_mse(_const(255), _const(0)) == 65025.0

    def test_uniform_difference_16(self):
        assert frame_mse(_const(100), _const(116)) == 256.0

    def test_symmetry(self, rng):
        a = Frame(rng.uniform(0, 255, size=(6, 6)))
        b = Frame(rng.uniform(0, 255, size=(6, 6)))
        assert frame_mse(a, b) == frame_mse(b, a)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            frame_mse(_const(0, (2, 2)), _const(0, (2, 3)))

    def test_compares_in_8bit_domain(self):
        # sub-rounding differences vanish, out-of-range values clamp
        assert frame_mse(_const(100.2), _const(100.4)) == 0.0
        assert frame_mse(_const(300), _const(255)) == 0.0


class TestFramePsnr:
    def test_full_range_is_zero_db(self):
        assert frame_psnr(_const(255), _const(0)) == 0.0

    def test_identical_is_infinite(self):
        value = frame_psnr(_const(42), _const(42))
        assert math.isinf(value) and value > 0

    def test_uniform_difference_16(self):
        assert frame_psnr(_const(10), _const(26)) == pytest.approx(PSNR_DIFF16, abs=0.01)

    def test_doubling_error_drops_six_db(self):
        p16 = frame_psnr(_const(50), _const(66))
        p32 = frame_psnr(_const(50), _const(82))
        assert p16 - p32 == pytest.approx(DOUBLING_DROP, abs=0.01)

    def test_monotone_in_mse(self):
        values = [frame_psnr(_const(0), _const(d)) for d in (4, 8, 16, 32, 64)]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_matches_reference_formula(self, rng):
        for _ in range(25):
            a = rng.uniform(-10, 265, size=(5, 7))
            b = rng.uniform(-10, 265, size=(5, 7))
            got = frame_psnr(Frame(a), Frame(b))
            want = psnr_reference(a, b)
            if math.isinf(want):
                assert math.isinf(got)
            else:
                assert got == pytest.approx(want, abs=1e-12)


class TestSequenceReport:
    def test_identical_sequences(self):
        frames = [_const(9)] * 3
        report = sequence_report(frames, frames)
        assert report.infinite_count == 3
        assert math.isinf(report.mean_psnr)
        assert all(math.isinf(p) for p in report.per_frame_psnr)

    def test_single_differing_frame(self):
        ref = [_const(10), _const(20), _const(30)]
        test = [_const(10), _const(36), _const(30)]
        report = sequence_report(ref, test)
        assert report.infinite_count == 2
        assert report.mean_psnr == pytest.approx(PSNR_DIFF16, abs=0.01)

    def test_psnr_mse_relation_holds(self, rng):
        ref = [Frame(rng.uniform(0, 255, size=(4, 4))) for _ in range(5)]
        test = [Frame(rng.uniform(0, 255, size=(4, 4))) for _ in range(5)]
        report = sequence_report(ref, test)
        for mse, psnr in zip(report.per_frame_mse, report.per_frame_psnr):
            if mse > 0:
                assert psnr == pytest.approx(10 * math.log10(65025.0 / mse), abs=1e-12)

    def test_empty_sequences_rejected(self):
        with pytest.raises(ValueError):
            sequence_report([], [])

    def test_count_mismatch_rejected(self):
        with pytest.raises(ValueError):
            sequence_report([_const(1)], [_const(1), _const(2)])

    def test_serializations(self):
        report = sequence_report([_const(0), _const(5)], [_const(16), _const(5)])
        table = report.to_table()
        assert "mean psnr" in table and "inf" in table
        porcelain = report.to_porcelain()
        assert "frame.0.mse=256.0" in porcelain
        assert "frame.1.psnr=inf" in porcelain
        assert "infinite_count=1" in porcelain
