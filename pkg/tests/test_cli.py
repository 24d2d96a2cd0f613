import subprocess
import sys

import numpy as np
import pytest

from ubssvc import (
    compression_ratio,
    decode_sequence,
    default_config,
    encode_sequence,
    read_container,
    read_sequence,
    snap_to_8bit,
    write_container,
)
from ubssvc import synth


def run_cli(*args, cwd=None):
    return subprocess.run(
        [sys.executable, "-m", "ubssvc", *args],
        capture_output=True,
        text=True,
        cwd=cwd,
    )


class TestCompressionRatio:
    def test_published_mpeg2_pair(self):
        result = compression_ratio(225, 169)
        assert result.ratio == pytest.approx(1.331, abs=5e-4)
        assert result.improvement_percent == pytest.approx(33.1, abs=0.05)

    def test_published_h264_pair(self):
        result = compression_ratio(98.2, 7.31)
        assert result.ratio == pytest.approx(13.43, abs=5e-3)

    def test_identity(self):
        result = compression_ratio(1000, 1000)
        assert result.ratio == 1.0
        assert result.improvement_percent == 0.0

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            compression_ratio(0, 5)
        with pytest.raises(ValueError):
            compression_ratio(5, -1)


class TestValidateMatrixCommand:
    def test_default_matrix_passes(self):
        proc = run_cli("validate-matrix")
        assert proc.returncode == 0
        assert proc.stdout.count("columns (") == 4
        assert "PASS" in proc.stdout

    def test_porcelain(self):
        proc = run_cli("validate-matrix", "--porcelain")
        assert proc.returncode == 0
        assert "passed=true" in proc.stdout
        assert "det.0_1_2=" in proc.stdout

    def test_failing_matrix_exits_2(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("n = 3\nm = 2\nmatrix = 1 0 1  0 1 0\n")
        proc = run_cli("validate-matrix", "--config", str(cfg))
        assert proc.returncode == 2
        assert "FAIL" in proc.stdout


class TestGenCommand:
    def test_deterministic_across_runs(self, tmp_path):
        for sub in ("a", "b"):
            proc = run_cli(
                "gen", "--frames", "6", "--width", "16", "--height", "16",
                "--seed", "3", "--out", str(tmp_path / sub / "f_{i:02d}.pgm"),
            )
            assert proc.returncode == 0
        for i in range(6):
            a = (tmp_path / "a" / f"f_{i:02d}.pgm").read_bytes()
            b = (tmp_path / "b" / f"f_{i:02d}.pgm").read_bytes()
            assert a == b


class TestMixSeparate:
    @pytest.fixture
    def sequence_dir(self, tmp_path):
        frames = synth.generate("sparse-detail", 8, 16, 16, seed=11)
        from ubssvc import write_sequence

        write_sequence(frames, str(tmp_path / "src" / "f_{i:03d}.pgm"))
        return tmp_path

    def test_file_path_equals_memory_path(self, sequence_dir):
        src_pattern = str(sequence_dir / "src" / "*.pgm")
        container = sequence_dir / "seq.ubss"
        proc = run_cli("mix", src_pattern, "--out", str(container))
        assert proc.returncode == 0, proc.stderr

        frames = list(read_sequence(src_pattern).frames)
        cfg = default_config()
        enc_memory = encode_sequence(frames, cfg)
        reference = sequence_dir / "ref.ubss"
        write_container(enc_memory, reference)
        assert container.read_bytes() == reference.read_bytes()

        proc = run_cli(
            "separate", str(container), "--out", str(sequence_dir / "rec" / "f_{i:03d}.pgm")
        )
        assert proc.returncode == 0, proc.stderr
        decoded_files = read_sequence(str(sequence_dir / "rec" / "*.pgm")).frames
        decoded_memory, _ = decode_sequence(enc_memory, cfg)
        assert len(decoded_files) == len(decoded_memory)
        for file_frame, mem_frame in zip(decoded_files, decoded_memory):
            assert np.array_equal(file_frame.pixels, snap_to_8bit(mem_frame.pixels))

    def test_mix_twice_is_bit_identical(self, sequence_dir):
        src_pattern = str(sequence_dir / "src" / "*.pgm")
        out1, out2 = sequence_dir / "one.ubss", sequence_dir / "two.ubss"
        assert run_cli("mix", src_pattern, "--out", str(out1)).returncode == 0
        assert run_cli("mix", src_pattern, "--out", str(out2)).returncode == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_separate_respects_container_matrix(self, sequence_dir):
        src_pattern = str(sequence_dir / "src" / "*.pgm")
        container = sequence_dir / "seq.ubss"
        run_cli("mix", src_pattern, "--out", str(container))
        enc = read_container(container)
        assert enc.quantization == "float-container"

    def test_raw_input(self, tmp_path):
        frames = synth.generate("sparse-detail", 8, 8, 6, seed=12)
        raw = b"".join(snap_to_8bit(f.pixels).astype(np.uint8).tobytes() for f in frames)
        raw_path = tmp_path / "seq.raw"
        raw_path.write_bytes(raw)
        proc = run_cli(
            "mix", str(raw_path), "--width", "8", "--height", "6",
            "--out", str(tmp_path / "seq.ubss"), "--porcelain",
        )
        assert proc.returncode == 0, proc.stderr
        assert "sources=8" in proc.stdout
        assert "mixed=6" in proc.stdout


class TestRoundtripCommand:
    def test_counts_and_determinism(self):
        args = (
            "roundtrip", "--preset", "sparse-detail", "--frames", "40",
            "--width", "32", "--height", "32", "--seed", "5", "--porcelain",
        )
        first = run_cli(*args)
        second = run_cli(*args)
        assert first.returncode == 0, first.stderr
        assert first.stdout == second.stdout
        assert "sources=40" in first.stdout
        assert "mixed=30" in first.stdout
        assert "decoded=40" in first.stdout


class TestPsnrCommand:
    def test_identical_sequences(self, tmp_path):
        from ubssvc import write_sequence

        frames = synth.generate("sparse-detail", 4, 8, 8, seed=13)
        write_sequence(frames, str(tmp_path / "x" / "f_{i}.pgm"))
        write_sequence(frames, str(tmp_path / "y" / "f_{i}.pgm"))
        proc = run_cli(
            "psnr", str(tmp_path / "x" / "*.pgm"), str(tmp_path / "y" / "*.pgm"),
            "--porcelain",
        )
        assert proc.returncode == 0
        assert "mean_psnr=inf" in proc.stdout
        assert "infinite_count=4" in proc.stdout


class TestBenchCommand:
    def test_identity_codec_reports_structural_floor(self):
        proc = run_cli(
            "bench", "--preset", "sparse-detail", "--frames", "8",
            "--width", "16", "--height", "16", "--seed", "4",
            "--codec-cmd", "cp {in} {out}", "--porcelain",
        )
        assert proc.returncode == 0, proc.stderr
        values = dict(
            line.split("=", 1) for line in proc.stdout.strip().splitlines()
        )
        assert float(values["ratio_of_ratios"]) == pytest.approx(4.0 / 3.0, abs=1e-9)
        assert float(values["improvement_percent"]) == pytest.approx(100.0 / 3.0, abs=1e-6)
        assert int(values["raw.original_bytes"]) == 8 * 16 * 16
        assert int(values["raw.mixed_bytes"]) == 6 * 16 * 16

    def test_failing_codec_exits_3(self):
        proc = run_cli(
            "bench", "--preset", "sparse-detail", "--frames", "4",
            "--width", "8", "--height", "8",
            "--codec-cmd", "false",
        )
        assert proc.returncode == 3
        assert "codec failure" in proc.stderr


class TestExitCodes:
    def test_usage_error_is_1(self):
        assert run_cli("no-such-command").returncode == 1
        assert run_cli("gen").returncode == 1  # missing required --out

    def test_data_error_is_2(self, tmp_path):
        proc = run_cli("mix", str(tmp_path / "missing_*.pgm"), "--out", str(tmp_path / "o.ubss"))
        assert proc.returncode == 2
        proc = run_cli("separate", str(tmp_path / "nope.ubss"), "--out", str(tmp_path / "f_{i}.pgm"))
        assert proc.returncode == 2
