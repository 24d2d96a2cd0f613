"""Full codec roundtrip on a synthetic sequence.

40 source frames become 30 mixed frames (a fixed 25% payload cut before
any conventional codec runs). The decoder gets all 40 back; recovery is
essentially exact in the detail bands, and the residual error lives in the
low-frequency band, where the generalized inverse can only project.
"""
import numpy as np

from ubssvc import (
    default_config,
    default_mixing_matrix,
    generalized_inverse,
    haar_forward,
    roundtrip_eval,
)
from ubssvc import synth

frames = synth.generate("sparse-detail", 40, 64, 64, seed=1234)
cfg = default_config()
report = roundtrip_eval(frames, cfg)

print(f"sources {report.source_count} -> mixed {report.mixed_count} "
      f"(+{report.tail_count} tail) -> decoded {report.decoded_count}")
print(f"mean PSNR over the sequence: {report.quality.mean_psnr:.2f} dB")
stats = report.recovery
print(f"coefficient columns: total={stats.total_columns} zero={stats.zero_columns} "
      f"clean={stats.clean_columns} forced={stats.forced_columns}")

worst = int(np.argmin(report.quality.per_frame_psnr))
best = int(np.argmax(report.quality.per_frame_psnr))
print(f"best frame {best}: {report.quality.per_frame_psnr[best]:.2f} dB, "
      f"worst frame {worst}: {report.quality.per_frame_psnr[worst]:.2f} dB")

# Where does the error live? Compare band energies of the reconstruction
# error for the first block.
matrix = default_mixing_matrix()
projector = generalized_inverse(matrix) @ matrix.entries
from ubssvc import decode_sequence, encode_sequence  # noqa: E402

decoded, _ = decode_sequence(encode_sequence(frames, cfg), cfg)
for band in ("ll", "lh", "hl", "hh"):
    err = 0.0
    for src, rec in zip(frames[:4], decoded[:4]):
        diff = getattr(haar_forward(src), band) - getattr(haar_forward(rec), band)
        err += float(np.sum(diff**2))
    print(f"error energy in {band}: {err:12.4f}")
print("-> the ll band carries the loss; detail bands are recovered")

# The ll loss is exactly the projector deficit: (A+ A - I) applied to the
# source ll coefficients.
src_ll = np.stack([haar_forward(f).ll.ravel() for f in frames[:4]])
predicted = (projector - np.eye(4)) @ src_ll
print(f"predicted ll error energy: {float(np.sum(predicted**2)):12.4f}")
