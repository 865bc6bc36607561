"""
Undersampling sweep through the command-line harness
====================================================

The harness builds patterns, simulates clean and noisy buckets, and writes
MSE and PSNR for each measurement count in the schedule. Here it runs in
process on a coarse schedule and prints the resulting curves.
"""

from pathlib import Path

from goldgi.harness import ExperimentConfig, cmd_sweep

out = Path("demo_output") / "sweep"
cfg = ExperimentConfig(k=12, out=str(out), schedule=[512, 1024, 2048, 3000, 4096])
cmd_sweep(cfg)

for path in sorted((out / "sweep").glob("*.csv")):
    print(path.stem)
    for line in path.read_text().splitlines()[1:]:
        K, mse, psnr = line.split(",")
        print(f"  K={K:>4s}  MSE {float(mse):.4f}  PSNR {psnr}")

# The same run from a shell:
#   goldgi sweep --k 12 --schedule 512,1024,2048,3000,4096 --out demo_output/sweep
