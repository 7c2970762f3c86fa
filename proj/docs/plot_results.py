#!/usr/bin/env python3
"""Plot the CSV artifacts produced by the bqpe CLI.

Usage: plot_results.py <noon_curve.csv> [adaptive_compare.csv]

Writes noon_curve.png (error vs photon number, log scale, one line per
prior width) and, when given a comparison table, adaptive_compare.png.
"""

import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def plot_noon_curve(path):
    df = pd.read_csv(path)
    fig, ax = plt.subplots(figsize=(6, 4))
    for m, group in df.groupby("m"):
        ax.plot(group["n"], group["delta_trunc"], marker="o", label=f"width {m}")
    ax.set_xlabel("photon number n")
    ax.set_ylabel("minimum mean-square error")
    ax.set_yscale("log")
    ax.legend()
    fig.tight_layout()
    fig.savefig("noon_curve.png", dpi=150)
    print("wrote noon_curve.png")


def plot_adaptive(path):
    df = pd.read_csv(path)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(df["s"], df["adaptive_mmse"], marker="o", label="sequential single photons")
    if "single_shot_mmse" in df.columns:
        ax.plot(df["s"], df["single_shot_mmse"], marker="s", fillstyle="none",
                label="one optimized n = s probe")
    ax.set_xlabel("step s (photon budget)")
    ax.set_ylabel("minimum mean-square error")
    ax.legend()
    fig.tight_layout()
    fig.savefig("adaptive_compare.png", dpi=150)
    print("wrote adaptive_compare.png")


def main():
    if len(sys.argv) < 2:
        sys.exit(__doc__)
    plot_noon_curve(sys.argv[1])
    if len(sys.argv) > 2:
        plot_adaptive(sys.argv[2])


if __name__ == "__main__":
    main()
