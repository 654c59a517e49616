#!/usr/bin/env python3
"""Synthetic lead-vehicle speed and road-grade profile (600 s at 10 Hz).

Rolling terrain with a steep downhill section around t = 360..430 s, during
which the lead vehicle brakes hard near t = 390 s. Output columns: t [s],
v1 [m/s], phi [rad]. Deterministic; no random draws.

usage: gen_synthetic_data.py [output.csv]
"""
import math
import sys


def smoothstep(x):
    x = min(max(x, 0.0), 1.0)
    return x * x * (3.0 - 2.0 * x)


def bump(t, start, rise, hold):
    """0 -> 1 over `rise` s starting at `start`, held `hold` s, back over `rise` s."""
    return smoothstep((t - start) / rise) - smoothstep((t - start - rise - hold) / rise)


def lead_speed(t):
    v = 20.0 + 1.2 * math.sin(2 * math.pi * t / 140.0) + 0.6 * math.sin(2 * math.pi * t / 47.0 + 0.7)
    # Hard brake from ~20 to ~6 m/s over 5 s, slow recovery over 25 s.
    brake = smoothstep((t - 388.0) / 5.0) - smoothstep((t - 405.0) / 25.0)
    return v - 14.0 * brake


def grade(t):
    deg = 1.5 * math.sin(2 * math.pi * t / 210.0) + 0.8 * math.sin(2 * math.pi * t / 63.0 + 1.3)
    deg -= 6.0 * bump(t, 355.0, 15.0, 45.0)
    return math.radians(deg)


def main():
    path = sys.argv[1] if len(sys.argv) > 1 else "data/example4_synthetic.csv"
    with open(path, "w", newline="\n") as f:
        f.write("t,v1,phi\n")
        for k in range(6001):
            t = 0.1 * k
            f.write(f"{t:.1f},{lead_speed(t):.9g},{grade(t):.9g}\n")


if __name__ == "__main__":
    main()
