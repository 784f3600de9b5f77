#!/usr/bin/env python3
# Copyright 2026 The SRAIS Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Write a synthetic Waveform-format CSV (Breiman's three-wave generator)."""

import argparse
import random
import sys

FEATURES = 21


def base_waves():
    h1 = [max(6 - abs(i - 11), 0) for i in range(1, FEATURES + 1)]
    h2 = [max(6 - abs(i - 15), 0) for i in range(1, FEATURES + 1)]
    h3 = [max(6 - abs(i - 7), 0) for i in range(1, FEATURES + 1)]
    return h1, h2, h3


def generate(rows, seed):
    rng = random.Random(seed)
    h1, h2, h3 = base_waves()
    pairs = [(h1, h2), (h1, h3), (h2, h3)]
    out = []
    for _ in range(rows):
        cls = rng.randrange(3)
        a, b = pairs[cls]
        u = rng.random()
        x = [u * a[i] + (1 - u) * b[i] + rng.gauss(0.0, 1.0) for i in range(FEATURES)]
        out.append((x, cls))
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--rows", type=int, default=200)
    ap.add_argument("--seed", type=int, default=20260104)
    ap.add_argument("--no-header", action="store_true")
    ap.add_argument("output", nargs="?", default="-")
    args = ap.parse_args()

    sink = sys.stdout if args.output == "-" else open(args.output, "w", newline="")
    with sink:
        if not args.no_header:
            sink.write(",".join([f"x{i}" for i in range(1, FEATURES + 1)] + ["class"]) + "\n")
        for x, cls in generate(args.rows, args.seed):
            sink.write(",".join(f"{v:.2f}" for v in x) + f",{cls}\n")


if __name__ == "__main__":
    main()
