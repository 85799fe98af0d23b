#!/usr/bin/env python3
"""Regenerates the frozen golden matrices for the bundled 6-node demo.

Straight-line recomputation, independent of the Rust implementation:
Euclidean base distances from the demo coordinates, the fixed demo
throughput table, the row-by-column matrix product, and max-abs
normalization. Output is written with 17 significant digits so the
values round-trip exactly through f64.
"""
import math

COORDS = [(0.0, 3.0), (2.0, 5.0), (5.0, 3.0), (3.0, 2.0), (4.0, 0.0), (2.0, 1.0)]

THROUGHPUT = [
    [0.38376, 0.75946, 0.98935, 0.79756, 0.5215, 0.34218],
    [0.59274, 0.40255, 0.62614, 0.22095, 0.00114, 0.08130],
    [0.68207, 0.15468, 0.96613, 0.65882, 0.37673, 0.192],
    [0.9028, 0.57889, 0.41505, 0.34965, 0.61551, 0.76391],
    [0.16068, 0.88831, 0.21506, 0.6378, 0.41975, 0.47169],
    [0.24435, 0.67697, 0.44722, 0.22504, 0.80914, 0.59481],
]

N = 6

def euclid():
    d = [[0.0] * N for _ in range(N)]
    for i in range(N):
        for j in range(N):
            dx = COORDS[i][0] - COORDS[j][0]
            dy = COORDS[i][1] - COORDS[j][1]
            d[i][j] = math.sqrt(dx * dx + dy * dy)
    return d

def matmul(a, b):
    out = [[0.0] * N for _ in range(N)]
    for i in range(N):
        for j in range(N):
            acc = 0.0
            for k in range(N):
                acc += a[i][k] * b[k][j]
            out[i][j] = acc
    return out

def normalize(m):
    peak = max(abs(v) for row in m for v in row)
    return [[v / peak for v in row] for row in m]

def write_csv(path, m):
    with open(path, "w", newline="\n") as f:
        for row in m:
            f.write(",".join(repr(v) for v in row) + "\n")

if __name__ == "__main__":
    d = euclid()
    write_csv("crates/core/tests/data/demo_euclidean.csv", d)
    eff = normalize(matmul(d, THROUGHPUT))
    write_csv("crates/core/tests/data/demo_effective_code_faithful.csv", eff)
    print("d[0][1] =", repr(d[0][1]))
    print("d[0][2] =", repr(d[0][2]))
    peak = max(abs(v) for row in matmul(d, THROUGHPUT) for v in row)
    print("pre-normalization peak =", repr(peak))
    print("eff[0][0] =", repr(eff[0][0]))
    print("eff row 0 =", [round(v, 6) for v in eff[0]])
    neg = sum(1 for row in eff for v in row if v < 0.0)
    print("negative entries:", neg)
    ones = [(i, j) for i in range(N) for j in range(N) if abs(eff[i][j]) == 1.0]
    print("max-abs location(s):", ones)
