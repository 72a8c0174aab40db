#!/usr/bin/env python3
"""Independent reference implementations used to pin frozen expected values
in the C++ test suite. Runs standalone and prints the constants that were
copied into the tests; re-run it whenever a golden value needs auditing.

Usage: python3 tests/oracles/reference_oracles.py
"""

import math

MASK = (1 << 64) - 1


def splitmix64(state):
    state = (state + 0x9E3779B97F4A7C15) & MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return state, (z ^ (z >> 31)) & MASK


def mix_seed(base, stream):
    s = (base ^ ((0x9E3779B97F4A7C15 * (stream + 1)) & MASK)) & MASK
    _, v = splitmix64(s)
    return v


class Xoshiro256pp:
    def __init__(self, seed):
        s = seed & MASK
        self.s = []
        for _ in range(4):
            s, v = splitmix64(s)
            self.s.append(v)

    @staticmethod
    def _rotl(x, k):
        return ((x << k) | (x >> (64 - k))) & MASK

    def next(self):
        s = self.s
        result = (self._rotl((s[0] + s[3]) & MASK, 23) + s[0]) & MASK
        t = (s[1] << 17) & MASK
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = self._rotl(s[3], 45)
        return result

    def uniform(self):
        return (self.next() >> 11) * 2.0 ** -53

    def gaussian_pair(self):
        u1 = self.uniform()
        u2 = self.uniform()
        r = math.sqrt(-2.0 * math.log1p(-u1))
        theta = 2.0 * math.pi * u2
        return r * math.cos(theta), r * math.sin(theta)


def generate_blobs(n_points, centers, stddev, seed):
    rng = Xoshiro256pp(seed)
    pts = []
    for i in range(n_points):
        cx, cy = centers[i % len(centers)]
        z0, z1 = rng.gaussian_pair()
        pts.append((cx + stddev * z0, cy + stddev * z1))
    return pts


def print_rng_goldens():
    print("== xoshiro256++ next(), seed 42, first 8 ==")
    rng = Xoshiro256pp(42)
    for _ in range(8):
        print(f"{rng.next()}ULL,")
    print("== mix_seed(base=1, stream=0..3) ==")
    for k in range(4):
        print(f"{mix_seed(1, k)}ULL,")
    print("== gaussian pairs, seed 7, first 4 ==")
    rng = Xoshiro256pp(7)
    for _ in range(4):
        z0, z1 = rng.gaussian_pair()
        print(f"{{{z0!r}, {z1!r}}},")


def print_blob_goldens():
    print("== blobs: n=10, centers (-4,0),(4,0), stddev 0.5, seed 42 ==")
    pts = generate_blobs(10, [(-4.0, 0.0), (4.0, 0.0)], 0.5, 42)
    for x, y in pts:
        print(f"{{{x!r}, {y!r}}},")


def print_spectral_goldens():
    import numpy as np

    pts = generate_blobs(20, [(-3.0, 0.0), (3.0, 0.0)], 0.8, 5)
    gamma = 0.5
    n = len(pts)
    a = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            dx = pts[i][0] - pts[j][0]
            dy = pts[i][1] - pts[j][1]
            a[i, j] = math.exp(-gamma * (dx * dx + dy * dy))
    d = a.sum(axis=1)
    dinv = 1.0 / np.sqrt(d)
    lap = np.eye(n) - (dinv[:, None] * a) * dinv[None, :]
    vals = np.linalg.eigvalsh(lap)
    print("== normalized-Laplacian eigenvalues: 20-pt blobs (seed 5), gamma 0.5 ==")
    for v in vals:
        print(f"{v!r},")


if __name__ == "__main__":
    print_rng_goldens()
    print_blob_goldens()
    print_spectral_goldens()
