"""Independent face-pyramid features for a PGM, one value per line.

Uses scipy's separable filters with edge replication instead of the library's
loops. Regenerate with:
    python3 tests/oracles/pyramid_oracle.py tests/data/face48.pgm tests/data/face48_oracle.txt
"""
import math
import sys

import numpy as np
from scipy import ndimage


def read_pgm(path):
    data = open(path, "rb").read()
    tokens, pos = [], 0
    while len(tokens) < 4:
        while data[pos:pos + 1].isspace():
            pos += 1
        if data[pos:pos + 1] == b"#":
            pos = data.index(b"\n", pos) + 1
            continue
        end = pos
        while not data[end:end + 1].isspace():
            end += 1
        tokens.append(data[pos:end])
        pos = end
    assert tokens[0] == b"P5" and tokens[3] == b"255"
    w, h = int(tokens[1]), int(tokens[2])
    return np.frombuffer(data[pos + 1:pos + 1 + w * h], dtype=np.uint8).reshape(h, w).astype(np.float64)


def blur(img, sigma):
    r = math.ceil(3 * sigma)
    t = np.arange(-r, r + 1, dtype=np.float64)
    k = np.exp(-(t * t) / (2 * sigma * sigma))
    k /= k.sum()
    out = ndimage.correlate1d(img, k, axis=1, mode="nearest")
    return ndimage.correlate1d(out, k, axis=0, mode="nearest")


def derivatives(img):
    p = np.pad(img, 1, mode="edge")
    c = p[1:-1, 1:-1]
    left, right, up, down = p[1:-1, :-2], p[1:-1, 2:], p[:-2, 1:-1], p[2:, 1:-1]
    ix = (right - left) / 2
    iy = (down - up) / 2
    ixx = right - 2 * c + left
    iyy = down - 2 * c + up
    q = np.pad(ix, 1, mode="edge")
    ixy = (q[2:, 1:-1] - q[:-2, 1:-1]) / 2
    return [ix, iy, ixx, iyy, ixy]


def level_stats(img):
    maps = derivatives(img)
    out = []
    n = img.shape[0] // 4
    for wy in range(n):
        for wx in range(n):
            blocks = [m[4 * wy:4 * wy + 4, 4 * wx:4 * wx + 4] for m in maps]
            out += [b.mean() for b in blocks] + [b.std() for b in blocks]
    return out


def features(face, base_sigma=1.0, scales=3):
    out, i0, sigma = [], face, base_sigma
    for _ in range(scales):
        i1 = blur(i0, sigma)
        i2 = blur(i1, math.sqrt(2) * sigma)
        out += level_stats(i0) + level_stats(i1) + level_stats(i2)
        i0, sigma = i2, sigma * 2
    return out


if __name__ == "__main__":
    values = features(read_pgm(sys.argv[1]))
    with open(sys.argv[2], "w") as f:
        f.writelines(f"{float(v)!r}\n" for v in values)
