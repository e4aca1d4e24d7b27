#!/usr/bin/env python3
"""Closed-form factors of the one-factor loop g = a [[1, w/z], [-conj(w) z, 1]], a = (1+|w|^2)^(-1/2).

    g_- = l = [[1, w/z], [0, 1]]
    g0      = diag(s, 1/s),  s = (1+|w|^2)^(1/2)
    g_+ = u = [[1, 0], [-conj(w) z, 1]]
    m0 = 1, a0 = s

Usage: golden_single_zeta.py <out_dir> [w_re w_im]
"""
import json
import math
import sys
from pathlib import Path


def series(lo, coeffs):
    hi = lo + len(coeffs) - 1
    return {"lo": lo, "hi": hi, "coeffs": [[c.real + 0.0, c.imag + 0.0] for c in coeffs],
            "reliable": [lo, hi], "closed": [True, True]}


def loop(window, entries):
    return {"window": list(window), "entries": entries}


def main():
    out = Path(sys.argv[1])
    w = complex(float(sys.argv[2]), float(sys.argv[3])) if len(sys.argv) > 3 else complex(0.5, 0.0)
    s = math.sqrt(1 + abs(w) ** 2)
    a = 1 / s
    g = loop((-1, 1), [[series(0, [a]), series(-1, [a * w])],
                       [series(1, [-a * w.conjugate()]), series(0, [a])]])
    l = loop((-1, 0), [[series(0, [1]), series(-1, [w])], [series(0, [0]), series(0, [1])]])
    u = loop((0, 1), [[series(0, [1]), series(0, [0])], [series(1, [-w.conjugate()]), series(0, [1])]])
    out.mkdir(parents=True, exist_ok=True)
    files = {
        "loop.json": g,
        "triangular.json": {"l": l, "m0": [1.0, 0.0], "a0": s, "u": u},
        "birkhoff.json": {"g_minus": l, "g0": [[[s, 0.0], [0.0, 0.0]], [[0.0, 0.0], [a, 0.0]]],
                          "g_plus": u, "condition_estimate": None, "positive_residual": 0.0},
        "coords.json": {"eta": [], "zeta": [[w.real, w.imag]], "chi0_im": 0.0, "chi_plus": []},
    }
    for name, body in files.items():
        (out / name).write_text(json.dumps(body, indent=2) + "\n")


if __name__ == "__main__":
    main()
