#!/usr/bin/env python3
"""Freezes unscrambled scipy Sobol points as a test oracle.

scipy emits points in Gray-code order; row i there equals the natural-order
point with index i ^ (i >> 1). Values are stored as integers over 2**BITS.
"""
import sys

from scipy.stats import qmc

BITS = 6
ROWS = 2**BITS
COLUMNS = [0, 1, 2, 3, 4, 9, 20, 99, 511, 1023]


def main(out):
    pts = qmc.Sobol(1024, scramble=False).random(ROWS)
    lines = [
        "// Generated by tools/gen_sobol_reference.py from scipy.stats.qmc.Sobol(scramble=False).",
        "#pragma once",
        "",
        "#include <array>",
        "#include <cstdint>",
        "",
        "namespace sobol_reference {",
        "",
        f"inline constexpr int kBits = {BITS};",
        f"inline constexpr std::array<int, {len(COLUMNS)}> kColumns{{{', '.join(map(str, COLUMNS))}}};",
        "",
        "// kGrayRows[i][c]: coordinate kColumns[c] of scipy row i, times 2^kBits.",
        f"inline constexpr std::array<std::array<std::uint32_t, {len(COLUMNS)}>, {ROWS}> kGrayRows{{{{",
    ]
    for row in pts:
        vals = [int(round(row[c] * ROWS)) for c in COLUMNS]
        assert all(abs(v / ROWS - row[c]) == 0 for v, c in zip(vals, COLUMNS))
        lines.append("    {" + ", ".join(map(str, vals)) + "},")
    lines += ["}};", "", "}  // namespace sobol_reference", ""]
    with open(out, "w") as f:
        f.write("\n".join(lines))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/data/sobol_reference.hpp")
