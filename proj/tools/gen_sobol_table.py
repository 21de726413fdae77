#!/usr/bin/env python3
"""Emit include/aego/sobol_directions.hpp from the Joe-Kuo (new-joe-kuo-6.21201)
direction numbers shipped with scipy."""
import os
import sys

import numpy as np
import scipy

DIMS = int(sys.argv[1]) if len(sys.argv) > 1 else 1024

path = os.path.join(os.path.dirname(scipy.__file__), "stats", "_sobol_direction_numbers.npz")
table = np.load(path)
poly, vinit = table["poly"], table["vinit"]

out = []
out.append("// Generated by tools/gen_sobol_table.py. Do not edit.")
out.append("// Joe-Kuo direction numbers (new-joe-kuo-6.21201), first %d dimensions." % DIMS)
out.append("#pragma once")
out.append("")
out.append("#include <array>")
out.append("#include <cstdint>")
out.append("")
out.append("namespace aego::detail {")
out.append("")
out.append("struct SobolDirection {")
out.append("  std::uint32_t degree;")
out.append("  std::uint32_t coeffs;  // interior polynomial coefficients a")
out.append("  std::array<std::uint32_t, 18> m;")
out.append("};")
out.append("")
out.append("inline constexpr std::size_t kSobolMaxDimension = %d;" % DIMS)
out.append("")
out.append("inline constexpr std::array<SobolDirection, kSobolMaxDimension> kSobolDirections{{")
for d in range(DIMS):
    p = int(poly[d])
    deg = p.bit_length() - 1
    a = (p >> 1) & ((1 << max(deg - 1, 0)) - 1) if deg > 0 else 0
    ms = [int(v) for v in vinit[d]]
    if d == 0:
        deg, a = 0, 0
    out.append("    {%d, %d, {%s}}," % (deg, a, ", ".join(str(v) for v in ms)))
out.append("}};")
out.append("")
out.append("}  // namespace aego::detail")
sys.stdout.write("\n".join(out) + "\n")
