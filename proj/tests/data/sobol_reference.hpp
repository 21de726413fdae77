// Generated by tools/gen_sobol_reference.py from scipy.stats.qmc.Sobol(scramble=False).
#pragma once

#include <array>
#include <cstdint>

namespace sobol_reference {

inline constexpr int kBits = 6;
inline constexpr std::array<int, 10> kColumns{0, 1, 2, 3, 4, 9, 20, 99, 511, 1023};

// kGrayRows[i][c]: coordinate kColumns[c] of scipy row i, times 2^kBits.
inline constexpr std::array<std::array<std::uint32_t, 10>, 64> kGrayRows{{
    {0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {32, 32, 32, 32, 32, 32, 32, 32, 32, 32},
    {48, 16, 16, 16, 48, 48, 16, 48, 48, 48},
    {16, 48, 48, 48, 16, 16, 48, 16, 16, 16},
    {24, 24, 40, 56, 24, 40, 8, 56, 24, 56},
    {56, 56, 8, 24, 56, 8, 40, 24, 56, 24},
    {40, 8, 56, 40, 40, 24, 24, 8, 40, 8},
    {8, 40, 24, 8, 8, 56, 56, 40, 8, 40},
    {12, 20, 60, 28, 36, 20, 12, 60, 12, 4},
    {44, 52, 28, 60, 4, 52, 44, 28, 44, 36},
    {60, 4, 44, 12, 20, 36, 28, 12, 60, 52},
    {28, 36, 12, 44, 52, 4, 60, 44, 28, 20},
    {20, 12, 20, 36, 60, 60, 4, 4, 20, 60},
    {52, 44, 52, 4, 28, 28, 36, 36, 52, 28},
    {36, 28, 4, 52, 12, 12, 20, 52, 36, 12},
    {4, 60, 36, 20, 44, 44, 52, 20, 4, 44},
    {6, 30, 30, 42, 18, 10, 46, 2, 54, 58},
    {38, 62, 62, 10, 50, 42, 14, 34, 22, 26},
    {54, 14, 14, 58, 34, 58, 62, 50, 6, 10},
    {22, 46, 46, 26, 2, 26, 30, 18, 38, 42},
    {30, 6, 54, 18, 10, 34, 38, 58, 46, 2},
    {62, 38, 22, 50, 42, 2, 6, 26, 14, 34},
    {46, 22, 38, 2, 58, 18, 54, 10, 30, 50},
    {14, 54, 6, 34, 26, 50, 22, 42, 62, 18},
    {10, 10, 34, 54, 54, 30, 34, 62, 58, 62},
    {42, 42, 2, 22, 22, 62, 2, 30, 26, 30},
    {58, 26, 50, 38, 6, 46, 50, 14, 10, 14},
    {26, 58, 18, 6, 38, 14, 18, 46, 42, 46},
    {18, 18, 10, 14, 46, 54, 42, 6, 34, 6},
    {50, 50, 42, 46, 14, 22, 10, 38, 2, 38},
    {34, 2, 26, 30, 30, 6, 58, 54, 18, 54},
    {2, 34, 58, 62, 62, 38, 26, 22, 50, 22},
    {3, 17, 45, 35, 9, 3, 21, 19, 59, 55},
    {35, 49, 13, 3, 41, 35, 53, 51, 27, 23},
    {51, 1, 61, 51, 57, 51, 5, 35, 11, 7},
    {19, 33, 29, 19, 25, 19, 37, 3, 43, 39},
    {27, 9, 5, 27, 17, 43, 29, 43, 35, 15},
    {59, 41, 37, 59, 49, 11, 61, 11, 3, 47},
    {43, 25, 21, 11, 33, 27, 13, 27, 19, 63},
    {11, 57, 53, 43, 1, 59, 45, 59, 51, 31},
    {15, 5, 17, 63, 45, 23, 25, 47, 55, 51},
    {47, 37, 49, 31, 13, 55, 57, 15, 23, 19},
    {63, 21, 1, 47, 29, 39, 9, 31, 7, 3},
    {31, 53, 33, 15, 61, 7, 41, 63, 39, 35},
    {23, 29, 57, 7, 53, 63, 17, 23, 47, 11},
    {55, 61, 25, 39, 21, 31, 49, 55, 15, 43},
    {39, 13, 41, 23, 5, 15, 1, 39, 31, 59},
    {7, 45, 9, 55, 37, 47, 33, 7, 63, 27},
    {5, 15, 51, 9, 27, 9, 59, 17, 13, 13},
    {37, 47, 19, 41, 59, 41, 27, 49, 45, 45},
    {53, 31, 35, 25, 43, 57, 43, 33, 61, 61},
    {21, 63, 3, 57, 11, 25, 11, 1, 29, 29},
    {29, 23, 27, 49, 3, 33, 51, 41, 21, 53},
    {61, 55, 59, 17, 35, 1, 19, 9, 53, 21},
    {45, 7, 11, 33, 51, 17, 35, 25, 37, 5},
    {13, 39, 43, 1, 19, 49, 3, 57, 5, 37},
    {9, 27, 15, 21, 63, 29, 55, 45, 1, 9},
    {41, 59, 47, 53, 31, 61, 23, 13, 33, 41},
    {57, 11, 31, 5, 15, 45, 39, 29, 49, 57},
    {25, 43, 63, 37, 47, 13, 7, 61, 17, 25},
    {17, 3, 39, 45, 39, 53, 63, 21, 25, 49},
    {49, 35, 7, 13, 7, 21, 31, 53, 57, 17},
    {33, 19, 55, 61, 23, 5, 47, 37, 41, 1},
    {1, 51, 23, 29, 55, 37, 15, 5, 9, 33},
}};

}  // namespace sobol_reference
