// Generated by tools/gen_spacegroup_table.py. Do not edit.
#pragma once

#include <array>

namespace mat2seq::detail {

struct SpaceGroupFingerprintRow {
  int number;
  const char* symbol;
  int order;
  // operations per rotation type 1,2,3,4,6,-1,-2,-3,-4,-6
  std::array<int, 10> counts;
  // fixed-point-free operations per rotation type, same order
  std::array<int, 10> fixed_point_free;
};

inline constexpr std::array<SpaceGroupFingerprintRow, 42> kSpaceGroupFingerprints{{
    {1, "P1", 1, {1, 0, 0, 0, 0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    {2, "P-1", 2, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    {4, "P2_1", 2, {1, 1, 0, 0, 0, 0, 0, 0, 0, 0}, {0, 1, 0, 0, 0, 0, 0, 0, 0, 0}},
    {11, "P2_1/m", 4, {1, 1, 0, 0, 0, 1, 1, 0, 0, 0}, {0, 1, 0, 0, 0, 0, 0, 0, 0, 0}},
    {14, "P2_1/c", 4, {1, 1, 0, 0, 0, 1, 1, 0, 0, 0}, {0, 1, 0, 0, 0, 0, 1, 0, 0, 0}},
    {18, "P2_12_12", 4, {1, 3, 0, 0, 0, 0, 0, 0, 0, 0}, {0, 2, 0, 0, 0, 0, 0, 0, 0, 0}},
    {19, "P2_12_12_1", 4, {1, 3, 0, 0, 0, 0, 0, 0, 0, 0}, {0, 3, 0, 0, 0, 0, 0, 0, 0, 0}},
    {59, "Pmmn", 8, {1, 3, 0, 0, 0, 1, 3, 0, 0, 0}, {0, 2, 0, 0, 0, 0, 1, 0, 0, 0}},
    {61, "Pbca", 8, {1, 3, 0, 0, 0, 1, 3, 0, 0, 0}, {0, 3, 0, 0, 0, 0, 3, 0, 0, 0}},
    {62, "Pnma", 8, {1, 3, 0, 0, 0, 1, 3, 0, 0, 0}, {0, 3, 0, 0, 0, 0, 2, 0, 0, 0}},
    {84, "P4_2/m", 8, {1, 1, 0, 2, 0, 1, 1, 0, 2, 0}, {0, 0, 0, 2, 0, 0, 0, 0, 0, 0}},
    {85, "P4/n", 8, {1, 1, 0, 2, 0, 1, 1, 0, 2, 0}, {0, 0, 0, 0, 0, 0, 1, 0, 0, 0}},
    {90, "P42_12", 8, {1, 5, 0, 2, 0, 0, 0, 0, 0, 0}, {0, 2, 0, 0, 0, 0, 0, 0, 0, 0}},
    {94, "P4_22_12", 8, {1, 5, 0, 2, 0, 0, 0, 0, 0, 0}, {0, 2, 0, 2, 0, 0, 0, 0, 0, 0}},
    {113, "P-42_1m", 8, {1, 3, 0, 0, 0, 0, 2, 0, 2, 0}, {0, 2, 0, 0, 0, 0, 0, 0, 0, 0}},
    {114, "P-42_1c", 8, {1, 3, 0, 0, 0, 0, 2, 0, 2, 0}, {0, 2, 0, 0, 0, 0, 2, 0, 0, 0}},
    {124, "P4/mcc", 16, {1, 5, 0, 2, 0, 1, 5, 0, 2, 0}, {0, 0, 0, 0, 0, 0, 4, 0, 0, 0}},
    {125, "P4/nbm", 16, {1, 5, 0, 2, 0, 1, 5, 0, 2, 0}, {0, 0, 0, 0, 0, 0, 3, 0, 0, 0}},
    {126, "P4/nnc", 16, {1, 5, 0, 2, 0, 1, 5, 0, 2, 0}, {0, 0, 0, 0, 0, 0, 5, 0, 0, 0}},
    {127, "P4/mbm", 16, {1, 5, 0, 2, 0, 1, 5, 0, 2, 0}, {0, 2, 0, 0, 0, 0, 2, 0, 0, 0}},
    {128, "P4/mnc", 16, {1, 5, 0, 2, 0, 1, 5, 0, 2, 0}, {0, 2, 0, 0, 0, 0, 4, 0, 0, 0}},
    {129, "P4/nmm", 16, {1, 5, 0, 2, 0, 1, 5, 0, 2, 0}, {0, 2, 0, 0, 0, 0, 1, 0, 0, 0}},
    {130, "P4/ncc", 16, {1, 5, 0, 2, 0, 1, 5, 0, 2, 0}, {0, 2, 0, 0, 0, 0, 5, 0, 0, 0}},
    {135, "P4_2/mbc", 16, {1, 5, 0, 2, 0, 1, 5, 0, 2, 0}, {0, 2, 0, 2, 0, 0, 4, 0, 0, 0}},
    {136, "P4_2/mnm", 16, {1, 5, 0, 2, 0, 1, 5, 0, 2, 0}, {0, 2, 0, 2, 0, 0, 2, 0, 0, 0}},
    {140, "I4/mcm", 16, {1, 5, 0, 2, 0, 1, 5, 0, 2, 0}, {0, 0, 0, 0, 0, 0, 2, 0, 0, 0}},
    {168, "P6", 6, {1, 1, 2, 0, 2, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    {173, "P6_3", 6, {1, 1, 2, 0, 2, 0, 0, 0, 0, 0}, {0, 1, 0, 0, 2, 0, 0, 0, 0, 0}},
    {174, "P-6", 6, {1, 0, 2, 0, 0, 0, 1, 0, 0, 2}, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    {175, "P6/m", 12, {1, 1, 2, 0, 2, 1, 1, 2, 0, 2}, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    {176, "P6_3/m", 12, {1, 1, 2, 0, 2, 1, 1, 2, 0, 2}, {0, 1, 0, 0, 2, 0, 0, 0, 0, 0}},
    {177, "P622", 12, {1, 7, 2, 0, 2, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    {182, "P6_322", 12, {1, 7, 2, 0, 2, 0, 0, 0, 0, 0}, {0, 1, 0, 0, 2, 0, 0, 0, 0, 0}},
    {183, "P6mm", 12, {1, 1, 2, 0, 2, 0, 6, 0, 0, 0}, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    {184, "P6cc", 12, {1, 1, 2, 0, 2, 0, 6, 0, 0, 0}, {0, 0, 0, 0, 0, 0, 6, 0, 0, 0}},
    {191, "P6/mmm", 24, {1, 7, 2, 0, 2, 1, 7, 2, 0, 2}, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    {192, "P6/mcc", 24, {1, 7, 2, 0, 2, 1, 7, 2, 0, 2}, {0, 0, 0, 0, 0, 0, 6, 0, 0, 0}},
    {198, "P2_13", 12, {1, 3, 8, 0, 0, 0, 0, 0, 0, 0}, {0, 3, 0, 0, 0, 0, 0, 0, 0, 0}},
    {205, "Pa-3", 24, {1, 3, 8, 0, 0, 1, 3, 8, 0, 0}, {0, 3, 0, 0, 0, 0, 3, 0, 0, 0}},
    {222, "Pn-3n", 48, {1, 9, 8, 6, 0, 1, 9, 8, 6, 0}, {0, 0, 0, 0, 0, 0, 9, 0, 0, 0}},
    {223, "Pm-3n", 48, {1, 9, 8, 6, 0, 1, 9, 8, 6, 0}, {0, 0, 0, 6, 0, 0, 6, 0, 0, 0}},
    {226, "Fm-3c", 48, {1, 9, 8, 6, 0, 1, 9, 8, 6, 0}, {0, 0, 0, 0, 0, 0, 6, 0, 0, 0}},
}};

}  // namespace mat2seq::detail
