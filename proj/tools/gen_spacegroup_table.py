#!/usr/bin/env python3
"""Regenerate include/mat2seq/detail/spacegroup_table.hpp from spglib's database.

The fingerprint of a space group is computed on its primitive description:
group order, number of operations per rotation type, and per rotation type
the number of operations without a fixed point (screw axes, glide planes).
Only fingerprints shared by exactly one space-group type are emitted.

Usage: python3 tools/gen_spacegroup_table.py > include/mat2seq/detail/spacegroup_table.hpp
"""
import itertools
from collections import defaultdict
from fractions import Fraction

import numpy as np
import spglib

TYPES = [1, 2, 3, 4, 6, -1, -2, -3, -4, -6]


def rotation_type(w):
    det = round(np.linalg.det(w))
    tr = int(np.trace(w))
    if det == 1:
        return {3: 1, -1: 2, 0: 3, 1: 4, 2: 6}[tr]
    return {-3: -1, 1: -2, 0: -3, -1: -4, -2: -6}[tr]


def has_fixed_point(w, t, centering):
    k = {1: 1, 2: 2, 3: 3, 4: 4, 6: 6, -1: 2, -2: 2, -3: 6, -4: 4, -6: 6}[rotation_type(w)]
    proj = np.zeros((3, 3))
    p = np.eye(3)
    for _ in range(k):
        proj += p
        p = p @ w
    proj /= k
    intrinsic = proj @ t
    for n in itertools.product(range(-3, 4), repeat=3):
        for c in centering:
            if np.allclose(proj @ (np.array(n) + c), intrinsic, atol=1e-6):
                return True
    return False


def fingerprint(hall):
    sym = spglib.get_symmetry_from_database(hall)
    rots = sym["rotations"]
    trans = sym["translations"]
    centering = [t for w, t in zip(rots, trans) if (w == np.eye(3, dtype=int)).all()]
    seen = {}
    for w, t in zip(rots, trans):
        key = w.tobytes()
        if key not in seen:
            seen[key] = (w, t)
    counts = defaultdict(int)
    free = defaultdict(int)
    for w, t in seen.values():
        rt = rotation_type(w)
        counts[rt] += 1
        if not has_fixed_point(w, t, centering):
            free[rt] += 1
    return (len(seen),) + tuple(counts[r] for r in TYPES) + tuple(free[r] for r in TYPES)


def main():
    first_hall = {}
    for hall in range(1, 531):
        st = spglib.get_spacegroup_type(hall)
        first_hall.setdefault(st.number, (hall, st.international_short))
    table = defaultdict(list)
    for number in sorted(first_hall):
        hall, symbol = first_hall[number]
        table[fingerprint(hall)].append((number, symbol))
    rows = sorted((v[0], k) for k, v in table.items() if len(v) == 1)
    print("// Generated by tools/gen_spacegroup_table.py. Do not edit.")
    print("#pragma once\n")
    print("#include <array>\n")
    print("namespace mat2seq::detail {\n")
    print("struct SpaceGroupFingerprintRow {")
    print("  int number;")
    print("  const char* symbol;")
    print("  int order;")
    print("  // operations per rotation type 1,2,3,4,6,-1,-2,-3,-4,-6")
    print("  std::array<int, 10> counts;")
    print("  // fixed-point-free operations per rotation type, same order")
    print("  std::array<int, 10> fixed_point_free;")
    print("};\n")
    print(f"inline constexpr std::array<SpaceGroupFingerprintRow, {len(rows)}> kSpaceGroupFingerprints{{{{")
    for (number, symbol), fp in rows:
        counts = ", ".join(str(x) for x in fp[1:11])
        free = ", ".join(str(x) for x in fp[11:21])
        print(f'    {{{number}, "{symbol}", {fp[0]}, {{{counts}}}, {{{free}}}}},')
    print("}};\n")
    print("}  // namespace mat2seq::detail")


if __name__ == "__main__":
    main()
