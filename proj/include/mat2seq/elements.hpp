#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace mat2seq {

inline constexpr int kMaxAtomicNumber = 103;

// Index = atomic number; entry 0 unused.
inline constexpr std::array<std::string_view, kMaxAtomicNumber + 1> kElementSymbols{
    "",   "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na", "Mg", "Al", "Si",
    "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",  "Cr", "Mn", "Fe", "Co", "Ni", "Cu",
    "Zn", "Ga", "Ge", "As", "Se", "Br", "Kr", "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru",
    "Rh", "Pd", "Ag", "Cd", "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr",
    "Nd", "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf", "Ta", "W",
    "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi", "Po", "At", "Rn", "Fr", "Ra", "Ac",
    "Th", "Pa", "U",  "Np", "Pu", "Am", "Cm", "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr"};

// Atom types a sequence may carry.
inline constexpr std::array<std::string_view, 89> kSequenceElements{
    "Ac", "Ag", "Al", "Ar", "As", "Au", "B",  "Ba", "Be", "Bi", "Br", "C",  "Ca", "Cd", "Ce",
    "Cl", "Co", "Cr", "Cs", "Cu", "Dy", "Er", "Eu", "F",  "Fe", "Ga", "Gd", "Ge", "H",  "He",
    "Hf", "Hg", "Ho", "I",  "In", "Ir", "K",  "Kr", "La", "Li", "Lu", "Mg", "Mn", "Mo", "N",
    "Na", "Nb", "Nd", "Ne", "Ni", "Np", "O",  "Os", "P",  "Pa", "Pb", "Pd", "Pm", "Pr", "Pt",
    "Pu", "Rb", "Re", "Rh", "Ru", "S",  "Sb", "Sc", "Se", "Si", "Sm", "Sn", "Sr", "Ta", "Tb",
    "Tc", "Te", "Th", "Ti", "Tl", "Tm", "U",  "V",  "W",  "Xe", "Y",  "Yb", "Zn", "Zr"};

inline std::optional<int> atomic_number(std::string_view symbol) {
  for (int z = 1; z <= kMaxAtomicNumber; ++z) {
    if (kElementSymbols[z] == symbol) return z;
  }
  return std::nullopt;
}

inline std::string_view element_symbol(int z) {
  return (z >= 1 && z <= kMaxAtomicNumber) ? kElementSymbols[z] : std::string_view{};
}

inline bool in_sequence_vocabulary(int z) {
  const auto symbol = element_symbol(z);
  if (symbol.empty()) return false;
  for (auto s : kSequenceElements) {
    if (s == symbol) return true;
  }
  return false;
}

}  // namespace mat2seq
