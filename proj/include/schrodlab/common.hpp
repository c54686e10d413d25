#pragma once
#include <complex>
#include <cstdint>
#include <string>

namespace schrodlab {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

inline constexpr const char* kVersionTag = "schrodlab-0.1.0";

// FNV-1a over raw bytes; used to stamp output records with a config fingerprint.
inline std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex16(std::uint64_t v);

}  // namespace schrodlab
