#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "qbinom/error.hpp"

namespace qbinom::qmodel {

// Homodyne measures the field quadrature (outcomes -lambda / +lambda);
// counting measures the photon number (outcomes 0 / 1).
enum class Detection { homodyne, counting };

inline Detection parse_detection(std::string_view s) {
  if (s == "homodyne") return Detection::homodyne;
  if (s == "counting") return Detection::counting;
  throw DomainError("unknown detection '" + std::string(s) + "'");
}

inline const char* to_string(Detection d) { return d == Detection::homodyne ? "homodyne" : "counting"; }

// Observation increment for outcome index o (1 = plus / click).
inline double outcome_value(std::uint8_t o, Detection d, double lambda) {
  if (d == Detection::homodyne) return o ? lambda : -lambda;
  return o ? 1.0 : 0.0;
}

}  // namespace qbinom::qmodel
