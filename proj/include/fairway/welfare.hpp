#pragma once

#include <algorithm>

#include "fairway/allocation.hpp"

namespace fairway {

// Social welfare over burden allocations, sign-flipped so that larger is
// always better:
//   Utilitarian  -sum      (total burden)
//   Harsanyian   -mean     (expected burden behind the veil)
//   Rawlsian     -max      (burden of the worst-off individual)
//   Egalitarian  -stddev   (population spread; 0 when everyone is equal)
enum class Ideology { Utilitarian, Harsanyian, Rawlsian, Egalitarian };

inline constexpr const char* ideology_name(Ideology i) {
  switch (i) {
    case Ideology::Utilitarian: return "utilitarian";
    case Ideology::Harsanyian: return "harsanyian";
    case Ideology::Rawlsian: return "rawlsian";
    case Ideology::Egalitarian: return "egalitarian";
  }
  return "?";
}

inline double welfare(const Allocation& a, Ideology ideology) {
  validate(a);
  switch (ideology) {
    case Ideology::Utilitarian:
      return -sum(a);
    case Ideology::Harsanyian:
      return -mean(a);
    case Ideology::Rawlsian:
      return -*std::max_element(a.values.begin(), a.values.end());
    case Ideology::Egalitarian:
      return -population_stddev(a);
  }
  throw Error("InvalidValue", "unknown ideology");
}

}  // namespace fairway
