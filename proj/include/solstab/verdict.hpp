#pragma once

#include <string_view>

namespace solstab {

/// Margins within this band are reported as inconclusive.
inline constexpr double kVerdictDeadZone = 1e-9;

enum class Verdict { Stable, Unstable, Inconclusive };

constexpr std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Stable: return "stable";
    case Verdict::Unstable: return "unstable";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

/// Strict test value < threshold, with a dead zone around equality.
constexpr Verdict strict_verdict(double value, double threshold) noexcept {
  const double margin = threshold - value;
  if (margin > kVerdictDeadZone) return Verdict::Stable;
  if (margin < -kVerdictDeadZone) return Verdict::Unstable;
  return Verdict::Inconclusive;
}

}  // namespace solstab
