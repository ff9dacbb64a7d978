#pragma once

#include <optional>
#include <string_view>

namespace tml {

// Realization status of a region/proposition. Actual and Absent live at the
// dynamic (event) level, Potential at the static level, Hole is outside both.
enum class Mode { Actual, Absent, Potential, Hole };

// Negation over modes: Actual -> Potential, Potential -> Absent,
// Absent -> Actual, Hole -> Hole. The restriction to the three reality
// modes is a 3-cycle, so double negation is not involutive.
constexpr Mode neg(Mode m) {
  switch (m) {
    case Mode::Actual: return Mode::Potential;
    case Mode::Potential: return Mode::Absent;
    case Mode::Absent: return Mode::Actual;
    case Mode::Hole: return Mode::Hole;
  }
  return Mode::Hole;
}

// Inverse of neg on the 3-cycle; Hole maps to Hole.
constexpr Mode neg_inverse(Mode m) {
  switch (m) {
    case Mode::Actual: return Mode::Absent;
    case Mode::Potential: return Mode::Actual;
    case Mode::Absent: return Mode::Potential;
    case Mode::Hole: return Mode::Hole;
  }
  return Mode::Hole;
}

// Degree of realization used by the join/meet rules: Actual > Potential >
// Absent. Hole sits outside the order and is handled separately.
constexpr int realization_rank(Mode m) {
  switch (m) {
    case Mode::Actual: return 3;
    case Mode::Potential: return 2;
    case Mode::Absent: return 1;
    case Mode::Hole: return 0;
  }
  return 0;
}

const char* to_string(Mode m);
std::optional<Mode> mode_from(std::string_view word);

}  // namespace tml
