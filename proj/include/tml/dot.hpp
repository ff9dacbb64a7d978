#pragma once

#include <string>

#include "tml/chrono.hpp"
#include "tml/kernel.hpp"

namespace tml {

// DOT rendering of the static model: one cluster per thimac honoring
// nesting, one labeled node per action, solid flow edges, dashed trigger
// edges. Byte-identical across runs for equal inputs.
std::string dot_static(const StaticModel& model);

// DOT rendering of a chronology: one box per event, solid sequence edges,
// dashed trigger edges, alternative fan-out labeled with a disjunction
// mark. With a trace, events are filled when their (last) occurrence is
// Actual and hollow when Absent. Throws std::invalid_argument when the
// trace does not replay on the chronology.
std::string dot_chronology(const Chronology& chronology,
                           const Trace* trace = nullptr);

}  // namespace tml
