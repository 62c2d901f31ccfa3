#pragma once

#include <optional>
#include <vector>

#include "confed/events.hpp"
#include "confed/solution.hpp"

namespace confed::detail {

struct EventHit {
  double tstar = 0.0;
  std::size_t idx = 0;
};

// First direction-respecting root inside the step covered by si, or nullopt.
// gprev holds the condition values at si.ta (an exact zero there never
// fires); unew is the exact right-endpoint state; span scales root_tol_rel.
std::optional<EventHit> first_event(const std::vector<ContinuousCallback>& cbs,
                                    const Vec& gprev, const StepInterp& si,
                                    const Vec& unew, const Vec& p, double span);

}  // namespace confed::detail
