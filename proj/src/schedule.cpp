#include "affectsim/schedule.hpp"

#include <stdexcept>
#include <string>

namespace affectsim {

FragmentSchedule::FragmentSchedule(std::vector<InfoFragment> fragments)
    : fragments_(std::move(fragments)) {
  if (fragments_.empty()) throw std::invalid_argument("schedule needs at least one fragment");
  starts_.reserve(fragments_.size());
  for (const auto& frag : fragments_) {
    if (frag.duration < 1) throw std::invalid_argument("fragment duration must be >= 1");
    if (frag.code.etv() != frag.etv) throw std::invalid_argument("fragment etv cache is stale");
    starts_.push_back(total_);
    total_ += frag.duration;
  }
}

FragmentSchedule::Active FragmentSchedule::active_at(int t_global) const {
  if (t_global < 0 || t_global >= total_) {
    throw std::invalid_argument("round " + std::to_string(t_global) + " outside [0, " +
                                std::to_string(total_) + ")");
  }
  // Linear scan; schedules have a handful of fragments.
  std::size_t k = fragments_.size() - 1;
  while (starts_[k] > t_global) --k;
  return Active{static_cast<int>(k), t_global - starts_[k]};
}

}  // namespace affectsim
