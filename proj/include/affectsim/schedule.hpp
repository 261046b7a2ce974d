#pragma once

#include <vector>

#include "affectsim/emotion.hpp"

namespace affectsim {

// One information fragment: its emotion code (fixed for its whole period)
// and the number of rounds it spreads.
struct InfoFragment {
  EmotionCode code;
  int etv = 0;       // cached popcount of `code`
  int duration = 0;  // rounds, >= 1
};

// Strictly sequential fragment timeline. Fragment k owns the half-open
// global-round interval [start_k, start_k + duration_k); the run's total
// round count is the sum of durations.
class FragmentSchedule {
 public:
  explicit FragmentSchedule(std::vector<InfoFragment> fragments);

  int total_rounds() const { return total_; }
  std::size_t size() const { return fragments_.size(); }
  const InfoFragment& fragment(int index) const {
    return fragments_[static_cast<std::size_t>(index)];
  }

  struct Active {
    int index;    // 0-based fragment index
    int t_local;  // round offset within the fragment's period
  };

  // Resolve the fragment owning global round t_global in [0, total_rounds).
  Active active_at(int t_global) const;

  // Global round at which fragment `index` begins.
  int start_of(int index) const { return starts_[static_cast<std::size_t>(index)]; }

 private:
  std::vector<InfoFragment> fragments_;
  std::vector<int> starts_;
  int total_ = 0;
};

}  // namespace affectsim
