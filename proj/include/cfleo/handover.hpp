/*
 * Copyright 2026 The cfleo Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/**
 * @file handover.hpp
 * @brief Per-UT association state machine and service-time accounting.
 *
 * In cell-free mode a UT is served by the whole cluster (id 0). Repeated
 * infeasibility raises handover requests; once a request has repeated
 * `confirm_slots` times and the trailing cluster sees the UT, the handover
 * executes in the same slot and the UT moves to the next cluster (id 1).
 * Baseline modes track the serving SAP directly.
 */
#pragma once

#include <vector>

#include "cfleo/allocation.hpp"
#include "cfleo/geometry.hpp"
#include "cfleo/metrics.hpp"

namespace cfleo {

inline constexpr int kCurrentCluster = 0;
inline constexpr int kNextCluster = 1;

struct HandoverConfig {
  int confirm_slots = 2;
  double slot_duration_s = 1.0;

  void validate() const;
};

struct UtHandoverState {
  int serving = kCurrentCluster;
  int consecutive_infeasible = 0;
  int connected_since = 0;
  bool pending_request = false;
};

struct HandoverState {
  std::vector<UtHandoverState> uts;

  static HandoverState initial(int num_uts, int serving = kCurrentCluster);
  static HandoverState initial(const std::vector<int>& serving);
};

struct HandoverUpdate {
  HandoverState state;
  std::vector<HandoverEvent> events;
};

/// Cell-free mode. UTs already handed to the next cluster are left alone.
HandoverUpdate update(const HandoverState& state, const PowerSolution& solution,
                      const ClusterSnapshot& snapshot, int t, const HandoverConfig& config);

/// Baseline modes: any change of serving SAP is a confirmed and executed handover.
HandoverUpdate track_association(const HandoverState& state,
                                 const std::vector<int>& association, int t);

/// Lengths (in slots) of the uninterrupted runs of one UT's association sequence.
std::vector<int> service_intervals(const std::vector<int>& assoc_sequence);

struct ServiceStats {
  double avg_service_time_s = 0.0;
  double handover_rate = 0.0;
  long intervals = 0;
  long handovers = 0;
};

/// Pools every completed and ongoing interval of every UT and run.
/// Throws std::invalid_argument on an empty log.
ServiceStats service_time_stats(const MetricsLog& log);

}  // namespace cfleo
