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

#include "cfleo/handover.hpp"

#include <stdexcept>
#include <string>

namespace cfleo {

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::kCfJpahm: return "cf_jpahm";
    case Mode::kBestChannel: return "best_channel";
    case Mode::kMaxServTime: return "max_serv_time";
  }
  return "unknown";
}

Mode parse_mode(std::string_view text) {
  if (text == "cf_jpahm") return Mode::kCfJpahm;
  if (text == "best_channel") return Mode::kBestChannel;
  if (text == "max_serv_time") return Mode::kMaxServTime;
  throw std::invalid_argument("unknown mode '" + std::string(text) +
                              "' (expected cf_jpahm, best_channel or max_serv_time)");
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kRequest: return "request";
    case EventKind::kConfirmed: return "confirmed";
    case EventKind::kExecuted: return "executed";
    case EventKind::kFalseAlarmAvoided: return "false_alarm_avoided";
  }
  return "unknown";
}

void HandoverConfig::validate() const {
  if (confirm_slots < 1) throw std::invalid_argument("handover: handover_confirm_slots must be >= 1");
  if (!(slot_duration_s > 0.0)) throw std::invalid_argument("handover: slot_duration_s must be > 0");
}

HandoverState HandoverState::initial(int num_uts, int serving) {
  HandoverState s;
  s.uts.assign(num_uts, UtHandoverState{serving, 0, 0, false});
  return s;
}

HandoverState HandoverState::initial(const std::vector<int>& serving) {
  HandoverState s;
  s.uts.reserve(serving.size());
  for (int id : serving) s.uts.push_back({id, 0, 0, false});
  return s;
}

HandoverUpdate update(const HandoverState& state, const PowerSolution& solution,
                      const ClusterSnapshot& snapshot, int t, const HandoverConfig& config) {
  config.validate();
  const int k_count = static_cast<int>(state.uts.size());
  if (static_cast<int>(solution.admitted.size()) != k_count ||
      static_cast<int>(snapshot.next_cluster_visible.size()) != k_count) {
    throw std::invalid_argument("handover: state, solution and snapshot disagree on K");
  }
  HandoverUpdate out{state, {}};
  for (int k = 0; k < k_count; ++k) {
    auto& ut = out.state.uts[k];
    if (ut.serving != kCurrentCluster) continue;
    if (solution.admitted[k]) {
      ut.consecutive_infeasible = 0;
      ut.pending_request = false;
      continue;
    }
    ++ut.consecutive_infeasible;
    ut.pending_request = true;
    out.events.push_back({t, k, EventKind::kRequest, ut.serving, kNextCluster});
    if (ut.consecutive_infeasible < config.confirm_slots) continue;
    if (snapshot.next_cluster_visible[k]) {
      out.events.push_back({t, k, EventKind::kConfirmed, ut.serving, kNextCluster});
      out.events.push_back({t, k, EventKind::kExecuted, ut.serving, kNextCluster});
      ut.serving = kNextCluster;
      ut.consecutive_infeasible = 0;
      ut.pending_request = false;
      ut.connected_since = t;
    } else {
      out.events.push_back({t, k, EventKind::kFalseAlarmAvoided, ut.serving, kNextCluster});
    }
  }
  return out;
}

HandoverUpdate track_association(const HandoverState& state,
                                 const std::vector<int>& association, int t) {
  if (association.size() != state.uts.size()) {
    throw std::invalid_argument("handover: association size mismatch");
  }
  HandoverUpdate out{state, {}};
  for (std::size_t k = 0; k < association.size(); ++k) {
    auto& ut = out.state.uts[k];
    if (association[k] == ut.serving) continue;
    const int ki = static_cast<int>(k);
    out.events.push_back({t, ki, EventKind::kConfirmed, ut.serving, association[k]});
    out.events.push_back({t, ki, EventKind::kExecuted, ut.serving, association[k]});
    ut.serving = association[k];
    ut.connected_since = t;
  }
  return out;
}

std::vector<int> service_intervals(const std::vector<int>& seq) {
  std::vector<int> out;
  if (seq.empty()) return out;
  int length = 1;
  for (std::size_t i = 1; i < seq.size(); ++i) {
    if (seq[i] == seq[i - 1]) {
      ++length;
    } else {
      out.push_back(length);
      length = 1;
    }
  }
  out.push_back(length);
  return out;
}

ServiceStats service_time_stats(const MetricsLog& log) {
  if (log.runs.empty() || log.horizon < 1 || log.num_uts < 1) {
    throw std::invalid_argument("service_time_stats: empty metrics log");
  }
  ServiceStats st;
  long total_slots = 0;
  std::vector<int> seq(log.horizon);
  for (const auto& run : log.runs) {
    if (static_cast<long>(run.assoc.size()) != static_cast<long>(log.horizon) * log.num_uts) {
      throw std::invalid_argument("service_time_stats: incomplete association log");
    }
    for (int k = 0; k < log.num_uts; ++k) {
      for (int t = 0; t < log.horizon; ++t) seq[t] = run.assoc[t * log.num_uts + k];
      const auto iv = service_intervals(seq);
      st.intervals += static_cast<long>(iv.size());
      st.handovers += static_cast<long>(iv.size()) - 1;
      for (int len : iv) total_slots += len;
    }
  }
  st.avg_service_time_s = static_cast<double>(total_slots) / st.intervals * log.slot_duration_s;
  const double exposure = static_cast<double>(log.runs.size()) * log.num_uts * log.horizon *
                          log.slot_duration_s;
  st.handover_rate = st.handovers / exposure;
  return st;
}

}  // namespace cfleo
