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
 * @file metrics.hpp
 * @brief Per-slot simulation records shared by the handover and runner modules.
 */
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cfleo {

enum class Mode { kCfJpahm, kBestChannel, kMaxServTime };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

enum class EventKind { kRequest, kConfirmed, kExecuted, kFalseAlarmAvoided };

std::string_view to_string(EventKind kind);

struct HandoverEvent {
  int slot = 0;
  int ut = 0;
  EventKind kind = EventKind::kRequest;
  int from = -1;
  int to = -1;

  bool operator==(const HandoverEvent&) const = default;
};

/// One run. Per-slot vectors are indexed slot * num_uts + ut.
struct RunRecord {
  std::vector<double> rate;
  std::vector<std::uint8_t> served;
  std::vector<int> assoc;
  std::vector<HandoverEvent> events;
};

struct MetricsLog {
  Mode mode = Mode::kCfJpahm;
  int num_saps = 0;
  int num_uts = 0;
  int horizon = 0;
  double slot_duration_s = 1.0;
  std::vector<RunRecord> runs;

  double avg_se = 0.0;              // bps/Hz
  double avg_service_time_s = 0.0;
  double handover_rate = 0.0;       // association changes per UT per second
};

}  // namespace cfleo
