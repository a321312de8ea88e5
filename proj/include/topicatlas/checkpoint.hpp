#pragma once

#include <string>

#include "topicatlas/model.hpp"

namespace topicatlas {

inline constexpr int kCheckpointVersion = 1;

/// JSON checkpoint: dimensions, alpha/beta/eta/omega rows, config, corpus hash, ELBO trace and
/// per-document summaries. Output is deterministic for a given model.
std::string serialize_checkpoint(const TrainedModel& model);
TrainedModel parse_checkpoint(const std::string& text);

void save_checkpoint(const std::string& path, const TrainedModel& model);
TrainedModel load_checkpoint(const std::string& path);

}  // namespace topicatlas
