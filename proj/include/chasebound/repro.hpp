#pragma once

#include <string>
#include <vector>

#include "chasebound/report.hpp"

namespace chasebound {

// Scripted end-to-end scenarios over the files in `data_dir`.
std::vector<std::string> repro_ids();

// Report for one scenario. Throws std::invalid_argument on an unknown id.
Json run_repro(const std::string& id, const std::string& data_dir);

}  // namespace chasebound
