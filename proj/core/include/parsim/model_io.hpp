#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "parsim/ss_model.hpp"

namespace parsim::io {

/// {"A":[[..]], "B":.., "C":.., "D":.., "K":.., "sigma_e2":.., "n_x":.., "n_u":.., "n_y":..}
/// Matrices are row-major nested arrays. Doubles are written in shortest
/// round-trip form, so a write/read cycle is bit-exact.
nlohmann::json model_to_json(const StateSpaceModel& m);
StateSpaceModel model_from_json(const nlohmann::json& j);

void write_model(const std::filesystem::path& path, const StateSpaceModel& m);
StateSpaceModel read_model(const std::filesystem::path& path);

/// CSV with header `t,u,y`, one row per sample in time order.
void write_record_csv(const std::filesystem::path& path, const SignalRecord& rec);
SignalRecord read_record_csv(const std::filesystem::path& path);

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace parsim::io
