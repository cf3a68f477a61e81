#pragma once

// Serialization of run results. JSON layout:
//   {"meta": {"version", "seed", "config"}, "results": [...]}
// CSV has one row per result with a fixed column order.

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "carnot/bounds.hpp"
#include "carnot/verify.hpp"

namespace carnot {

inline constexpr const char* kVersion = "0.1.0";

using Result = std::variant<BoundReport, Report>;

struct RunMeta {
  std::uint64_t seed = 0;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
};

nlohmann::ordered_json to_json(const BoundReport& r);
nlohmann::ordered_json to_json(const Report& r);

std::string render_json(const RunMeta& meta, const std::vector<Result>& results);
std::string render_csv(const std::vector<Result>& results);

// Two-column CSV with a header row.
std::string render_profile_csv(const std::string& x_name, const std::string& y_name,
                               const std::vector<std::pair<double, double>>& rows);

// Round-trip decimal formatting shared by the CSV writers.
std::string format_double(double v);

bool result_passes(const Result& r);

}  // namespace carnot
