#pragma once

#include "conedyn/dynamics.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>

namespace conedyn {

inline constexpr const char* kOrbitReportSchema = "orbit-report/1";

struct ReportMeta {
    std::optional<std::uint64_t> seed;
    bool timestamp = true;
};

// Exact coordinates serialize as "p/q" strings, float coordinates as numbers.
template <class T>
nlohmann::ordered_json to_json(const OrbitReport<T>& report, const ReportMeta& meta = {});

nlohmann::ordered_json to_json(const OrbitChecks& checks);
nlohmann::ordered_json to_json(const PartTrajectory& traj);

template <class T>
nlohmann::ordered_json point_to_json(const Point<T>& x);

std::string utc_timestamp();

} // namespace conedyn
