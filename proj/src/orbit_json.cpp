#include "conedyn/orbit_json.hpp"

#include <chrono>
#include <ctime>

namespace conedyn {

using nlohmann::ordered_json;

std::string utc_timestamp()
{
    std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

template <class T>
ordered_json point_to_json(const Point<T>& x)
{
    ordered_json arr = ordered_json::array();
    for (const auto& v : x) {
        if constexpr (ScalarTraits<T>::exact)
            arr.push_back(v.get_str());
        else
            arr.push_back(v);
    }
    return arr;
}

ordered_json to_json(const OrbitChecks& checks)
{
    ordered_json j = ordered_json::object();
    auto put = [&](const char* name, const CheckOutcome& c) {
        j[name] = {{"status", to_string(c.status)}, {"detail", c.detail}};
    };
    put("antichain", checks.antichain);
    put("m_invariance", checks.m_invariance);
    put("factorization", checks.factorization);
    put("beta_bound", checks.beta_bound);
    put("interior_bound", checks.interior_bound);
    return j;
}

ordered_json to_json(const PartTrajectory& traj)
{
    ordered_json parts = ordered_json::array();
    for (const auto& p : traj.parts) parts.push_back(p.indices());
    return parts;
}

template <class T>
ordered_json to_json(const OrbitReport<T>& r, const ReportMeta& meta)
{
    ordered_json j;
    j["schema"] = kOrbitReportSchema;
    j["mode"] = to_string(r.mode);
    j["outcome"] = to_string(r.outcome);
    const bool converged = r.outcome == Outcome::Converged;
    j["period"] = converged ? ordered_json(r.period) : ordered_json(nullptr);
    j["transient"] = converged ? ordered_json(r.transient) : ordered_json(nullptr);
    j["iterations"] = r.iterations;
    j["facets"] = r.facet_count;
    ordered_json cycle = ordered_json::array();
    for (const auto& x : r.cycle) cycle.push_back(point_to_json(x));
    j["cycle"] = cycle;
    j["part_trajectory"] = to_json(r.part_trajectory);
    if (r.part_trajectory.periodic)
        j["part_cycle"] = {{"preperiod", r.part_trajectory.preperiod}, {"period", r.part_trajectory.period}};
    else
        j["part_cycle"] = nullptr;
    j["checks"] = converged ? to_json(r.checks) : ordered_json::object();
    j["falsification"] = r.checks.falsification();
    if (!r.reason.empty()) j["reason"] = r.reason;
    j["seed"] = meta.seed ? ordered_json(*meta.seed) : ordered_json(nullptr);
    if (meta.timestamp) j["timestamp"] = utc_timestamp();
    return j;
}

template ordered_json point_to_json<Rational>(const ExactPoint&);
template ordered_json point_to_json<double>(const FloatPoint&);
template ordered_json to_json<Rational>(const ExactReport&, const ReportMeta&);
template ordered_json to_json<double>(const FloatReport&, const ReportMeta&);

} // namespace conedyn
