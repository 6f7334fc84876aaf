#pragma once

#include "conedyn/bounds.hpp"
#include "conedyn/cone.hpp"
#include "conedyn/mapdsl.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace conedyn {

enum class Outcome { Converged, Unbounded, Inconclusive };
std::string to_string(Outcome o);

struct OrbitOptions {
    std::size_t max_iters = 100000;
    ArithmeticMode mode = ArithmeticMode::Exact;
    double float_tol = 1e-9;
    double divergence_norm_bound = 1e12;
    std::size_t burn_in = 1000;
    // Float mode: the period gap must stay below float_tol for this many
    // consecutive base indices.
    std::size_t required_streak = 3;
    // Float mode: largest period searched for; 0 picks min(2 beta_N + 16, 4096).
    std::size_t max_period = 0;
    // Exact mode: an iterate whose coordinates need more bits than this ends
    // the run as Inconclusive.
    std::size_t exact_bit_limit = std::size_t{1} << 14;

    // Throws ContractError on a violated field invariant.
    void validate() const;
};

// Sequence of parts I_{f^k(x0)}. Parts evolve deterministically (the part of
// f(x) depends only on the part of x), so the first repeated index set fixes
// the eventual behaviour.
struct PartTrajectory {
    std::vector<PartIndex> parts;
    bool periodic = false;
    std::size_t preperiod = 0;
    std::size_t period = 0;
};

// First repeat in a sequence of parts.
void detect_part_period(PartTrajectory& traj);

enum class CheckStatus { Pass, Fail, NotApplicable };
std::string to_string(CheckStatus s);

struct CheckOutcome {
    CheckStatus status = CheckStatus::NotApplicable;
    std::string detail;

    bool failed() const { return status == CheckStatus::Fail; }
};

struct OrbitChecks {
    CheckOutcome antichain;
    CheckOutcome m_invariance;
    CheckOutcome factorization;   // p = q1 q2 with m = min |I| over the cycle
    CheckOutcome beta_bound;      // p <= beta_N
    CheckOutcome interior_bound;  // p <= C(N, ⌊N/2⌋) when the cycle is interior

    bool any_failed() const;
    // A period above beta_N cannot occur for an admissible map.
    bool falsification() const { return beta_bound.failed(); }
};

template <class T>
struct OrbitReport {
    Outcome outcome = Outcome::Inconclusive;
    ArithmeticMode mode = ScalarTraits<T>::mode;
    std::size_t facet_count = 0;
    std::size_t iterations = 0;
    std::size_t period = 0;
    std::size_t transient = 0;
    // xi, f(xi), ..., f^{p-1}(xi)
    std::vector<Point<T>> cycle;
    PartTrajectory part_trajectory;
    OrbitChecks checks;
    std::string reason;
};

using ExactReport = OrbitReport<Rational>;
using FloatReport = OrbitReport<double>;

template <class T>
OrbitReport<T> iterate_orbit(const ConeSpec& cone, const MapFn<T>& f, const Point<T>& x0, const OrbitOptions& opts);

template <class T>
OrbitReport<T> iterate_orbit(const ConeSpec& cone, const MinMaxMap& f, const Point<T>& x0, const OrbitOptions& opts)
{
    return iterate_orbit<T>(cone, as_map_fn<T>(f), x0, opts);
}

// Parts of f^k(x0) for k = 0..kmax.
template <class T>
PartTrajectory part_trajectory(const ConeSpec& cone, const MapFn<T>& f, const Point<T>& x0, std::size_t kmax);

// Exact mode returns the detected cycle. Float mode clusters the cycle, or for
// an Inconclusive run the last max_period iterates, at radius float_tol.
template <class T>
std::vector<Point<T>> omega_limit_estimate(const ConeSpec& cone, const MapFn<T>& f, const Point<T>& x0,
                                           const OrbitOptions& opts);

struct AntichainResult {
    bool antichain = true;
    std::optional<std::pair<std::size_t, std::size_t>> witness;  // i <= j, points[i] <= points[j] or reverse
};

template <class T>
AntichainResult verify_antichain(const ConeSpec& cone, const std::vector<Point<T>>& points);

struct MInvarianceResult {
    bool invariant = true;
    double max_deviation = 0;
    std::size_t pairs = 0;
    std::optional<std::pair<std::size_t, std::size_t>> witness;
};

template <class T>
MInvarianceResult verify_m_invariance(const ConeSpec& cone, const MapFn<T>& f, const std::vector<Point<T>>& cycle,
                                      double float_tol = kFloatTolerance);

template <class T>
bool verify_omega_dominance(const ConeSpec& cone, const MapFn<T>& f, const std::vector<Point<T>>& omega,
                            const std::vector<Point<T>>& cycle);

// Fills report.checks from report.cycle.
template <class T>
void run_cycle_checks(const ConeSpec& cone, const MapFn<T>& f, OrbitReport<T>& report, double float_tol);

} // namespace conedyn
