#pragma once

#include "conedyn/dynamics.hpp"
#include "conedyn/mapdsl.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace conedyn {

enum class SupportStrategy { Colex, Lex };

// q distinct m-subsets of {1..n}. supports[k-1] lists the nonzero
// coordinates of v^k in ascending order, so nu(k, i) = supports[k-1][i-1].
struct SupportScheme {
    std::size_t n = 0;
    std::size_t m = 0;
    std::vector<std::vector<std::size_t>> supports;

    std::size_t q() const { return supports.size(); }
    // k is taken cyclically, so nu(q + 1, i) = nu(1, i).
    std::size_t nu(std::size_t k, std::size_t i) const;
    std::vector<std::vector<int>> vectors() const;
};

SupportScheme choose_vectors(std::size_t n, std::size_t m, std::size_t q,
                             SupportStrategy strategy = SupportStrategy::Colex);

// g(z)_i = h(z)_i /\ C z_1 /\ ... /\ C z_m together with a point y of exact
// period p whose orbit lies in the interior.
struct InnerMap {
    MinMaxMap h;
    Rational clamp;
    MinMaxMap g;
    ExactPoint y;
    std::size_t period = 0;
    std::vector<ExactPoint> orbit;  // y, g(y), ..., g^{p-1}(y)
    std::string source;             // catalog entry name or "search"

    std::size_t dim() const { return g.dim(); }
};

struct InnerMapOptions {
    bool use_catalog = true;
    std::uint64_t seed = 0;
    std::size_t search_budget = 4000;  // candidate maps tried by the search
    std::optional<Rational> clamp;     // start value; raised until inactive on the orbit
};

// Adds the clamp, merging min-atoms on the same variable.
MinMaxMap clamp_map(const MinMaxMap& h, const Rational& C);

// Default clamp: twice (1 + max over the orbit of max h(y) / min y).
Rational default_clamp(const MinMaxMap& h, const std::vector<ExactPoint>& orbit);

InnerMap inner_map(std::size_t m, std::size_t p, const InnerMapOptions& opts = {});

// f(x)_i = max over (k, r) with nu(k+1, r) = i of g(x|v^k)_r; 0 if there is no such pair.
MinMaxMap outer_map(const SupportScheme& scheme, const InnerMap& g);

struct LabeledPoint {
    std::size_t a = 0;  // 0 <= a < p
    std::size_t b = 1;  // 1 <= b <= q
    ExactPoint point;
};

struct ConstructedOrbit {
    std::vector<LabeledPoint> points;  // p * q points, a-major
    std::vector<std::size_t> cycle;    // indices into points visited from y^{0,1}
};

// The points y^{a,b}; checks distinctness and f(y^{a,b}) = y^{a+1,b+1}.
// Throws ConstructionError on a failed check.
ConstructedOrbit orbit_points(const SupportScheme& scheme, const InnerMap& g);

struct PeriodMap {
    MinMaxMap map;
    ExactPoint start;
    std::size_t expected_period = 0;
    std::size_t confirmed_period = 0;
    bool confirmed = false;
    SupportScheme scheme;
    InnerMap inner;
};

// Throws DomainError when p > C(m, ⌊m/2⌋) or q > C(n, m), ResourceError when
// no inner map is found, ConstructionError when the exact orbit does not
// confirm lcm(p, q).
PeriodMap build_period_map(std::size_t n, std::size_t m, std::size_t p, std::size_t q,
                           const InnerMapOptions& opts = {});

} // namespace conedyn
