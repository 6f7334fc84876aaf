#pragma once

#include "conedyn/cone.hpp"
#include "conedyn/mapdsl.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace conedyn {

// Seeded generator of test inputs. Rational mode draws small-denominator
// rationals; float mode draws from (0, 10]. Samples are produced in a fixed
// order, so a seed determines every check outcome.
template <class T>
class Sampler {
public:
    explicit Sampler(std::uint64_t seed, bool interior_only = false) : rng_(seed), interior_only_(interior_only) {}

    Point<T> point(std::size_t dim);
    Point<T> interior_point(std::size_t dim);
    // x <= y in the standard order.
    std::pair<Point<T>, Point<T>> ordered_pair(std::size_t dim);
    // lambda in (0, 1)
    T lambda();
    // Positive scalar, used for homogeneity tests.
    T positive();
    Point<T> point_in_cone(const ConeSpec& cone);
    // Two points of K in the same part.
    std::pair<Point<T>, Point<T>> same_part_pair(const ConeSpec& cone);

    std::mt19937_64& rng() { return rng_; }

private:
    T coordinate(bool allow_zero);
    T signed_coordinate();

    std::mt19937_64 rng_;
    bool interior_only_;
};

struct CheckReport {
    std::string property;
    bool passed = true;
    std::size_t samples = 0;
    // Every sample satisfied the property with equality (homogeneity,
    // isometry). Meaningful only when passed.
    bool equality = true;
    std::vector<std::string> witness;
    // Sampling never proves a universally quantified property.
    std::string note() const;
};

template <class T>
CheckReport check_order_preserving(const MapFn<T>& f, std::size_t dim, Sampler<T>& sampler, std::size_t n_samples);

template <class T>
CheckReport check_subhomogeneous(const MapFn<T>& f, std::size_t dim, Sampler<T>& sampler, std::size_t n_samples);

// d_T(f(x), f(y)) <= d_T(x, y) on same-part pairs. Rational mode compares the
// ratios max{M(y/x), M(x/y)} exactly instead of their logarithms; float mode
// allows 1e-12 slack.
template <class T>
CheckReport check_dt_nonexpansive(const ConeSpec& cone, const MapFn<T>& f, Sampler<T>& sampler,
                                  std::size_t n_samples);

// For an order-preserving map, subhomogeneity and d_T-nonexpansiveness are
// equivalent. A sampled nonexpansiveness failure next to passing order and
// subhomogeneity checks can only come from a bug or from a subhomogeneity
// violation the sampler missed.
struct PropertySuite {
    CheckReport order_preserving;
    CheckReport subhomogeneous;
    CheckReport dt_nonexpansive;
    bool inconsistent = false;
};

template <class T>
PropertySuite check_properties(const ConeSpec& cone, const MapFn<T>& f, std::size_t dim, Sampler<T>& sampler,
                               std::size_t n_samples);

// h = E ∘ g ∘ L on int(R^n_+), for g defined on all of R^n.
MapFn<double> conjugate_log(MapFn<double> g);

} // namespace conedyn
