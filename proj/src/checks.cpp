#include "conedyn/checks.hpp"

#include <cmath>

namespace conedyn {

namespace {

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

long draw(std::mt19937_64& rng, long lo, long hi) { return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); }

template <class T>
std::string fmt(const Point<T>& x)
{
    return to_string(x);
}

template <class T>
bool le_tol(const T& a, const T& b)
{
    if constexpr (ScalarTraits<T>::exact)
        return a <= b;
    else
        return a <= b + 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

} // namespace

// ---------------------------------------------------------------- Sampler

template <class T>
T Sampler<T>::coordinate(bool allow_zero)
{
    if (allow_zero && !interior_only_ && rng_() % 5 == 0) return T(0);
    if constexpr (ScalarTraits<T>::exact) {
        Rational q(draw(rng_, 1, 24), draw(rng_, 1, 8));
        q.canonicalize();
        return q;
    } else {
        return 10.0 * (1.0 - unit(rng_));
    }
}

template <class T>
T Sampler<T>::signed_coordinate()
{
    if constexpr (ScalarTraits<T>::exact) {
        Rational q(draw(rng_, -12, 12), draw(rng_, 1, 6));
        q.canonicalize();
        return q;
    } else {
        return 20.0 * unit(rng_) - 10.0;
    }
}

template <class T>
Point<T> Sampler<T>::point(std::size_t dim)
{
    Point<T> x(dim);
    for (auto& v : x) v = coordinate(true);
    return x;
}

template <class T>
Point<T> Sampler<T>::interior_point(std::size_t dim)
{
    Point<T> x(dim);
    for (auto& v : x) v = coordinate(false);
    return x;
}

template <class T>
std::pair<Point<T>, Point<T>> Sampler<T>::ordered_pair(std::size_t dim)
{
    Point<T> x = point(dim);
    Point<T> y = x;
    for (std::size_t i = 0; i < dim; ++i)
        if (rng_() % 3 != 0) y[i] = y[i] + coordinate(false);
    return {std::move(x), std::move(y)};
}

template <class T>
T Sampler<T>::lambda()
{
    if constexpr (ScalarTraits<T>::exact) {
        long den = draw(rng_, 2, 16);
        Rational q(draw(rng_, 1, den - 1), den);
        q.canonicalize();
        return q;
    } else {
        return 0.01 + 0.98 * unit(rng_);
    }
}

template <class T>
T Sampler<T>::positive()
{
    if constexpr (ScalarTraits<T>::exact) {
        Rational q(draw(rng_, 1, 16), draw(rng_, 1, 8));
        q.canonicalize();
        return q;
    } else {
        return 0.1 + 9.9 * unit(rng_);
    }
}

template <class T>
Point<T> Sampler<T>::point_in_cone(const ConeSpec& cone)
{
    const std::size_t d = cone.ambient_dim();
    if (cone.is_standard()) return interior_only_ ? interior_point(d) : point(d);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        Point<T> x(d);
        if (cone.span_basis()) {
            for (auto& v : x) v = T(0);
            for (const auto& row : *cone.span_basis()) {
                T c = signed_coordinate();
                for (std::size_t j = 0; j < d; ++j) x[j] = x[j] + c * ScalarTraits<T>::from_rational(row[j]);
            }
        } else {
            for (auto& v : x) v = signed_coordinate();
        }
        if (!contains(cone, x)) continue;
        if (interior_only_ && part_index(cone, x).size() != cone.facet_count()) continue;
        return x;
    }
    throw ResourceError("sampler: rejection sampling found no point of the cone in 10000 attempts");
}

template <class T>
std::pair<Point<T>, Point<T>> Sampler<T>::same_part_pair(const ConeSpec& cone)
{
    Point<T> x = point_in_cone(cone);
    Point<T> w;
    if (cone.is_standard()) {
        w = Point<T>(x.dim());
        for (std::size_t i = 0; i < x.dim(); ++i) w[i] = ScalarTraits<T>::is_zero(x[i]) ? T(0) : coordinate(false);
    } else {
        w = point_in_cone(cone);
        if (!dominates(cone, x, w)) w = x;
    }
    T a = positive(), b = positive();
    Point<T> y = scale(a, x) + scale(b, w);
    return {std::move(x), std::move(y)};
}

template class Sampler<Rational>;
template class Sampler<double>;

// ---------------------------------------------------------------- checks

std::string CheckReport::note() const
{
    return property + ": " + (passed ? "PASS" : "FAIL") + " on " + std::to_string(samples) +
           " samples (sampling evidence, not a proof)";
}

template <class T>
CheckReport check_order_preserving(const MapFn<T>& f, std::size_t dim, Sampler<T>& sampler, std::size_t n_samples)
{
    CheckReport rep;
    rep.property = "order_preserving";
    for (std::size_t s = 0; s < n_samples; ++s) {
        auto [x, y] = sampler.ordered_pair(dim);
        Point<T> fx = f(x), fy = f(y);
        ++rep.samples;
        bool eq = true;
        for (std::size_t i = 0; i < fx.dim(); ++i) {
            eq = eq && ScalarTraits<T>::equal(fx[i], fy[i]);
            if (!le_tol(fx[i], fy[i])) {
                rep.passed = false;
                rep.equality = false;
                rep.witness = {"x = " + fmt(x), "y = " + fmt(y), "f(x) = " + fmt(fx), "f(y) = " + fmt(fy),
                               "x <= y but f(x)_" + std::to_string(i + 1) + " > f(y)_" + std::to_string(i + 1)};
                return rep;
            }
        }
        rep.equality = rep.equality && eq;
    }
    return rep;
}

template <class T>
CheckReport check_subhomogeneous(const MapFn<T>& f, std::size_t dim, Sampler<T>& sampler, std::size_t n_samples)
{
    CheckReport rep;
    rep.property = "subhomogeneous";
    for (std::size_t s = 0; s < n_samples; ++s) {
        Point<T> x = sampler.point(dim);
        T lam = sampler.lambda();
        Point<T> lhs = scale(lam, f(x));
        Point<T> rhs = f(scale(lam, x));
        ++rep.samples;
        for (std::size_t i = 0; i < lhs.dim(); ++i) {
            rep.equality = rep.equality && ScalarTraits<T>::equal(lhs[i], rhs[i]);
            if (!le_tol(lhs[i], rhs[i])) {
                rep.passed = false;
                rep.equality = false;
                rep.witness = {"x = " + fmt(x), "lambda = " + ScalarTraits<T>::to_string(lam),
                               "lambda*f(x) = " + fmt(lhs), "f(lambda*x) = " + fmt(rhs),
                               "coordinate " + std::to_string(i + 1) + " violates lambda*f(x) <= f(lambda*x)"};
                return rep;
            }
        }
    }
    return rep;
}

template <class T>
CheckReport check_dt_nonexpansive(const ConeSpec& cone, const MapFn<T>& f, Sampler<T>& sampler, std::size_t n_samples)
{
    CheckReport rep;
    rep.property = "dt_nonexpansive";
    for (std::size_t s = 0; s < n_samples; ++s) {
        auto [x, y] = sampler.same_part_pair(cone);
        Point<T> fx = f(x), fy = f(y);
        ++rep.samples;
        bool ok, eq;
        std::string before, after;
        if constexpr (ScalarTraits<T>::exact) {
            auto r0 = thompson_ratio(cone, x, y);
            auto r1 = thompson_ratio(cone, fx, fy);
            ok = r1 <= r0;
            eq = r1 == r0;
            before = r0.infinite ? "inf" : r0.value.get_str();
            after = r1.infinite ? "inf" : r1.value.get_str();
        } else {
            double d0 = thompson(cone, x, y);
            double d1 = thompson(cone, fx, fy);
            ok = d1 <= d0 + 1e-12;
            eq = std::abs(d1 - d0) <= 1e-12;
            before = ScalarTraits<double>::to_string(d0);
            after = ScalarTraits<double>::to_string(d1);
        }
        if (!ok) {
            rep.passed = false;
            rep.equality = false;
            rep.witness = {"x = " + fmt(x), "y = " + fmt(y), "f(x) = " + fmt(fx), "f(y) = " + fmt(fy),
                           "part-metric measure before: " + before, "after: " + after};
            return rep;
        }
        rep.equality = rep.equality && eq;
    }
    return rep;
}

template <class T>
PropertySuite check_properties(const ConeSpec& cone, const MapFn<T>& f, std::size_t dim, Sampler<T>& sampler,
                               std::size_t n_samples)
{
    PropertySuite suite;
    suite.order_preserving = check_order_preserving(f, dim, sampler, n_samples);
    suite.subhomogeneous = check_subhomogeneous(f, dim, sampler, n_samples);
    suite.dt_nonexpansive = check_dt_nonexpansive(cone, f, sampler, n_samples);
    suite.inconsistent =
        suite.order_preserving.passed && suite.subhomogeneous.passed && !suite.dt_nonexpansive.passed;
    return suite;
}

#define CONEDYN_INSTANTIATE(T)                                                                                   \
    template CheckReport check_order_preserving<T>(const MapFn<T>&, std::size_t, Sampler<T>&, std::size_t);     \
    template CheckReport check_subhomogeneous<T>(const MapFn<T>&, std::size_t, Sampler<T>&, std::size_t);       \
    template CheckReport check_dt_nonexpansive<T>(const ConeSpec&, const MapFn<T>&, Sampler<T>&, std::size_t);  \
    template PropertySuite check_properties<T>(const ConeSpec&, const MapFn<T>&, std::size_t, Sampler<T>&,      \
                                               std::size_t);
CONEDYN_INSTANTIATE(Rational)
CONEDYN_INSTANTIATE(double)
#undef CONEDYN_INSTANTIATE

MapFn<double> conjugate_log(MapFn<double> g)
{
    return [g = std::move(g)](const FloatPoint& x) { return exp_map(g(log_map(x))); };
}

} // namespace conedyn
