#pragma once

#include "conedyn/errors.hpp"
#include "conedyn/scalar.hpp"

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace conedyn {

// Coordinates of an element of the ambient space. The scalar type fixes the
// arithmetic mode: Rational for exact runs, double for float runs.
template <class T>
class Point {
public:
    using value_type = T;

    Point() = default;
    explicit Point(std::size_t dim) : coords_(dim) {}
    explicit Point(std::vector<T> coords) : coords_(std::move(coords)) {}
    Point(std::initializer_list<T> coords) : coords_(coords) {}

    std::size_t dim() const noexcept { return coords_.size(); }
    bool empty() const noexcept { return coords_.empty(); }

    T& operator[](std::size_t i) { return coords_[i]; }
    const T& operator[](std::size_t i) const { return coords_[i]; }

    auto begin() noexcept { return coords_.begin(); }
    auto end() noexcept { return coords_.end(); }
    auto begin() const noexcept { return coords_.begin(); }
    auto end() const noexcept { return coords_.end(); }

    std::span<const T> coords() const noexcept { return coords_; }
    const std::vector<T>& vector() const noexcept { return coords_; }

    friend bool operator==(const Point& a, const Point& b) { return a.coords_ == b.coords_; }

private:
    std::vector<T> coords_;
};

using ExactPoint = Point<Rational>;
using FloatPoint = Point<double>;

inline void require_same_dim(std::size_t a, std::size_t b, const char* what)
{
    if (a != b)
        throw ContractError(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                            " vs " + std::to_string(b) + ")");
}

template <class T>
Point<T> operator-(const Point<T>& a, const Point<T>& b)
{
    require_same_dim(a.dim(), b.dim(), "point difference");
    Point<T> r(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) r[i] = a[i] - b[i];
    return r;
}

template <class T>
Point<T> operator+(const Point<T>& a, const Point<T>& b)
{
    require_same_dim(a.dim(), b.dim(), "point sum");
    Point<T> r(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) r[i] = a[i] + b[i];
    return r;
}

template <class T>
Point<T> scale(const T& lambda, const Point<T>& x)
{
    Point<T> r(x.dim());
    for (std::size_t i = 0; i < x.dim(); ++i) r[i] = lambda * x[i];
    return r;
}

template <class T>
bool is_zero_point(const Point<T>& x)
{
    for (const auto& v : x)
        if (!ScalarTraits<T>::is_zero(v)) return false;
    return true;
}

// Mode-aware equality: exact for rationals, kFloatTolerance for doubles.
template <class T>
bool approx_equal(const Point<T>& a, const Point<T>& b)
{
    if (a.dim() != b.dim()) return false;
    for (std::size_t i = 0; i < a.dim(); ++i)
        if (!ScalarTraits<T>::equal(a[i], b[i])) return false;
    return true;
}

// max_i |a_i - b_i| evaluated in double precision.
template <class T>
double sup_distance(const Point<T>& a, const Point<T>& b)
{
    require_same_dim(a.dim(), b.dim(), "sup_distance");
    double d = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        double v;
        if constexpr (ScalarTraits<T>::exact)
            v = std::abs(Rational(a[i] - b[i]).get_d());
        else
            v = std::abs(a[i] - b[i]);
        d = std::max(d, v);
    }
    return d;
}

template <class T>
std::string to_string(const Point<T>& x)
{
    std::string s = "(";
    for (std::size_t i = 0; i < x.dim(); ++i) {
        if (i) s += ",";
        s += ScalarTraits<T>::to_string(x[i]);
    }
    return s + ")";
}

template <class T>
Point<T> convert_point(const ExactPoint& x)
{
    Point<T> r(x.dim());
    for (std::size_t i = 0; i < x.dim(); ++i) r[i] = ScalarTraits<T>::from_rational(x[i]);
    return r;
}

// Parses "1,2,0" or "1/2, 3" into an exact point.
ExactPoint parse_point(std::string_view text);

} // namespace conedyn
