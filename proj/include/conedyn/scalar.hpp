#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>

namespace conedyn {

using Rational = mpq_class;
using BigInt = mpz_class;

enum class ArithmeticMode { Exact, Float };

std::string_view to_string(ArithmeticMode mode);

// Default tolerance for float-mode equality and sign tests.
inline constexpr double kFloatTolerance = 1e-9;

// Parses "3", "-2", "1/2". Throws ContractError on malformed text.
Rational parse_rational(std::string_view text);

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
    static constexpr bool exact = true;
    static constexpr ArithmeticMode mode = ArithmeticMode::Exact;

    static Rational from_rational(const Rational& q) { return q; }
    static double to_double(const Rational& q) { return q.get_d(); }
    static bool is_zero(const Rational& q) { return sgn(q) == 0; }
    static bool is_positive(const Rational& q) { return sgn(q) > 0; }
    static bool is_nonnegative(const Rational& q) { return sgn(q) >= 0; }
    static bool equal(const Rational& a, const Rational& b) { return a == b; }
    static std::string to_string(const Rational& q) { return q.get_str(); }
};

template <>
struct ScalarTraits<double> {
    static constexpr bool exact = false;
    static constexpr ArithmeticMode mode = ArithmeticMode::Float;

    static double from_rational(const Rational& q) { return q.get_d(); }
    static double to_double(double v) { return v; }
    static bool is_zero(double v) { return std::abs(v) <= kFloatTolerance; }
    static bool is_positive(double v) { return v > kFloatTolerance; }
    static bool is_nonnegative(double v) { return v >= -kFloatTolerance; }
    static bool equal(double a, double b)
    {
        return std::abs(a - b) <= kFloatTolerance * std::max({1.0, std::abs(a), std::abs(b)});
    }
    static std::string to_string(double v);
};

// Value of M(y/x) or of a part-metric ratio: a nonnegative scalar or +infinity.
template <class T>
struct ExtendedValue {
    bool infinite = false;
    T value{};

    static ExtendedValue infinity() { return {true, T{}}; }
    static ExtendedValue finite(T v) { return {false, std::move(v)}; }

    double to_double() const
    {
        return infinite ? HUGE_VAL : ScalarTraits<T>::to_double(value);
    }
};

template <class T>
bool operator<(const ExtendedValue<T>& a, const ExtendedValue<T>& b)
{
    if (a.infinite) return false;
    if (b.infinite) return true;
    return a.value < b.value;
}

template <class T>
bool operator==(const ExtendedValue<T>& a, const ExtendedValue<T>& b)
{
    if (a.infinite || b.infinite) return a.infinite == b.infinite;
    return a.value == b.value;
}

template <class T>
bool operator<=(const ExtendedValue<T>& a, const ExtendedValue<T>& b)
{
    return !(b < a);
}

} // namespace conedyn
