#include "conedyn/errors.hpp"
#include "conedyn/point.hpp"
#include "conedyn/scalar.hpp"

#include <cctype>
#include <cstdio>

namespace conedyn {

std::string to_string(const SourceLocation& loc)
{
    return "line " + std::to_string(loc.line) + ", column " + std::to_string(loc.column);
}

ParseError::ParseError(const std::string& what, SourceLocation loc)
    : std::runtime_error(to_string(loc) + ": " + what), loc_(loc)
{
}

std::string_view to_string(ArithmeticMode mode)
{
    return mode == ArithmeticMode::Exact ? "exact" : "float";
}

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool all_digits(std::string_view s)
{
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

} // namespace

Rational parse_rational(std::string_view text)
{
    std::string_view s = trim(text);
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    std::string_view num = s, den;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        num = s.substr(0, slash);
        den = s.substr(slash + 1);
        if (!all_digits(den)) throw ContractError("malformed rational literal '" + std::string(text) + "'");
    }
    if (!all_digits(num)) throw ContractError("malformed rational literal '" + std::string(text) + "'");
    Rational q;
    if (den.empty()) {
        q = Rational(BigInt(std::string(num)));
    } else {
        BigInt d{std::string(den)};
        if (d == 0) throw ContractError("zero denominator in '" + std::string(text) + "'");
        q = Rational(BigInt(std::string(num)), d);
        q.canonicalize();
    }
    return negative ? Rational(-q) : q;
}

std::string ScalarTraits<double>::to_string(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ExactPoint parse_point(std::string_view text)
{
    std::vector<Rational> coords;
    std::string_view rest = text;
    while (true) {
        auto comma = rest.find(',');
        coords.push_back(parse_rational(rest.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    return ExactPoint(std::move(coords));
}

} // namespace conedyn
