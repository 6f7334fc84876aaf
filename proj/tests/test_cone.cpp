#include "conedyn/cone.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace conedyn;

namespace {

ExactPoint P(std::initializer_list<long> v)
{
    ExactPoint x(v.size());
    std::size_t i = 0;
    for (long c : v) x[i++] = c;
    return x;
}

// {x : x1 >= 0, x2 - x1 >= 0}
ConeSpec skew_cone()
{
    return ConeSpec::from_facets({{Rational(1), Rational(0)}, {Rational(-1), Rational(1)}});
}

Rational rnd(std::mt19937_64& rng, long lo, long hi, long den = 1)
{
    Rational q(lo + static_cast<long>(rng() % static_cast<unsigned long>(hi - lo + 1)), den);
    q.canonicalize();
    return q;
}

// inf{beta > 0 : beta x - y in K} by bisection on membership alone.
double m_ratio_bisection(const ConeSpec& cone, const FloatPoint& y, const FloatPoint& x)
{
    auto ok = [&](double b) {
        FloatPoint z = scale(b, x) - y;
        for (std::size_t i = 0; i < cone.facet_count(); ++i)
            if (cone.facet_value(i, z) < -1e-13) return false;
        return true;
    };
    double hi = 1;
    while (!ok(hi)) {
        hi *= 2;
        if (hi > 1e9) return HUGE_VAL;
    }
    double lo = 0;
    if (ok(lo)) return 0;
    for (int it = 0; it < 200; ++it) {
        double mid = (lo + hi) / 2;
        (ok(mid) ? hi : lo) = mid;
    }
    return hi;
}

} // namespace

TEST_SUITE("cone") {

TEST_CASE("construction invariants")
{
    ConeSpec s = ConeSpec::standard(3);
    CHECK(s.facet_count() == 3);
    CHECK(s.is_standard());
    CHECK(s.facets()[1] == std::vector<Rational>{0, 1, 0});
    CHECK_THROWS_AS(ConeSpec::standard(0), ContractError);
    CHECK_THROWS_AS(ConeSpec::from_facets({{Rational(0), Rational(0)}}), ContractError);
    CHECK_THROWS_AS(ConeSpec::from_facets({}), ContractError);
}

TEST_CASE("contains")
{
    ConeSpec r2 = ConeSpec::standard(2);
    CHECK(contains(r2, P({1, 2})));
    CHECK_FALSE(contains(r2, P({1, -1})));
    CHECK(contains(skew_cone(), P({1, 3})));
    CHECK_FALSE(contains(skew_cone(), P({3, 1})));
    CHECK_THROWS_AS(contains(r2, P({1, 2, 3})), ContractError);
}

TEST_CASE("leq")
{
    ConeSpec r2 = ConeSpec::standard(2);
    CHECK(leq(r2, P({1, 1}), P({2, 3})));
    CHECK_FALSE(leq(r2, P({1, 2}), P({2, 1})));
    CHECK_FALSE(leq(r2, P({2, 1}), P({1, 2})));
    CHECK(leq(r2, P({4, 7}), P({4, 7})));
}

TEST_CASE("m_ratio boundary conventions")
{
    ConeSpec r2 = ConeSpec::standard(2);
    auto m = m_ratio(r2, P({2, 1}), P({1, 2}));
    CHECK_FALSE(m.infinite);
    CHECK(m.value == 2);
    CHECK(m_ratio(r2, P({1, 1}), P({1, 0})).infinite);
    CHECK(m_ratio(r2, P({0, 0}), P({3, 5})).value == 0);
    CHECK(m_ratio(r2, P({0, 2}), P({0, 1})).value == 2);
    CHECK_THROWS_AS(m_ratio(r2, P({1, -1}), P({1, 1})), DomainError);
}

TEST_CASE("m_ratio agrees with the infimum definition on two-facet cones")
{
    std::mt19937_64 rng(11);
    int compared = 0;
    for (int trial = 0; trial < 200; ++trial) {
        Rational a = rnd(rng, -3, 3), b = rnd(rng, -3, 3), c = rnd(rng, -3, 3), d = rnd(rng, -3, 3);
        Rational det = a * d - b * c;
        if (det == 0) continue;
        ConeSpec cone = ConeSpec::from_facets({{a, b}, {c, d}});
        // Points with prescribed facet values s: x = F^{-1} s.
        auto point_with = [&](const Rational& s1, const Rational& s2) {
            return ExactPoint{Rational((d * s1 - b * s2) / det), Rational((-c * s1 + a * s2) / det)};
        };
        ExactPoint x = point_with(rnd(rng, 0, 6), rnd(rng, 1, 6));
        ExactPoint y = point_with(rnd(rng, 0, 6), rnd(rng, 0, 6));
        REQUIRE(contains(cone, x));
        REQUIRE(contains(cone, y));
        auto exact = m_ratio(cone, y, x);
        double oracle = m_ratio_bisection(cone, convert_point<double>(y), convert_point<double>(x));
        if (exact.infinite) {
            CHECK(oracle == HUGE_VAL);
        } else {
            CHECK(std::abs(exact.value.get_d() - oracle) <= 1e-9 * std::max(1.0, oracle));
            auto fm = m_ratio(cone, convert_point<double>(y), convert_point<double>(x));
            CHECK(std::abs(fm.value - oracle) <= 1e-9 * std::max(1.0, oracle));
        }
        ++compared;
    }
    CHECK(compared > 100);
}

TEST_CASE("thompson metric")
{
    ConeSpec r2 = ConeSpec::standard(2);
    CHECK(thompson(r2, P({1, 2}), P({2, 1})) == doctest::Approx(std::log(2.0)));
    CHECK(thompson(r2, P({3, 5}), P({3, 5})) == 0.0);
    CHECK(thompson(r2, P({1, 0}), P({1, 1})) == HUGE_VAL);
    CHECK(thompson(r2, P({0, 0}), P({0, 0})) == 0.0);
    CHECK(thompson_ratio(r2, P({0, 0}), P({0, 0})).value == 1);
}

TEST_CASE("metric axioms on random interior triples, exact")
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        std::size_t n = 1 + rng() % 6;
        ConeSpec cone = ConeSpec::standard(n);
        ExactPoint x(n), y(n), z(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = rnd(rng, 1, 9, 1 + rng() % 4);
            y[i] = rnd(rng, 1, 9, 1 + rng() % 4);
            z[i] = trial % 7 == 0 ? x[i] : rnd(rng, 1, 9, 1 + rng() % 4);
        }
        auto rxy = thompson_ratio(cone, x, y), ryx = thompson_ratio(cone, y, x);
        auto rxz = thompson_ratio(cone, x, z), ryz = thompson_ratio(cone, y, z);
        CHECK(rxy.value == ryx.value);
        CHECK((rxz.value == 1) == (x == z));
        // d(x,z) <= d(x,y) + d(y,z) in multiplicative form
        CHECK(rxz.value <= rxy.value * ryz.value);
    }
}

TEST_CASE("parts")
{
    ConeSpec r3 = ConeSpec::standard(3);
    CHECK(part_index(r3, P({1, 0, 2})).indices() == std::vector<std::size_t>{1, 3});
    CHECK(part_index(r3, P({0, 0, 0})).empty());
    CHECK(part_index(r3, P({1, 2, 0})).to_string() == "{1,2}");
    CHECK_THROWS_AS(part_index(r3, P({1, -2, 0})), DomainError);

    ConeSpec r2 = ConeSpec::standard(2);
    CHECK(dominates(r2, P({1, 1}), P({5, 0})));
    CHECK_FALSE(dominates(r2, P({1, 0}), P({0, 1})));
    CHECK(dominates(r2, P({0, 3}), P({0, 3})));
}

TEST_CASE("same part iff finite distance")
{
    std::mt19937_64 rng(9);
    ConeSpec cone = ConeSpec::standard(4);
    for (int trial = 0; trial < 300; ++trial) {
        ExactPoint x(4), y(4);
        for (std::size_t i = 0; i < 4; ++i) {
            x[i] = rng() % 3 == 0 ? Rational(0) : rnd(rng, 1, 5);
            y[i] = rng() % 3 == 0 ? Rational(0) : rnd(rng, 1, 5);
        }
        bool same = part_index(cone, x) == part_index(cone, y);
        CHECK(same == !thompson_ratio(cone, x, y).infinite);
        CHECK(dominates(cone, x, y) == part_index(cone, y).is_subset_of(part_index(cone, x)));
    }
}

TEST_CASE("psi embedding")
{
    CHECK(psi_embed(ConeSpec::standard(3), P({4, 0, 1})) == P({4, 0, 1}));
    CHECK(psi_embed(skew_cone(), P({1, 3})) == P({1, 2}));
    CHECK(is_zero_point(psi_embed(skew_cone(), P({0, 0}))));
}

TEST_CASE("psi is injective on the span of a lower-dimensional cone")
{
    // x1 >= 0, x2 >= 0 inside the plane x3 = x1 + x2
    ConeSpec cone = ConeSpec::from_facets({{Rational(1), Rational(0), Rational(0)}, {Rational(0), Rational(1), Rational(0)}},
                                          RationalMatrix{{Rational(1), Rational(0), Rational(1)},
                                                         {Rational(0), Rational(1), Rational(1)}});
    CHECK(contains(cone, P({1, 2, 3})));
    CHECK_FALSE(contains(cone, P({1, 2, 4})));
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        Rational a = rnd(rng, -4, 4), b = rnd(rng, -4, 4);
        ExactPoint x{a, b, Rational(a + b)};
        REQUIRE(cone.in_span(x));
        CHECK(is_zero_point(psi_embed(cone, x)) == is_zero_point(x));
    }
}

TEST_CASE("log and exp coordinates")
{
    FloatPoint l = log_map(FloatPoint{1.0, std::exp(1.0)});
    CHECK(l[0] == 0.0);
    CHECK(l[1] == doctest::Approx(1.0));
    CHECK(exp_map(FloatPoint{0.0, 0.0}) == FloatPoint{1.0, 1.0});
    ConeSpec r2 = ConeSpec::standard(2);
    CHECK(thompson(r2, exp_map(FloatPoint{0.0, 1.0}), exp_map(FloatPoint{1.0, 0.0})) == doctest::Approx(1.0));
    CHECK_THROWS_AS(log_map(FloatPoint{1.0, 0.0}), DomainError);
    CHECK_THROWS_AS(log_map(P({1, 2})), UnsupportedModeError);

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.01, 50.0);
    for (int trial = 0; trial < 1000; ++trial) {
        FloatPoint x{u(rng), u(rng), u(rng)};
        FloatPoint back = exp_map(log_map(x));
        CHECK(sup_distance(back, x) <= 1e-12 * 50);
    }
}

TEST_CASE("t and the sup norm")
{
    CHECK(t_fn(P({-1, 2})) == 2);
    CHECK(t_fn(P({-3, -1})) == -1);
    CHECK(sup_norm(P({-3, -1})) == 3);
    CHECK(t_fn(P({0, 0})) == 0);
    CHECK_THROWS_AS(t_fn(ExactPoint{}), ContractError);
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 100; ++trial) {
        ExactPoint u{rnd(rng, -9, 9), rnd(rng, -9, 9), rnd(rng, -9, 9)};
        ExactPoint neg = scale(Rational(-1), u);
        CHECK(sup_norm(u) == std::max(t_fn(u), t_fn(neg)));
    }
}

TEST_CASE("cone files")
{
    ConeSpec std3 = parse_cone("cone standard 3\n");
    CHECK(std3.is_standard());
    CHECK(std3.facet_count() == 3);

    ConeSpec c = parse_cone("# comment\ncone ambient=2 facets=2\n1 0\n-1 1\n");
    CHECK(contains(c, P({1, 3})));
    CHECK(parse_cone(format_cone(c)).facets() == c.facets());

    ConeSpec s = parse_cone("cone ambient=3 facets=2\n1 0 0\n0 1 0\nspan rows=2\n1 0 1\n0 1 1\n");
    REQUIRE(s.span_basis());
    CHECK(parse_cone(format_cone(s)).span_basis()->size() == 2);

    CHECK(load_cone("standard:4").facet_count() == 4);
    CHECK(load_cone(std::string(CONEDYN_DATA_DIR) + "/wedge.cone").facet_count() == 2);
    CHECK_THROWS(parse_cone("cone ambient=2 facets=2\n1 0\n"));
    CHECK_THROWS(parse_cone("cone ambient=2 facets=1\n1 x\n"));
    CHECK_THROWS(load_cone("/nonexistent/file.cone"));
}

TEST_CASE("redundant facet diagnostics")
{
    ConeSpec c = ConeSpec::from_facets({{Rational(1), Rational(0)}, {Rational(2), Rational(0)}, {Rational(0), Rational(1)}});
    auto pairs = c.redundant_facet_pairs();
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0] == std::pair<std::size_t, std::size_t>{0, 1});
}

}
