#include "conedyn/checks.hpp"
#include "conedyn/construct.hpp"

#include <doctest.h>

#include <numeric>
#include <random>
#include <set>

using namespace conedyn;

namespace {

const char* kExampleMap = "f1 = (3*x1 /\\ x2) \\/ (3*x2 /\\ x3)\n"
                        "f2 = (3*x1 /\\ x3) \\/ (x2 /\\ 3*x3)\n"
                        "f3 = (x1 /\\ 3*x2) \\/ (x1 /\\ 3*x3)\n";

ExactPoint P(std::initializer_list<long> v)
{
    ExactPoint x(v.size());
    std::size_t i = 0;
    for (long c : v) x[i++] = c;
    return x;
}

} // namespace

TEST_SUITE("construct") {

TEST_CASE("support vectors")
{
    SupportScheme s = choose_vectors(3, 2, 3);
    CHECK(s.vectors() == std::vector<std::vector<int>>{{1, 1, 0}, {1, 0, 1}, {0, 1, 1}});
    CHECK(s.nu(1, 2) == 2);
    CHECK(s.nu(3, 1) == 2);
    CHECK(s.nu(4, 1) == s.nu(1, 1));
    CHECK(choose_vectors(2, 2, 1).vectors() == std::vector<std::vector<int>>{{1, 1}});

    for (auto strategy : {SupportStrategy::Colex, SupportStrategy::Lex}) {
        SupportScheme all = choose_vectors(4, 2, 6, strategy);
        std::set<std::vector<std::size_t>> distinct(all.supports.begin(), all.supports.end());
        CHECK(distinct.size() == 6);
        for (const auto& sup : all.supports) {
            CHECK(sup.size() == 2);
            CHECK(std::is_sorted(sup.begin(), sup.end()));
            CHECK(std::adjacent_find(sup.begin(), sup.end()) == sup.end());
        }
    }
    CHECK_THROWS_AS(choose_vectors(3, 3, 2), DomainError);
    CHECK_THROWS_AS(choose_vectors(3, 4, 1), DomainError);
    CHECK_THROWS_AS(choose_vectors(3, 2, 0), DomainError);
}

TEST_CASE("inner map catalog")
{
    InnerMap g = inner_map(2, 2);
    CHECK(print_map(g.g) == "f1 = 3*x1 /\\ x2\nf2 = x1 /\\ 3*x2\n");
    CHECK(g.y == P({1, 2}));
    CHECK(g.orbit == std::vector<ExactPoint>{P({1, 2}), P({2, 1})});

    InnerMap id = inner_map(1, 1);
    CHECK(print_map(id.g) == "f1 = x1\n");
    CHECK(id.y == P({1}));

    InnerMap fixed = inner_map(2, 1);
    CHECK(print_map(fixed.g) == "f1 = x1 /\\ x2\nf2 = x1 /\\ x2\n");
    CHECK(fixed.y == P({1, 1}));

    CHECK_THROWS_AS(inner_map(3, 4), DomainError);
    CHECK_THROWS_AS(inner_map(2, 0), DomainError);
}

TEST_CASE("every feasible inner period up to m = 6 is certified")
{
    for (std::size_t m = 1; m <= 6; ++m) {
        std::size_t cap = binomial(m, m / 2).get_ui();
        for (std::size_t p = 1; p <= cap; ++p) {
            CAPTURE(m);
            CAPTURE(p);
            InnerMap g = inner_map(m, p);
            CHECK(g.period == p);
            CHECK(g.orbit.size() == p);
            for (const auto& y : g.orbit) CHECK(g.g(y) == g.h(y));
            auto rep = iterate_orbit<Rational>(ConeSpec::standard(m), g.g, g.y, OrbitOptions{});
            CHECK(rep.period == p);
        }
    }
}

TEST_CASE("clamp is structural")
{
    std::mt19937_64 rng(12);
    for (auto [m, p] : {std::pair<std::size_t, std::size_t>{2, 2}, {3, 3}, {4, 5}, {5, 7}}) {
        InnerMap g = inner_map(m, p);
        for (int trial = 0; trial < 100; ++trial) {
            ExactPoint z(m);
            for (auto& v : z) v = Rational(static_cast<long>(rng() % 10), static_cast<long>(1 + rng() % 3));
            for (auto& v : z) v.canonicalize();
            Rational bound = g.clamp * *std::min_element(z.begin(), z.end());
            for (const auto& gi : g.g(z)) CHECK(gi <= bound);
        }
    }
    // a clamp start value that is too small gets raised
    InnerMapOptions o;
    o.clamp = Rational(1, 8);
    InnerMap g = inner_map(2, 2, o);
    CHECK(g.clamp >= 2);
    CHECK(g.g(P({1, 2})) == P({2, 1}));
}

TEST_CASE("search fallback")
{
    InnerMapOptions o;
    o.use_catalog = false;
    o.seed = 1;
    InnerMap g = inner_map(2, 2, o);
    CHECK(g.source == "search");
    CHECK(g.period == 2);
    auto rep = iterate_orbit<Rational>(ConeSpec::standard(2), g.g, g.y, OrbitOptions{});
    CHECK(rep.period == 2);
    for (const auto& y : g.orbit)
        for (const auto& v : y) CHECK(v > 0);

    InnerMap g3 = inner_map(3, 3, o);
    CHECK(g3.period == 3);

    o.search_budget = 0;
    CHECK_THROWS_AS(inner_map(2, 2, o), ResourceError);
}

TEST_CASE("outer map reproduces the worked example")
{
    SupportScheme s = choose_vectors(3, 2, 3);
    MinMaxMap f = outer_map(s, inner_map(2, 2));
    CHECK(print_map(f) == kExampleMap);
    CHECK_THROWS_AS(outer_map(choose_vectors(3, 1, 3), inner_map(2, 2)), ContractError);
}

TEST_CASE("outer map special cases")
{
    // one support covering everything: f = g
    InnerMap g = inner_map(3, 3);
    MinMaxMap f = outer_map(choose_vectors(3, 3, 1), g);
    CHECK(print_map(f) == print_map(g.g));

    // n=2, m=1, q=2, g = id: f(x1, x2) = (x2, x1)
    MinMaxMap swap = outer_map(choose_vectors(2, 1, 2), inner_map(1, 1));
    CHECK(swap(P({1, 2})) == P({2, 1}));
    CHECK(swap(P({2, 1})) == P({1, 2}));

    // a coordinate outside every support gets the zero component
    MinMaxMap pad = outer_map(choose_vectors(3, 2, 1), inner_map(2, 2));
    CHECK(print_expr(pad.component(2)) == "0");
}

TEST_CASE("orbit points")
{
    SupportScheme s = choose_vectors(3, 2, 3);
    ConstructedOrbit o = orbit_points(s, inner_map(2, 2));
    REQUIRE(o.points.size() == 6);
    std::set<std::string> got, want{"(1,2,0)", "(2,0,1)", "(0,1,2)", "(2,1,0)", "(1,0,2)", "(0,2,1)"};
    for (const auto& lp : o.points) got.insert(to_string(lp.point));
    CHECK(got == want);
    CHECK(o.points[0].a == 0);
    CHECK(o.points[0].b == 1);
    CHECK(o.points[0].point == P({1, 2, 0}));
    CHECK(o.cycle.size() == 6);

    ConstructedOrbit single = orbit_points(choose_vectors(2, 2, 1), inner_map(2, 1));
    CHECK(single.points.size() == 1);

    ConstructedOrbit four = orbit_points(choose_vectors(3, 2, 2), inner_map(2, 2));
    CHECK(four.points.size() == 4);
    CHECK(four.cycle.size() == 2);
}

TEST_CASE("period maps")
{
    PeriodMap pm = build_period_map(3, 2, 2, 3);
    CHECK(print_map(pm.map) == kExampleMap);
    CHECK(pm.start == P({1, 2, 0}));
    CHECK(pm.expected_period == 6);
    CHECK(pm.confirmed);

    PeriodMap fixed = build_period_map(4, 4, 1, 1);
    CHECK(fixed.confirmed_period == 1);

    PeriodMap four = build_period_map(4, 2, 2, 4);
    CHECK(four.confirmed_period == 4);

    CHECK_THROWS_AS(build_period_map(3, 3, 2, 2), DomainError);
    CHECK_THROWS_AS(build_period_map(3, 2, 3, 1), DomainError);
}

TEST_CASE("min inner map gives a pure min-max map")
{
    for (auto [n, m, q] : {std::tuple<std::size_t, std::size_t, std::size_t>{3, 2, 3}, {4, 2, 6}, {5, 3, 10}}) {
        PeriodMap pm = build_period_map(n, m, 1, q);
        CHECK(pm.confirmed_period == q);
        for (const auto& c : pm.map.components()) CHECK(is_pure_min_max(c));
    }
}

TEST_CASE("constructed maps keep the structural guarantees")
{
    for (auto [n, m, p, q] : {std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>{4, 2, 2, 5},
                              {5, 3, 3, 7},
                              {5, 4, 5, 4}}) {
        PeriodMap pm = build_period_map(n, m, p, q);
        CHECK(pm.confirmed_period == std::lcm(p, q));
        CHECK(pm.map.homogeneous());
        ConeSpec cone = ConeSpec::standard(n);
        auto rep = iterate_orbit<Rational>(cone, pm.map, pm.start, OrbitOptions{});
        CHECK(verify_antichain(cone, rep.cycle).antichain);
        for (const auto& x : rep.cycle) CHECK(part_index(cone, x).size() == m);
        Sampler<Rational> s(n * 100 + m);
        auto suite = check_properties(cone, as_map_fn<Rational>(pm.map), n, s, 200);
        CHECK(suite.order_preserving.passed);
        CHECK(suite.subhomogeneous.passed);
        CHECK(suite.subhomogeneous.equality);
        CHECK(suite.dt_nonexpansive.passed);
    }
}

}
