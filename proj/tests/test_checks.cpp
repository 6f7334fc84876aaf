#include "conedyn/checks.hpp"
#include "conedyn/corpus.hpp"

#include <doctest.h>

#include <cmath>

using namespace conedyn;

namespace {

const char* kExampleMap = "f1 = (3*x1 /\\ x2) \\/ (3*x2 /\\ x3)\n"
                        "f2 = (3*x1 /\\ x3) \\/ (x2 /\\ 3*x3)\n"
                        "f3 = (x1 /\\ 3*x2) \\/ (x1 /\\ 3*x3)\n";

MapFn<double> swap2()
{
    return [](const FloatPoint& x) { return FloatPoint{x[1], x[0]}; };
}

} // namespace

TEST_SUITE("checks") {

TEST_CASE("grammar maps pass all three properties")
{
    MinMaxMap f = parse_map(kExampleMap);
    Sampler<Rational> s(1);
    CHECK(check_order_preserving(as_map_fn<Rational>(f), 3, s, 1000).passed);
    auto sub = check_subhomogeneous(as_map_fn<Rational>(f), 3, s, 300);
    CHECK(sub.passed);
    CHECK(sub.equality);
    Sampler<Rational> interior(2, true);
    CHECK(check_dt_nonexpansive(ConeSpec::standard(3), as_map_fn<Rational>(f), interior, 300).passed);
    CHECK(sub.note().find("300 samples") != std::string::npos);
}

TEST_CASE("identity is an isometry; a map with constants is strictly subhomogeneous")
{
    MinMaxMap id = parse_map("f1 = x1\nf2 = x2\n");
    Sampler<Rational> s(3);
    auto rep = check_dt_nonexpansive(ConeSpec::standard(2), as_map_fn<Rational>(id), s, 200);
    CHECK(rep.passed);
    CHECK(rep.equality);
    MinMaxMap c = parse_map("f1 = x1 + 1\nf2 = x2\n");
    auto sub = check_subhomogeneous(as_map_fn<Rational>(c), 2, s, 200);
    CHECK(sub.passed);
    CHECK_FALSE(sub.equality);
}

TEST_CASE("wrapped maps")
{
    Sampler<double> s(4);
    CHECK(check_order_preserving(swap2(), 2, s, 500).passed);

    MapFn<double> decreasing = [](const FloatPoint& x) { return FloatPoint{1.0 / (1.0 + x[0]), x[1]}; };
    auto op = check_order_preserving(decreasing, 2, s, 500);
    CHECK_FALSE(op.passed);
    CHECK_FALSE(op.witness.empty());

    MapFn<double> square = [](const FloatPoint& x) { return FloatPoint{x[0] * x[0], x[1]}; };
    Sampler<double> interior(5, true);
    auto sub = check_subhomogeneous(square, 2, interior, 500);
    CHECK_FALSE(sub.passed);
    REQUIRE(sub.witness.size() >= 2);
    CHECK(sub.witness[1].rfind("lambda = ", 0) == 0);

    // order preserving but not subhomogeneous: the metric check must fail too
    auto suite = check_properties(ConeSpec::standard(2), square, 2, interior, 500);
    CHECK(suite.order_preserving.passed);
    CHECK_FALSE(suite.subhomogeneous.passed);
    CHECK_FALSE(suite.dt_nonexpansive.passed);
    CHECK_FALSE(suite.inconsistent);
}

TEST_CASE("randomized grammar soundness")
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 1 + rng() % 6;
        MinMaxMap f = random_map(n, rng);
        Sampler<Rational> s(rng());
        auto suite = check_properties(ConeSpec::standard(n), as_map_fn<Rational>(f), n, s, 100);
        CHECK(suite.order_preserving.passed);
        CHECK(suite.subhomogeneous.passed);
        CHECK(suite.dt_nonexpansive.passed);
        CHECK_FALSE(suite.inconsistent);
    }
}

TEST_CASE("checks are deterministic for a fixed seed")
{
    MapFn<double> square = [](const FloatPoint& x) { return FloatPoint{x[0] * x[0], x[1]}; };
    Sampler<double> a(99, true), b(99, true);
    auto ra = check_subhomogeneous(square, 2, a, 100);
    auto rb = check_subhomogeneous(square, 2, b, 100);
    CHECK(ra.witness == rb.witness);
    CHECK(ra.samples == rb.samples);
}

TEST_CASE("log conjugation")
{
    MapFn<double> identity = [](const FloatPoint& u) { return u; };
    FloatPoint x{2.0, 5.0};
    CHECK(sup_distance(conjugate_log(identity)(x), x) < 1e-12);

    MapFn<double> shift = [](const FloatPoint& u) { return FloatPoint{u[0] + 1.0, u[1] - 2.0}; };
    FloatPoint h = conjugate_log(shift)(x);
    CHECK(h[0] == doctest::Approx(2.0 * std::exp(1.0)));
    CHECK(h[1] == doctest::Approx(5.0 * std::exp(-2.0)));

    CHECK(sup_distance(conjugate_log(swap2())(x), FloatPoint{5.0, 2.0}) < 1e-12);
    CHECK_THROWS_AS(conjugate_log(identity)(FloatPoint{0.0, 1.0}), DomainError);

    // a topical map: sup-norm nonexpansive and additively homogeneous on R^2
    MapFn<double> topical = [](const FloatPoint& u) {
        return FloatPoint{std::max(u[0], u[1] - 1.0), 0.5 * (u[0] + u[1])};
    };
    Sampler<double> s(6, true);
    auto suite = check_properties(ConeSpec::standard(2), conjugate_log(topical), 2, s, 500);
    CHECK(suite.order_preserving.passed);
    CHECK(suite.subhomogeneous.passed);
    CHECK(suite.dt_nonexpansive.passed);
}

TEST_CASE("sampler on a general cone stays inside it")
{
    ConeSpec wedge = ConeSpec::from_facets({{Rational(1), Rational(-1)}, {Rational(0), Rational(1)}});
    Sampler<Rational> s(8);
    for (int i = 0; i < 100; ++i) {
        auto [x, y] = s.same_part_pair(wedge);
        CHECK(contains(wedge, x));
        CHECK(contains(wedge, y));
        CHECK(part_index(wedge, x) == part_index(wedge, y));
    }
}

}
