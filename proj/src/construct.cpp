#include "conedyn/construct.hpp"

#include "conedyn/corpus.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

namespace conedyn {

namespace {

void require_feasible(std::size_t n, std::size_t m, std::size_t p, std::size_t q)
{
    if (m < 1 || m > n) throw DomainError("need 1 <= m <= n, got m=" + std::to_string(m) + ", n=" + std::to_string(n));
    BigInt pcap = binomial(m, m / 2), qcap = binomial(n, m);
    if (p < 1 || BigInt(p) > pcap)
        throw DomainError("need 1 <= p <= C(" + std::to_string(m) + "," + std::to_string(m / 2) + ")=" + pcap.get_str() +
                          ", got p=" + std::to_string(p));
    if (q < 1 || BigInt(q) > qcap)
        throw DomainError("need 1 <= q <= C(" + std::to_string(n) + "," + std::to_string(m) + ")=" + qcap.get_str() +
                          ", got q=" + std::to_string(q));
}

std::vector<std::size_t> mask_indices(std::uint64_t mask)
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < 64; ++i)
        if (mask >> i & 1u) out.push_back(i + 1);
    return out;
}

// The first `count` m-subsets of {1..n} in colexicographic order.
std::vector<std::vector<std::size_t>> colex_subsets(std::size_t n, std::size_t m, std::size_t count)
{
    std::vector<std::vector<std::size_t>> out;
    std::uint64_t mask = m == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
    const std::uint64_t limit = n == 64 ? 0 : std::uint64_t{1} << n;
    while (out.size() < count) {
        out.push_back(mask_indices(mask));
        std::uint64_t c = mask & -mask;
        std::uint64_t r = mask + c;
        if (r == 0 || (limit && r >= limit)) break;
        mask = (((r ^ mask) >> 2) / c) | r;
        if (limit && mask >= limit) break;
    }
    return out;
}

std::vector<std::vector<std::size_t>> lex_subsets(std::size_t n, std::size_t m, std::size_t count)
{
    std::vector<std::vector<std::size_t>> out;
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(m), true);
    do {
        std::vector<std::size_t> s;
        for (std::size_t i = 0; i < n; ++i)
            if (pick[i]) s.push_back(i + 1);
        out.push_back(std::move(s));
    } while (out.size() < count && std::prev_permutation(pick.begin(), pick.end()));
    return out;
}

ExprPtr min_of_all(std::size_t m)
{
    std::vector<ExprPtr> vars;
    for (std::size_t l = 1; l <= m; ++l) vars.push_back(make_var(l));
    return make_min(std::move(vars));
}

struct CatalogEntry {
    MinMaxMap h;
    ExactPoint y;
    std::string name;
};

// Fixed point of the coordinatewise minimum.
CatalogEntry catalog_min(std::size_t m)
{
    std::vector<ExprPtr> comps(m, min_of_all(m));
    return {MinMaxMap(std::move(comps)), ExactPoint(std::vector<Rational>(m, Rational(1))), "min"};
}

CatalogEntry catalog_swap3()
{
    MinMaxMap h({make_min({make_var(1, 3), make_var(2)}), make_min({make_var(1), make_var(2, 3)})});
    return {std::move(h), ExactPoint{Rational(1), Rational(2)}, "two-cycle"};
}

// Cycles through the indicator-like points y^j = 1 + 1_{S_j} for distinct
// ⌊m/2⌋-subsets S_1..S_p: g_i is the max of min_{S_j} z over the j with
// i in S_{j+1}, so g(y^j) = y^{j+1}.
CatalogEntry catalog_antichain(std::size_t m, std::size_t p)
{
    auto subsets = colex_subsets(m, m / 2, p);
    std::vector<ExprPtr> comps;
    for (std::size_t i = 1; i <= m; ++i) {
        std::vector<ExprPtr> terms;
        for (std::size_t j = 0; j < p; ++j) {
            const auto& next = subsets[(j + 1) % p];
            if (!std::binary_search(next.begin(), next.end(), i)) continue;
            std::vector<ExprPtr> vars;
            for (std::size_t l : subsets[j]) vars.push_back(make_var(l));
            terms.push_back(make_min(std::move(vars)));
        }
        comps.push_back(terms.empty() ? min_of_all(m) : make_max(std::move(terms)));
    }
    ExactPoint y(std::vector<Rational>(m, Rational(1)));
    for (std::size_t l : subsets[0]) y[l - 1] = 2;
    return {MinMaxMap(std::move(comps)), std::move(y), "antichain"};
}

std::optional<CatalogEntry> catalog_lookup(std::size_t m, std::size_t p)
{
    if (p == 1) return catalog_min(m);
    if (m == 2 && p == 2) return catalog_swap3();
    if (m >= 2 && BigInt(p) <= binomial(m, m / 2)) return catalog_antichain(m, p);
    return std::nullopt;
}

std::vector<ExactPoint> exact_orbit(const MinMaxMap& g, const ExactPoint& y, std::size_t p)
{
    std::vector<ExactPoint> orbit{y};
    for (std::size_t j = 1; j < p; ++j) orbit.push_back(g(orbit.back()));
    return orbit;
}

bool is_interior(const ExactPoint& x)
{
    return std::all_of(x.begin(), x.end(), [](const Rational& v) { return v > 0; });
}

OrbitOptions certify_options(std::size_t p)
{
    OrbitOptions o;
    o.mode = ArithmeticMode::Exact;
    o.max_iters = 4 * p + 64;
    return o;
}

// Period p with no transient, interior orbit.
bool certified(const MinMaxMap& g, const ExactPoint& y, std::size_t p)
{
    auto rep = iterate_orbit<Rational>(ConeSpec::standard(g.dim()), g, y, certify_options(p));
    return rep.outcome == Outcome::Converged && rep.period == p && rep.transient == 0 &&
           std::all_of(rep.cycle.begin(), rep.cycle.end(), is_interior);
}

std::optional<CatalogEntry> search_inner(std::size_t m, std::size_t p, const InnerMapOptions& opts)
{
    std::seed_seq seq{static_cast<std::uint32_t>(opts.seed), static_cast<std::uint32_t>(opts.seed >> 32),
                      static_cast<std::uint32_t>(m), static_cast<std::uint32_t>(p), 0x696e6e72u};
    std::mt19937_64 rng(seq);
    OrbitOptions o;
    o.mode = ArithmeticMode::Exact;
    o.max_iters = 4 * p + 200;
    o.exact_bit_limit = 512;
    const ConeSpec cone = ConeSpec::standard(m);
    for (std::size_t k = 0; k < opts.search_budget; ++k) {
        MinMaxMap h = random_map(m, rng, 3, true);
        ExactPoint y0(m);
        for (auto& v : y0) v = Rational(static_cast<long>(1 + rng() % 4));
        auto rep = iterate_orbit<Rational>(cone, h, y0, o);
        if (rep.outcome != Outcome::Converged || rep.period != p) continue;
        if (!std::all_of(rep.cycle.begin(), rep.cycle.end(), is_interior)) continue;
        return CatalogEntry{std::move(h), rep.cycle.front(), "search"};
    }
    return std::nullopt;
}

} // namespace

std::size_t SupportScheme::nu(std::size_t k, std::size_t i) const
{
    if (supports.empty() || k < 1 || i < 1 || i > m) throw ContractError("nu: index out of range");
    return supports[(k - 1) % supports.size()][i - 1];
}

std::vector<std::vector<int>> SupportScheme::vectors() const
{
    std::vector<std::vector<int>> out;
    for (const auto& s : supports) {
        std::vector<int> v(n, 0);
        for (std::size_t i : s) v[i - 1] = 1;
        out.push_back(std::move(v));
    }
    return out;
}

SupportScheme choose_vectors(std::size_t n, std::size_t m, std::size_t q, SupportStrategy strategy)
{
    if (m < 1 || m > n) throw DomainError("choose_vectors: need 1 <= m <= n");
    if (n > 63) throw ContractError("choose_vectors: n must be at most 63");
    if (q < 1 || BigInt(q) > binomial(n, m))
        throw DomainError("choose_vectors: need 1 <= q <= C(" + std::to_string(n) + "," + std::to_string(m) +
                          ")=" + binomial(n, m).get_str() + ", got q=" + std::to_string(q));
    SupportScheme s;
    s.n = n;
    s.m = m;
    s.supports = strategy == SupportStrategy::Colex ? colex_subsets(n, m, q) : lex_subsets(n, m, q);
    return s;
}

MinMaxMap clamp_map(const MinMaxMap& h, const Rational& C)
{
    if (C <= 0) throw ContractError("clamp constant must be positive");
    const std::size_t m = h.dim();
    std::vector<ExprPtr> comps;
    for (const auto& comp : h.components()) {
        std::vector<ExprPtr> atoms;
        if (const auto* mn = std::get_if<MinNode>(&comp->node))
            atoms = mn->children;
        else
            atoms.push_back(comp);
        // Smallest coefficient per variable among bare atoms; C z_l is one of them.
        std::map<std::size_t, Rational> coeff;
        for (std::size_t l = 1; l <= m; ++l) coeff[l] = C;
        for (const auto& a : atoms)
            if (const auto* v = std::get_if<VarNode>(&a->node)) coeff[v->index] = std::min(coeff[v->index], v->coeff);
        std::vector<ExprPtr> merged;
        std::vector<bool> placed(m + 1, false);
        for (const auto& a : atoms) {
            if (const auto* v = std::get_if<VarNode>(&a->node)) {
                if (!placed[v->index]) merged.push_back(make_var(v->index, coeff[v->index]));
                placed[v->index] = true;
            } else {
                merged.push_back(a);
            }
        }
        for (std::size_t l = 1; l <= m; ++l)
            if (!placed[l]) merged.push_back(make_var(l, coeff[l]));
        comps.push_back(make_min(std::move(merged)));
    }
    return MinMaxMap(std::move(comps));
}

Rational default_clamp(const MinMaxMap& h, const std::vector<ExactPoint>& orbit)
{
    Rational worst = 0;
    for (const auto& y : orbit) {
        ExactPoint hy = h(y);
        Rational top = *std::max_element(hy.begin(), hy.end());
        Rational bottom = *std::min_element(y.begin(), y.end());
        if (bottom <= 0) throw ContractError("default_clamp: orbit point " + to_string(y) + " is not interior");
        worst = std::max(worst, Rational(top / bottom));
    }
    return (1 + worst) * 2;
}

InnerMap inner_map(std::size_t m, std::size_t p, const InnerMapOptions& opts)
{
    if (m < 1) throw DomainError("inner_map: m must be at least 1");
    if (p < 1 || BigInt(p) > binomial(m, m / 2))
        throw DomainError("inner_map: need 1 <= p <= C(" + std::to_string(m) + "," + std::to_string(m / 2) + ")");

    std::optional<CatalogEntry> entry;
    if (opts.use_catalog) entry = catalog_lookup(m, p);
    if (!entry) entry = search_inner(m, p, opts);
    if (!entry)
        throw ResourceError("inner_map: no certified map with m=" + std::to_string(m) + ", p=" + std::to_string(p) +
                            " within a search budget of " + std::to_string(opts.search_budget));

    InnerMap g;
    g.h = entry->h;
    g.y = entry->y;
    g.period = p;
    g.source = entry->name;
    g.orbit = exact_orbit(g.h, g.y, p);
    if (!certified(g.h, g.y, p))
        throw ConstructionError("inner_map: " + g.source + " entry for m=" + std::to_string(m) +
                                ", p=" + std::to_string(p) + " failed certification");

    Rational C = opts.clamp ? *opts.clamp : default_clamp(g.h, g.orbit);
    for (int attempt = 0;; ++attempt) {
        if (attempt == 64) throw ConstructionError("inner_map: clamp constant could not be made inactive on the orbit");
        MinMaxMap clamped = clamp_map(g.h, C);
        bool unchanged = std::all_of(g.orbit.begin(), g.orbit.end(),
                                     [&](const ExactPoint& y) { return clamped(y) == g.h(y); });
        if (unchanged) {
            g.clamp = C;
            g.g = std::move(clamped);
            break;
        }
        C *= 2;
    }
    if (!certified(g.g, g.y, p)) throw ConstructionError("inner_map: clamped map lost the certified orbit");
    return g;
}

MinMaxMap outer_map(const SupportScheme& scheme, const InnerMap& g)
{
    if (g.dim() != scheme.m)
        throw ContractError("outer_map: inner map has dimension " + std::to_string(g.dim()) + ", scheme has m=" +
                            std::to_string(scheme.m));
    const std::size_t q = scheme.q();
    std::vector<std::vector<ExprPtr>> branches(scheme.n);
    for (std::size_t k = 1; k <= q; ++k) {
        std::vector<std::size_t> restriction(scheme.m);
        for (std::size_t j = 1; j <= scheme.m; ++j) restriction[j - 1] = scheme.nu(k, j);
        for (std::size_t r = 1; r <= scheme.m; ++r) {
            std::size_t i = scheme.nu(k + 1, r);
            branches[i - 1].push_back(substitute_vars(g.g.component(r - 1), restriction));
        }
    }
    std::vector<ExprPtr> comps;
    for (auto& b : branches) comps.push_back(b.empty() ? make_const(0) : make_max(std::move(b)));
    return MinMaxMap(std::move(comps));
}

ConstructedOrbit orbit_points(const SupportScheme& scheme, const InnerMap& g)
{
    const std::size_t p = g.period, q = scheme.q();
    if (g.orbit.size() != p) throw ContractError("orbit_points: inner map carries no certified orbit");
    ConstructedOrbit out;
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 1; b <= q; ++b) {
            ExactPoint y(std::vector<Rational>(scheme.n, Rational(0)));
            for (std::size_t r = 1; r <= scheme.m; ++r) y[scheme.nu(b, r) - 1] = g.orbit[a][r - 1];
            out.points.push_back({a, b, std::move(y)});
        }
    auto index_of = [&](std::size_t a, std::size_t b) { return a * q + (b - 1); };

    for (std::size_t i = 0; i < out.points.size(); ++i)
        for (std::size_t j = i + 1; j < out.points.size(); ++j)
            if (out.points[i].point == out.points[j].point)
                throw ConstructionError("orbit_points: y^{" + std::to_string(out.points[i].a) + "," +
                                        std::to_string(out.points[i].b) + "} coincides with y^{" +
                                        std::to_string(out.points[j].a) + "," + std::to_string(out.points[j].b) + "}");

    MinMaxMap f = outer_map(scheme, g);
    for (const auto& lp : out.points) {
        const auto& next = out.points[index_of((lp.a + 1) % p, lp.b % q + 1)];
        if (!(f(lp.point) == next.point))
            throw ConstructionError("orbit_points: f(y^{" + std::to_string(lp.a) + "," + std::to_string(lp.b) +
                                    "}) = " + to_string(f(lp.point)) + " but y^{" + std::to_string(next.a) + "," +
                                    std::to_string(next.b) + "} = " + to_string(next.point));
    }

    std::size_t a = 0, b = 1;
    do {
        out.cycle.push_back(index_of(a, b));
        a = (a + 1) % p;
        b = b % q + 1;
    } while (!(a == 0 && b == 1));
    return out;
}

PeriodMap build_period_map(std::size_t n, std::size_t m, std::size_t p, std::size_t q, const InnerMapOptions& opts)
{
    require_feasible(n, m, p, q);
    PeriodMap out;
    out.scheme = choose_vectors(n, m, q);
    out.inner = inner_map(m, p, opts);
    out.map = outer_map(out.scheme, out.inner);
    ConstructedOrbit orbit = orbit_points(out.scheme, out.inner);
    out.start = orbit.points[0].point;
    out.expected_period = std::lcm(p, q);

    OrbitOptions o = certify_options(out.expected_period);
    auto rep = iterate_orbit<Rational>(ConeSpec::standard(n), out.map, out.start, o);
    out.confirmed_period = rep.outcome == Outcome::Converged ? rep.period : 0;
    out.confirmed = rep.outcome == Outcome::Converged && rep.period == out.expected_period && rep.transient == 0;
    if (!out.confirmed)
        throw ConstructionError("build_period_map: exact orbit of the constructed map has period " +
                                std::to_string(out.confirmed_period) + ", expected " +
                                std::to_string(out.expected_period));
    return out;
}

} // namespace conedyn
