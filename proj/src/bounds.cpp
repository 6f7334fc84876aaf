#include "conedyn/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <set>

namespace conedyn {

namespace {

using u128 = unsigned __int128;

std::uint64_t to_u64(const BigInt& v)
{
    if (v < 0 || mpz_sizeinbase(v.get_mpz_t(), 2) > 64) throw ResourceError("value exceeds 64 bits: " + v.get_str());
    return mpz_get_ui(v.get_mpz_t());
}

BigInt factorial(unsigned long n)
{
    BigInt r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

void require_positive(unsigned long N, const char* what)
{
    if (N < 1) throw ContractError(std::string(what) + ": N must be at least 1");
}

} // namespace

BigInt binomial(unsigned long n, unsigned long k)
{
    BigInt r;
    if (k > n) return r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

BigInt multinomial(unsigned long q, unsigned long r, unsigned long s)
{
    return factorial(q + r + s) / (factorial(q) * factorial(r) * factorial(s));
}

BigInt beta_closed_form(unsigned long N)
{
    require_positive(N, "beta");
    return multinomial(N / 3, (N + 1) / 3, (N + 2) / 3);
}

BigInt beta_multinomial_max(unsigned long N)
{
    require_positive(N, "beta");
    BigInt best = 0;
    for (unsigned long q = 0; q <= N; ++q)
        for (unsigned long r = 0; q + r <= N; ++r) {
            BigInt v = multinomial(q, r, N - q - r);
            if (v > best) best = v;
        }
    return best;
}

BetaForms evaluate_beta_forms(unsigned long n)
{
    require_positive(n, "beta forms");
    BetaForms ev;
    ev.n = n;
    ev.closed_form = beta_closed_form(n);
    ev.multinomial_max = beta_multinomial_max(n);
    ev.binomial_product_max = 0;
    for (unsigned long m = 1; m <= n; ++m) {
        BigInt v = binomial(n, std::max(m, n / 2)) * binomial(m, m / 2);
        if (v > ev.binomial_product_max) {
            ev.binomial_product_max = v;
            ev.maximizers.assign(1, m);
        } else if (v == ev.binomial_product_max) {
            ev.maximizers.push_back(m);
        }
    }
    return ev;
}

BigInt beta_binomial_product_max(unsigned long N)
{
    return evaluate_beta_forms(N).binomial_product_max;
}

bool beta_forms_agree(unsigned long n)
{
    return evaluate_beta_forms(n).agree();
}

unsigned long m_star_formula(unsigned long n)
{
    return (n + 1) / 3 + (n + 2) / 3;
}

BigInt beta(unsigned long N)
{
    BetaForms ev = evaluate_beta_forms(N);
    if (!ev.agree())
        throw InvariantError("beta(" + std::to_string(N) + "): closed form " + ev.closed_form.get_str() +
                             ", multinomial max " + ev.multinomial_max.get_str() + ", binomial product max " +
                             ev.binomial_product_max.get_str() + " disagree");
    return ev.closed_form;
}

BigInt alpha(unsigned long N)
{
    require_positive(N, "alpha");
    if (N > kAlphaMaxN)
        throw ResourceError("alpha: N = " + std::to_string(N) + " exceeds the enumeration limit " +
                            std::to_string(kAlphaMaxN));
    struct Band {
        std::uint64_t P, Q;
        u128 area;
    };
    std::vector<Band> bands;
    for (unsigned long m = 1; m <= N; ++m) {
        std::uint64_t P = to_u64(binomial(m, m / 2));
        std::uint64_t Q = to_u64(binomial(N, m));
        bands.push_back({P, Q, static_cast<u128>(P) * Q});
    }
    std::stable_sort(bands.begin(), bands.end(), [](const Band& a, const Band& b) { return a.area > b.area; });

    u128 best = 0;
    for (const Band& band : bands) {
        if (band.area <= best) break;
        for (std::uint64_t q = band.Q; q >= 1; --q) {
            if (static_cast<u128>(band.P) * q <= best) break;
            for (std::uint64_t p = band.P; p >= 1; --p) {
                u128 prod = static_cast<u128>(p) * q;
                if (prod <= best) break;
                u128 l = prod / std::gcd(p, q);
                if (l > best) best = l;
            }
        }
    }
    BigInt hi = static_cast<std::uint64_t>(best >> 64), lo = static_cast<std::uint64_t>(best);
    return (hi << 64) + lo;
}

bool PeriodSet::contains(std::uint64_t v) const
{
    return std::binary_search(values.begin(), values.end(), v);
}

BigInt period_pair_count(unsigned long N)
{
    BigInt total = 0;
    for (unsigned long m = 1; m <= N; ++m) total += binomial(N, m) * binomial(m, m / 2);
    return total;
}

std::uint64_t default_period_budget()
{
    static const std::uint64_t budget = to_u64(period_pair_count(12));
    return budget;
}

namespace {

template <class Combine>
PeriodSet enumerate_periods(unsigned long N, std::uint64_t budget, const char* name, Combine combine)
{
    require_positive(N, name);
    std::set<std::uint64_t> seen;
    std::uint64_t visited = 0;
    auto snapshot = [&](bool partial) { return PeriodSet{{seen.begin(), seen.end()}, partial}; };
    for (unsigned long m = 1; m <= N; ++m) {
        BigInt Q1 = binomial(N, m), Q2 = binomial(m, m / 2);
        if (BigInt(Q1 * Q2) > BigInt(budget - visited))
            throw EnumerationBudgetError(std::string(name) + "(" + std::to_string(N) +
                                             "): enumeration budget of " + std::to_string(budget) +
                                             " pairs exceeded",
                                         snapshot(true));
        std::uint64_t q1max = to_u64(Q1), q2max = to_u64(Q2);
        for (std::uint64_t q1 = 1; q1 <= q1max; ++q1)
            for (std::uint64_t q2 = 1; q2 <= q2max; ++q2) seen.insert(combine(q1, q2));
        visited += q1max * q2max;
    }
    return snapshot(false);
}

} // namespace

PeriodSet set_A(unsigned long N, std::uint64_t budget)
{
    return enumerate_periods(N, budget, "set_A", [](std::uint64_t a, std::uint64_t b) { return std::lcm(a, b); });
}

PeriodSet set_B(unsigned long N, std::uint64_t budget)
{
    return enumerate_periods(N, budget, "set_B", [](std::uint64_t a, std::uint64_t b) { return a * b; });
}

Factorization period_factorization(std::uint64_t p, unsigned long m, unsigned long N)
{
    if (p < 1) throw ContractError("period_factorization: p must be at least 1");
    if (m > N) throw ContractError("period_factorization: need m <= N");
    Factorization f;
    f.q1_bound = binomial(N, std::max(m, N / 2));
    f.q2_bound = binomial(m, m / 2);
    std::vector<std::uint64_t> divisors;
    for (std::uint64_t d = 1; d * d <= p; ++d)
        if (p % d == 0) {
            divisors.push_back(d);
            if (d != p / d) divisors.push_back(p / d);
        }
    std::sort(divisors.rbegin(), divisors.rend());
    for (std::uint64_t q1 : divisors) {
        std::uint64_t q2 = p / q1;
        if (BigInt(q1) <= f.q1_bound && BigInt(q2) <= f.q2_bound) {
            f.ok = true;
            f.q1 = q1;
            f.q2 = q2;
            break;
        }
    }
    return f;
}

bool is_prime(const BigInt& n)
{
    if (n < 2) return false;
    static const unsigned long bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
    for (unsigned long b : bases) {
        if (n == b) return true;
        if (mpz_divisible_ui_p(n.get_mpz_t(), b)) return false;
    }
    static const BigInt deterministic_limit("3317044064679887385961981");
    if (n >= deterministic_limit) return mpz_probab_prime_p(n.get_mpz_t(), 50) > 0;

    BigInt d = n - 1;
    unsigned long s = 0;
    while (mpz_even_p(d.get_mpz_t())) {
        d /= 2;
        ++s;
    }
    const BigInt n1 = n - 1;
    for (unsigned long b : bases) {
        BigInt x;
        BigInt base = b;
        mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
        if (x == 1 || x == n1) continue;
        bool composite = true;
        for (unsigned long r = 1; r < s; ++r) {
            x = (x * x) % n;
            if (x == n1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

BigInt largest_prime_le(const BigInt& k)
{
    if (k < 2) throw DomainError("largest_prime_le: k must be at least 2, got " + k.get_str());
    BigInt c = k;
    while (!is_prime(c)) --c;
    return c;
}

double stirling_ratio(unsigned long N)
{
    require_positive(N, "stirling_ratio");
    BigInt b = beta_closed_form(N);
    long exp2 = 0;
    double mant = mpz_get_d_2exp(&exp2, b.get_mpz_t());
    double log_beta = std::log(mant) + static_cast<double>(exp2) * std::numbers::ln2;
    double log_ratio = log_beta + std::log(2 * std::numbers::pi * static_cast<double>(N)) -
                       (static_cast<double>(N) + 1.5) * std::log(3.0);
    return std::exp(log_ratio);
}

std::vector<BoundsRow> bounds_table(unsigned long n_max)
{
    std::vector<BoundsRow> rows;
    for (unsigned long N = 1; N <= n_max; ++N) {
        BoundsRow row;
        row.N = N;
        row.alpha = alpha(N);
        row.beta = beta(N);
        row.ratio = Rational(row.alpha, row.beta).get_d();
        row.stirling_ratio = stirling_ratio(N);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string format_bounds_csv(const std::vector<BoundsRow>& rows, bool with_stirling)
{
    std::string out = with_stirling ? "N,alpha,beta,stirling_ratio\n" : "N,alpha,beta\n";
    for (const BoundsRow& r : rows) {
        out += std::to_string(r.N) + "," + r.alpha.get_str() + "," + r.beta.get_str();
        if (with_stirling) {
            char buf[32];
            std::snprintf(buf, sizeof buf, ",%.6f", r.stirling_ratio);
            out += buf;
        }
        out += "\n";
    }
    return out;
}

} // namespace conedyn
