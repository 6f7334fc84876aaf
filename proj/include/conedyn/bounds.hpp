#pragma once

#include "conedyn/errors.hpp"
#include "conedyn/scalar.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace conedyn {

BigInt binomial(unsigned long n, unsigned long k);

// N! / (q! r! s!)
BigInt multinomial(unsigned long q, unsigned long r, unsigned long s);

// N! / (⌊N/3⌋! ⌊(N+1)/3⌋! ⌊(N+2)/3⌋!)
BigInt beta_closed_form(unsigned long N);

// max over q + r + s = N of the trinomial coefficient, by enumeration.
BigInt beta_multinomial_max(unsigned long N);

// max over 1 <= m <= N of C(N, max{m, ⌊N/2⌋}) * C(m, ⌊m/2⌋).
BigInt beta_binomial_product_max(unsigned long N);

// The three expressions evaluated independently, with every maximizer of the
// binomial-product form.
struct BetaForms {
    unsigned long n = 0;
    BigInt closed_form;
    BigInt multinomial_max;
    BigInt binomial_product_max;
    std::vector<unsigned long> maximizers;  // ascending

    bool agree() const { return closed_form == multinomial_max && closed_form == binomial_product_max; }
    // Ties occur for n = 1, 2 (mod 3); the largest maximizer is the one the
    // formula ⌊(n+1)/3⌋ + ⌊(n+2)/3⌋ names.
    unsigned long m_star() const { return maximizers.back(); }
};

BetaForms evaluate_beta_forms(unsigned long n);
bool beta_forms_agree(unsigned long n);
unsigned long m_star_formula(unsigned long n);

// Upper bound on periods for a cone with N facets. All three forms are
// computed; disagreement throws InvariantError.
BigInt beta(unsigned long N);

// Lower bound max lcm(p, q) over 1 <= m <= N, p <= C(m, ⌊m/2⌋), q <= C(N, m).
inline constexpr unsigned long kAlphaMaxN = 60;
BigInt alpha(unsigned long N);

// A(N) collects lcm(q1, q2), B(N) the products q1 * q2, over
// 1 <= m <= N, q1 <= C(N, m), q2 <= C(m, ⌊m/2⌋).
struct PeriodSet {
    std::vector<std::uint64_t> values;  // ascending, deduplicated
    bool partial = false;

    bool contains(std::uint64_t v) const;
};

class EnumerationBudgetError : public ResourceError {
public:
    EnumerationBudgetError(const std::string& what, PeriodSet partial)
        : ResourceError(what), partial_(std::move(partial)) {}
    const PeriodSet& partial_result() const noexcept { return partial_; }

private:
    PeriodSet partial_;
};

// Number of (q1, q2) pairs the enumeration visits for a given N.
BigInt period_pair_count(unsigned long N);
// Default budget: the pair count at N = 12.
std::uint64_t default_period_budget();

PeriodSet set_A(unsigned long N, std::uint64_t budget = default_period_budget());
PeriodSet set_B(unsigned long N, std::uint64_t budget = default_period_budget());

struct Factorization {
    bool ok = false;
    std::uint64_t q1 = 0;
    std::uint64_t q2 = 0;
    BigInt q1_bound;
    BigInt q2_bound;
};

// p = q1 q2 with q1 <= C(N, max{m, ⌊N/2⌋}) and q2 <= C(m, ⌊m/2⌋). The witness
// uses the largest admissible q1.
Factorization period_factorization(std::uint64_t p, unsigned long m, unsigned long N);

// Miller-Rabin with the first thirteen prime bases, deterministic below
// 3.3e24; above that GMP's probabilistic test with 50 rounds.
bool is_prime(const BigInt& n);
BigInt largest_prime_le(const BigInt& k);

// beta_N * 2 pi N / (3^{N+1} sqrt 3), in the log domain.
double stirling_ratio(unsigned long N);

struct BoundsRow {
    unsigned long N = 0;
    BigInt alpha;
    BigInt beta;
    double ratio = 0;
    double stirling_ratio = 0;
};

std::vector<BoundsRow> bounds_table(unsigned long n_max);
std::string format_bounds_csv(const std::vector<BoundsRow>& rows, bool with_stirling);

} // namespace conedyn
