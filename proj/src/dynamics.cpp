#include "conedyn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_map>

namespace conedyn {

std::string to_string(Outcome o)
{
    switch (o) {
    case Outcome::Converged: return "converged";
    case Outcome::Unbounded: return "unbounded";
    case Outcome::Inconclusive: return "inconclusive";
    }
    return "?";
}

std::string to_string(CheckStatus s)
{
    switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::NotApplicable: return "n/a";
    }
    return "?";
}

void OrbitOptions::validate() const
{
    if (max_iters < 1) throw ContractError("orbit options: max_iters must be at least 1");
    if (!(float_tol > 0)) throw ContractError("orbit options: float_tol must be positive");
    if (!(divergence_norm_bound > 0)) throw ContractError("orbit options: divergence_norm_bound must be positive");
    if (required_streak < 1) throw ContractError("orbit options: required_streak must be at least 1");
    if (exact_bit_limit < 1) throw ContractError("orbit options: exact_bit_limit must be at least 1");
}

bool OrbitChecks::any_failed() const
{
    return antichain.failed() || m_invariance.failed() || factorization.failed() || beta_bound.failed() ||
           interior_bound.failed();
}

void detect_part_period(PartTrajectory& traj)
{
    traj.periodic = false;
    traj.preperiod = traj.period = 0;
    std::unordered_map<PartIndex, std::size_t, PartIndexHash> first_seen;
    for (std::size_t k = 0; k < traj.parts.size(); ++k) {
        auto [it, inserted] = first_seen.emplace(traj.parts[k], k);
        if (!inserted) {
            traj.periodic = true;
            traj.preperiod = it->second;
            traj.period = k - it->second;
            return;
        }
    }
}

namespace {

template <class T>
bool exceeds_norm(const Point<T>& x, double bound)
{
    for (const auto& v : x) {
        double d = ScalarTraits<T>::to_double(v);
        if (!std::isfinite(d) || std::abs(d) > bound) return true;
    }
    return false;
}

std::size_t bit_size(const ExactPoint& x)
{
    std::size_t bits = 0;
    for (const auto& v : x)
        bits = std::max(bits, mpz_sizeinbase(v.get_num_mpz_t(), 2) + mpz_sizeinbase(v.get_den_mpz_t(), 2));
    return bits;
}

template <class T>
void require_start(const ConeSpec& cone, const Point<T>& x0, const char* what)
{
    require_same_dim(x0.dim(), cone.ambient_dim(), what);
    if (!contains(cone, x0)) throw DomainError(std::string(what) + ": starting point " + to_string(x0) + " is not in the cone");
}

template <class T>
Point<T> step(const MapFn<T>& f, const Point<T>& x, const ConeSpec& cone)
{
    Point<T> y = f(x);
    require_same_dim(y.dim(), cone.ambient_dim(), "orbit step");
    return y;
}

std::size_t auto_window(std::size_t facets)
{
    if (facets > 20) return 4096;
    std::uint64_t b = mpz_get_ui(beta_closed_form(std::max<std::size_t>(facets, 1)).get_mpz_t());
    return static_cast<std::size_t>(std::min<std::uint64_t>(2 * b + 16, 4096));
}

// Parts of the orbit x_0 .. x_{transient + period}; the last entry repeats
// the part of the first cycle point.
template <class T>
PartTrajectory cycle_parts(const ConeSpec& cone, const std::vector<Point<T>>& transient_points,
                           const std::vector<Point<T>>& cycle)
{
    PartTrajectory traj;
    for (const auto& x : transient_points) traj.parts.push_back(part_index(cone, x));
    for (const auto& x : cycle) traj.parts.push_back(part_index(cone, x));
    if (!cycle.empty()) traj.parts.push_back(part_index(cone, cycle.front()));
    detect_part_period(traj);
    return traj;
}

OrbitReport<Rational> iterate_exact(const ConeSpec& cone, const MapFn<Rational>& f, const ExactPoint& x0,
                                    const OrbitOptions& opts)
{
    OrbitReport<Rational> rep;
    rep.facet_count = cone.facet_count();

    auto guard = [&](const ExactPoint& x) -> bool {
        if (exceeds_norm(x, opts.divergence_norm_bound)) {
            rep.outcome = Outcome::Unbounded;
            rep.reason = "sup norm exceeded " + ScalarTraits<double>::to_string(opts.divergence_norm_bound);
            return false;
        }
        if (bit_size(x) > opts.exact_bit_limit) {
            rep.outcome = Outcome::Inconclusive;
            rep.reason = "exact iterate exceeded " + std::to_string(opts.exact_bit_limit) + " bits";
            return false;
        }
        if (rep.iterations >= opts.max_iters) {
            rep.outcome = Outcome::Inconclusive;
            rep.reason = "no cycle within " + std::to_string(opts.max_iters) + " iterations";
            return false;
        }
        return true;
    };

    if (!guard(x0)) return rep;
    // Brent: lam becomes the exact cycle length.
    std::size_t power = 1, lam = 1;
    ExactPoint tortoise = x0;
    ExactPoint hare = step(f, x0, cone);
    ++rep.iterations;
    while (!(tortoise == hare)) {
        if (!guard(hare)) return rep;
        if (power == lam) {
            tortoise = hare;
            power *= 2;
            lam = 0;
        }
        hare = step(f, hare, cone);
        ++rep.iterations;
        ++lam;
    }

    std::vector<ExactPoint> transient_points;
    tortoise = hare = x0;
    for (std::size_t i = 0; i < lam; ++i) hare = step(f, hare, cone);
    std::size_t mu = 0;
    while (!(tortoise == hare)) {
        transient_points.push_back(tortoise);
        tortoise = step(f, tortoise, cone);
        hare = step(f, hare, cone);
        ++mu;
    }

    rep.cycle.push_back(tortoise);
    for (std::size_t j = 1; j < lam; ++j) rep.cycle.push_back(step(f, rep.cycle.back(), cone));
    if (!(step(f, rep.cycle.back(), cone) == rep.cycle.front()))
        throw InvariantError("cycle detection: f^p(xi) != xi after Brent detection");
    for (std::size_t d = 1; d < lam; ++d)
        if (lam % d == 0 && rep.cycle[d] == rep.cycle.front())
            throw InvariantError("cycle detection: detected period " + std::to_string(lam) + " is not minimal");

    rep.outcome = Outcome::Converged;
    rep.period = lam;
    rep.transient = mu;
    rep.part_trajectory = cycle_parts(cone, transient_points, rep.cycle);
    return rep;
}

OrbitReport<double> iterate_float(const ConeSpec& cone, const MapFn<double>& f, const FloatPoint& x0,
                                  const OrbitOptions& opts)
{
    OrbitReport<double> rep;
    rep.facet_count = cone.facet_count();
    const std::size_t window = opts.max_period ? opts.max_period : auto_window(cone.facet_count());

    std::deque<FloatPoint> recent;  // x_{k-window} .. x_k
    std::vector<std::size_t> streak(window + 1, 0);
    PartTrajectory parts;
    std::unordered_map<PartIndex, std::size_t, PartIndexHash> seen;
    auto record_part = [&](const FloatPoint& x) {
        if (parts.periodic) return;
        PartIndex p = part_index(cone, x);
        auto [it, inserted] = seen.emplace(p, parts.parts.size());
        parts.parts.push_back(p);
        if (!inserted) {
            parts.periodic = true;
            parts.preperiod = it->second;
            parts.period = parts.parts.size() - 1 - it->second;
        }
    };

    FloatPoint x = x0;
    recent.push_back(x);
    record_part(x);
    std::size_t found = 0, found_at = 0;
    for (std::size_t k = 1; k <= opts.max_iters; ++k) {
        x = step(f, x, cone);
        rep.iterations = k;
        if (exceeds_norm(x, opts.divergence_norm_bound)) {
            rep.outcome = Outcome::Unbounded;
            rep.reason = "sup norm exceeded " + ScalarTraits<double>::to_string(opts.divergence_norm_bound);
            rep.part_trajectory = std::move(parts);
            return rep;
        }
        recent.push_back(x);
        if (recent.size() > window + 1) recent.pop_front();
        record_part(x);
        if (k <= opts.burn_in) continue;
        const std::size_t pmax = std::min(window, recent.size() - 1);
        for (std::size_t p = 1; p <= pmax; ++p) {
            const FloatPoint& back = recent[recent.size() - 1 - p];
            streak[p] = sup_distance(x, back) < opts.float_tol ? streak[p] + 1 : 0;
        }
        for (std::size_t p = 1; p <= pmax; ++p)
            if (streak[p] >= opts.required_streak) {
                found = p;
                break;
            }
        if (found) {
            found_at = k;
            break;
        }
    }
    rep.part_trajectory = std::move(parts);
    if (!found) {
        rep.outcome = Outcome::Inconclusive;
        rep.reason = "no period <= " + std::to_string(window) + " within " + std::to_string(opts.max_iters) +
                     " iterations at tolerance " + ScalarTraits<double>::to_string(opts.float_tol);
        return rep;
    }

    rep.outcome = Outcome::Converged;
    rep.period = found;
    for (std::size_t j = found; j >= 1; --j) rep.cycle.push_back(recent[recent.size() - j]);

    // Transient: first k with |x_{k+p} - x_k| < tol, by a second pass.
    std::deque<FloatPoint> ring{x0};
    FloatPoint y = x0;
    rep.transient = found_at - found;
    for (std::size_t k = 1; k <= found_at; ++k) {
        y = step(f, y, cone);
        ring.push_back(y);
        if (ring.size() > found + 1) ring.pop_front();
        if (ring.size() == found + 1 && sup_distance(ring.front(), ring.back()) < opts.float_tol) {
            rep.transient = k - found;
            break;
        }
    }
    return rep;
}

template <class T>
bool near_equal(const Point<T>& a, const Point<T>& b, double tol)
{
    if constexpr (ScalarTraits<T>::exact)
        return a == b;
    else
        return sup_distance(a, b) < tol;
}

} // namespace

template <class T>
OrbitReport<T> iterate_orbit(const ConeSpec& cone, const MapFn<T>& f, const Point<T>& x0, const OrbitOptions& opts)
{
    opts.validate();
    if (opts.mode != ScalarTraits<T>::mode)
        throw ContractError("iterate_orbit: options request " + std::string(to_string(opts.mode)) + " mode but the scalar type is " +
                            std::string(to_string(ScalarTraits<T>::mode)));
    require_start(cone, x0, "iterate_orbit");
    OrbitReport<T> rep;
    if constexpr (ScalarTraits<T>::exact)
        rep = iterate_exact(cone, f, x0, opts);
    else
        rep = iterate_float(cone, f, x0, opts);
    if (rep.outcome == Outcome::Converged) run_cycle_checks(cone, f, rep, opts.float_tol);
    return rep;
}

template <class T>
PartTrajectory part_trajectory(const ConeSpec& cone, const MapFn<T>& f, const Point<T>& x0, std::size_t kmax)
{
    require_start(cone, x0, "part_trajectory");
    PartTrajectory traj;
    Point<T> x = x0;
    traj.parts.push_back(part_index(cone, x));
    for (std::size_t k = 1; k <= kmax; ++k) {
        x = step(f, x, cone);
        traj.parts.push_back(part_index(cone, x));
    }
    detect_part_period(traj);
    return traj;
}

template <class T>
std::vector<Point<T>> omega_limit_estimate(const ConeSpec& cone, const MapFn<T>& f, const Point<T>& x0,
                                           const OrbitOptions& opts)
{
    OrbitReport<T> rep = iterate_orbit(cone, f, x0, opts);
    if (rep.outcome == Outcome::Unbounded) throw DomainError("omega_limit_estimate: orbit is unbounded");
    std::vector<Point<T>> candidates;
    if (rep.outcome == Outcome::Converged) {
        candidates = rep.cycle;
    } else if constexpr (ScalarTraits<T>::exact) {
        throw DomainError("omega_limit_estimate: exact orbit did not close (" + rep.reason +
                          "); rerun in float mode for an estimate");
    } else {
        const std::size_t window = opts.max_period ? opts.max_period : auto_window(cone.facet_count());
        std::deque<Point<T>> tail;
        Point<T> x = x0;
        for (std::size_t k = 1; k <= opts.max_iters; ++k) {
            x = step(f, x, cone);
            tail.push_back(x);
            if (tail.size() > window) tail.pop_front();
        }
        candidates.assign(tail.begin(), tail.end());
    }
    std::vector<Point<T>> clusters;
    for (auto& c : candidates) {
        bool placed = std::any_of(clusters.begin(), clusters.end(),
                                  [&](const Point<T>& r) { return near_equal(c, r, opts.float_tol); });
        if (!placed) clusters.push_back(std::move(c));
    }
    return clusters;
}

template <class T>
AntichainResult verify_antichain(const ConeSpec& cone, const std::vector<Point<T>>& points)
{
    AntichainResult res;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            if (points[i] == points[j]) continue;
            if (leq(cone, points[i], points[j]) || leq(cone, points[j], points[i])) {
                res.antichain = false;
                res.witness = {i, j};
                return res;
            }
        }
    return res;
}

template <class T>
MInvarianceResult verify_m_invariance(const ConeSpec& cone, const MapFn<T>& f, const std::vector<Point<T>>& cycle,
                                      double float_tol)
{
    MInvarianceResult res;
    std::vector<Point<T>> images;
    for (const auto& x : cycle) images.push_back(f(x));
    for (std::size_t i = 0; i < cycle.size(); ++i)
        for (std::size_t j = 0; j < cycle.size(); ++j) {
            if (i == j) continue;
            ++res.pairs;
            auto before = m_ratio(cone, cycle[j], cycle[i]);
            auto after = m_ratio(cone, images[j], images[i]);
            bool ok;
            double dev = 0;
            if (before.infinite || after.infinite) {
                ok = before.infinite == after.infinite;
                if (!ok) dev = HUGE_VAL;
            } else if constexpr (ScalarTraits<T>::exact) {
                ok = before.value == after.value;
                if (!ok) dev = std::abs(Rational(after.value - before.value).get_d());
            } else {
                dev = std::abs(after.value - before.value);
                ok = dev <= float_tol * std::max(1.0, std::abs(before.value));
            }
            res.max_deviation = std::max(res.max_deviation, dev);
            if (!ok && res.invariant) {
                res.invariant = false;
                res.witness = {i, j};
            }
        }
    return res;
}

template <class T>
bool verify_omega_dominance(const ConeSpec& cone, const MapFn<T>& f, const std::vector<Point<T>>& omega,
                            const std::vector<Point<T>>& cycle)
{
    if (cycle.empty()) return omega.empty();
    for (const auto& y : omega) {
        bool dominated = std::any_of(cycle.begin(), cycle.end(), [&](const Point<T>& c) { return leq(cone, c, y); });
        if (!dominated) return false;
    }
    auto in_cycle = [&](const Point<T>& z) {
        return std::any_of(cycle.begin(), cycle.end(), [&](const Point<T>& c) { return near_equal(c, z, kFloatTolerance); });
    };
    for (const auto& z : omega) {
        if (in_cycle(z)) continue;
        Point<T> w = z;
        for (std::size_t k = 0; k < omega.size(); ++k) {
            w = f(w);
            if (near_equal(w, z, kFloatTolerance)) return false;
        }
    }
    return true;
}

template <class T>
void run_cycle_checks(const ConeSpec& cone, const MapFn<T>& f, OrbitReport<T>& rep, double float_tol)
{
    OrbitChecks& c = rep.checks;
    const std::size_t N = cone.facet_count();
    const std::uint64_t p = rep.period;

    AntichainResult ac = verify_antichain(cone, rep.cycle);
    c.antichain.status = ac.antichain ? CheckStatus::Pass : CheckStatus::Fail;
    if (ac.witness)
        c.antichain.detail = "comparable: " + to_string(rep.cycle[ac.witness->first]) + " and " +
                             to_string(rep.cycle[ac.witness->second]);

    MInvarianceResult mi = verify_m_invariance(cone, f, rep.cycle, float_tol);
    c.m_invariance.status = mi.invariant ? CheckStatus::Pass : CheckStatus::Fail;
    c.m_invariance.detail = std::to_string(mi.pairs) + " ordered pairs";
    if (mi.witness)
        c.m_invariance.detail += "; M changes under f for " + to_string(rep.cycle[mi.witness->first]) + ", " +
                                 to_string(rep.cycle[mi.witness->second]);

    std::size_t min_support = N;
    bool interior = true;
    for (const auto& x : rep.cycle) {
        std::size_t s = part_index(cone, x).size();
        min_support = std::min(min_support, s);
        interior = interior && s == N;
    }
    if (N == 0) {
        c.factorization.status = c.beta_bound.status = p == 1 ? CheckStatus::Pass : CheckStatus::Fail;
        return;
    }
    Factorization fac = period_factorization(p, min_support, N);
    c.factorization.status = fac.ok ? CheckStatus::Pass : CheckStatus::Fail;
    c.factorization.detail = "m=" + std::to_string(min_support) + ", N=" + std::to_string(N) +
                             (fac.ok ? ", q1=" + std::to_string(fac.q1) + ", q2=" + std::to_string(fac.q2)
                                     : ", no q1 <= " + fac.q1_bound.get_str() + ", q2 <= " + fac.q2_bound.get_str());

    BigInt b = beta_closed_form(N);
    c.beta_bound.status = BigInt(p) <= b ? CheckStatus::Pass : CheckStatus::Fail;
    c.beta_bound.detail = "p=" + std::to_string(p) + ", beta_" + std::to_string(N) + "=" + b.get_str();

    if (interior) {
        BigInt cap = binomial(N, N / 2);
        c.interior_bound.status = BigInt(p) <= cap ? CheckStatus::Pass : CheckStatus::Fail;
        c.interior_bound.detail = "p=" + std::to_string(p) + ", C(" + std::to_string(N) + "," +
                                  std::to_string(N / 2) + ")=" + cap.get_str();
    } else {
        c.interior_bound.status = CheckStatus::NotApplicable;
        c.interior_bound.detail = "cycle meets the boundary";
    }
}

#define CONEDYN_INSTANTIATE(T)                                                                                    \
    template OrbitReport<T> iterate_orbit<T>(const ConeSpec&, const MapFn<T>&, const Point<T>&,                   \
                                             const OrbitOptions&);                                                \
    template PartTrajectory part_trajectory<T>(const ConeSpec&, const MapFn<T>&, const Point<T>&, std::size_t);   \
    template std::vector<Point<T>> omega_limit_estimate<T>(const ConeSpec&, const MapFn<T>&, const Point<T>&,     \
                                                           const OrbitOptions&);                                  \
    template AntichainResult verify_antichain<T>(const ConeSpec&, const std::vector<Point<T>>&);                  \
    template MInvarianceResult verify_m_invariance<T>(const ConeSpec&, const MapFn<T>&,                           \
                                                      const std::vector<Point<T>>&, double);                      \
    template bool verify_omega_dominance<T>(const ConeSpec&, const MapFn<T>&, const std::vector<Point<T>>&,       \
                                            const std::vector<Point<T>>&);                                        \
    template void run_cycle_checks<T>(const ConeSpec&, const MapFn<T>&, OrbitReport<T>&, double);
CONEDYN_INSTANTIATE(Rational)
CONEDYN_INSTANTIATE(double)
#undef CONEDYN_INSTANTIATE

} // namespace conedyn
