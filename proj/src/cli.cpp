#include "conedyn/cli.hpp"

#include "conedyn/bounds.hpp"
#include "conedyn/checks.hpp"
#include "conedyn/construct.hpp"
#include "conedyn/corpus.hpp"
#include "conedyn/dynamics.hpp"
#include "conedyn/orbit_json.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <thread>

namespace conedyn::cli {

namespace {

using nlohmann::ordered_json;

struct Common {
    std::uint64_t seed = 0;
    bool no_timestamp = false;
    std::string out_path;
};

std::uint64_t env_seed()
{
    const char* s = std::getenv("CONEDYN_SEED");
    if (!s || !*s) return 0;
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (*end != '\0') throw ContractError(std::string("CONEDYN_SEED is not an unsigned integer: '") + s + "'");
    return v;
}

void emit(const std::string& text, const Common& common, std::ostream& out)
{
    if (common.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(common.out_path);
    if (!f) throw ContractError("cannot write '" + common.out_path + "'");
    f << text;
}

std::string dump(const ordered_json& j)
{
    return j.dump(2) + "\n";
}

ConeSpec cone_for(const std::string& cone_arg, std::size_t dim)
{
    if (cone_arg.empty()) return ConeSpec::standard(dim);
    ConeSpec cone = load_cone(cone_arg);
    if (cone.ambient_dim() != dim)
        throw ContractError("cone has ambient dimension " + std::to_string(cone.ambient_dim()) + " but the map has " +
                            std::to_string(dim) + " components");
    return cone;
}

int outcome_exit(Outcome o)
{
    switch (o) {
    case Outcome::Converged: return kExitOk;
    case Outcome::Unbounded: return kExitUnbounded;
    case Outcome::Inconclusive: return kExitInconclusive;
    }
    return kExitError;
}

// ------------------------------------------------------------------ orbit

struct OrbitArgs {
    std::string cone, map, start, mode = "exact";
    OrbitOptions opts;
};

void add_orbit_options(CLI::App* sub, OrbitArgs& a)
{
    sub->add_option("--cone", a.cone, "standard:n or a cone file (default: standard cone of the map's dimension)");
    sub->add_option("--map", a.map, "map file")->required();
    sub->add_option("--start", a.start, "starting point, comma separated rationals, e.g. 1,2,0")->required();
    sub->add_option("--mode", a.mode, "arithmetic mode")->check(CLI::IsMember({"exact", "float"}))->capture_default_str();
    sub->add_option("--max-iters", a.opts.max_iters, "iteration budget")->capture_default_str();
    sub->add_option("--tol", a.opts.float_tol, "float-mode convergence tolerance")->capture_default_str();
    sub->add_option("--burn-in", a.opts.burn_in, "float-mode iterations before period search")->capture_default_str();
    sub->add_option("--bound", a.opts.divergence_norm_bound, "sup norm treated as divergence")->capture_default_str();
    sub->add_option("--max-period", a.opts.max_period, "float-mode period window (0 = min(2 beta_N + 16, 4096))")
        ->capture_default_str();
    sub->add_option("--bit-limit", a.opts.exact_bit_limit, "exact-mode bit size limit per iterate")
        ->capture_default_str();
}

int cmd_orbit(const OrbitArgs& a, const Common& common, std::ostream& out)
{
    MinMaxMap map = load_map(a.map);
    ConeSpec cone = cone_for(a.cone, map.dim());
    ExactPoint x0 = parse_point(a.start);
    OrbitOptions opts = a.opts;
    ReportMeta meta{common.seed, !common.no_timestamp};
    ordered_json j;
    Outcome outcome;
    if (a.mode == "exact") {
        opts.mode = ArithmeticMode::Exact;
        auto rep = iterate_orbit<Rational>(cone, map, x0, opts);
        outcome = rep.outcome;
        j = to_json(rep, meta);
    } else {
        opts.mode = ArithmeticMode::Float;
        auto rep = iterate_orbit<double>(cone, map, convert_point<double>(x0), opts);
        outcome = rep.outcome;
        j = to_json(rep, meta);
    }
    emit(dump(j), common, out);
    if (j["falsification"].get<bool>()) return kExitViolation;
    return outcome_exit(outcome);
}

// ------------------------------------------------------------------ bounds

int cmd_bounds(unsigned long n_max, bool stirling, const Common& common, std::ostream& out)
{
    if (n_max < 1) throw ContractError("--n-max must be at least 1");
    if (n_max > kAlphaMaxN)
        throw ResourceError("--n-max " + std::to_string(n_max) + " exceeds the alpha enumeration limit of " +
                            std::to_string(kAlphaMaxN));
    emit(format_bounds_csv(bounds_table(n_max), stirling), common, out);
    return kExitOk;
}

// ------------------------------------------------------------------ construct

struct ConstructArgs {
    std::size_t n = 0, m = 0, p = 0, q = 0;
    std::size_t budget = InnerMapOptions{}.search_budget;
    bool search = false;
};

int cmd_construct(const ConstructArgs& a, const Common& common, std::ostream& out, std::ostream& err)
{
    InnerMapOptions opts;
    opts.seed = common.seed;
    opts.search_budget = a.budget;
    opts.use_catalog = !a.search;
    PeriodMap pm;
    try {
        pm = build_period_map(a.n, a.m, a.p, a.q, opts);
    } catch (const DomainError& e) {
        err << "construct: infeasible: " << e.what() << "\n";
        return kExitError;
    } catch (const ResourceError& e) {
        err << "construct: " << e.what() << "\n";
        return kExitSearchExhausted;
    }
    ordered_json j;
    j["map"] = print_map(pm.map);
    j["start"] = point_to_json(pm.start);
    j["period"] = pm.confirmed_period;
    j["expected_period"] = pm.expected_period;
    j["confirmed"] = pm.confirmed;
    j["inner"] = {{"source", pm.inner.source}, {"p", pm.inner.period}, {"clamp", pm.inner.clamp.get_str()},
                  {"map", print_map(pm.inner.g)}};
    ordered_json supports = ordered_json::array();
    for (const auto& v : pm.scheme.vectors()) supports.push_back(v);
    j["supports"] = supports;
    j["seed"] = common.seed;
    if (!common.no_timestamp) j["timestamp"] = utc_timestamp();
    emit(dump(j), common, out);
    return kExitOk;
}

// ------------------------------------------------------------------ check

struct CheckArgs {
    std::string corpus, cone, map, start;
    std::size_t samples = 20;
    std::size_t max_iters = 2000;
    std::size_t jobs = 1;
};

struct CorpusSpec {
    CorpusOptions opts;
    std::size_t max_iters = 2000;
};

CorpusSpec parse_corpus_spec(const std::string& text, std::uint64_t default_seed, std::size_t max_iters)
{
    CorpusSpec spec;
    spec.opts.seed = default_seed;
    spec.max_iters = max_iters;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        pos = comma == std::string::npos ? text.size() : comma + 1;
        if (item.empty()) continue;
        auto eq = item.find('=');
        if (eq == std::string::npos) throw ContractError("corpus spec item '" + item + "' is not key=value");
        std::string key = item.substr(0, eq), val = item.substr(eq + 1);
        char* end = nullptr;
        unsigned long long v = std::strtoull(val.c_str(), &end, 10);
        if (val.empty() || *end != '\0') throw ContractError("corpus spec value '" + val + "' is not an integer");
        if (key == "seed")
            spec.opts.seed = v;
        else if (key == "count")
            spec.opts.count = v;
        else if (key == "dim")
            spec.opts.min_dim = spec.opts.max_dim = v;
        else if (key == "min_dim")
            spec.opts.min_dim = v;
        else if (key == "max_dim")
            spec.opts.max_dim = v;
        else if (key == "max_iters")
            spec.max_iters = v;
        else
            throw ContractError("unknown corpus spec key '" + key + "'");
    }
    if (spec.opts.min_dim < 1 || spec.opts.min_dim > spec.opts.max_dim)
        throw ContractError("corpus spec needs 1 <= min_dim <= max_dim");
    return spec;
}

struct EntryResult {
    std::size_t id = 0;
    std::size_t dim = 0;
    Outcome outcome = Outcome::Inconclusive;
    std::size_t period = 0;
    std::map<std::string, CheckStatus> statuses;
    std::vector<ordered_json> violations;
};

EntryResult analyse(std::size_t id, const ConeSpec& cone, const MinMaxMap& map, const ExactPoint& start,
                    std::size_t max_iters, std::size_t samples, std::uint64_t seed)
{
    EntryResult r;
    r.id = id;
    r.dim = map.dim();
    OrbitOptions opts;
    opts.mode = ArithmeticMode::Exact;
    opts.max_iters = max_iters;
    auto rep = iterate_orbit<Rational>(cone, map, start, opts);
    r.outcome = rep.outcome;
    r.period = rep.period;

    auto violation = [&](const std::string& property, ordered_json detail) {
        ordered_json v;
        v["entry"] = id;
        v["property"] = property;
        v["map"] = print_map(map);
        v["start"] = point_to_json(start);
        v["detail"] = std::move(detail);
        r.violations.push_back(std::move(v));
    };

    if (rep.outcome == Outcome::Converged) {
        const std::pair<const char*, const CheckOutcome*> cycle_checks[] = {
            {"antichain", &rep.checks.antichain},
            {"m_invariance", &rep.checks.m_invariance},
            {"factorization", &rep.checks.factorization},
            {"beta_bound", &rep.checks.beta_bound},
            {"interior_bound", &rep.checks.interior_bound},
        };
        for (const auto& [name, c] : cycle_checks) {
            r.statuses[name] = c->status;
            if (c->failed()) violation(name, to_json(rep, {seed, false}));
        }
        PartTrajectory& pt = rep.part_trajectory;
        bool divides = pt.periodic && pt.period >= 1 && rep.period % pt.period == 0;
        r.statuses["part_period_divides"] = divides ? CheckStatus::Pass : CheckStatus::Fail;
        if (!divides) violation("part_period_divides", to_json(rep.part_trajectory));
    }

    auto f = as_map_fn<Rational>(map);
    Sampler<Rational> sampler(seed ^ (0x9e3779b97f4a7c15ull * (id + 1)));
    PropertySuite suite = check_properties(cone, f, map.dim(), sampler, samples);
    for (const CheckReport* c : {&suite.order_preserving, &suite.subhomogeneous, &suite.dt_nonexpansive}) {
        r.statuses[c->property] = c->passed ? CheckStatus::Pass : CheckStatus::Fail;
        if (!c->passed) violation(c->property, c->witness);
    }
    return r;
}

ordered_json summarise(const std::vector<EntryResult>& results, std::size_t& violation_count)
{
    std::map<std::string, std::map<std::string, std::size_t>> props;
    std::map<std::string, std::size_t> outcomes{{"converged", 0}, {"unbounded", 0}, {"inconclusive", 0}};
    std::map<std::size_t, std::size_t> max_period_by_dim;
    ordered_json violations = ordered_json::array();
    for (const auto& r : results) {
        ++outcomes[to_string(r.outcome)];
        if (r.outcome == Outcome::Converged)
            max_period_by_dim[r.dim] = std::max(max_period_by_dim[r.dim], r.period);
        for (const auto& [name, st] : r.statuses) ++props[name][to_string(st)];
        for (const auto& v : r.violations) violations.push_back(v);
    }
    violation_count = violations.size();
    ordered_json j;
    j["entries"] = results.size();
    j["outcomes"] = outcomes;
    ordered_json periods = ordered_json::object();
    for (const auto& [dim, p] : max_period_by_dim)
        periods[std::to_string(dim)] = {{"max_period", p}, {"beta", beta_closed_form(dim).get_str()}};
    j["max_period_by_dim"] = periods;
    ordered_json pj = ordered_json::object();
    for (const auto& [name, counts] : props) pj[name] = counts;
    j["properties"] = pj;
    j["violations"] = violations;
    return j;
}

int cmd_check(const CheckArgs& a, const Common& common, std::ostream& out, std::ostream& err)
{
    if (a.corpus.empty() == a.map.empty()) throw ContractError("check needs exactly one of --corpus or --map");
    ordered_json j;
    j["schema"] = "check-report/1";
    j["seed"] = common.seed;
    std::vector<EntryResult> results;
    int code = kExitOk;

    if (!a.corpus.empty()) {
        CorpusSpec spec = parse_corpus_spec(a.corpus, common.seed, a.max_iters);
        j["seed"] = spec.opts.seed;
        j["corpus"] = {{"count", spec.opts.count}, {"min_dim", spec.opts.min_dim}, {"max_dim", spec.opts.max_dim},
                       {"max_iters", spec.max_iters}, {"samples", a.samples}};
        std::vector<CorpusEntry> corpus = generate_corpus(spec.opts);
        results.resize(corpus.size());
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t k; (k = next.fetch_add(1)) < corpus.size();) {
                const auto& e = corpus[k];
                results[k] = analyse(e.id, ConeSpec::standard(e.map.dim()), e.map, e.start, spec.max_iters,
                                     a.samples, spec.opts.seed);
            }
        };
        std::vector<std::thread> pool;
        for (std::size_t t = 1; t < std::max<std::size_t>(a.jobs, 1); ++t) pool.emplace_back(worker);
        worker();
        for (auto& t : pool) t.join();
    } else {
        if (a.start.empty()) throw ContractError("check --map needs --start");
        MinMaxMap map = load_map(a.map);
        ConeSpec cone = cone_for(a.cone, map.dim());
        j["map"] = print_map(map);
        results.push_back(analyse(0, cone, map, parse_point(a.start), a.max_iters, a.samples, common.seed));
        code = outcome_exit(results.front().outcome);
        if (results.front().outcome == Outcome::Converged) j["period"] = results.front().period;
    }

    std::size_t violations = 0;
    ordered_json summary = summarise(results, violations);
    for (auto& [k, v] : summary.items()) j[k] = v;
    if (!common.no_timestamp) j["timestamp"] = utc_timestamp();
    emit(dump(j), common, out);
    if (violations) {
        err << "check: " << violations << " violation(s); witnesses in the report\n";
        return kExitViolation;
    }
    return code;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Periodic orbits of order-preserving, subhomogeneous maps on polyhedral cones", "conedyn"};
    app.require_subcommand(1);
    app.fallthrough();
    Common common;
    try {
        common.seed = env_seed();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
    app.add_option("--seed", common.seed, "random seed (default: $CONEDYN_SEED or 0)")->capture_default_str();
    app.add_flag("--no-timestamp", common.no_timestamp, "omit the timestamp from JSON output");
    app.add_option("--out", common.out_path, "write the report to a file instead of stdout");

    OrbitArgs orbit_args;
    CLI::App* orbit = app.add_subcommand("orbit", "iterate a map and classify the orbit");
    add_orbit_options(orbit, orbit_args);

    unsigned long n_max = 15;
    bool stirling = false;
    CLI::App* bounds = app.add_subcommand("bounds", "alpha_N and beta_N as CSV");
    bounds->add_option("--n-max", n_max, "largest N")->capture_default_str();
    bounds->add_flag("--stirling", stirling, "add the asymptotic ratio column");

    bool table_stirling = false;
    CLI::App* table1 = app.add_subcommand("table1", "same as bounds --n-max 15");
    table1->add_flag("--stirling", table_stirling, "add the asymptotic ratio column");

    ConstructArgs cargs;
    CLI::App* construct = app.add_subcommand("construct", "build a map with a periodic point of period lcm(p,q)");
    construct->add_option("--n", cargs.n, "ambient dimension")->required();
    construct->add_option("--m", cargs.m, "support size")->required();
    construct->add_option("--p", cargs.p, "inner period, at most C(m, floor(m/2))")->required();
    construct->add_option("--q", cargs.q, "number of supports, at most C(n, m)")->required();
    construct->add_option("--search-budget", cargs.budget, "candidate maps tried by the inner-map search")
        ->capture_default_str();
    construct->add_flag("--search", cargs.search, "skip the catalog and search for the inner map");

    CheckArgs kargs;
    CLI::App* check = app.add_subcommand("check", "property and cycle checks over a corpus or a single map");
    check->add_option("--corpus", kargs.corpus, "seed=S,count=C,dim=D (also min_dim, max_dim, max_iters)");
    check->add_option("--map", kargs.map, "map file");
    check->add_option("--start", kargs.start, "starting point for --map");
    check->add_option("--cone", kargs.cone, "cone for --map");
    check->add_option("--samples", kargs.samples, "property samples per map")->capture_default_str();
    check->add_option("--max-iters", kargs.max_iters, "exact iteration budget per orbit")->capture_default_str();
    check->add_option("--jobs", kargs.jobs, "worker threads for corpus runs")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitError;
    }

    try {
        if (orbit->parsed()) return cmd_orbit(orbit_args, common, out);
        if (bounds->parsed()) return cmd_bounds(n_max, stirling, common, out);
        if (table1->parsed()) return cmd_bounds(15, table_stirling, common, out);
        if (construct->parsed()) return cmd_construct(cargs, common, out, err);
        if (check->parsed()) return cmd_check(kargs, common, out, err);
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}

} // namespace conedyn::cli
