#include "conedyn/corpus.hpp"

#include <array>

namespace conedyn {

namespace {

const std::array<Rational, 5>& coefficient_pool()
{
    static const std::array<Rational, 5> pool{Rational(1, 3), Rational(1, 2), Rational(1), Rational(2), Rational(3)};
    return pool;
}

std::size_t pick(std::mt19937_64& rng, std::size_t n)
{
    return static_cast<std::size_t>(rng() % n);
}

ExprPtr random_expr(std::size_t dim, std::size_t depth, std::mt19937_64& rng, bool homogeneous_only)
{
    const bool leaf = depth == 0 || pick(rng, 3) == 0;
    if (leaf) {
        ExprPtr v = make_var(1 + pick(rng, dim), coefficient_pool()[pick(rng, 5)]);
        if (!homogeneous_only && pick(rng, 2) == 1) v = make_add(v, Rational(1));
        return v;
    }
    std::vector<ExprPtr> children;
    const std::size_t arity = 2 + pick(rng, 2);
    for (std::size_t i = 0; i < arity; ++i) children.push_back(random_expr(dim, depth - 1, rng, homogeneous_only));
    return pick(rng, 2) == 0 ? make_min(std::move(children)) : make_max(std::move(children));
}

} // namespace

MinMaxMap random_map(std::size_t dim, std::mt19937_64& rng, std::size_t max_depth, bool homogeneous_only)
{
    if (dim == 0) throw ContractError("random_map: dim must be >= 1");
    std::vector<ExprPtr> comps;
    for (std::size_t i = 0; i < dim; ++i) comps.push_back(random_expr(dim, max_depth, rng, homogeneous_only));
    return MinMaxMap(std::move(comps));
}

ExactPoint random_start(std::size_t dim, std::mt19937_64& rng)
{
    ExactPoint x(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        if (pick(rng, 5) == 0) {
            x[i] = 0;
            continue;
        }
        Rational q(static_cast<long>(1 + pick(rng, 6)), static_cast<long>(1 + pick(rng, 2)));
        q.canonicalize();
        x[i] = q;
    }
    return x;
}

std::vector<CorpusEntry> generate_corpus(const CorpusOptions& opts)
{
    if (opts.min_dim == 0 || opts.min_dim > opts.max_dim) throw ContractError("corpus: need 1 <= min_dim <= max_dim");
    std::vector<CorpusEntry> out;
    out.reserve(opts.count);
    for (std::size_t k = 0; k < opts.count; ++k) {
        std::seed_seq seq{static_cast<std::uint32_t>(opts.seed), static_cast<std::uint32_t>(opts.seed >> 32),
                          static_cast<std::uint32_t>(k), 0x636f6e65u};
        std::mt19937_64 rng(seq);
        const std::size_t dim = opts.min_dim + pick(rng, opts.max_dim - opts.min_dim + 1);
        MinMaxMap map = random_map(dim, rng, opts.max_depth, opts.homogeneous_only);
        ExactPoint start = random_start(dim, rng);
        out.push_back({k, std::move(map), std::move(start)});
    }
    return out;
}

} // namespace conedyn
