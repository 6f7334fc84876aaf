#pragma once

#include "conedyn/mapdsl.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace conedyn {

struct CorpusOptions {
    std::uint64_t seed = 0;
    std::size_t count = 0;
    std::size_t min_dim = 1;
    std::size_t max_dim = 4;
    std::size_t max_depth = 3;
    bool homogeneous_only = false;  // draw constants from {0} instead of {0, 1}
};

struct CorpusEntry {
    std::size_t id = 0;
    MinMaxMap map;
    ExactPoint start;
};

// Random grammar map: depth <= max_depth, coefficients from {1/3,1/2,1,2,3},
// additive constants from {0,1}.
MinMaxMap random_map(std::size_t dim, std::mt19937_64& rng, std::size_t max_depth = 3,
                     bool homogeneous_only = false);

// Small nonnegative rational starting point; roughly one coordinate in five is zero.
ExactPoint random_start(std::size_t dim, std::mt19937_64& rng);

// Entry k depends only on (seed, k), so prefixes of a corpus are stable.
std::vector<CorpusEntry> generate_corpus(const CorpusOptions& opts);

} // namespace conedyn
