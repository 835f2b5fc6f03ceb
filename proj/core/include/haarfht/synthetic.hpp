#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "haarfht/graph.hpp"

namespace haarfht {

/// Union of `degree` random perfect matchings (repeated pairs merge into heavier edges).
Graph random_regular_graph(std::size_t n, std::size_t degree, std::uint64_t seed);

/// Sparse random graph with random weights, a few stars (so coarsening yields clusters of three
/// or more) and a few isolated vertices (so some clusters stay singletons).
Graph random_mixed_graph(std::size_t n, std::uint64_t seed);

/// 8-cycle with weights chosen so heavy-edge matching yields {0,1},{2,3},{4,5},{6,7} and then
/// {01,23},{45,67}; every vertex has degree 2, so children are ordered by id.
Graph balanced_eight_graph();

/// Two dense communities with one-hot community features and a labeled training subset.
struct NodeClassificationInstance {
    Graph graph;
    FeatureMatrix features;
    std::vector<int> labels;
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

NodeClassificationInstance two_block_instance(std::size_t per_block = 50, double p_in = 0.3, double p_out = 0.02,
                                              double train_fraction = 0.2, std::uint64_t seed = 42);

}  // namespace haarfht
