#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "haarfht/graph.hpp"

namespace haarfht {

/// One level of a coarse-grained chain.
struct ChainLevel {
    std::size_t size = 0;
    /// Parent of each vertex at the next coarser level; empty at the coarsest level.
    std::vector<std::size_t> parent;
    /// Number of children at the next finer level; 1 for every vertex of the finest level.
    std::vector<std::size_t> child_count;
    /// 1 / sqrt(child_count).
    std::vector<double> weight_factor;
    /// Degree in this level's (contracted) graph. All zero when the chain was built without a graph.
    std::vector<std::size_t> degree;
    /// Children of vertex k are children[child_offsets[k] .. child_offsets[k+1]), ordered by
    /// descending degree then ascending id. Empty at the finest level.
    std::vector<std::size_t> child_offsets;
    std::vector<std::size_t> children;

    std::span<const std::size_t> children_of(std::size_t k) const noexcept {
        return {children.data() + child_offsets[k], child_offsets[k + 1] - child_offsets[k]};
    }
};

/// Sequence of graphs G_J (the input) down to G_{J0}, where each vertex of level j has
/// exactly one parent at level j-1.
///
/// Levels are addressed by their absolute index j in [j0(), j_max()]. The finest level is
/// j_max(). Every derived table (child counts, weight factors, ancestors) is recomputed from
/// the parent maps at construction, so a chain cannot be built in an inconsistent state.
class CoarseChain {
public:
    CoarseChain() = default;

    /// `sizes` lists N_{J0}, ..., N_J. `parents[i]` maps level J0+i+1 onto level J0+i.
    /// `finest`, when given, supplies degrees for child ordering; its vertex count must be N_J.
    CoarseChain(std::vector<std::size_t> sizes, std::vector<std::vector<std::size_t>> parents,
                const Graph* finest = nullptr, int j0 = 0);

    int j0() const noexcept { return j0_; }
    int j_max() const noexcept { return j0_ + static_cast<int>(levels_.size()) - 1; }
    std::size_t num_levels() const noexcept { return levels_.size(); }
    /// Vertex count of the finest level.
    std::size_t n() const noexcept { return levels_.back().size; }

    const ChainLevel& level(int j) const { return levels_.at(static_cast<std::size_t>(j - j0_)); }
    std::size_t size(int j) const { return level(j).size; }
    /// Level-j ancestor of every finest vertex.
    std::span<const std::size_t> ancestors(int j) const {
        return ancestors_.at(static_cast<std::size_t>(j - j0_));
    }
    /// N_{J0}, ..., N_J.
    std::vector<std::size_t> sizes() const;

    friend bool operator==(const CoarseChain& a, const CoarseChain& b) {
        return a.j0_ == b.j0_ && a.sizes() == b.sizes() && a.parent_maps() == b.parent_maps();
    }
    std::vector<std::vector<std::size_t>> parent_maps() const;

private:
    int j0_ = 0;
    std::vector<ChainLevel> levels_;
    std::vector<std::vector<std::size_t>> ancestors_;
};

struct CoarsenResult {
    Graph coarser;
    std::vector<std::size_t> parent;
};

/// Contracts `g` along `parent`, summing the weights of edges that cross clusters.
Graph contract(const Graph& g, std::span<const std::size_t> parent, std::size_t coarse_n);

/// One round of deterministic heavy-edge matching.
///
/// Vertices are visited by descending degree (ties by ascending id); each unmatched vertex is
/// paired with its heaviest unmatched neighbour (ties by ascending id). A leftover vertex that
/// has neighbours joins the cluster of its heaviest neighbour. Leftover isolated vertices are
/// paired in ascending id order. Clusters are numbered by their smallest member.
///
/// The rule has no random choices; `seed` is accepted so callers can thread one seed through
/// every stage and is currently unused.
CoarsenResult coarsen_once(const Graph& g, std::uint64_t seed);

/// Coarsens until at most `min_top` vertices remain or no reduction occurs.
CoarseChain build_chain(const Graph& g, std::size_t min_top, std::uint64_t seed);

/// W_k^(j) = prod_{n=j}^{J-1} w^(n)_{k_n} for every finest vertex k and level j.
class CumulativeWeights {
public:
    CumulativeWeights() = default;
    explicit CumulativeWeights(const CoarseChain& chain);

    int j0() const noexcept { return j0_; }
    std::span<const double> at_level(int j) const {
        return table_.at(static_cast<std::size_t>(j - j0_));
    }
    double operator()(int j, std::size_t k) const { return at_level(j)[k]; }

private:
    int j0_ = 0;
    std::vector<std::vector<double>> table_;
};

inline CumulativeWeights cumulative_weights(const CoarseChain& chain) {
    return CumulativeWeights(chain);
}

struct FiltrationReport {
    bool is_filtration = true;
    /// Indexed by j - J0 for j = J0..J-1.
    std::vector<bool> level_ok;
    struct Offender {
        int level;
        std::size_t vertex;
        std::size_t children;
    };
    std::vector<Offender> offenders;
};

/// Checks that every parent at levels J0..J-1 has at least two children.
FiltrationReport validate_filtration(const CoarseChain& chain);

}  // namespace haarfht
