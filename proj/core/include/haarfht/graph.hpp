#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <span>
#include <vector>

#include "haarfht/matrix.hpp"

namespace haarfht {

/// Vertex-domain signal, indexed by vertex id.
using GraphSignal = std::vector<double>;
/// n rows (vertices) by d columns (features).
using FeatureMatrix = Matrix;

struct Edge {
    std::size_t u = 0;
    std::size_t v = 0;
    double w = 1.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Weighted undirected graph with dense vertex ids 0..n-1.
///
/// Each undirected edge is stored once with u < v. Self-loops and non-positive
/// weights are rejected; repeated edges are merged by summing their weights.
/// A CSR adjacency is built once at construction.
class Graph {
public:
    Graph() = default;
    Graph(std::size_t n, std::span<const Edge> edges);

    std::size_t n() const noexcept { return n_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    /// Number of distinct neighbours.
    std::size_t degree(std::size_t v) const noexcept { return offsets_[v + 1] - offsets_[v]; }
    std::span<const std::size_t> neighbors(std::size_t v) const noexcept {
        return {neighbors_.data() + offsets_[v], degree(v)};
    }
    /// Weights aligned with neighbors(v).
    std::span<const double> neighbor_weights(std::size_t v) const noexcept {
        return {weights_.data() + offsets_[v], degree(v)};
    }

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.n_ == b.n_ && a.edges_ == b.edges_;
    }

private:
    std::size_t n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_{0};
    std::vector<std::size_t> neighbors_;
    std::vector<double> weights_;
};

/// Parses "u v [w]" lines, '#' comments and an optional "#n <int>" header.
Graph parse_edge_list(std::istream& in);
Graph load_edge_list(const std::filesystem::path& path);

FeatureMatrix parse_matrix_csv(std::istream& in);
FeatureMatrix load_matrix_csv(const std::filesystem::path& path);

/// L = D - A, or I - D^{-1/2} A D^{-1/2} when normalized (isolated vertices keep a 1 on the diagonal).
DenseSymMatrix laplacian(const Graph& g, bool normalized);

/// D~^{-1/2} (A + I) D~^{-1/2} with D~ the degree matrix of A + I.
DenseSymMatrix smoothing_matrix(const Graph& g);

}  // namespace haarfht
