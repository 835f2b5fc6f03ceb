#pragma once

// Brute-force references used by the unit and acceptance tests. Nothing here calls the
// transform code under test; everything is built from parent maps and stored entries.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "haarfht/chain.hpp"
#include "haarfht/graph.hpp"
#include "haarfht/haar_basis.hpp"
#include "haarfht/matrix.hpp"
#include "haarfht/synthetic.hpp"

namespace oracle {

using haarfht::CoarseChain;
using haarfht::Graph;
using haarfht::HaarBasis;
using haarfht::Matrix;

// Phi with Phi(k, l) = value of column l at vertex k, scattered by hand.
inline Matrix dense_phi(const HaarBasis& b) {
    const std::size_t n = b.n();
    Matrix m(n, n);
    for (std::size_t l = 0; l < n; ++l)
        for (const auto& e : b.column(l).entries) m(e.index, l) = e.value;
    return m;
}

inline std::vector<double> matvec(const Matrix& a, const std::vector<double>& x) {
    std::vector<double> y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
    return y;
}

inline std::vector<double> matvec_t(const Matrix& a, const std::vector<double>& x) {
    std::vector<double> y(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) y[j] += a(i, j) * x[i];
    return y;
}

// max |Phi^T Phi - I|.
inline double orthonormality_error(const Matrix& phi) {
    const std::size_t n = phi.cols();
    double worst = 0.0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t c = a; c < n; ++c) {
            double s = 0.0;
            for (std::size_t k = 0; k < phi.rows(); ++k) s += phi(k, a) * phi(k, c);
            worst = std::max(worst, std::abs(s - (a == c ? 1.0 : 0.0)));
        }
    return worst;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = a.size() == b.size() ? 0.0 : INFINITY;
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// Level-j ancestor of finest vertex k by walking the parent maps.
inline std::size_t ancestor(const CoarseChain& chain, int j, std::size_t k) {
    std::size_t v = k;
    for (int lvl = chain.j_max(); lvl > j; --lvl) v = chain.level(lvl).parent[v];
    return v;
}

inline std::size_t child_count(const CoarseChain& chain, int j, std::size_t v) {
    if (j == chain.j_max()) return 1;
    const auto& p = chain.level(j + 1).parent;
    return static_cast<std::size_t>(std::count(p.begin(), p.end(), v));
}

// prod_{n=j}^{J-1} 1/sqrt(#children of the level-n ancestor).
inline double cumulative_weight(const CoarseChain& chain, int j, std::size_t k) {
    double w = 1.0;
    for (int lvl = j; lvl < chain.j_max(); ++lvl)
        w /= std::sqrt(static_cast<double>(child_count(chain, lvl, ancestor(chain, lvl, k))));
    return w;
}

// Finest vertices below level-j vertex v.
inline std::vector<std::size_t> descendants(const CoarseChain& chain, int j, std::size_t v) {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < chain.n(); ++k)
        if (ancestor(chain, j, k) == v) out.push_back(k);
    return out;
}

inline std::vector<double> random_signal(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<double> f(n);
    for (double& x : f) x = d(rng);
    return f;
}

// Rotates through graph families so clusters of size one, two and three or more all occur.
inline Graph random_graph(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    switch (seed % 4) {
        case 0:
            return haarfht::random_mixed_graph(n, seed);
        case 1:
            return haarfht::random_regular_graph(n, 3, seed);
        case 2: {
            // Star forest: hubs with many leaves give large clusters.
            std::vector<haarfht::Edge> edges;
            std::uniform_real_distribution<double> w(0.5, 2.0);
            const std::size_t hubs = std::max<std::size_t>(1, n / 7);
            for (std::size_t v = hubs; v < n; ++v) edges.push_back({v % hubs, v, w(rng)});
            return Graph(n, edges);
        }
        default: {
            // Path plus a few chords.
            std::vector<haarfht::Edge> edges;
            std::uniform_real_distribution<double> w(0.5, 2.0);
            for (std::size_t v = 1; v < n; ++v) edges.push_back({v - 1, v, w(rng)});
            for (std::size_t c = 0; c < n / 8; ++c) {
                const std::size_t a = rng() % n;
                const std::size_t b = rng() % n;
                if (a != b) edges.push_back({a, b, w(rng)});
            }
            return Graph(n, edges);
        }
    }
}

// Largest and smallest cluster size over all non-finest levels.
inline std::pair<std::size_t, std::size_t> cluster_size_range(const CoarseChain& chain) {
    std::size_t lo = SIZE_MAX, hi = 0;
    for (int j = chain.j0(); j < chain.j_max(); ++j)
        for (std::size_t v = 0; v < chain.size(j); ++v) {
            const auto c = child_count(chain, j, v);
            lo = std::min(lo, c);
            hi = std::max(hi, c);
        }
    return {lo, hi};
}

}  // namespace oracle
