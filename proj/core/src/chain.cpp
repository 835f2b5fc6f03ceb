#include "haarfht/chain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "haarfht/errors.hpp"

namespace haarfht {

namespace {

constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();

std::vector<std::size_t> degrees_of(const Graph& g) {
    std::vector<std::size_t> d(g.n());
    for (std::size_t v = 0; v < g.n(); ++v) d[v] = g.degree(v);
    return d;
}

}  // namespace

CoarseChain::CoarseChain(std::vector<std::size_t> sizes, std::vector<std::vector<std::size_t>> parents,
                         const Graph* finest, int j0)
    : j0_(j0) {
    if (sizes.empty()) throw ValidationError("chain needs at least one level");
    if (parents.size() + 1 != sizes.size())
        throw ValidationError("chain needs one parent map per non-coarsest level");
    if (finest && finest->n() != sizes.back())
        throw ValidationError("graph has " + std::to_string(finest->n()) + " vertices but finest level has " +
                              std::to_string(sizes.back()));

    const std::size_t L = sizes.size();
    levels_.resize(L);
    for (std::size_t i = 0; i < L; ++i) {
        if (sizes[i] == 0) throw ValidationError("chain level " + std::to_string(j0 + static_cast<int>(i)) + " is empty");
        levels_[i].size = sizes[i];
    }
    for (std::size_t i = 1; i < L; ++i) {
        auto& p = parents[i - 1];
        if (p.size() != sizes[i])
            throw ValidationError("parent map for level " + std::to_string(j0 + static_cast<int>(i)) +
                                  " has wrong length");
        if (sizes[i - 1] > sizes[i])
            throw ValidationError("chain level sizes must not increase toward the finest level");
        std::vector<bool> hit(sizes[i - 1], false);
        for (std::size_t v : p) {
            if (v >= sizes[i - 1])
                throw ValidationError("parent id out of range at level " + std::to_string(j0 + static_cast<int>(i)));
            hit[v] = true;
        }
        if (std::find(hit.begin(), hit.end(), false) != hit.end())
            throw ValidationError("level " + std::to_string(j0 + static_cast<int>(i) - 1) + " has a vertex without children");
        levels_[i].parent = std::move(p);
    }

    // Degrees per level: contract the finest graph upward.
    if (finest) {
        Graph g = *finest;
        levels_[L - 1].degree = degrees_of(g);
        for (std::size_t i = L - 1; i > 0; --i) {
            g = contract(g, levels_[i].parent, sizes[i - 1]);
            levels_[i - 1].degree = degrees_of(g);
        }
    } else {
        for (auto& lv : levels_) lv.degree.assign(lv.size, 0);
    }

    for (std::size_t i = 0; i < L; ++i) {
        auto& lv = levels_[i];
        if (i + 1 == L) {
            lv.child_count.assign(lv.size, 1);
            lv.child_offsets.clear();
            lv.children.clear();
        } else {
            const auto& fine = levels_[i + 1];
            lv.child_count.assign(lv.size, 0);
            for (std::size_t c : fine.parent) ++lv.child_count[c];
            lv.child_offsets.assign(lv.size + 1, 0);
            for (std::size_t k = 0; k < lv.size; ++k) lv.child_offsets[k + 1] = lv.child_offsets[k] + lv.child_count[k];
            lv.children.assign(fine.size, 0);
            std::vector<std::size_t> fill(lv.child_offsets.begin(), lv.child_offsets.end() - 1);
            for (std::size_t c = 0; c < fine.size; ++c) lv.children[fill[fine.parent[c]]++] = c;
            for (std::size_t k = 0; k < lv.size; ++k) {
                auto b = lv.children.begin() + static_cast<std::ptrdiff_t>(lv.child_offsets[k]);
                auto e = lv.children.begin() + static_cast<std::ptrdiff_t>(lv.child_offsets[k + 1]);
                std::sort(b, e, [&](std::size_t a, std::size_t c) {
                    if (fine.degree[a] != fine.degree[c]) return fine.degree[a] > fine.degree[c];
                    return a < c;
                });
            }
        }
        lv.weight_factor.resize(lv.size);
        for (std::size_t k = 0; k < lv.size; ++k)
            lv.weight_factor[k] = 1.0 / std::sqrt(static_cast<double>(lv.child_count[k]));
    }

    ancestors_.resize(L);
    ancestors_[L - 1].resize(sizes.back());
    std::iota(ancestors_[L - 1].begin(), ancestors_[L - 1].end(), std::size_t{0});
    for (std::size_t i = L - 1; i > 0; --i) {
        ancestors_[i - 1].resize(sizes.back());
        for (std::size_t k = 0; k < sizes.back(); ++k)
            ancestors_[i - 1][k] = levels_[i].parent[ancestors_[i][k]];
    }
}

std::vector<std::size_t> CoarseChain::sizes() const {
    std::vector<std::size_t> s;
    s.reserve(levels_.size());
    for (const auto& lv : levels_) s.push_back(lv.size);
    return s;
}

std::vector<std::vector<std::size_t>> CoarseChain::parent_maps() const {
    std::vector<std::vector<std::size_t>> p;
    for (std::size_t i = 1; i < levels_.size(); ++i) p.push_back(levels_[i].parent);
    return p;
}

Graph contract(const Graph& g, std::span<const std::size_t> parent, std::size_t coarse_n) {
    std::vector<Edge> edges;
    edges.reserve(g.edges().size());
    for (const Edge& e : g.edges()) {
        const std::size_t a = parent[e.u];
        const std::size_t b = parent[e.v];
        if (a != b) edges.push_back({a, b, e.w});
    }
    return Graph(coarse_n, edges);
}

CoarsenResult coarsen_once(const Graph& g, std::uint64_t /*seed*/) {
    const std::size_t n = g.n();
    if (n == 0) throw ValidationError("coarsen_once: empty graph");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return g.degree(a) > g.degree(b); });

    // rep[v] is the first-visited member of v's cluster.
    std::vector<std::size_t> rep(n, kUnset);
    for (std::size_t u : order) {
        if (rep[u] != kUnset) continue;
        auto nbrs = g.neighbors(u);
        auto wts = g.neighbor_weights(u);
        std::size_t best = kUnset;
        double best_w = 0.0;
        for (std::size_t i = 0; i < nbrs.size(); ++i) {
            if (rep[nbrs[i]] != kUnset) continue;
            // Neighbours are sorted by id, so strict '>' keeps the smallest id on ties.
            if (best == kUnset || wts[i] > best_w) {
                best = nbrs[i];
                best_w = wts[i];
            }
        }
        if (best != kUnset) {
            rep[u] = u;
            rep[best] = u;
        }
    }

    std::size_t pending_isolated = kUnset;
    for (std::size_t u = 0; u < n; ++u) {
        if (rep[u] != kUnset) continue;
        auto nbrs = g.neighbors(u);
        auto wts = g.neighbor_weights(u);
        if (!nbrs.empty()) {
            // Every neighbour is matched; join the heaviest one's cluster.
            std::size_t best = nbrs[0];
            double best_w = wts[0];
            for (std::size_t i = 1; i < nbrs.size(); ++i)
                if (wts[i] > best_w) {
                    best = nbrs[i];
                    best_w = wts[i];
                }
            rep[u] = rep[best];
        } else if (pending_isolated == kUnset) {
            pending_isolated = u;
        } else {
            rep[pending_isolated] = pending_isolated;
            rep[u] = pending_isolated;
            pending_isolated = kUnset;
        }
    }
    if (pending_isolated != kUnset) rep[pending_isolated] = pending_isolated;

    // Number clusters by smallest member: scanning u ascending meets each cluster first at its minimum.
    std::vector<std::size_t> cluster_of_rep(n, kUnset);
    CoarsenResult out;
    out.parent.resize(n);
    std::size_t next = 0;
    for (std::size_t u = 0; u < n; ++u) {
        auto& id = cluster_of_rep[rep[u]];
        if (id == kUnset) id = next++;
        out.parent[u] = id;
    }
    out.coarser = contract(g, out.parent, next);
    return out;
}

CoarseChain build_chain(const Graph& g, std::size_t min_top, std::uint64_t seed) {
    if (min_top < 1) throw ValidationError("min_top must be at least 1");
    if (g.n() == 0) throw ValidationError("build_chain: empty graph");
    std::vector<std::size_t> sizes{g.n()};
    std::vector<std::vector<std::size_t>> parents;
    Graph current = g;
    while (current.n() > min_top) {
        auto step = coarsen_once(current, seed);
        if (step.coarser.n() >= current.n()) break;
        sizes.push_back(step.coarser.n());
        parents.push_back(std::move(step.parent));
        current = std::move(step.coarser);
    }
    std::reverse(sizes.begin(), sizes.end());
    std::reverse(parents.begin(), parents.end());
    return CoarseChain(std::move(sizes), std::move(parents), &g, 0);
}

CumulativeWeights::CumulativeWeights(const CoarseChain& chain) : j0_(chain.j0()) {
    const std::size_t L = chain.num_levels();
    const std::size_t n = chain.n();
    table_.assign(L, std::vector<double>(n, 1.0));
    // One sweep from J-1 down to J0: W^(j) = w^(j)_{k_j} * W^(j+1).
    for (int j = chain.j_max() - 1; j >= chain.j0(); --j) {
        const auto& wf = chain.level(j).weight_factor;
        const auto anc = chain.ancestors(j);
        const auto& finer = table_[static_cast<std::size_t>(j + 1 - j0_)];
        auto& row = table_[static_cast<std::size_t>(j - j0_)];
        for (std::size_t k = 0; k < n; ++k) row[k] = wf[anc[k]] * finer[k];
    }
}

FiltrationReport validate_filtration(const CoarseChain& chain) {
    FiltrationReport r;
    for (int j = chain.j0(); j < chain.j_max(); ++j) {
        const auto& lv = chain.level(j);
        bool ok = true;
        for (std::size_t k = 0; k < lv.size; ++k) {
            if (lv.child_count[k] < 2) {
                ok = false;
                r.offenders.push_back({j, k, lv.child_count[k]});
            }
        }
        r.level_ok.push_back(ok);
        r.is_filtration = r.is_filtration && ok;
    }
    return r;
}

}  // namespace haarfht
