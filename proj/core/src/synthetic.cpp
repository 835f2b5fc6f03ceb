#include "haarfht/synthetic.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "haarfht/errors.hpp"

namespace haarfht {

Graph random_regular_graph(std::size_t n, std::size_t degree, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> perm(n);
    std::vector<Edge> edges;
    edges.reserve(n / 2 * degree);
    for (std::size_t m = 0; m < degree; ++m) {
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::shuffle(perm.begin(), perm.end(), rng);
        for (std::size_t i = 0; i + 1 < n; i += 2) edges.push_back({perm[i], perm[i + 1], 1.0});
    }
    return Graph(n, edges);
}

Graph random_mixed_graph(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> weight(0.5, 2.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Edge> edges;
    if (n < 2) return Graph(n, edges);

    // Roughly 10% isolated vertices, a handful of star centres, the rest sparse random.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    const std::size_t isolated = n >= 6 ? n / 10 : 0;
    std::vector<std::size_t> active(order.begin() + static_cast<std::ptrdiff_t>(isolated), order.end());
    const std::size_t stars = std::max<std::size_t>(1, active.size() / 12);
    std::size_t pos = 0;
    for (std::size_t s = 0; s < stars && pos + 3 < active.size(); ++s) {
        const std::size_t centre = active[pos++];
        const std::size_t leaves = 2 + rng() % 3;
        for (std::size_t l = 0; l < leaves && pos < active.size(); ++l) edges.push_back({centre, active[pos++], weight(rng)});
    }
    const double p = std::min(1.0, 2.5 / static_cast<double>(active.size()));
    for (std::size_t i = 0; i < active.size(); ++i)
        for (std::size_t j = i + 1; j < active.size(); ++j)
            if (unit(rng) < p) edges.push_back({active[i], active[j], weight(rng)});
    return Graph(n, edges);
}

Graph balanced_eight_graph() {
    const std::vector<Edge> edges{{0, 1, 3.0}, {1, 2, 2.0}, {2, 3, 3.0}, {3, 4, 1.0},
                                  {4, 5, 3.0}, {5, 6, 2.0}, {6, 7, 3.0}, {0, 7, 1.0}};
    return Graph(8, edges);
}

NodeClassificationInstance two_block_instance(std::size_t per_block, double p_in, double p_out,
                                              double train_fraction, std::uint64_t seed) {
    if (per_block < 2) throw ValidationError("two_block_instance: need at least two vertices per block");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t n = 2 * per_block;
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool same = (i / per_block) == (j / per_block);
            if (unit(rng) < (same ? p_in : p_out)) edges.push_back({i, j, 1.0});
        }

    NodeClassificationInstance inst;
    inst.graph = Graph(n, edges);
    inst.features = FeatureMatrix(n, 2);
    inst.labels.resize(n);
    for (std::size_t v = 0; v < n; ++v) {
        const auto block = v / per_block;
        inst.features(v, block) = 1.0;
        inst.labels[v] = static_cast<int>(block);
    }
    // Stratified split so both classes are represented in training.
    const auto per_class = std::max<std::size_t>(1, static_cast<std::size_t>(train_fraction * static_cast<double>(per_block)));
    for (std::size_t b = 0; b < 2; ++b) {
        std::vector<std::size_t> ids(per_block);
        std::iota(ids.begin(), ids.end(), b * per_block);
        std::shuffle(ids.begin(), ids.end(), rng);
        inst.train.insert(inst.train.end(), ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(per_class));
        inst.test.insert(inst.test.end(), ids.begin() + static_cast<std::ptrdiff_t>(per_class), ids.end());
    }
    std::sort(inst.train.begin(), inst.train.end());
    std::sort(inst.test.begin(), inst.test.end());
    return inst;
}

}  // namespace haarfht
