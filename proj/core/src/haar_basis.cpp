#include "haarfht/haar_basis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "haarfht/errors.hpp"

namespace haarfht {

namespace {

void push_nonzero(std::vector<BasisEntry>& out, std::size_t index, double value) {
    if (std::abs(value) >= kZeroThreshold) out.push_back({index, value});
}

void sort_entries(std::vector<BasisEntry>& entries) {
    std::sort(entries.begin(), entries.end(),
              [](const BasisEntry& a, const BasisEntry& b) { return a.index < b.index; });
}

// Value of local vector l (1-based, 2 <= l <= m) at point i (1-based).
double local_value(std::size_t m, std::size_t l, std::size_t i) {
    if (i < l - 1) return 0.0;
    const double tail = static_cast<double>(m - l + 1);
    const double scale = std::sqrt(tail / (tail + 1.0));
    if (i == l - 1) return scale;
    return -scale / tail;
}

}  // namespace

HaarBasis::HaarBasis(int j0, std::vector<std::vector<SparseColumn>> per_level)
    : j0_(j0), per_level_(std::move(per_level)) {
    if (per_level_.empty()) throw ValidationError("basis needs at least one level");
    band_offsets_.reserve(per_level_.size());
    for (const auto& lvl : per_level_) band_offsets_.push_back(lvl.size());
}

std::size_t HaarBasis::band_begin(int j) const {
    return j == j0_ ? 0 : band_offsets_.at(static_cast<std::size_t>(j - 1 - j0_));
}

std::size_t HaarBasis::nnz() const noexcept {
    std::size_t s = 0;
    for (const auto& c : columns()) s += c.entries.size();
    return s;
}

Matrix HaarBasis::to_dense() const {
    Matrix m(n(), n());
    const auto& cols = columns();
    for (std::size_t l = 0; l < cols.size(); ++l)
        for (const auto& e : cols[l].entries) m(e.index, l) = e.value;
    return m;
}

std::vector<std::vector<double>> level_one_vectors(std::size_t m) {
    if (m == 0) throw ValidationError("level_one_vectors: need at least one point");
    std::vector<std::vector<double>> out(m, std::vector<double>(m, 0.0));
    std::fill(out[0].begin(), out[0].end(), 1.0 / std::sqrt(static_cast<double>(m)));
    for (std::size_t l = 2; l <= m; ++l)
        for (std::size_t i = 1; i <= m; ++i) out[l - 1][i - 1] = local_value(m, l, i);
    return out;
}

std::vector<SparseColumn> extend_one_level(std::span<const SparseColumn> parent_basis,
                                           const CoarseChain& chain, int j) {
    if (j <= chain.j0() || j > chain.j_max())
        throw ValidationError("extend_one_level: level " + std::to_string(j) + " has no parent level");
    const ChainLevel& coarse = chain.level(j - 1);
    if (parent_basis.size() != coarse.size)
        throw ValidationError("extend_one_level: parent basis does not match level " + std::to_string(j - 1));

    std::vector<SparseColumn> out;
    out.reserve(chain.size(j));
    for (const SparseColumn& pc : parent_basis) {
        SparseColumn col;
        col.band = pc.band;
        for (const BasisEntry& e : pc.entries) {
            const double v = e.value * coarse.weight_factor[e.index];
            for (std::size_t c : coarse.children_of(e.index)) push_nonzero(col.entries, c, v);
        }
        sort_entries(col.entries);
        out.push_back(std::move(col));
    }
    for (std::size_t p = 0; p < coarse.size; ++p) {
        const auto kids = coarse.children_of(p);
        const std::size_t k = kids.size();
        for (std::size_t l = 2; l <= k; ++l) {
            SparseColumn col;
            col.band = j;
            for (std::size_t i = l - 1; i <= k; ++i) push_nonzero(col.entries, kids[i - 1], local_value(k, l, i));
            sort_entries(col.entries);
            out.push_back(std::move(col));
        }
    }
    return out;
}

HaarBasis build_haar_basis(const CoarseChain& chain) {
    std::vector<std::vector<SparseColumn>> per_level;
    per_level.reserve(chain.num_levels());

    const std::size_t top = chain.size(chain.j0());
    std::vector<SparseColumn> base;
    base.reserve(top);
    for (const auto& dense : level_one_vectors(top)) {
        SparseColumn col;
        col.band = chain.j0();
        for (std::size_t i = 0; i < dense.size(); ++i) push_nonzero(col.entries, i, dense[i]);
        base.push_back(std::move(col));
    }
    per_level.push_back(std::move(base));
    for (int j = chain.j0() + 1; j <= chain.j_max(); ++j)
        per_level.push_back(extend_one_level(per_level.back(), chain, j));
    return HaarBasis(chain.j0(), std::move(per_level));
}

SparseColumn compress_to_level(const SparseColumn& finest_column, const CoarseChain& chain,
                               const CumulativeWeights& cw, int j) {
    const auto anc = chain.ancestors(j);
    const auto W = cw.at_level(j);
    std::vector<double> acc(chain.size(j), 0.0);
    std::vector<bool> touched(chain.size(j), false);
    for (const auto& e : finest_column.entries) {
        acc[anc[e.index]] += W[e.index] * e.value;
        touched[anc[e.index]] = true;
    }
    SparseColumn out;
    out.band = finest_column.band;
    for (std::size_t v = 0; v < acc.size(); ++v)
        if (touched[v]) push_nonzero(out.entries, v, acc[v]);
    return out;
}

HaarBasis restore_haar_basis(std::vector<SparseColumn> finest_columns, const CoarseChain& chain) {
    if (finest_columns.size() != chain.n())
        throw ValidationError("basis has " + std::to_string(finest_columns.size()) +
                              " columns but the chain's finest level has " + std::to_string(chain.n()));
    std::size_t begin = 0;
    for (int j = chain.j0(); j <= chain.j_max(); ++j) {
        const std::size_t end = chain.size(j);
        for (std::size_t l = begin; l < end; ++l)
            if (finest_columns[l].band != j)
                throw ValidationError("column " + std::to_string(l) + " has band " +
                                      std::to_string(finest_columns[l].band) + ", chain expects " +
                                      std::to_string(j));
        begin = end;
    }
    for (const auto& c : finest_columns)
        for (const auto& e : c.entries)
            if (e.index >= chain.n()) throw ValidationError("basis entry index out of range");

    const CumulativeWeights cw(chain);
    std::vector<std::vector<SparseColumn>> per_level(chain.num_levels());
    for (int j = chain.j0(); j < chain.j_max(); ++j) {
        auto& lvl = per_level[static_cast<std::size_t>(j - chain.j0())];
        const std::size_t count = chain.size(j);
        lvl.reserve(count);
        for (std::size_t l = 0; l < count; ++l) lvl.push_back(compress_to_level(finest_columns[l], chain, cw, j));
    }
    per_level.back() = std::move(finest_columns);
    return HaarBasis(chain.j0(), std::move(per_level));
}

double sparsity(const HaarBasis& b) {
    const double n = static_cast<double>(b.n());
    if (n == 0.0) return 0.0;
    return 1.0 - static_cast<double>(b.nnz()) / (n * n);
}

std::vector<std::size_t> column_support(const HaarBasis& b, std::size_t l) {
    if (l >= b.n())
        throw ValidationError("column index " + std::to_string(l) + " out of range for N=" + std::to_string(b.n()));
    std::vector<std::size_t> s;
    for (const auto& e : b.column(l).entries) s.push_back(e.index);
    return s;
}

std::vector<std::size_t> distinct_value_counts(const HaarBasis& b) {
    std::vector<std::size_t> counts;
    counts.reserve(b.n());
    for (const auto& c : b.columns()) {
        std::vector<double> vals;
        vals.reserve(c.entries.size() + 1);
        for (const auto& e : c.entries) vals.push_back(e.value);
        if (c.entries.size() < b.n()) vals.push_back(0.0);
        std::sort(vals.begin(), vals.end());
        counts.push_back(static_cast<std::size_t>(std::unique(vals.begin(), vals.end()) - vals.begin()));
    }
    return counts;
}

}  // namespace haarfht
