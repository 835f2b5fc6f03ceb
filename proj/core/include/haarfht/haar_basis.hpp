#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "haarfht/chain.hpp"
#include "haarfht/matrix.hpp"

namespace haarfht {

/// Values with magnitude below this are stored as structural zeros.
inline constexpr double kZeroThreshold = 1e-14;

struct BasisEntry {
    std::size_t index = 0;
    double value = 0.0;

    friend bool operator==(const BasisEntry&, const BasisEntry&) = default;
};

/// Sparse vector over the vertices of one chain level. Entries are sorted by index and
/// contain no zeros. `band` is the level at which the column first appears.
struct SparseColumn {
    std::vector<BasisEntry> entries;
    int band = 0;

    double dot(std::span<const double> x) const noexcept {
        double s = 0.0;
        for (const auto& e : entries) s += e.value * x[e.index];
        return s;
    }

    friend bool operator==(const SparseColumn&, const SparseColumn&) = default;
};

/// Haar orthonormal basis of a coarse-grained chain, together with the associated
/// orthonormal bases of every coarser level.
///
/// Column indices are zero-based. Columns [N_{j-1}, N_j) form band j (N_{J0-1} = 0); a
/// column of band j is constant on the finest-level descendants of each level-j vertex.
class HaarBasis {
public:
    HaarBasis() = default;

    /// per_level[i] is the basis of level j0 + i; its last entry is the finest basis.
    HaarBasis(int j0, std::vector<std::vector<SparseColumn>> per_level);

    std::size_t n() const noexcept { return per_level_.back().size(); }
    int j0() const noexcept { return j0_; }
    int j_max() const noexcept { return j0_ + static_cast<int>(per_level_.size()) - 1; }

    const std::vector<SparseColumn>& columns() const noexcept { return per_level_.back(); }
    const SparseColumn& column(std::size_t l) const { return per_level_.back().at(l); }

    /// N_{J0}, ..., N_J.
    const std::vector<std::size_t>& band_offsets() const noexcept { return band_offsets_; }
    std::size_t band_begin(int j) const;
    std::size_t band_end(int j) const { return band_offsets_.at(static_cast<std::size_t>(j - j0_)); }

    const std::vector<SparseColumn>& per_level(int j) const {
        return per_level_.at(static_cast<std::size_t>(j - j0_));
    }

    std::size_t nnz() const noexcept;
    Matrix to_dense() const;

    friend bool operator==(const HaarBasis&, const HaarBasis&) = default;

private:
    int j0_ = 0;
    std::vector<std::vector<SparseColumn>> per_level_;
    std::vector<std::size_t> band_offsets_;
};

/// The m orthonormal vectors used at the coarsest level and inside every cluster:
/// vector 1 is constant 1/sqrt(m); vector l (2 <= l <= m) is
/// sqrt((m-l+1)/(m-l+2)) * (chi_{l-1} - (chi_l + ... + chi_m)/(m-l+1)).
std::vector<std::vector<double>> level_one_vectors(std::size_t m);

/// Lifts the level-(j-1) basis to level j: each parent vector is spread over children with
/// factor 1/sqrt(cluster size), then each cluster of size k >= 2 contributes k-1 local
/// vectors. Local vectors follow all lifted vectors, grouped by cluster id.
std::vector<SparseColumn> extend_one_level(std::span<const SparseColumn> parent_basis,
                                           const CoarseChain& chain, int j);

HaarBasis build_haar_basis(const CoarseChain& chain);

/// Rebuilds a basis from its finest columns by compressing each column onto every coarser
/// level with the cumulative weights. Throws ValidationError if the band layout does not fit
/// the chain.
HaarBasis restore_haar_basis(std::vector<SparseColumn> finest_columns, const CoarseChain& chain);

/// Sums column entries over each level-j cluster, scaled by cumulative weights.
SparseColumn compress_to_level(const SparseColumn& finest_column, const CoarseChain& chain,
                               const CumulativeWeights& cw, int j);

/// 1 - nnz / N^2.
double sparsity(const HaarBasis& b);

/// Vertices on which column l is non-zero.
std::vector<std::size_t> column_support(const HaarBasis& b, std::size_t l);

/// Number of distinct values (zero included when present) taken by each column.
std::vector<std::size_t> distinct_value_counts(const HaarBasis& b);

}  // namespace haarfht
