#pragma once

#include <span>
#include <vector>

#include "haarfht/chain.hpp"
#include "haarfht/graph.hpp"
#include "haarfht/haar_basis.hpp"

namespace haarfht {

/// Coefficients in the Haar domain, aligned with basis columns.
using CoeffVector = std::vector<double>;

/// S_j(f, v) for every level j and vertex v of that level.
class WeightedSumTable {
public:
    WeightedSumTable(int j0, std::vector<std::vector<double>> sums) : j0_(j0), sums_(std::move(sums)) {}

    int j0() const noexcept { return j0_; }
    std::span<const double> at_level(int j) const { return sums_.at(static_cast<std::size_t>(j - j0_)); }

private:
    int j0_;
    std::vector<std::vector<double>> sums_;
};

/// Bottom-up sweep: S_J = f, S_j(v) = sum over children v' of w^(j+1)_{v'} S_{j+1}(v').
WeightedSumTable weighted_sums(std::span<const double> f, const CoarseChain& chain);

/// Phi^T f in O(N) using weighted sums and the band columns of the coarse bases.
CoeffVector adjoint_fht(std::span<const double> f, const HaarBasis& basis, const CoarseChain& chain);

/// Phi c as sum_j W_k^(j) s(c, v^(j)_{k_j}), with s built from the band columns of each level.
GraphSignal forward_fht(std::span<const double> c, const HaarBasis& basis, const CoarseChain& chain,
                        const CumulativeWeights& cw);

/// Reference products over the stored finest columns.
CoeffVector dense_adjoint(std::span<const double> f, const HaarBasis& basis);
GraphSignal dense_forward(std::span<const double> c, const HaarBasis& basis);

/// Phi((Phi^T g) .* (Phi^T f)).
GraphSignal haar_convolution(std::span<const double> g, std::span<const double> f, const HaarBasis& basis,
                             const CoarseChain& chain, const CumulativeWeights& cw);

/// Phi(ghat .* (Phi^T f)) for a filter given in the coefficient domain.
GraphSignal spectral_filter_apply(std::span<const double> ghat, std::span<const double> f,
                                  const HaarBasis& basis, const CoarseChain& chain,
                                  const CumulativeWeights& cw);

/// Column-by-column variants over an N x d matrix.
Matrix adjoint_fht_columns(const Matrix& f, const HaarBasis& basis, const CoarseChain& chain);
Matrix forward_fht_columns(const Matrix& c, const HaarBasis& basis, const CoarseChain& chain,
                           const CumulativeWeights& cw);

/// Throws ValidationError when the basis band layout does not match the chain level sizes.
void check_compatible(const HaarBasis& basis, const CoarseChain& chain);

}  // namespace haarfht
