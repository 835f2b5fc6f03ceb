#include "haarfht/fht.hpp"

#include <string>

#include "haarfht/errors.hpp"

namespace haarfht {

namespace {

void check_length(std::size_t got, std::size_t want, const char* what) {
    if (got != want)
        throw ValidationError(std::string(what) + ": expected length " + std::to_string(want) + ", got " +
                              std::to_string(got));
}

}  // namespace

void check_compatible(const HaarBasis& basis, const CoarseChain& chain) {
    if (basis.j0() != chain.j0() || basis.band_offsets() != chain.sizes())
        throw ValidationError("basis/chain mismatch: band offsets disagree with chain level sizes");
}

WeightedSumTable weighted_sums(std::span<const double> f, const CoarseChain& chain) {
    check_length(f.size(), chain.n(), "weighted_sums");
    std::vector<std::vector<double>> sums(chain.num_levels());
    sums.back().assign(f.begin(), f.end());
    for (int j = chain.j_max() - 1; j >= chain.j0(); --j) {
        const ChainLevel& fine = chain.level(j + 1);
        const auto& below = sums[static_cast<std::size_t>(j + 1 - chain.j0())];
        auto& here = sums[static_cast<std::size_t>(j - chain.j0())];
        here.assign(chain.size(j), 0.0);
        for (std::size_t c = 0; c < fine.size; ++c) here[fine.parent[c]] += fine.weight_factor[c] * below[c];
    }
    return WeightedSumTable(chain.j0(), std::move(sums));
}

CoeffVector adjoint_fht(std::span<const double> f, const HaarBasis& basis, const CoarseChain& chain) {
    check_compatible(basis, chain);
    const WeightedSumTable S = weighted_sums(f, chain);
    CoeffVector out(basis.n(), 0.0);
    std::vector<double> scaled;
    for (int j = chain.j0(); j <= chain.j_max(); ++j) {
        const auto s = S.at_level(j);
        const auto& wf = chain.level(j).weight_factor;
        scaled.resize(s.size());
        for (std::size_t k = 0; k < s.size(); ++k) scaled[k] = s[k] * wf[k];
        const auto& cols = basis.per_level(j);
        for (std::size_t l = basis.band_begin(j); l < basis.band_end(j); ++l) out[l] = cols[l].dot(scaled);
    }
    return out;
}

GraphSignal forward_fht(std::span<const double> c, const HaarBasis& basis, const CoarseChain& chain,
                        const CumulativeWeights& cw) {
    check_compatible(basis, chain);
    check_length(c.size(), basis.n(), "forward_fht");
    const std::size_t n = chain.n();
    GraphSignal out(n, 0.0);
    std::vector<double> s;
    for (int j = chain.j0(); j <= chain.j_max(); ++j) {
        // s(c, v) = sum over band-j columns of c_l * phi_l^(j)(v).
        s.assign(chain.size(j), 0.0);
        const auto& cols = basis.per_level(j);
        for (std::size_t l = basis.band_begin(j); l < basis.band_end(j); ++l) {
            const double cl = c[l];
            if (cl == 0.0) continue;
            for (const auto& e : cols[l].entries) s[e.index] += cl * e.value;
        }
        const auto W = cw.at_level(j);
        const auto anc = chain.ancestors(j);
        for (std::size_t k = 0; k < n; ++k) out[k] += W[k] * s[anc[k]];
    }
    return out;
}

CoeffVector dense_adjoint(std::span<const double> f, const HaarBasis& basis) {
    check_length(f.size(), basis.n(), "dense_adjoint");
    CoeffVector out(basis.n());
    const auto& cols = basis.columns();
    for (std::size_t l = 0; l < cols.size(); ++l) out[l] = cols[l].dot(f);
    return out;
}

GraphSignal dense_forward(std::span<const double> c, const HaarBasis& basis) {
    check_length(c.size(), basis.n(), "dense_forward");
    GraphSignal out(basis.n(), 0.0);
    const auto& cols = basis.columns();
    for (std::size_t l = 0; l < cols.size(); ++l)
        for (const auto& e : cols[l].entries) out[e.index] += c[l] * e.value;
    return out;
}

GraphSignal haar_convolution(std::span<const double> g, std::span<const double> f, const HaarBasis& basis,
                             const CoarseChain& chain, const CumulativeWeights& cw) {
    check_length(g.size(), basis.n(), "haar_convolution filter");
    check_length(f.size(), basis.n(), "haar_convolution signal");
    CoeffVector gh = adjoint_fht(g, basis, chain);
    const CoeffVector fh = adjoint_fht(f, basis, chain);
    for (std::size_t l = 0; l < gh.size(); ++l) gh[l] *= fh[l];
    return forward_fht(gh, basis, chain, cw);
}

GraphSignal spectral_filter_apply(std::span<const double> ghat, std::span<const double> f,
                                  const HaarBasis& basis, const CoarseChain& chain,
                                  const CumulativeWeights& cw) {
    check_length(ghat.size(), basis.n(), "spectral_filter_apply filter");
    check_length(f.size(), basis.n(), "spectral_filter_apply signal");
    CoeffVector fh = adjoint_fht(f, basis, chain);
    for (std::size_t l = 0; l < fh.size(); ++l) fh[l] *= ghat[l];
    return forward_fht(fh, basis, chain, cw);
}

Matrix adjoint_fht_columns(const Matrix& f, const HaarBasis& basis, const CoarseChain& chain) {
    check_length(f.rows(), basis.n(), "adjoint_fht_columns");
    Matrix out(f.rows(), f.cols());
    for (std::size_t c = 0; c < f.cols(); ++c) out.set_column(c, adjoint_fht(f.column(c), basis, chain));
    return out;
}

Matrix forward_fht_columns(const Matrix& c, const HaarBasis& basis, const CoarseChain& chain,
                           const CumulativeWeights& cw) {
    check_length(c.rows(), basis.n(), "forward_fht_columns");
    Matrix out(c.rows(), c.cols());
    for (std::size_t k = 0; k < c.cols(); ++k) out.set_column(k, forward_fht(c.column(k), basis, chain, cw));
    return out;
}

}  // namespace haarfht
