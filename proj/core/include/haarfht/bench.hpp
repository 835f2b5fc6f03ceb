#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "haarfht/graph.hpp"
#include "haarfht/haar_basis.hpp"
#include "haarfht/matrix.hpp"

namespace haarfht {

struct EigenDecomposition {
    /// Ascending.
    std::vector<double> values;
    /// Column i is the unit eigenvector for values[i].
    Matrix vectors;
    std::size_t sweeps = 0;
};

/// Largest matrix order jacobi_eigenbasis accepts.
inline constexpr std::size_t kJacobiMaxOrder = 4096;

/// Cyclic (one-sided) Jacobi rotations until max |(U^T m U)_ij| (i != j) < tol * ||m||_F.
EigenDecomposition jacobi_eigenbasis(const DenseSymMatrix& m, double tol = 1e-12, std::size_t max_sweeps = 100);

/// Phi^T f and Phi c computed as full N x N products: each column is scattered into a dense
/// scratch vector and combined over all N entries. Baseline for the scaling comparison.
std::vector<double> direct_adjoint(std::span<const double> f, const HaarBasis& basis);
std::vector<double> direct_forward(std::span<const double> c, const HaarBasis& basis);

struct BenchRecord {
    std::string label;
    std::size_t n = 0;
    std::size_t repeats = 1;
    double wall_time_s = 0.0;
    /// Written as "key=value;..." in insertion-independent (sorted) order.
    std::map<std::string, std::string> extra;
};

/// "label,n,repeats,wall_time_s,extra".
void write_bench_csv(std::ostream& out, std::span<const BenchRecord> records);

/// Median seconds per call over `repeats` batches after one discarded warm-up. Each batch repeats
/// the call enough times to last at least `min_batch_s`. `warm_call_s` reports an untimed call
/// the caller already made; if it lasted at least `min_batch_s` it stands in for the warm-up.
double time_median(const std::function<void()>& fn, std::size_t repeats, double min_batch_s = 2e-3,
                   std::optional<double> warm_call_s = std::nullopt);

/// Least-squares slope of log(y) against log(x); empty with fewer than two points.
std::optional<double> loglog_slope(std::span<const double> x, std::span<const double> y);

struct ScalingResult {
    std::vector<BenchRecord> records;
    std::map<std::string, double> slopes;
};

/// Timing labels produced by bench_scaling.
inline const std::vector<std::string> kScalingMethods{"adjoint_fht",   "forward_fht",    "dense_adjoint",
                                                      "dense_forward", "direct_adjoint", "direct_forward"};

/// Times fast, sparse-reference and direct transforms on random 4-regular graphs. Throws
/// NumericalCheckError if any path disagrees with the fast one beyond 1e-10 on the instance.
ScalingResult bench_scaling(std::span<const std::size_t> sizes, std::size_t repeats, std::uint64_t seed,
                            std::ostream* progress = nullptr);

/// Times chain + Haar basis generation against Laplacian + Jacobi eigenbasis (N <= 2000).
std::vector<BenchRecord> bench_basis_vs_eigen(std::span<const std::size_t> sizes, std::size_t repeats,
                                              std::uint64_t seed, std::ostream* progress = nullptr);

/// Seed used for the instance of size n in the benchmark sweeps.
std::uint64_t instance_seed(std::uint64_t seed, std::size_t n);

struct SparsityReport {
    std::size_t n = 0;
    double sparsity = 0.0;
    std::size_t nnz = 0;
    std::vector<std::size_t> level_sizes;
    bool filtration = false;
    double generation_s = 0.0;
    double adjoint_s = 0.0;
    double forward_s = 0.0;
};

SparsityReport report_sparsity(const Graph& g, std::size_t min_top, std::uint64_t seed);

/// Deterministic part of the report (no timings).
void print_sparsity(std::ostream& out, const SparsityReport& r);
void print_sparsity_timings(std::ostream& out, const SparsityReport& r);

}  // namespace haarfht
