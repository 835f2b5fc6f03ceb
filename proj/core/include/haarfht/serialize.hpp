#pragma once

#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <vector>

#include "haarfht/chain.hpp"
#include "haarfht/haar_basis.hpp"
#include "haarfht/hanet.hpp"

namespace haarfht {

/// {"levels":[{"n":..,"parent":[..]},...],"J0":..,"J":..}, levels ordered J0..J. Only the
/// parent maps are stored; weights are recomputed on load.
void write_chain_json(std::ostream& out, const CoarseChain& chain);
/// `finest`, when given, restores degree-based child ordering.
CoarseChain read_chain_json(std::istream& in, const Graph* finest = nullptr);

/// {"n":..,"bands":[N_J0..N_J],"columns":[{"band":j,"entries":[[idx,val],...]},...]} with
/// values printed to 17 significant digits; optional "stats":{"sparsity":..,"nnz":..}.
void write_basis_json(std::ostream& out, const HaarBasis& basis, bool with_stats);
/// Coarse-level bases are rebuilt from the chain.
HaarBasis read_basis_json(std::istream& in, const CoarseChain& chain);

/// One value per line, 17 significant digits.
void write_vector_csv(std::ostream& out, std::span<const double> values);
std::vector<double> read_vector_csv(std::istream& in);
void write_matrix_csv(std::ostream& out, const Matrix& m);

/// "vertex_id,class_id" rows; vertices without a row get -1.
std::vector<int> read_labels_csv(std::istream& in, std::size_t n);
/// One vertex id per line (commas also accepted as separators).
std::vector<std::size_t> read_mask_csv(std::istream& in, std::size_t n);
/// "epoch,loss,train_acc,test_acc".
void write_metrics_csv(std::ostream& out, std::span<const EpochMetrics> history);

std::ifstream open_input(const std::filesystem::path& path);
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace haarfht
