#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "haarfht/chain.hpp"
#include "haarfht/fht.hpp"
#include "haarfht/graph.hpp"
#include "haarfht/haar_basis.hpp"
#include "haarfht/matrix.hpp"

namespace haarfht {

enum class Activation { relu, identity };

/// Everything a Haar network needs to know about its (fixed) input graph.
struct GraphContext {
    CoarseChain chain;
    HaarBasis basis;
    CumulativeWeights cw;
    DenseSymMatrix smoothing;

    static std::shared_ptr<const GraphContext> build(const Graph& g, std::size_t min_top, std::uint64_t seed);
    std::size_t n() const noexcept { return chain.n(); }
};

/// Gives every finest index the parameter of its level-`level` ancestor.
std::vector<double> share_weights(std::span<const double> params, const CoarseChain& chain, int level);
/// Adjoint of share_weights: sums a length-N vector over each level-`level` cluster.
std::vector<double> pool_shared_gradient(std::span<const double> full, const CoarseChain& chain, int level);

/// sigma(Phi G Phi^T F W) with a diagonal coefficient-domain filter G shared by all input columns.
struct HaarConvLayer {
    /// Length N_{share_level}; expanded to length N by share_weights.
    std::vector<double> filter;
    /// d x m.
    Matrix compress;
    int share_level = 0;
    Activation activation = Activation::relu;
};

FeatureMatrix conv_layer_forward(const FeatureMatrix& f_in, const HaarConvLayer& layer, const HaarBasis& basis,
                                 const CoarseChain& chain, const CumulativeWeights& cw);

struct ConvLayerGradients {
    std::vector<double> filter;
    Matrix compress;
    FeatureMatrix input;
};

/// Backpropagates d(loss)/d(output) through conv_layer_forward.
ConvLayerGradients conv_layer_backward(const FeatureMatrix& f_in, const FeatureMatrix& grad_out,
                                       const HaarConvLayer& layer, const HaarBasis& basis,
                                       const CoarseChain& chain, const CumulativeWeights& cw);

/// m x d coefficient-domain filters, one per (output, input) feature pair.
struct FilterBank {
    std::size_t outputs = 0;
    std::size_t inputs = 0;
    std::vector<std::vector<double>> filters;

    FilterBank(std::size_t m, std::size_t d, std::size_t n)
        : outputs(m), inputs(d), filters(m * d, std::vector<double>(n, 0.0)) {}
    std::vector<double>& at(std::size_t i, std::size_t j) { return filters[i * inputs + j]; }
    const std::vector<double>& at(std::size_t i, std::size_t j) const { return filters[i * inputs + j]; }
};

/// f_out_i = sigma(sum_j Phi (g_ij .* Phi^T f_in_j)).
FeatureMatrix general_layer_forward(const FeatureMatrix& f_in, const FilterBank& bank, Activation act,
                                    const HaarBasis& basis, const CoarseChain& chain,
                                    const CumulativeWeights& cw);

/// Row-wise max over the children of each level-(j-1) vertex. `f` has N_j rows.
FeatureMatrix graph_max_pool(const FeatureMatrix& f, const CoarseChain& chain, int j);
/// Copies each level-(j-1) row onto its children at level j.
FeatureMatrix graph_unpool(const FeatureMatrix& f, const CoarseChain& chain, int j);

/// Two-layer node classifier softmax(HC2(ReLU(HC1(F)))) with HC(f) = A_hat (w1 * f) w2.
///
/// filter1 is N_{share} x M (column c filters input feature c), weight1 is M x H,
/// filter2 is N_{share} x H and weight2 is H x C.
struct HanetParams {
    Matrix filter1;
    Matrix weight1;
    Matrix filter2;
    Matrix weight2;

    std::size_t count() const noexcept {
        return filter1.data().size() + weight1.data().size() + filter2.data().size() + weight2.data().size();
    }
    /// Fixed traversal order shared by the optimizer and gradient checks.
    std::vector<std::span<double>> tensors();
    std::vector<std::span<const double>> tensors() const;
};

struct HanetModel {
    HanetParams params;
    std::shared_ptr<const GraphContext> context;
    int share_level = 0;

    /// Identity filters and Glorot-uniform compression matrices.
    static HanetModel initialize(std::shared_ptr<const GraphContext> ctx, std::size_t features, std::size_t hidden,
                                 std::size_t classes, std::uint64_t seed, int share_level);
    static HanetModel initialize(std::shared_ptr<const GraphContext> ctx, std::size_t features, std::size_t hidden,
                                 std::size_t classes, std::uint64_t seed) {
        const int level = ctx->chain.j0();
        return initialize(std::move(ctx), features, hidden, classes, seed, level);
    }
};

/// Class probabilities, N x C.
FeatureMatrix node_model_forward(const FeatureMatrix& f_in, const HanetModel& model);

struct LossAndGradients {
    double loss = 0.0;
    HanetParams grad;
};

/// Masked mean cross-entropy over `train` (vertex ids) plus l2 * ||params||^2.
double model_loss(const FeatureMatrix& f_in, std::span<const int> labels, std::span<const std::size_t> train,
                  const HanetModel& model, double l2);
LossAndGradients model_backward(const FeatureMatrix& f_in, std::span<const int> labels,
                                std::span<const std::size_t> train, const HanetModel& model, double l2);

struct GradientCheckResult {
    /// Max relative error per tensor, in HanetParams::tensors() order.
    std::vector<double> max_rel_error;
    double worst() const;
};

/// Central differences against model_backward. Relative error is |a - n| / max(|a|, |n|, floor).
GradientCheckResult gradient_check(const FeatureMatrix& f_in, std::span<const int> labels,
                                   std::span<const std::size_t> train, const HanetModel& model, double l2,
                                   double eps, double floor = 1e-4);

/// Gradient check on a random mixed graph with N(0,1) features, random labels, every second
/// vertex in the training set and filters drawn from [0.5, 1.5].
GradientCheckResult random_gradient_check(std::size_t n, std::size_t features, std::size_t classes,
                                          std::size_t hidden, std::uint64_t seed, double eps);

struct TrainOptions {
    double lr = 0.01;
    std::size_t epochs = 200;
    std::uint64_t seed = 42;
    double l2 = 5e-4;
    double momentum = 0.9;
    std::size_t hidden = 16;
    std::size_t min_top = 1;
};

struct EpochMetrics {
    std::size_t epoch = 0;
    double loss = 0.0;
    double train_acc = 0.0;
    double test_acc = 0.0;
};

struct TrainResult {
    HanetModel model;
    std::vector<EpochMetrics> history;
};

/// Full-batch gradient descent with momentum. `labels[v] < 0` marks an unlabeled vertex; the
/// test set is every labeled vertex outside `train`.
TrainResult train_toy(const Graph& g, const FeatureMatrix& f_in, std::span<const int> labels,
                      std::span<const std::size_t> train, const TrainOptions& opts);

/// Same as above with a prebuilt context.
TrainResult train_toy(std::shared_ptr<const GraphContext> ctx, const FeatureMatrix& f_in,
                      std::span<const int> labels, std::span<const std::size_t> train, const TrainOptions& opts);

double accuracy(const FeatureMatrix& probs, std::span<const int> labels, std::span<const std::size_t> vertices);

/// Graph-level regression: one conv layer, mean readout over vertices, linear head, MSE loss.
struct RegressionModel {
    HaarConvLayer conv;
    std::vector<double> readout;
    double bias = 0.0;
};

double regression_forward(const FeatureMatrix& f_in, const RegressionModel& model, const HaarBasis& basis,
                          const CoarseChain& chain, const CumulativeWeights& cw);

struct RegressionGradients {
    double loss = 0.0;
    std::vector<double> filter;
    Matrix compress;
    std::vector<double> readout;
    double bias = 0.0;
};

RegressionGradients regression_backward(const FeatureMatrix& f_in, double target, const RegressionModel& model,
                                        const HaarBasis& basis, const CoarseChain& chain,
                                        const CumulativeWeights& cw);

}  // namespace haarfht
