#include "haarfht/hanet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "haarfht/errors.hpp"
#include "haarfht/synthetic.hpp"

namespace haarfht {

namespace {

void check_level(const CoarseChain& chain, int level) {
    if (level < chain.j0() || level > chain.j_max())
        throw ValidationError("share level " + std::to_string(level) + " outside [" + std::to_string(chain.j0()) +
                              ", " + std::to_string(chain.j_max()) + "]");
}

void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}

void apply_activation(Matrix& m, Activation act) {
    if (act == Activation::identity) return;
    for (double& x : m.data()) x = x > 0.0 ? x : 0.0;
}

// dZ = dOut * sigma'(Z); ReLU'(0) = 0.
Matrix activation_backward(const Matrix& z, const Matrix& grad_out, Activation act) {
    Matrix g = grad_out;
    if (act == Activation::identity) return g;
    auto zd = z.data();
    auto gd = g.data();
    for (std::size_t i = 0; i < gd.size(); ++i)
        if (!(zd[i] > 0.0)) gd[i] = 0.0;
    return g;
}

void glorot_fill(Matrix& m, std::mt19937_64& rng) {
    const double s = std::sqrt(6.0 / static_cast<double>(m.rows() + m.cols()));
    std::uniform_real_distribution<double> dist(-s, s);
    for (double& x : m.data()) x = dist(rng);
}

double sum_squares(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

// Per-column filtering in the coefficient domain, with one expanded filter per column.
struct ColumnConv {
    Matrix coeffs;                          // Phi^T X, column by column
    std::vector<std::vector<double>> gains; // expanded filter of each column
    Matrix out;                             // Phi (g .* Phi^T X)
};

ColumnConv conv_columns(const Matrix& x, const Matrix& filters, int level, const GraphContext& ctx) {
    ColumnConv r;
    r.coeffs = adjoint_fht_columns(x, ctx.basis, ctx.chain);
    r.out = Matrix(x.rows(), x.cols());
    r.gains.reserve(x.cols());
    for (std::size_t c = 0; c < x.cols(); ++c) {
        r.gains.push_back(share_weights(filters.column(c), ctx.chain, level));
        std::vector<double> h = r.coeffs.column(c);
        for (std::size_t l = 0; l < h.size(); ++l) h[l] *= r.gains.back()[l];
        r.out.set_column(c, forward_fht(h, ctx.basis, ctx.chain, ctx.cw));
    }
    return r;
}

// Given dL/d(out), returns dL/d(filters) (pooled to the share level) and, optionally, dL/dX.
void conv_columns_backward(const ColumnConv& fwd, const Matrix& grad_out, int level, const GraphContext& ctx,
                           Matrix& grad_filters, Matrix* grad_x) {
    if (grad_x) *grad_x = Matrix(grad_out.rows(), grad_out.cols());
    for (std::size_t c = 0; c < grad_out.cols(); ++c) {
        std::vector<double> gh = adjoint_fht(grad_out.column(c), ctx.basis, ctx.chain);
        std::vector<double> dg(gh.size());
        for (std::size_t l = 0; l < gh.size(); ++l) dg[l] = gh[l] * fwd.coeffs(l, c);
        grad_filters.set_column(c, pool_shared_gradient(dg, ctx.chain, level));
        if (grad_x) {
            for (std::size_t l = 0; l < gh.size(); ++l) gh[l] *= fwd.gains[c][l];
            grad_x->set_column(c, forward_fht(gh, ctx.basis, ctx.chain, ctx.cw));
        }
    }
}

struct NodeForward {
    ColumnConv conv1;
    Matrix ay1;
    Matrix z1;
    Matrix h1;
    ColumnConv conv2;
    Matrix ay2;
    Matrix z2;
    Matrix probs;
};

void check_model_shapes(const FeatureMatrix& f_in, const HanetModel& model) {
    require(model.context != nullptr, "model has no graph context");
    const auto& ctx = *model.context;
    const auto& p = model.params;
    check_level(ctx.chain, model.share_level);
    const std::size_t ns = ctx.chain.size(model.share_level);
    require(f_in.rows() == ctx.n(), "input has " + std::to_string(f_in.rows()) + " rows, graph has " +
                                        std::to_string(ctx.n()) + " vertices");
    require(p.filter1.rows() == ns && p.filter1.cols() == f_in.cols(), "filter1 must be N_share x M");
    require(p.weight1.rows() == f_in.cols(), "weight1 must be M x H");
    require(p.filter2.rows() == ns && p.filter2.cols() == p.weight1.cols(), "filter2 must be N_share x H");
    require(p.weight2.rows() == p.weight1.cols(), "weight2 must be H x C");
}

NodeForward run_forward(const FeatureMatrix& f_in, const HanetModel& model) {
    check_model_shapes(f_in, model);
    const auto& ctx = *model.context;
    const Matrix& a_hat = ctx.smoothing.matrix();
    NodeForward r;
    r.conv1 = conv_columns(f_in, model.params.filter1, model.share_level, ctx);
    r.ay1 = matmul(a_hat, r.conv1.out);
    r.z1 = matmul(r.ay1, model.params.weight1);
    r.h1 = r.z1;
    apply_activation(r.h1, Activation::relu);
    r.conv2 = conv_columns(r.h1, model.params.filter2, model.share_level, ctx);
    r.ay2 = matmul(a_hat, r.conv2.out);
    r.z2 = matmul(r.ay2, model.params.weight2);
    r.probs = r.z2;
    for (std::size_t i = 0; i < r.probs.rows(); ++i) {
        auto row = r.probs.row(i);
        const double mx = *std::max_element(row.begin(), row.end());
        double s = 0.0;
        for (double& x : row) {
            x = std::exp(x - mx);
            s += x;
        }
        for (double& x : row) x /= s;
    }
    return r;
}

void check_labels(std::span<const int> labels, std::span<const std::size_t> train, std::size_t n,
                  std::size_t classes) {
    require(labels.size() == n, "labels must have one entry per vertex");
    require(!train.empty(), "training mask is empty");
    for (std::size_t v : train) {
        require(v < n, "mask vertex " + std::to_string(v) + " out of range");
        require(labels[v] >= 0 && static_cast<std::size_t>(labels[v]) < classes,
                "mask vertex " + std::to_string(v) + " has no valid label");
    }
}

double cross_entropy(const NodeForward& fwd, std::span<const int> labels, std::span<const std::size_t> train) {
    double loss = 0.0;
    for (std::size_t v : train) {
        auto z = fwd.z2.row(v);
        const double mx = *std::max_element(z.begin(), z.end());
        double s = 0.0;
        for (double x : z) s += std::exp(x - mx);
        loss += (mx + std::log(s)) - z[static_cast<std::size_t>(labels[v])];
    }
    return loss / static_cast<double>(train.size());
}

double l2_term(const HanetParams& p, double l2) {
    if (l2 == 0.0) return 0.0;
    double s = 0.0;
    for (auto t : p.tensors()) s += sum_squares(t);
    return l2 * s;
}

}  // namespace

std::shared_ptr<const GraphContext> GraphContext::build(const Graph& g, std::size_t min_top, std::uint64_t seed) {
    auto ctx = std::make_shared<GraphContext>();
    ctx->chain = build_chain(g, min_top, seed);
    ctx->basis = build_haar_basis(ctx->chain);
    ctx->cw = CumulativeWeights(ctx->chain);
    ctx->smoothing = smoothing_matrix(g);
    return ctx;
}

std::vector<double> share_weights(std::span<const double> params, const CoarseChain& chain, int level) {
    check_level(chain, level);
    require(params.size() == chain.size(level), "share_weights: expected " + std::to_string(chain.size(level)) +
                                                    " parameters, got " + std::to_string(params.size()));
    const auto anc = chain.ancestors(level);
    std::vector<double> out(chain.n());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = params[anc[k]];
    return out;
}

std::vector<double> pool_shared_gradient(std::span<const double> full, const CoarseChain& chain, int level) {
    check_level(chain, level);
    require(full.size() == chain.n(), "pool_shared_gradient: length mismatch");
    const auto anc = chain.ancestors(level);
    std::vector<double> out(chain.size(level), 0.0);
    for (std::size_t k = 0; k < full.size(); ++k) out[anc[k]] += full[k];
    return out;
}

FeatureMatrix conv_layer_forward(const FeatureMatrix& f_in, const HaarConvLayer& layer, const HaarBasis& basis,
                                 const CoarseChain& chain, const CumulativeWeights& cw) {
    require(f_in.rows() == basis.n(), "conv layer: input rows must equal N");
    require(layer.compress.rows() == f_in.cols(), "conv layer: compression matrix must be d x m");
    const auto gain = share_weights(layer.filter, chain, layer.share_level);
    Matrix coeffs = adjoint_fht_columns(f_in, basis, chain);
    for (std::size_t l = 0; l < coeffs.rows(); ++l)
        for (double& x : coeffs.row(l)) x *= gain[l];
    Matrix out = matmul(forward_fht_columns(coeffs, basis, chain, cw), layer.compress);
    apply_activation(out, layer.activation);
    return out;
}

ConvLayerGradients conv_layer_backward(const FeatureMatrix& f_in, const FeatureMatrix& grad_out,
                                       const HaarConvLayer& layer, const HaarBasis& basis,
                                       const CoarseChain& chain, const CumulativeWeights& cw) {
    require(f_in.rows() == basis.n(), "conv layer: input rows must equal N");
    require(layer.compress.rows() == f_in.cols(), "conv layer: compression matrix must be d x m");
    require(grad_out.rows() == f_in.rows() && grad_out.cols() == layer.compress.cols(),
            "conv layer: gradient shape mismatch");
    const auto gain = share_weights(layer.filter, chain, layer.share_level);
    const Matrix x_hat = adjoint_fht_columns(f_in, basis, chain);
    Matrix scaled = x_hat;
    for (std::size_t l = 0; l < scaled.rows(); ++l)
        for (double& x : scaled.row(l)) x *= gain[l];
    const Matrix y = forward_fht_columns(scaled, basis, chain, cw);
    const Matrix z = matmul(y, layer.compress);
    const Matrix dz = activation_backward(z, grad_out, layer.activation);

    ConvLayerGradients g;
    g.compress = matmul_tn(y, dz);
    const Matrix dy = matmul_nt(dz, layer.compress);
    Matrix dy_hat = adjoint_fht_columns(dy, basis, chain);
    std::vector<double> dgain(basis.n(), 0.0);
    for (std::size_t l = 0; l < dy_hat.rows(); ++l) {
        auto a = dy_hat.row(l);
        auto b = x_hat.row(l);
        for (std::size_t c = 0; c < a.size(); ++c) dgain[l] += a[c] * b[c];
        for (double& x : a) x *= gain[l];
    }
    g.filter = pool_shared_gradient(dgain, chain, layer.share_level);
    g.input = forward_fht_columns(dy_hat, basis, chain, cw);
    return g;
}

FeatureMatrix general_layer_forward(const FeatureMatrix& f_in, const FilterBank& bank, Activation act,
                                    const HaarBasis& basis, const CoarseChain& chain,
                                    const CumulativeWeights& cw) {
    require(f_in.rows() == basis.n(), "general layer: input rows must equal N");
    require(f_in.cols() == bank.inputs, "general layer: filter bank expects " + std::to_string(bank.inputs) +
                                            " input features");
    for (const auto& g : bank.filters) require(g.size() == basis.n(), "general layer: filters must have length N");
    const Matrix x_hat = adjoint_fht_columns(f_in, basis, chain);
    Matrix out(f_in.rows(), bank.outputs);
    std::vector<double> acc(basis.n());
    for (std::size_t i = 0; i < bank.outputs; ++i) {
        std::fill(acc.begin(), acc.end(), 0.0);
        for (std::size_t j = 0; j < bank.inputs; ++j) {
            const auto& g = bank.at(i, j);
            for (std::size_t l = 0; l < acc.size(); ++l) acc[l] += g[l] * x_hat(l, j);
        }
        out.set_column(i, forward_fht(acc, basis, chain, cw));
    }
    apply_activation(out, act);
    return out;
}

FeatureMatrix graph_max_pool(const FeatureMatrix& f, const CoarseChain& chain, int j) {
    if (j <= chain.j0() || j > chain.j_max())
        throw ValidationError("graph_max_pool: level " + std::to_string(j) + " has no coarser level");
    require(f.rows() == chain.size(j), "graph_max_pool: expected " + std::to_string(chain.size(j)) + " rows");
    const ChainLevel& coarse = chain.level(j - 1);
    FeatureMatrix out(coarse.size, f.cols(), -std::numeric_limits<double>::infinity());
    for (std::size_t p = 0; p < coarse.size; ++p) {
        auto dst = out.row(p);
        for (std::size_t c : coarse.children_of(p)) {
            auto src = f.row(c);
            for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = std::max(dst[k], src[k]);
        }
    }
    return out;
}

FeatureMatrix graph_unpool(const FeatureMatrix& f, const CoarseChain& chain, int j) {
    if (j <= chain.j0() || j > chain.j_max())
        throw ValidationError("graph_unpool: level " + std::to_string(j) + " has no coarser level");
    require(f.rows() == chain.size(j - 1), "graph_unpool: expected " + std::to_string(chain.size(j - 1)) + " rows");
    const ChainLevel& fine = chain.level(j);
    FeatureMatrix out(fine.size, f.cols());
    for (std::size_t c = 0; c < fine.size; ++c) {
        auto src = f.row(fine.parent[c]);
        std::copy(src.begin(), src.end(), out.row(c).begin());
    }
    return out;
}

std::vector<std::span<double>> HanetParams::tensors() {
    return {filter1.data(), weight1.data(), filter2.data(), weight2.data()};
}

std::vector<std::span<const double>> HanetParams::tensors() const {
    return {filter1.data(), weight1.data(), filter2.data(), weight2.data()};
}

HanetModel HanetModel::initialize(std::shared_ptr<const GraphContext> ctx, std::size_t features, std::size_t hidden,
                                  std::size_t classes, std::uint64_t seed, int share_level) {
    require(ctx != nullptr, "initialize: null graph context");
    require(features >= 1 && hidden >= 1 && classes >= 1, "initialize: dimensions must be positive");
    check_level(ctx->chain, share_level);
    const std::size_t ns = ctx->chain.size(share_level);
    HanetModel m;
    m.share_level = share_level;
    m.params.filter1 = Matrix(ns, features, 1.0);
    m.params.weight1 = Matrix(features, hidden);
    m.params.filter2 = Matrix(ns, hidden, 1.0);
    m.params.weight2 = Matrix(hidden, classes);
    std::mt19937_64 rng(seed);
    glorot_fill(m.params.weight1, rng);
    glorot_fill(m.params.weight2, rng);
    m.context = std::move(ctx);
    return m;
}

FeatureMatrix node_model_forward(const FeatureMatrix& f_in, const HanetModel& model) {
    return run_forward(f_in, model).probs;
}

double model_loss(const FeatureMatrix& f_in, std::span<const int> labels, std::span<const std::size_t> train,
                  const HanetModel& model, double l2) {
    const NodeForward fwd = run_forward(f_in, model);
    check_labels(labels, train, f_in.rows(), model.params.weight2.cols());
    return cross_entropy(fwd, labels, train) + l2_term(model.params, l2);
}

LossAndGradients model_backward(const FeatureMatrix& f_in, std::span<const int> labels,
                                std::span<const std::size_t> train, const HanetModel& model, double l2) {
    const NodeForward fwd = run_forward(f_in, model);
    const std::size_t classes = model.params.weight2.cols();
    check_labels(labels, train, f_in.rows(), classes);
    const auto& ctx = *model.context;
    const Matrix& a_hat = ctx.smoothing.matrix();
    const auto& p = model.params;

    LossAndGradients out;
    out.loss = cross_entropy(fwd, labels, train) + l2_term(p, l2);

    Matrix dz2(fwd.probs.rows(), classes);
    const double inv = 1.0 / static_cast<double>(train.size());
    for (std::size_t v : train) {
        auto src = fwd.probs.row(v);
        auto dst = dz2.row(v);
        for (std::size_t c = 0; c < classes; ++c) dst[c] += src[c] * inv;
        dst[static_cast<std::size_t>(labels[v])] -= inv;
    }

    out.grad.weight2 = matmul_tn(fwd.ay2, dz2);
    const Matrix dy2 = matmul(a_hat, matmul_nt(dz2, p.weight2));
    out.grad.filter2 = Matrix(p.filter2.rows(), p.filter2.cols());
    Matrix dh1;
    conv_columns_backward(fwd.conv2, dy2, model.share_level, ctx, out.grad.filter2, &dh1);

    const Matrix dz1 = activation_backward(fwd.z1, dh1, Activation::relu);
    out.grad.weight1 = matmul_tn(fwd.ay1, dz1);
    const Matrix dy1 = matmul(a_hat, matmul_nt(dz1, p.weight1));
    out.grad.filter1 = Matrix(p.filter1.rows(), p.filter1.cols());
    conv_columns_backward(fwd.conv1, dy1, model.share_level, ctx, out.grad.filter1, nullptr);

    if (l2 != 0.0) {
        auto gt = out.grad.tensors();
        auto pt = p.tensors();
        for (std::size_t t = 0; t < gt.size(); ++t)
            for (std::size_t i = 0; i < gt[t].size(); ++i) gt[t][i] += 2.0 * l2 * pt[t][i];
    }
    return out;
}

double GradientCheckResult::worst() const {
    double w = 0.0;
    for (double e : max_rel_error) w = std::max(w, e);
    return w;
}

GradientCheckResult gradient_check(const FeatureMatrix& f_in, std::span<const int> labels,
                                   std::span<const std::size_t> train, const HanetModel& model, double l2,
                                   double eps, double floor) {
    const LossAndGradients analytic = model_backward(f_in, labels, train, model, l2);
    HanetModel probe = model;
    auto probe_tensors = probe.params.tensors();
    const auto grad_tensors = analytic.grad.tensors();
    GradientCheckResult r;
    for (std::size_t t = 0; t < probe_tensors.size(); ++t) {
        double worst = 0.0;
        for (std::size_t i = 0; i < probe_tensors[t].size(); ++i) {
            const double saved = probe_tensors[t][i];
            probe_tensors[t][i] = saved + eps;
            const double up = model_loss(f_in, labels, train, probe, l2);
            probe_tensors[t][i] = saved - eps;
            const double down = model_loss(f_in, labels, train, probe, l2);
            probe_tensors[t][i] = saved;
            const double numeric = (up - down) / (2.0 * eps);
            const double a = grad_tensors[t][i];
            const double denom = std::max({std::abs(a), std::abs(numeric), floor});
            worst = std::max(worst, std::abs(a - numeric) / denom);
        }
        r.max_rel_error.push_back(worst);
    }
    return r;
}

GradientCheckResult random_gradient_check(std::size_t n, std::size_t features, std::size_t classes,
                                          std::size_t hidden, std::uint64_t seed, double eps) {
    require(n >= 2 && classes >= 1, "random_gradient_check: need n >= 2 and classes >= 1");
    const Graph g = random_mixed_graph(n, seed);
    const auto ctx = GraphContext::build(g, 1, seed);
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> normal(0.0, 1.0);
    FeatureMatrix f(n, features);
    for (double& x : f.data()) x = normal(rng);
    std::vector<int> labels(n);
    std::vector<std::size_t> train;
    for (std::size_t v = 0; v < n; ++v) {
        labels[v] = static_cast<int>(rng() % classes);
        if (v % 2 == 0) train.push_back(v);
    }
    auto model = HanetModel::initialize(ctx, features, hidden, classes, seed);
    // All-ones filters are a symmetric point; move off it.
    std::uniform_real_distribution<double> unit(0.5, 1.5);
    for (double& x : model.params.filter1.data()) x = unit(rng);
    for (double& x : model.params.filter2.data()) x = unit(rng);
    return gradient_check(f, labels, train, model, TrainOptions{}.l2, eps);
}

double accuracy(const FeatureMatrix& probs, std::span<const int> labels, std::span<const std::size_t> vertices) {
    if (vertices.empty()) return 0.0;
    std::size_t hit = 0;
    for (std::size_t v : vertices) {
        auto row = probs.row(v);
        const auto best = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
        if (best == labels[v]) ++hit;
    }
    return static_cast<double>(hit) / static_cast<double>(vertices.size());
}

TrainResult train_toy(const Graph& g, const FeatureMatrix& f_in, std::span<const int> labels,
                      std::span<const std::size_t> train, const TrainOptions& opts) {
    return train_toy(GraphContext::build(g, opts.min_top, opts.seed), f_in, labels, train, opts);
}

TrainResult train_toy(std::shared_ptr<const GraphContext> ctx, const FeatureMatrix& f_in,
                      std::span<const int> labels, std::span<const std::size_t> train, const TrainOptions& opts) {
    require(ctx != nullptr, "train_toy: null graph context");
    require(f_in.rows() == ctx->n(), "train_toy: feature rows must equal vertex count");
    require(labels.size() == ctx->n(), "train_toy: labels must have one entry per vertex");
    int max_label = -1;
    for (int y : labels) max_label = std::max(max_label, y);
    require(max_label >= 0, "train_toy: no labeled vertices");
    const auto classes = static_cast<std::size_t>(max_label) + 1;

    std::vector<bool> in_train(ctx->n(), false);
    for (std::size_t v : train) {
        require(v < ctx->n(), "train_toy: mask vertex out of range");
        in_train[v] = true;
    }
    std::vector<std::size_t> test;
    for (std::size_t v = 0; v < ctx->n(); ++v)
        if (labels[v] >= 0 && !in_train[v]) test.push_back(v);

    TrainResult result;
    result.model = HanetModel::initialize(ctx, f_in.cols(), opts.hidden, classes, opts.seed);
    HanetParams velocity = result.model.params;
    for (auto t : velocity.tensors()) std::fill(t.begin(), t.end(), 0.0);

    for (std::size_t epoch = 1; epoch <= opts.epochs; ++epoch) {
        const LossAndGradients lg = model_backward(f_in, labels, train, result.model, opts.l2);
        const FeatureMatrix probs = node_model_forward(f_in, result.model);
        result.history.push_back({epoch, lg.loss, accuracy(probs, labels, train), accuracy(probs, labels, test)});

        auto params = result.model.params.tensors();
        auto vel = velocity.tensors();
        const auto grads = lg.grad.tensors();
        for (std::size_t t = 0; t < params.size(); ++t)
            for (std::size_t i = 0; i < params[t].size(); ++i) {
                vel[t][i] = opts.momentum * vel[t][i] - opts.lr * grads[t][i];
                params[t][i] += vel[t][i];
            }
    }
    return result;
}

double regression_forward(const FeatureMatrix& f_in, const RegressionModel& model, const HaarBasis& basis,
                          const CoarseChain& chain, const CumulativeWeights& cw) {
    const Matrix out = conv_layer_forward(f_in, model.conv, basis, chain, cw);
    require(model.readout.size() == out.cols(), "regression: readout length must equal conv output width");
    double pred = model.bias;
    const double inv = 1.0 / static_cast<double>(out.rows());
    for (std::size_t i = 0; i < out.rows(); ++i) {
        auto row = out.row(i);
        for (std::size_t c = 0; c < row.size(); ++c) pred += model.readout[c] * row[c] * inv;
    }
    return pred;
}

RegressionGradients regression_backward(const FeatureMatrix& f_in, double target, const RegressionModel& model,
                                        const HaarBasis& basis, const CoarseChain& chain,
                                        const CumulativeWeights& cw) {
    const Matrix out = conv_layer_forward(f_in, model.conv, basis, chain, cw);
    require(model.readout.size() == out.cols(), "regression: readout length must equal conv output width");
    const double inv = 1.0 / static_cast<double>(out.rows());
    std::vector<double> mean(out.cols(), 0.0);
    for (std::size_t i = 0; i < out.rows(); ++i) {
        auto row = out.row(i);
        for (std::size_t c = 0; c < row.size(); ++c) mean[c] += row[c] * inv;
    }
    double pred = model.bias;
    for (std::size_t c = 0; c < mean.size(); ++c) pred += model.readout[c] * mean[c];

    RegressionGradients g;
    const double resid = pred - target;
    g.loss = resid * resid;
    const double dpred = 2.0 * resid;
    g.bias = dpred;
    g.readout.resize(mean.size());
    for (std::size_t c = 0; c < mean.size(); ++c) g.readout[c] = dpred * mean[c];
    Matrix dout(out.rows(), out.cols());
    for (std::size_t i = 0; i < out.rows(); ++i) {
        auto row = dout.row(i);
        for (std::size_t c = 0; c < row.size(); ++c) row[c] = dpred * model.readout[c] * inv;
    }
    auto lg = conv_layer_backward(f_in, dout, model.conv, basis, chain, cw);
    g.filter = std::move(lg.filter);
    g.compress = std::move(lg.compress);
    return g;
}

}  // namespace haarfht
