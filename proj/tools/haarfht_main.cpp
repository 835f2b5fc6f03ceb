#include <algorithm>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "haarfht/bench.hpp"
#include "haarfht/chain.hpp"
#include "haarfht/errors.hpp"
#include "haarfht/fht.hpp"
#include "haarfht/graph.hpp"
#include "haarfht/haar_basis.hpp"
#include "haarfht/hanet.hpp"
#include "haarfht/serialize.hpp"
#include "haarfht/synthetic.hpp"

using namespace haarfht;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumerical = 4;

constexpr double kCheckTol = 1e-10;

std::vector<double> load_vector(const std::string& path) {
    auto in = open_input(path);
    return read_vector_csv(in);
}

void save_vector(const std::string& path, const std::vector<double>& v) {
    auto out = open_output(path);
    write_vector_csv(out, v);
}

double max_abs(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

void check_length(const std::vector<double>& v, std::size_t n, const std::string& what) {
    if (v.size() != n)
        throw ValidationError(what + " has " + std::to_string(v.size()) + " entries, basis has " + std::to_string(n));
}

struct Loaded {
    CoarseChain chain;
    HaarBasis basis;
};

Loaded load_chain_and_basis(const std::string& chain_path, const std::string& basis_path) {
    auto cin = open_input(chain_path);
    auto chain = read_chain_json(cin);
    auto bin = open_input(basis_path);
    auto basis = read_basis_json(bin, chain);
    return {std::move(chain), std::move(basis)};
}

void require(double err, const std::string& what) {
    if (!(err <= kCheckTol)) {
        std::ostringstream os;
        os << what << " max abs error " << std::setprecision(6) << err << " exceeds " << kCheckTol;
        throw NumericalCheckError(os.str());
    }
}

std::vector<std::size_t> parse_sizes(const std::string& list) {
    std::vector<std::size_t> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t pos = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(item, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != item.size() || v == 0) throw ValidationError("invalid size '" + item + "' in --sizes");
        out.push_back(static_cast<std::size_t>(v));
    }
    if (out.empty()) throw ValidationError("--sizes is empty");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Haar graph bases, fast Haar transforms and Haar graph networks"};
    app.require_subcommand(1);

    // chain
    std::string input, out_path;
    std::size_t min_top = 1;
    std::uint64_t seed = 42;
    auto* chain_cmd = app.add_subcommand("chain", "Build a coarse-grained chain from an edge list");
    chain_cmd->add_option("--input", input, "Edge list")->required();
    chain_cmd->add_option("--min-top", min_top, "Stop once a level has at most this many vertices");
    chain_cmd->add_option("--seed", seed);
    chain_cmd->add_option("--out", out_path, "Chain JSON")->required();

    // basis
    std::string chain_path, basis_path;
    bool stats = false;
    auto* basis_cmd = app.add_subcommand("basis", "Generate the Haar basis for a chain");
    basis_cmd->add_option("--chain", chain_path)->required();
    basis_cmd->add_option("--input", input, "Edge list the chain was built from")->required();
    basis_cmd->add_option("--out", out_path)->required();
    basis_cmd->add_flag("--stats", stats, "Include sparsity and nnz");

    // transform
    std::string mode, vector_path;
    bool check_dense = false;
    auto* transform_cmd = app.add_subcommand("transform", "Apply the fast Haar transform");
    transform_cmd->add_option("--mode", mode)->required()->check(CLI::IsMember({"adjoint", "forward", "roundtrip"}));
    transform_cmd->add_option("--basis", basis_path)->required();
    transform_cmd->add_option("--chain", chain_path)->required();
    transform_cmd->add_option("--vector", vector_path)->required();
    transform_cmd->add_option("--out", out_path)->required();
    transform_cmd->add_flag("--check-dense", check_dense, "Compare against the dense product");

    // conv
    std::string filter_path, signal_path;
    bool frequency_domain = false;
    auto* conv_cmd = app.add_subcommand("conv", "Haar convolution of a signal with a filter");
    conv_cmd->add_option("--basis", basis_path)->required();
    conv_cmd->add_option("--chain", chain_path)->required();
    conv_cmd->add_option("--filter", filter_path)->required();
    conv_cmd->add_option("--signal", signal_path)->required();
    conv_cmd->add_option("--out", out_path)->required();
    conv_cmd->add_flag("--frequency-domain", frequency_domain, "Filter is given as Haar coefficients");

    // bench
    std::string sizes;
    std::size_t repeats = 5;
    auto* bench_cmd = app.add_subcommand("bench", "Timing experiments");
    bench_cmd->require_subcommand(1);
    auto* scaling_cmd = bench_cmd->add_subcommand("scaling", "Transform cost against N");
    scaling_cmd->add_option("--sizes", sizes)->required();
    scaling_cmd->add_option("--repeats", repeats)->check(CLI::PositiveNumber);
    scaling_cmd->add_option("--seed", seed);
    scaling_cmd->add_option("--out", out_path)->required();
    auto* eigen_cmd = bench_cmd->add_subcommand("eigen", "Haar basis generation against a Jacobi eigenbasis");
    eigen_cmd->add_option("--sizes", sizes)->required();
    eigen_cmd->add_option("--repeats", repeats)->check(CLI::PositiveNumber);
    eigen_cmd->add_option("--seed", seed);
    eigen_cmd->add_option("--out", out_path)->required();

    // sparsity
    auto* sparsity_cmd = app.add_subcommand("sparsity", "Basis sparsity report for a graph");
    sparsity_cmd->add_option("--input", input)->required();
    sparsity_cmd->add_option("--min-top", min_top);
    sparsity_cmd->add_option("--seed", seed);

    // nn
    std::size_t n = 16, features = 4, classes = 3, epochs = 200, hidden = 16;
    double eps = 1e-6, lr = 0.01;
    std::string features_path, labels_path, mask_path, metrics_path;
    auto* nn_cmd = app.add_subcommand("nn", "Haar graph network");
    nn_cmd->require_subcommand(1);
    auto* grad_cmd = nn_cmd->add_subcommand("gradcheck", "Finite-difference check of all parameter gradients");
    grad_cmd->add_option("--n", n)->check(CLI::Range(std::size_t{2}, std::size_t{4096}));
    grad_cmd->add_option("--features", features)->check(CLI::PositiveNumber);
    grad_cmd->add_option("--classes", classes)->check(CLI::Range(std::size_t{2}, std::size_t{1024}));
    grad_cmd->add_option("--seed", seed);
    grad_cmd->add_option("--eps", eps)->check(CLI::PositiveNumber);
    auto* train_cmd = nn_cmd->add_subcommand("train", "Train a node classifier");
    train_cmd->add_option("--input", input)->required();
    train_cmd->add_option("--features", features_path)->required();
    train_cmd->add_option("--labels", labels_path)->required();
    train_cmd->add_option("--mask", mask_path, "Training vertex ids")->required();
    train_cmd->add_option("--epochs", epochs);
    train_cmd->add_option("--lr", lr);
    train_cmd->add_option("--hidden", hidden)->check(CLI::PositiveNumber);
    train_cmd->add_option("--seed", seed);
    train_cmd->add_option("--metrics", metrics_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitValidation;
    }

    try {
        if (*chain_cmd) {
            const Graph g = load_edge_list(input);
            const CoarseChain chain = build_chain(g, min_top, seed);
            auto out = open_output(out_path);
            write_chain_json(out, chain);
        } else if (*basis_cmd) {
            const Graph g = load_edge_list(input);
            auto cin = open_input(chain_path);
            const CoarseChain chain = read_chain_json(cin, &g);
            const HaarBasis basis = build_haar_basis(chain);
            auto out = open_output(out_path);
            write_basis_json(out, basis, stats);
        } else if (*transform_cmd) {
            const auto [chain, basis] = load_chain_and_basis(chain_path, basis_path);
            const auto v = load_vector(vector_path);
            check_length(v, basis.n(), "--vector");
            const CumulativeWeights cw(chain);
            std::vector<double> result;
            if (mode == "adjoint") {
                result = adjoint_fht(v, basis, chain);
                if (check_dense) require(max_abs(result, dense_adjoint(v, basis)), "adjoint vs dense");
            } else if (mode == "forward") {
                result = forward_fht(v, basis, chain, cw);
                if (check_dense) require(max_abs(result, dense_forward(v, basis)), "forward vs dense");
            } else {
                const auto c = adjoint_fht(v, basis, chain);
                result = forward_fht(c, basis, chain, cw);
                if (check_dense) {
                    require(max_abs(c, dense_adjoint(v, basis)), "adjoint vs dense");
                    require(max_abs(result, dense_forward(c, basis)), "forward vs dense");
                }
                require(max_abs(result, v), "roundtrip reconstruction");
            }
            save_vector(out_path, result);
        } else if (*conv_cmd) {
            const auto [chain, basis] = load_chain_and_basis(chain_path, basis_path);
            const auto filter = load_vector(filter_path);
            const auto signal = load_vector(signal_path);
            check_length(filter, basis.n(), "--filter");
            check_length(signal, basis.n(), "--signal");
            const CumulativeWeights cw(chain);
            save_vector(out_path, frequency_domain ? spectral_filter_apply(filter, signal, basis, chain, cw)
                                                   : haar_convolution(filter, signal, basis, chain, cw));
        } else if (*scaling_cmd) {
            const auto list = parse_sizes(sizes);
            const auto result = bench_scaling(list, repeats, seed, &std::cerr);
            auto out = open_output(out_path);
            write_bench_csv(out, result.records);
            for (const auto& [label, slope] : result.slopes)
                std::cout << "slope " << label << ' ' << std::setprecision(4) << slope << '\n';
        } else if (*eigen_cmd) {
            const auto list = parse_sizes(sizes);
            const auto records = bench_basis_vs_eigen(list, repeats, seed, &std::cerr);
            auto out = open_output(out_path);
            write_bench_csv(out, records);
        } else if (*sparsity_cmd) {
            const Graph g = load_edge_list(input);
            const auto report = report_sparsity(g, min_top, seed);
            print_sparsity(std::cout, report);
            print_sparsity_timings(std::cerr, report);
        } else if (*grad_cmd) {
            const auto res = random_gradient_check(n, features, classes, 16, seed, eps);
            const char* names[] = {"filter1", "weight1", "filter2", "weight2"};
            std::cout << std::scientific << std::setprecision(3);
            for (std::size_t t = 0; t < res.max_rel_error.size(); ++t)
                std::cout << names[t] << " max_rel_error " << res.max_rel_error[t] << '\n';
            std::cout << "worst " << res.worst() << '\n';
            if (!(res.worst() <= 1e-5)) throw NumericalCheckError("gradient check exceeds 1e-05");
        } else if (*train_cmd) {
            const Graph g = load_edge_list(input);
            const FeatureMatrix f = load_matrix_csv(features_path);
            if (f.rows() != g.n())
                throw ValidationError("features have " + std::to_string(f.rows()) + " rows, graph has " +
                                      std::to_string(g.n()) + " vertices");
            auto lin = open_input(labels_path);
            const auto labels = read_labels_csv(lin, g.n());
            auto min = open_input(mask_path);
            const auto train = read_mask_csv(min, g.n());
            TrainOptions opts;
            opts.epochs = epochs;
            opts.lr = lr;
            opts.hidden = hidden;
            opts.seed = seed;
            const auto result = train_toy(g, f, labels, train, opts);
            auto out = open_output(metrics_path);
            write_metrics_csv(out, result.history);
            if (!result.history.empty()) {
                const auto& last = result.history.back();
                std::cout << std::setprecision(6) << "epochs " << last.epoch << " loss " << last.loss
                          << " train_acc " << last.train_acc << " test_acc " << last.test_acc << '\n';
            }
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const NumericalCheckError& e) {
        std::cerr << "numerical check failed: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    return 0;
}
