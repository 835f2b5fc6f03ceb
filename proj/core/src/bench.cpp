#include "haarfht/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>

#include "haarfht/chain.hpp"
#include "haarfht/errors.hpp"
#include "haarfht/fht.hpp"
#include "haarfht/synthetic.hpp"

namespace haarfht {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt_double(double v) {
    std::ostringstream os;
    os << std::setprecision(10) << v;
    return os.str();
}

std::vector<double> random_signal(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> f(n);
    for (double& x : f) x = dist(rng);
    return f;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

void require_agreement(const std::vector<double>& a, const std::vector<double>& b, const std::string& what,
                       std::size_t n) {
    const double err = max_abs_diff(a, b);
    if (!(err <= 1e-10))
        throw NumericalCheckError(what + " disagrees with the fast transform at N=" + std::to_string(n) +
                                  " (max abs error " + fmt_double(err) + ")");
}

template <typename T>
void keep(const T& value) {
    // Stops the optimizer from discarding a timed computation.
    asm volatile("" : : "g"(&value) : "memory");
}

}  // namespace

EigenDecomposition jacobi_eigenbasis(const DenseSymMatrix& m, double tol, std::size_t max_sweeps) {
    const std::size_t n = m.order();
    if (n > kJacobiMaxOrder)
        throw ValidationError("jacobi_eigenbasis: order " + std::to_string(n) + " exceeds limit " +
                              std::to_string(kJacobiMaxOrder));
    if (!(tol > 0.0)) throw ValidationError("jacobi_eigenbasis: tol must be positive");
    double frob = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (m(i, j) != m(j, i)) throw ValidationError("jacobi_eigenbasis: matrix is not symmetric");
            frob += m(i, j) * m(i, j);
        }
    frob = std::sqrt(frob);

    EigenDecomposition out;
    out.values.assign(n, 0.0);
    out.vectors = Matrix::identity(n);
    if (n == 0 || frob == 0.0) return out;

    // One-sided form: rows of B = M + sigma*I and of V (initially I) receive the same rotations
    // until the rows of B are mutually orthogonal, at which point V^T M V is diagonal. The shift
    // keeps B positive definite so eigenvalues of opposite sign never share a row norm.
    const double sigma = 2.0 * frob;
    const std::size_t ld = n + 8;  // avoids power-of-two strides
    std::vector<double> b(n * ld, 0.0);
    std::vector<double> v(n * ld, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) b[i * ld + j] = m(i, j);
        b[i * ld + i] += sigma;
        v[i * ld + i] = 1.0;
    }
    auto row = [&](std::vector<double>& x, std::size_t i) { return x.data() + i * ld; };
    // Independent partial sums break the add dependency chain.
    auto dot = [n](const double* x, const double* y) {
        double acc[8] = {};
        std::size_t k = 0;
        for (; k + 8 <= n; k += 8)
            for (std::size_t r = 0; r < 8; ++r) acc[r] += x[k + r] * y[k + r];
        double s = ((acc[0] + acc[1]) + (acc[2] + acc[3])) + ((acc[4] + acc[5]) + (acc[6] + acc[7]));
        for (; k < n; ++k) s += x[k] * y[k];
        return s;
    };

    // Off-diagonal entries of V^T M V are about gamma / (d_p + d_q) with d >= frob, so this
    // rotation threshold lands well inside the requested bound.
    double rot_tol = tol / 4.0;
    const double target = tol * frob;
    constexpr std::size_t kBlock = 16;
    std::vector<double> norm2(n);

    auto off_diagonal_ok = [&] {
        double worst = 0.0;
        for (std::size_t i0 = 0; i0 < n; i0 += kBlock)
            for (std::size_t j0 = i0; j0 < n; j0 += kBlock)
                for (std::size_t i = i0; i < std::min(n, i0 + kBlock); ++i)
                    for (std::size_t j = std::max(j0, i + 1); j < std::min(n, j0 + kBlock); ++j)
                        worst = std::max(worst, std::abs(dot(row(v, i), row(b, j))));
        return worst < target;
    };

    while (true) {
        if (out.sweeps == max_sweeps)
            throw NumericalCheckError("jacobi_eigenbasis: no convergence after " + std::to_string(max_sweeps) +
                                      " sweeps");
        ++out.sweeps;
        for (std::size_t i = 0; i < n; ++i) norm2[i] = dot(row(b, i), row(b, i));
        std::size_t rotations = 0;
        // Block-cyclic order: every pair once per sweep, two blocks of rows resident at a time.
        for (std::size_t p0 = 0; p0 < n; p0 += kBlock) {
            for (std::size_t q0 = p0; q0 < n; q0 += kBlock) {
                for (std::size_t p = p0; p < std::min(n, p0 + kBlock); ++p) {
                    for (std::size_t q = std::max(q0, p + 1); q < std::min(n, q0 + kBlock); ++q) {
                        double* bp = row(b, p);
                        double* bq = row(b, q);
                        const double gamma = dot(bp, bq);
                        if (std::abs(gamma) <= rot_tol * std::sqrt(norm2[p] * norm2[q])) continue;
                        ++rotations;
                        const double zeta = (norm2[q] - norm2[p]) / (2.0 * gamma);
                        const double t =
                            (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                        const double c = 1.0 / std::sqrt(1.0 + t * t);
                        const double s = c * t;
                        double* vp = row(v, p);
                        double* vq = row(v, q);
                        for (std::size_t k = 0; k < n; ++k) {
                            const double x = bp[k];
                            const double y = bq[k];
                            bp[k] = c * x - s * y;
                            bq[k] = s * x + c * y;
                        }
                        for (std::size_t k = 0; k < n; ++k) {
                            const double x = vp[k];
                            const double y = vq[k];
                            vp[k] = c * x - s * y;
                            vq[k] = s * x + c * y;
                        }
                        norm2[p] -= t * gamma;
                        norm2[q] += t * gamma;
                    }
                }
            }
        }
        if (rotations == 0) {
            if (off_diagonal_ok()) break;
            rot_tol /= 16.0;
        }
    }

    std::vector<double> lambda(n);
    for (std::size_t i = 0; i < n; ++i) lambda[i] = dot(row(v, i), row(b, i)) - sigma;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return lambda[i] < lambda[j]; });
    for (std::size_t col = 0; col < n; ++col) {
        out.values[col] = lambda[order[col]];
        const double* vc = row(v, order[col]);
        for (std::size_t k = 0; k < n; ++k) out.vectors(k, col) = vc[k];
    }
    return out;
}

std::vector<double> direct_adjoint(std::span<const double> f, const HaarBasis& basis) {
    const std::size_t n = basis.n();
    if (f.size() != n) throw ValidationError("direct_adjoint: length mismatch");
    std::vector<double> dense(n, 0.0);
    std::vector<double> out(n);
    const auto& cols = basis.columns();
    for (std::size_t l = 0; l < n; ++l) {
        for (const auto& e : cols[l].entries) dense[e.index] = e.value;
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += dense[k] * f[k];
        out[l] = s;
        for (const auto& e : cols[l].entries) dense[e.index] = 0.0;
    }
    return out;
}

std::vector<double> direct_forward(std::span<const double> c, const HaarBasis& basis) {
    const std::size_t n = basis.n();
    if (c.size() != n) throw ValidationError("direct_forward: length mismatch");
    std::vector<double> dense(n, 0.0);
    std::vector<double> out(n, 0.0);
    const auto& cols = basis.columns();
    for (std::size_t l = 0; l < n; ++l) {
        for (const auto& e : cols[l].entries) dense[e.index] = e.value;
        const double cl = c[l];
        for (std::size_t k = 0; k < n; ++k) out[k] += cl * dense[k];
        for (const auto& e : cols[l].entries) dense[e.index] = 0.0;
    }
    return out;
}

void write_bench_csv(std::ostream& out, std::span<const BenchRecord> records) {
    out << "label,n,repeats,wall_time_s,extra\n";
    for (const auto& r : records) {
        out << r.label << ',' << r.n << ',' << r.repeats << ',' << std::setprecision(9) << r.wall_time_s << ',';
        bool first = true;
        for (const auto& [k, v] : r.extra) {
            if (!first) out << ';';
            out << k << '=' << v;
            first = false;
        }
        out << '\n';
    }
}

double time_median(const std::function<void()>& fn, std::size_t repeats, double min_batch_s,
                   std::optional<double> warm_call_s) {
    if (repeats == 0) throw ValidationError("time_median: repeats must be at least 1");
    // Warm-up doubles as calibration of the batch length.
    std::size_t iters = 1;
    while (!(warm_call_s && *warm_call_s >= min_batch_s)) {
        const auto t0 = Clock::now();
        for (std::size_t i = 0; i < iters; ++i) fn();
        const double dt = seconds_since(t0);
        if (dt >= min_batch_s || iters >= (std::size_t{1} << 24)) break;
        iters = dt <= 0.0 ? iters * 16 : std::max(iters * 2, static_cast<std::size_t>(1.2 * iters * min_batch_s / dt));
    }
    std::vector<double> samples;
    samples.reserve(repeats);
    for (std::size_t r = 0; r < repeats; ++r) {
        const auto t0 = Clock::now();
        for (std::size_t i = 0; i < iters; ++i) fn();
        samples.push_back(seconds_since(t0) / static_cast<double>(iters));
    }
    std::sort(samples.begin(), samples.end());
    const std::size_t mid = samples.size() / 2;
    return samples.size() % 2 ? samples[mid] : 0.5 * (samples[mid - 1] + samples[mid]);
}

std::optional<double> loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) return std::nullopt;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(y.size());
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(y[i]) - my);
    }
    if (sxx == 0.0) return std::nullopt;
    return sxy / sxx;
}

std::uint64_t instance_seed(std::uint64_t seed, std::size_t n) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(n)};
    std::uint32_t words[2];
    seq.generate(words, words + 2);
    return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

ScalingResult bench_scaling(std::span<const std::size_t> sizes, std::size_t repeats, std::uint64_t seed,
                            std::ostream* progress) {
    if (!std::is_sorted(sizes.begin(), sizes.end())) throw ValidationError("bench_scaling: sizes must be ascending");
    ScalingResult result;
    std::map<std::string, std::vector<double>> times;
    std::vector<double> ns;
    for (std::size_t n : sizes) {
        const std::uint64_t s = instance_seed(seed, n);
        const Graph g = random_regular_graph(n, 4, s);
        const CoarseChain chain = build_chain(g, 2, s);
        const HaarBasis basis = build_haar_basis(chain);
        const CumulativeWeights cw(chain);
        const std::vector<double> f = random_signal(n, s + 1);
        const std::vector<double> c = random_signal(n, s + 2);

        const auto fast_a = adjoint_fht(f, basis, chain);
        const auto fast_f = forward_fht(c, basis, chain, cw);
        require_agreement(dense_adjoint(f, basis), fast_a, "dense_adjoint", n);
        require_agreement(dense_forward(c, basis), fast_f, "dense_forward", n);
        require_agreement(direct_adjoint(f, basis), fast_a, "direct_adjoint", n);
        require_agreement(direct_forward(c, basis), fast_f, "direct_forward", n);

        std::map<std::string, std::function<void()>> runs{
            {"adjoint_fht", [&] { keep(adjoint_fht(f, basis, chain)); }},
            {"forward_fht", [&] { keep(forward_fht(c, basis, chain, cw)); }},
            {"dense_adjoint", [&] { keep(dense_adjoint(f, basis)); }},
            {"dense_forward", [&] { keep(dense_forward(c, basis)); }},
            {"direct_adjoint", [&] { keep(direct_adjoint(f, basis)); }},
            {"direct_forward", [&] { keep(direct_forward(c, basis)); }},
        };
        ns.push_back(static_cast<double>(n));
        for (const auto& label : kScalingMethods) {
            const double t = time_median(runs.at(label), repeats);
            times[label].push_back(t);
            BenchRecord rec{label, n, repeats, t, {}};
            rec.extra["nnz"] = std::to_string(basis.nnz());
            rec.extra["sparsity"] = fmt_double(sparsity(basis));
            rec.extra["levels"] = std::to_string(chain.num_levels());
            result.records.push_back(std::move(rec));
        }
        if (progress) *progress << "bench scaling: N=" << n << " done\n";
    }
    for (const auto& label : kScalingMethods) {
        if (auto slope = loglog_slope(ns, times[label])) {
            result.slopes[label] = *slope;
            BenchRecord rec{"slope:" + label, sizes.size(), repeats, 0.0, {}};
            rec.extra["slope"] = fmt_double(*slope);
            result.records.push_back(std::move(rec));
        }
    }
    return result;
}

std::vector<BenchRecord> bench_basis_vs_eigen(std::span<const std::size_t> sizes, std::size_t repeats,
                                              std::uint64_t seed, std::ostream* progress) {
    std::vector<BenchRecord> records;
    for (std::size_t n : sizes) {
        if (n > 2000) throw ValidationError("bench eigen: sizes must be at most 2000");
        if (n == 0) throw ValidationError("bench eigen: sizes must be positive");
        const std::uint64_t s = instance_seed(seed, n);
        const Graph g = random_regular_graph(n, 4, s);

        // Correctness first: Haar round trip and one Jacobi eigenpair residual.
        const CoarseChain chain = build_chain(g, 2, s);
        const HaarBasis basis = build_haar_basis(chain);
        const CumulativeWeights cw(chain);
        const auto f = random_signal(n, s + 1);
        require_agreement(forward_fht(adjoint_fht(f, basis, chain), basis, chain, cw), f, "Haar round trip", n);
        const DenseSymMatrix L = laplacian(g, false);
        const auto t_check = Clock::now();
        const EigenDecomposition eig = jacobi_eigenbasis(L, 1e-10);
        const double check_s = seconds_since(t_check);
        {
            const auto u = eig.vectors.column(0);
            const auto lu = L.apply(u);
            double r = 0.0;
            for (std::size_t k = 0; k < n; ++k) r = std::max(r, std::abs(lu[k] - eig.values[0] * u[k]));
            if (!(r <= 1e-6 * std::max(1.0, eig.values.back())))
                throw NumericalCheckError("Jacobi eigenpair residual too large at N=" + std::to_string(n));
        }

        const double haar_t = time_median(
            [&] {
                const CoarseChain c2 = build_chain(g, 2, s);
                keep(build_haar_basis(c2));
            },
            repeats);
        // The checked run above is the discarded warm-up.
        const double eig_t =
            time_median([&] { keep(jacobi_eigenbasis(laplacian(g, false), 1e-10)); }, repeats, 2e-3, check_s);

        BenchRecord h{"haar_basis", n, repeats, haar_t, {}};
        h.extra["nnz"] = std::to_string(basis.nnz());
        h.extra["levels"] = std::to_string(chain.num_levels());
        BenchRecord e{"jacobi_eigenbasis", n, repeats, eig_t, {}};
        e.extra["sweeps"] = std::to_string(eig.sweeps);
        records.push_back(std::move(h));
        records.push_back(std::move(e));
        if (progress) *progress << "bench eigen: N=" << n << " done\n";
    }
    return records;
}

SparsityReport report_sparsity(const Graph& g, std::size_t min_top, std::uint64_t seed) {
    SparsityReport r;
    const auto t0 = Clock::now();
    const CoarseChain chain = build_chain(g, min_top, seed);
    const HaarBasis basis = build_haar_basis(chain);
    r.generation_s = seconds_since(t0);
    const CumulativeWeights cw(chain);
    r.n = g.n();
    r.sparsity = sparsity(basis);
    r.nnz = basis.nnz();
    r.level_sizes = chain.sizes();
    r.filtration = validate_filtration(chain).is_filtration;
    const auto f = random_signal(g.n(), seed);
    const auto coeffs = adjoint_fht(f, basis, chain);
    require_agreement(dense_adjoint(f, basis), coeffs, "dense_adjoint", g.n());
    r.adjoint_s = time_median([&] { keep(adjoint_fht(f, basis, chain)); }, 5);
    r.forward_s = time_median([&] { keep(forward_fht(coeffs, basis, chain, cw)); }, 5);
    return r;
}

void print_sparsity(std::ostream& out, const SparsityReport& r) {
    out << "N: " << r.n << '\n';
    out << "sparsity: " << std::setprecision(6) << std::fixed << r.sparsity << '\n';
    out.unsetf(std::ios::floatfield);
    out << "nnz: " << r.nnz << '\n';
    out << "levels: " << r.level_sizes.size() << '\n';
    out << "level_sizes:";
    for (auto it = r.level_sizes.rbegin(); it != r.level_sizes.rend(); ++it) out << ' ' << *it;
    out << '\n';
    out << "filtration: " << (r.filtration ? "yes" : "no") << '\n';
}

void print_sparsity_timings(std::ostream& out, const SparsityReport& r) {
    out << std::setprecision(6) << "generation_s: " << r.generation_s << '\n'
        << "adjoint_fht_s: " << r.adjoint_s << '\n'
        << "forward_fht_s: " << r.forward_s << '\n';
}

}  // namespace haarfht
