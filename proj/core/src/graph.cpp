#include "haarfht/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>

#include "haarfht/errors.hpp"

namespace haarfht {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

bool parse_size(std::string_view s, std::size_t& out) {
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

bool parse_double(std::string_view s, double& out) {
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

std::ifstream open_for_read(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    return in;
}

}  // namespace

Graph::Graph(std::size_t n, std::span<const Edge> edges) : n_(n) {
    std::map<std::pair<std::size_t, std::size_t>, double> merged;
    for (const Edge& e : edges) {
        if (e.u >= n || e.v >= n)
            throw ValidationError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                  ") out of range for n=" + std::to_string(n));
        if (e.u == e.v) throw ValidationError("self-loop at vertex " + std::to_string(e.u));
        if (!(e.w > 0.0) || !std::isfinite(e.w))
            throw ValidationError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                  ") has non-positive weight");
        merged[std::minmax(e.u, e.v)] += e.w;
    }
    edges_.reserve(merged.size());
    for (const auto& [key, w] : merged) edges_.push_back({key.first, key.second, w});

    std::vector<std::size_t> deg(n, 0);
    for (const Edge& e : edges_) {
        ++deg[e.u];
        ++deg[e.v];
    }
    offsets_.assign(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + deg[v];
    neighbors_.resize(offsets_[n]);
    weights_.resize(offsets_[n]);
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    // edges_ is sorted by (u, v), so each adjacency row comes out sorted by neighbour id.
    for (const Edge& e : edges_) {
        neighbors_[fill[e.u]] = e.v;
        weights_[fill[e.u]++] = e.w;
    }
    for (const Edge& e : edges_) {
        neighbors_[fill[e.v]] = e.u;
        weights_[fill[e.v]++] = e.w;
    }
    for (std::size_t v = 0; v < n; ++v) {
        const auto b = offsets_[v];
        const auto e = offsets_[v + 1];
        std::vector<std::pair<std::size_t, double>> row;
        row.reserve(e - b);
        for (auto i = b; i < e; ++i) row.emplace_back(neighbors_[i], weights_[i]);
        std::sort(row.begin(), row.end());
        for (auto i = b; i < e; ++i) {
            neighbors_[i] = row[i - b].first;
            weights_[i] = row[i - b].second;
        }
    }
}

Graph parse_edge_list(std::istream& in) {
    std::vector<Edge> edges;
    std::size_t max_id = 0;
    bool any = false;
    bool have_header = false;
    std::size_t header_n = 0;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view body = trim(line);
        if (body.empty()) continue;
        if (body.front() == '#') {
            auto fields = split_ws(body.substr(1));
            if (fields.size() == 2 && fields[0] == "n") {
                if (!parse_size(fields[1], header_n))
                    throw ParseError("line " + std::to_string(lineno) + ": bad '#n' header");
                have_header = true;
            }
            continue;
        }
        auto fields = split_ws(body);
        if (fields.size() < 2 || fields.size() > 3)
            throw ParseError("line " + std::to_string(lineno) + ": expected 'u v [w]'");
        Edge e;
        if (!parse_size(fields[0], e.u) || !parse_size(fields[1], e.v))
            throw ParseError("line " + std::to_string(lineno) + ": vertex ids must be non-negative integers");
        if (fields.size() == 3 && !parse_double(fields[2], e.w))
            throw ParseError("line " + std::to_string(lineno) + ": weight is not a number");
        if (e.u == e.v)
            throw ValidationError("line " + std::to_string(lineno) + ": self-loop at vertex " +
                                  std::to_string(e.u));
        if (!(e.w > 0.0) || !std::isfinite(e.w))
            throw ValidationError("line " + std::to_string(lineno) + ": weight must be positive");
        max_id = std::max({max_id, e.u, e.v});
        any = true;
        edges.push_back(e);
    }
    std::size_t n = any ? max_id + 1 : 0;
    if (have_header) {
        if (any && header_n <= max_id)
            throw ValidationError("'#n " + std::to_string(header_n) + "' is smaller than max vertex id + 1");
        n = header_n;
    }
    return Graph(n, edges);
}

Graph load_edge_list(const std::filesystem::path& path) {
    auto in = open_for_read(path);
    return parse_edge_list(in);
}

FeatureMatrix parse_matrix_csv(std::istream& in) {
    std::vector<double> values;
    std::size_t cols = 0;
    std::size_t rows = 0;
    std::string line;
    while (std::getline(in, line)) {
        std::string_view body = trim(line);
        if (body.empty()) continue;
        ++rows;
        std::size_t col = 0;
        std::size_t start = 0;
        while (true) {
            const auto comma = body.find(',', start);
            const auto field = trim(body.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                                        : comma - start));
            double v = 0.0;
            if (!parse_double(field, v) || !std::isfinite(v))
                throw ParseError("row " + std::to_string(rows) + ", col " + std::to_string(col + 1) +
                                 ": not a finite number");
            values.push_back(v);
            ++col;
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (rows == 1) {
            cols = col;
        } else if (col != cols) {
            throw ParseError("row " + std::to_string(rows) + ": expected " + std::to_string(cols) +
                             " fields, found " + std::to_string(col));
        }
    }
    if (rows == 0) throw ParseError("empty matrix");
    FeatureMatrix m(rows, cols);
    std::copy(values.begin(), values.end(), m.data().begin());
    return m;
}

FeatureMatrix load_matrix_csv(const std::filesystem::path& path) {
    auto in = open_for_read(path);
    return parse_matrix_csv(in);
}

DenseSymMatrix laplacian(const Graph& g, bool normalized) {
    const std::size_t n = g.n();
    if (n == 0) throw ValidationError("laplacian: empty graph");
    DenseSymMatrix L(n);
    std::vector<double> deg(n, 0.0);
    for (const Edge& e : g.edges()) {
        deg[e.u] += e.w;
        deg[e.v] += e.w;
    }
    if (!normalized) {
        for (std::size_t v = 0; v < n; ++v) L.set(v, v, deg[v]);
        for (const Edge& e : g.edges()) L.set(e.u, e.v, -e.w);
        return L;
    }
    for (std::size_t v = 0; v < n; ++v) L.set(v, v, 1.0);
    for (const Edge& e : g.edges()) L.set(e.u, e.v, -e.w / std::sqrt(deg[e.u] * deg[e.v]));
    return L;
}

DenseSymMatrix smoothing_matrix(const Graph& g) {
    const std::size_t n = g.n();
    if (n == 0) throw ValidationError("smoothing_matrix: empty graph");
    std::vector<double> deg(n, 1.0);
    for (const Edge& e : g.edges()) {
        deg[e.u] += e.w;
        deg[e.v] += e.w;
    }
    DenseSymMatrix A(n);
    for (std::size_t v = 0; v < n; ++v) A.set(v, v, 1.0 / deg[v]);
    for (const Edge& e : g.edges()) A.set(e.u, e.v, e.w / std::sqrt(deg[e.u] * deg[e.v]));
    return A;
}

}  // namespace haarfht
