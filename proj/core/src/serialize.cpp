#include "haarfht/serialize.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include <json.hpp>

#include "haarfht/errors.hpp"

namespace haarfht {

namespace {

using nlohmann::json;

json parse_json(std::istream& in) {
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
}

template <typename T>
T get_field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("field '") + key + "': " + e.what());
    }
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view s, std::size_t line) {
    T v{};
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end)
        throw ParseError("line " + std::to_string(line) + ": '" + std::string(s) + "' is not a number");
    return v;
}

}  // namespace

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

void write_chain_json(std::ostream& out, const CoarseChain& chain) {
    json levels = json::array();
    for (int j = chain.j0(); j <= chain.j_max(); ++j) {
        levels.push_back({{"n", chain.size(j)}, {"parent", chain.level(j).parent}});
    }
    json doc{{"levels", levels}, {"J0", chain.j0()}, {"J", chain.j_max()}};
    out << doc.dump() << '\n';
}

CoarseChain read_chain_json(std::istream& in, const Graph* finest) {
    const json doc = parse_json(in);
    const int j0 = get_field<int>(doc, "J0");
    const int jmax = get_field<int>(doc, "J");
    if (!doc.contains("levels")) throw ParseError("missing field 'levels'");
    const json& levels = doc.at("levels");
    if (!levels.is_array() || levels.empty()) throw ParseError("'levels' must be a non-empty array");
    if (jmax - j0 + 1 != static_cast<int>(levels.size()))
        throw ValidationError("J - J0 + 1 does not match the number of levels");
    std::vector<std::size_t> sizes;
    std::vector<std::vector<std::size_t>> parents;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        sizes.push_back(get_field<std::size_t>(levels[i], "n"));
        auto p = levels[i].contains("parent") ? get_field<std::vector<std::size_t>>(levels[i], "parent")
                                              : std::vector<std::size_t>{};
        if (i == 0) {
            if (!p.empty()) throw ValidationError("coarsest level must not have a parent map");
        } else {
            parents.push_back(std::move(p));
        }
    }
    return CoarseChain(std::move(sizes), std::move(parents), finest, j0);
}

void write_basis_json(std::ostream& out, const HaarBasis& basis, bool with_stats) {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "{\"n\":" << basis.n() << ",\"bands\":[";
    const auto& bands = basis.band_offsets();
    for (std::size_t i = 0; i < bands.size(); ++i) os << (i ? "," : "") << bands[i];
    os << "],\"columns\":[";
    const auto& cols = basis.columns();
    for (std::size_t l = 0; l < cols.size(); ++l) {
        os << (l ? "," : "") << "{\"band\":" << cols[l].band << ",\"entries\":[";
        for (std::size_t e = 0; e < cols[l].entries.size(); ++e)
            os << (e ? "," : "") << '[' << cols[l].entries[e].index << ',' << cols[l].entries[e].value << ']';
        os << "]}";
    }
    os << ']';
    if (with_stats) os << ",\"stats\":{\"sparsity\":" << sparsity(basis) << ",\"nnz\":" << basis.nnz() << '}';
    os << "}\n";
    out << os.str();
}

HaarBasis read_basis_json(std::istream& in, const CoarseChain& chain) {
    const json doc = parse_json(in);
    const auto n = get_field<std::size_t>(doc, "n");
    const auto bands = get_field<std::vector<std::size_t>>(doc, "bands");
    if (n != chain.n() || bands != chain.sizes())
        throw ValidationError("basis/chain mismatch: basis bands do not match chain level sizes");
    if (!doc.contains("columns") || !doc.at("columns").is_array()) throw ParseError("missing array 'columns'");
    std::vector<SparseColumn> cols;
    cols.reserve(n);
    for (const json& c : doc.at("columns")) {
        SparseColumn col;
        col.band = get_field<int>(c, "band");
        const auto entries = get_field<std::vector<std::pair<std::size_t, double>>>(c, "entries");
        col.entries.reserve(entries.size());
        for (const auto& [idx, val] : entries) {
            if (!col.entries.empty() && idx <= col.entries.back().index)
                throw ValidationError("basis column entries must have strictly increasing indices");
            col.entries.push_back({idx, val});
        }
        cols.push_back(std::move(col));
    }
    return restore_haar_basis(std::move(cols), chain);
}

void write_vector_csv(std::ostream& out, std::span<const double> values) {
    std::ostringstream os;
    os << std::setprecision(17);
    for (double v : values) os << v << '\n';
    out << os.str();
}

std::vector<double> read_vector_csv(std::istream& in) {
    std::vector<double> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto body = trim(line);
        if (body.empty()) continue;
        if (body.find(',') != std::string_view::npos)
            throw ParseError("line " + std::to_string(lineno) + ": expected a single column");
        const double v = parse_number<double>(body, lineno);
        if (!std::isfinite(v)) throw ParseError("line " + std::to_string(lineno) + ": value is not finite");
        out.push_back(v);
    }
    return out;
}

void write_matrix_csv(std::ostream& out, const Matrix& m) {
    std::ostringstream os;
    os << std::setprecision(17);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto r = m.row(i);
        for (std::size_t j = 0; j < r.size(); ++j) os << (j ? "," : "") << r[j];
        os << '\n';
    }
    out << os.str();
}

std::vector<int> read_labels_csv(std::istream& in, std::size_t n) {
    std::vector<int> labels(n, -1);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        const auto comma = body.find(',');
        if (comma == std::string_view::npos) throw ParseError("line " + std::to_string(lineno) + ": expected 'vertex_id,class_id'");
        const auto first = trim(body.substr(0, comma));
        if (lineno == 1 && first == "vertex_id") continue;
        const auto v = parse_number<std::size_t>(first, lineno);
        const auto c = parse_number<int>(trim(body.substr(comma + 1)), lineno);
        if (v >= n) throw ValidationError("line " + std::to_string(lineno) + ": vertex " + std::to_string(v) + " out of range");
        if (c < 0) throw ValidationError("line " + std::to_string(lineno) + ": class id must be non-negative");
        labels[v] = c;
    }
    return labels;
}

std::vector<std::size_t> read_mask_csv(std::istream& in, std::size_t n) {
    std::vector<std::size_t> ids;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        std::size_t start = 0;
        while (start <= body.size()) {
            const auto comma = body.find(',', start);
            const auto field = trim(body.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
            if (!field.empty()) {
                const auto v = parse_number<std::size_t>(field, lineno);
                if (v >= n) throw ValidationError("line " + std::to_string(lineno) + ": vertex " + std::to_string(v) + " out of range");
                ids.push_back(v);
            }
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
    }
    return ids;
}

void write_metrics_csv(std::ostream& out, std::span<const EpochMetrics> history) {
    std::ostringstream os;
    os << "epoch,loss,train_acc,test_acc\n" << std::setprecision(17);
    for (const auto& m : history) os << m.epoch << ',' << m.loss << ',' << m.train_acc << ',' << m.test_acc << '\n';
    out << os.str();
}

}  // namespace haarfht
