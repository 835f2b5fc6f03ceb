#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "haarfht/fht.hpp"
#include "haarfht/serialize.hpp"
#include "haarfht/synthetic.hpp"
#include "oracles.hpp"

using namespace haarfht;
namespace fs = std::filesystem;

namespace {

struct Sandbox {
    fs::path dir;
    Sandbox() {
        dir = fs::temp_directory_path() / ("haarfht_cli_" + std::to_string(::getpid()));
        fs::create_directories(dir);
    }
    ~Sandbox() {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }
    std::string operator()(const std::string& name) const { return (dir / name).string(); }
};

int run(const std::string& args) {
    const std::string cmd = std::string(HAARFHT_CLI) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string run_stdout(const std::string& args, const std::string& capture) {
    const std::string cmd = std::string(HAARFHT_CLI) + " " + args + " >" + capture + " 2>/dev/null";
    REQUIRE(std::system(cmd.c_str()) == 0);
    std::ifstream in(capture);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_graph(const std::string& path, const Graph& g) {
    std::ofstream out(path);
    out << "#n " << g.n() << '\n';
    for (const auto& e : g.edges()) out << e.u << ' ' << e.v << ' ' << e.w << '\n';
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("chain, basis and transform pipeline") {
    Sandbox sb;
    const Graph g = random_mixed_graph(60, 5);
    write_graph(sb("g.txt"), g);
    REQUIRE(run("chain --input " + sb("g.txt") + " --out " + sb("c.json")) == 0);
    REQUIRE(run("basis --chain " + sb("c.json") + " --input " + sb("g.txt") + " --out " + sb("b.json") + " --stats") == 0);

    std::mt19937_64 rng(1);
    const auto f = oracle::random_signal(60, rng);
    {
        auto out = open_output(sb("f.csv"));
        write_vector_csv(out, f);
    }
    const std::string common = " --basis " + sb("b.json") + " --chain " + sb("c.json") + " --vector " + sb("f.csv");
    REQUIRE(run("transform --mode adjoint --check-dense" + common + " --out " + sb("a.csv")) == 0);
    REQUIRE(run("transform --mode roundtrip --check-dense" + common + " --out " + sb("r.csv")) == 0);

    auto in = open_input(sb("a.csv"));
    const auto coeffs = read_vector_csv(in);
    const auto chain = build_chain(g, 1, 42);
    const auto basis = build_haar_basis(chain);
    CHECK(oracle::max_abs_diff(coeffs, adjoint_fht(f, basis, chain)) < 1e-12);
    auto rin = open_input(sb("r.csv"));
    CHECK(oracle::max_abs_diff(read_vector_csv(rin), f) < 1e-10);

    REQUIRE(run("conv --basis " + sb("b.json") + " --chain " + sb("c.json") + " --filter " + sb("f.csv") +
                " --signal " + sb("f.csv") + " --out " + sb("conv.csv")) == 0);
    auto cin = open_input(sb("conv.csv"));
    const CumulativeWeights cw(chain);
    CHECK(oracle::max_abs_diff(read_vector_csv(cin), haar_convolution(f, f, basis, chain, cw)) < 1e-12);
}

TEST_CASE("exit codes") {
    Sandbox sb;
    write_graph(sb("g.txt"), balanced_eight_graph());
    CHECK(run("chain --input " + sb("missing.txt") + " --out " + sb("c.json")) == 3);
    CHECK(run("chain --input " + sb("g.txt") + " --min-top 0 --out " + sb("c.json")) == 2);
    CHECK(run("chain --input " + sb("g.txt")) == 2);
    CHECK(run("bench eigen --sizes 3000 --out " + sb("e.csv")) == 2);
    {
        std::ofstream bad(sb("bad.txt"));
        bad << "0 1\n1 one\n";
    }
    CHECK(run("chain --input " + sb("bad.txt") + " --out " + sb("c.json")) == 2);

    REQUIRE(run("chain --input " + sb("g.txt") + " --out " + sb("c.json")) == 0);
    REQUIRE(run("basis --chain " + sb("c.json") + " --input " + sb("g.txt") + " --out " + sb("b.json")) == 0);
    {
        std::ofstream v(sb("short.csv"));
        v << "1\n2\n";
    }
    CHECK(run("transform --mode adjoint --basis " + sb("b.json") + " --chain " + sb("c.json") + " --vector " +
              sb("short.csv") + " --out " + sb("o.csv")) == 2);

    // A basis with one corrupted value still parses but fails the dense check.
    std::string text = slurp(sb("b.json"));
    const auto pos = text.find("0.70710678118654");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 3, "0.8");
    {
        std::ofstream out(sb("bad_basis.json"));
        out << text;
    }
    {
        std::ofstream v(sb("ones.csv"));
        for (int i = 0; i < 8; ++i) v << "1\n";
    }
    CHECK(run("transform --mode roundtrip --basis " + sb("bad_basis.json") + " --chain " + sb("c.json") +
              " --vector " + sb("ones.csv") + " --out " + sb("o.csv")) == 4);
}

TEST_CASE("repeated runs are byte-identical") {
    Sandbox sb;
    const auto inst = two_block_instance(12, 0.5, 0.05, 0.3, 9);
    write_graph(sb("g.txt"), inst.graph);
    {
        std::ofstream f(sb("x.csv"));
        for (std::size_t v = 0; v < inst.graph.n(); ++v) f << inst.features(v, 0) << ',' << inst.features(v, 1) << '\n';
        std::ofstream l(sb("y.csv"));
        l << "vertex_id,class_id\n";
        for (std::size_t v = 0; v < inst.graph.n(); ++v) l << v << ',' << inst.labels[v] << '\n';
        std::ofstream m(sb("mask.csv"));
        for (std::size_t v : inst.train) m << v << '\n';
    }
    for (int pass = 0; pass < 2; ++pass) {
        const std::string s = std::to_string(pass);
        REQUIRE(run("chain --input " + sb("g.txt") + " --out " + sb("c" + s + ".json")) == 0);
        REQUIRE(run("basis --chain " + sb("c0.json") + " --input " + sb("g.txt") + " --stats --out " +
                    sb("b" + s + ".json")) == 0);
        REQUIRE(run("nn train --input " + sb("g.txt") + " --features " + sb("x.csv") + " --labels " + sb("y.csv") +
                    " --mask " + sb("mask.csv") + " --epochs 20 --metrics " + sb("m" + s + ".csv")) == 0);
    }
    CHECK(slurp(sb("c0.json")) == slurp(sb("c1.json")));
    CHECK(slurp(sb("b0.json")) == slurp(sb("b1.json")));
    CHECK(slurp(sb("m0.csv")) == slurp(sb("m1.csv")));
    CHECK(run_stdout("sparsity --input " + sb("g.txt"), sb("s0.txt")) ==
          run_stdout("sparsity --input " + sb("g.txt"), sb("s1.txt")));
    CHECK(run_stdout("nn gradcheck --seed 3", sb("g0.txt")) == run_stdout("nn gradcheck --seed 3", sb("g1.txt")));
}

}
