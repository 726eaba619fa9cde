#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>

#include "scatterwave/csv_io.hpp"

using namespace scatterwave;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("scatterwave_io_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    fs::path write(const std::string& name, const std::string& text) const {
        auto p = path / name;
        std::ofstream(p) << text;
        return p;
    }
};

}  // namespace

TEST_CASE("doubles survive a text round trip", "[io]") {
    std::mt19937_64 gen(6);
    for (int i = 0; i < 10000; ++i) {
        std::uint64_t bits = gen();
        double v;
        std::memcpy(&v, &bits, sizeof v);
        if (!std::isfinite(v)) continue;
        REQUIRE(io::parse_double(io::format_double(v), "rt") == v);
    }
    CHECK(io::format_double(0.1) == "0.10000000000000001");
    CHECK(io::parse_double(" +2.5\r", "ctx") == 2.5);
    CHECK_THROWS_AS(io::parse_double("1,5", "ctx"), IoError);
    CHECK_THROWS_AS(io::parse_double("", "ctx"), IoError);
}

TEST_CASE("medium file", "[io][medium]") {
    TempDir dir;
    auto p = dir.write("m.csv", "x,zeta\n0,1\n2,3\n5,0.5\n");
    Medium m = io::read_medium_file(p);
    CHECK(m(-1.0) == 1.0);
    CHECK(m(1.999) == 1.0);
    CHECK(m(2.0) == 3.0);
    CHECK(m(4.9) == 3.0);
    CHECK(m(5.0) == 0.5);
    CHECK(m(100.0) == 0.5);

    CHECK_THROWS_AS(io::read_medium_file(dir.write("h.csv", "pos,zeta\n0,1\n")), IoError);
    CHECK_THROWS_AS(io::read_medium_file(dir.write("u.csv", "x,zeta\n2,1\n0,3\n")), IoError);
    CHECK_THROWS_AS(io::read_medium_file(dir.write("c.csv", "x,zeta\n0,1,2\n")), IoError);
    try {
        io::read_medium_file(dir.path / "missing.csv");
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("missing.csv"));
    }
}

TEST_CASE("data files", "[io][data]") {
    TempDir dir;
    SECTION("regular") {
        auto d = io::read_data_file(dir.write("r.csv", "x,alpha,beta\n0,0,2\n1,1,4\n"));
        CHECK(d.kind == io::FileData::Kind::regular);
        CHECK(d.regular.alpha(0.5) == 0.5);
        CHECK(d.regular.beta(0.25) == 2.5);
        CHECK(d.regular.alpha(-0.1) == 0.0);
        CHECK(d.regular.beta(1.1) == 0.0);
    }
    SECTION("cauchy") {
        auto d = io::read_data_file(dir.write("c.csv", "x,f,g\n0,1,0\n1,1,0\n"));
        CHECK(d.kind == io::FileData::Kind::cauchy);
        CHECK(d.regular.alpha(0.3) == 1.0);
    }
    SECTION("comb") {
        auto d = io::read_data_file(dir.write("d.csv", "offset,c,d\n3,1,0\n-2,0,0.5\n3,0.5,0\n"));
        CHECK(d.kind == io::FileData::Kind::comb);
        CHECK(d.comb.c.at(3) == 1.5);
        CHECK(d.comb.d.at(-2) == 0.5);
        CHECK(d.comb.c.count(-2) == 0);
        CHECK_THROWS_AS(io::read_data_file(dir.write("e.csv", "offset,c,d\n2.5,1,0\n")), AlignmentError);
    }
    SECTION("rejections") {
        CHECK_THROWS_AS(io::read_data_file(dir.write("h.csv", "x,a,b\n0,0,0\n")), IoError);
        CHECK_THROWS_AS(io::read_data_file(dir.write("s.csv", "x,alpha,beta\n1,0,0\n1,0,0\n")), IoError);
        CHECK_THROWS_AS(io::read_data_file(dir.write("n.csv", "x,alpha,beta\n0,abc,0\n")), IoError);
        CHECK_THROWS_AS(io::read_data_file(dir.write("empty.csv", "")), IoError);
    }
}

TEST_CASE("field writers", "[io][output]") {
    auto g = build_grid(0.0, 1.0, 4, 0.5);
    auto w = compute_weights(sample_medium(constant_medium(1.0), g.space));
    auto u = run(initialize(RegularData{gaussian(1.0, 1.0, 0.5), zero_sampler()}, g.space, g.time), w, g.space,
                 g.time);
    std::string longf = io::field_long_csv(u);
    CHECK(longf.rfind("k,t,j,x,u\n", 0) == 0);
    CHECK(std::count(longf.begin(), longf.end(), '\n') == 1 + 3 * 5);
    CHECK(longf.find("\n0,0,4,1,") != std::string::npos);

    std::string dense = io::field_dense_csv(u);
    CHECK(std::count(dense.begin(), dense.end(), '\n') == 3);
    CHECK(std::count(dense.begin(), dense.end(), ',') == 3 * 4);

    Eigen::MatrixXd M(2, 2);
    M << 1, 0.5, -2, 0;
    CHECK(io::matrix_csv(M) == "1,0.5\n-2,0\n");
    CHECK(io::params_text({{"n", "4"}, {"T", "0.5"}}) == "n=4\nT=0.5\n");
}

TEST_CASE("atomic write replaces the file and leaves no temp behind", "[io][output]") {
    TempDir dir;
    auto p = dir.path / "out.csv";
    io::write_atomic(p, "first\n");
    io::write_atomic(p, "second\n");
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    CHECK(line == "second");
    CHECK_FALSE(fs::exists(dir.path / "out.csv.tmp"));
    CHECK_THROWS_AS(io::write_atomic(dir.path / "no" / "such" / "dir.csv", "x"), IoError);
}
