#include "support.hpp"

#include <catch_amalgamated.hpp>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#ifndef MAXMIN_TSP_CLI_PATH
#error "MAXMIN_TSP_CLI_PATH must name the command-line binary"
#endif

namespace fs = std::filesystem;
using namespace maxmin_tsp;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run cli(const std::string& args) {
    const std::string cmd = std::string("\"") + MAXMIN_TSP_CLI_PATH + "\" " + args + " 2>&1";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    while (auto got = std::fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), got);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

fs::path workdir() {
    auto dir = fs::temp_directory_path() / "maxmin_tsp_cli_tests";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

fs::path square_file() {
    const auto path = workdir() / "square.pts";
    write_instance(support::unit_square(), path);
    return path;
}

}  // namespace

TEST_CASE("cli generate", "[cli]") {
    const auto a = workdir() / "a.pts";
    const auto b = workdir() / "b.pts";
    REQUIRE(cli("generate --n 500 --grid 1000x1000 --seed 1 --out " + q(a)).code == 0);
    REQUIRE(cli("generate --n 500 --grid 1000x1000 --seed 1 --out " + q(b) + " --quiet").code == 0);
    const auto text = slurp(a);
    CHECK(text == slurp(b));
    CHECK(std::count(text.begin(), text.end(), '\n') == 501);
    CHECK(read_instance(a).size() == 500);

    const auto full = cli("generate --n 5 --grid 2x2 --out " + q(workdir() / "c.pts"));
    CHECK(full.code == 2);
    CHECK_FALSE(full.out.empty());
    CHECK(cli("generate --n 5 --grid 2x2 --allow-duplicates --quiet --out " + q(workdir() / "c.pts")).code == 0);
    CHECK(cli("generate --n 5 --grid 2by2 --out " + q(workdir() / "c.pts")).code == 2);
}

TEST_CASE("cli solve", "[cli]") {
    const auto sq = square_file();
    const auto mn = cli("solve --in " + q(sq) + " --objective min");
    CHECK(mn.code == 0);
    CHECK(mn.out.find("length=4.0 ") != std::string::npos);
    const auto mx = cli("solve --in " + q(sq) + " --objective max");
    CHECK(mx.code == 0);
    CHECK(mx.out.find("length=4.82842712475 ") != std::string::npos);

    SECTION("full mode json report on eight points") {
        const auto inst_path = workdir() / "eight.pts";
        write_instance(generate({.n = 8, .grid_w = 50, .grid_h = 50, .seed = 8}), inst_path);
        const auto json_path = workdir() / "r.json";
        const auto svg_path = workdir() / "r.svg";
        const auto r = cli("solve --in " + q(inst_path) + " --mode full --oracle --json " + q(json_path) + " --svg " +
                           q(svg_path));
        REQUIRE(r.code == 0);
        CHECK(r.out.find("oracle_gap=") != std::string::npos);
        const auto text = slurp(json_path);
        const auto j = Json::parse(text);
        CHECK(dump_json(j) == text);
        CHECK(j["schema_version"] == "1");
        for (const char* key : {"instance", "config", "result", "analysis", "timings"}) CHECK(j.contains(key));
        std::vector<PointId> order = j["result"]["order"].get<std::vector<PointId>>();
        const auto inst = read_instance(inst_path);
        CHECK(support::rel_close(j["result"]["length"].get<double>(), tour_length(inst, order), 1e-11));
        CHECK(j["analysis"]["oracle_gap"].get<double>() >= -1e-9);
        CHECK(slurp(svg_path).find("<svg") != std::string::npos);
    }

    SECTION("matrix input has no crossings") {
        const auto m = workdir() / "m.mat";
        write_instance(Instance(DistanceMatrix::from_points(support::unit_square().points())), m);
        const auto r = cli("solve --in " + q(m));
        CHECK(r.code == 0);
        CHECK(r.out.find("crossings=n/a") != std::string::npos);
    }

    SECTION("full-mode truncation exits 4") {
        const auto grid = workdir() / "grid.pts";
        std::vector<Point> pts;
        for (int x = 0; x < 4; ++x)
            for (int y = 0; y < 4; ++y) pts.push_back({double(x), double(y)});
        write_instance(Instance(PointSet(std::move(pts))), grid);
        const auto r = cli("solve --in " + q(grid) + " --mode full --branch-cap 2");
        CHECK(r.code == 4);
        CHECK(r.out.find("truncated=true") != std::string::npos);
        CHECK(cli("solve --in " + q(grid) + " --mode pruned --branch-cap 2").code == 0);
    }

    SECTION("bad input") {
        CHECK(cli("solve --in " + q(workdir() / "missing.pts")).code == 3);
        const auto bad = workdir() / "bad.mat";
        std::ofstream(bad) << "3\n0 1 2\n1 0 3\n2 4 0\n";
        const auto r = cli("solve --in " + q(bad));
        CHECK(r.code == 3);
        CHECK(r.out.find("symmetric") != std::string::npos);
        CHECK(cli("solve --in " + q(sq) + " --objective sideways").code == 2);
        CHECK(cli("solve").code == 2);
    }
}

TEST_CASE("cli verify", "[cli]") {
    const auto j1 = workdir() / "v1.json";
    const auto j2 = workdir() / "v2.json";
    const auto a = cli("verify --count 10 --n-min 5 --n-max 7 --seed 7 --json " + q(j1));
    const auto b = cli("verify --count 10 --n-min 5 --n-max 7 --seed 7 --json " + q(j2));
    REQUIRE(a.code == 0);
    CHECK(slurp(j1) == slurp(j2));
    const auto j = Json::parse(slurp(j1));
    CHECK(j["rows"].size() == 10);
    CHECK(cli("verify --n-max 25").code == 2);
    (void)b;
}

TEST_CASE("cli bench", "[cli]") {
    const auto j = workdir() / "bench.json";
    const auto svgs = workdir() / "bench_svg";
    const auto r = cli("bench --sizes 50,100,200 --reps 1 --continuous --quiet --svg-dir " + q(svgs) + " --json " + q(j));
    REQUIRE(r.code == 0);
    const auto rep = Json::parse(slurp(j));
    CHECK(fs::exists(svgs / "bench_n100.svg"));
    const auto text = slurp(j);
    CHECK(text.find("fitted_exponent_ops") != std::string::npos);
    CHECK(cli("bench --sizes 50,100").code == 2);
}

TEST_CASE("cli fig4", "[cli]") {
    const auto dir = workdir() / "fig4";
    fs::remove_all(dir);
    REQUIRE(cli("fig4 --n 60 --out-dir " + q(dir) + " --quiet").code == 0);
    std::size_t svg = 0, json = 0;
    for (const auto& e : fs::directory_iterator(dir)) {
        svg += e.path().extension() == ".svg";
        json += e.path().extension() == ".json";
    }
    CHECK(svg == 2);
    CHECK(json == 1);
}

TEST_CASE("cli help", "[cli]") {
    CHECK(cli("--help").code == 0);
    CHECK(cli("frobnicate").code == 2);
}
