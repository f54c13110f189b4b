#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "geomflow/io.hpp"

using namespace geomflow;
using nlohmann::json;

namespace {

ScalarField random_field(unsigned seed) {
    ChartGrid g({-1.0, -M_PI}, {1.5, M_PI}, {13, 24}, {false, true});
    ScalarField u(g, 0.0, 0.12345);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(-5.0, 5.0);
    for (double& v : u.values) v = d(rng);
    u.values[0] = -0.0;
    u.values[1] = 1e-308;  // keep subnormal-adjacent values intact
    return u;
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& p) : path(p) {}
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("snapshot files round-trip bitwise") {
    TempFile f("gf_io_roundtrip.snap");
    ScalarField u = random_field(99);
    write_snapshot(u, f.path);
    ScalarField v = read_snapshot(f.path);
    CHECK(v.grid == u.grid);
    CHECK(v.time == u.time);
    REQUIRE(v.values.size() == u.values.size());
    for (std::size_t k = 0; k < u.values.size(); ++k) {
        CHECK(v.values[k] == u.values[k]);
        CHECK(std::signbit(v.values[k]) == std::signbit(u.values[k]));
    }
}

TEST_CASE("snapshot header is one self-describing JSON line") {
    TempFile f("gf_io_header.snap");
    write_snapshot(random_field(3), f.path);
    std::ifstream is(f.path, std::ios::binary);
    std::string header;
    std::getline(is, header);
    json j = json::parse(header);
    CHECK(j.at("format") == "geomflow-snapshot");
    CHECK(j.at("version") == 1);
    CHECK(j.at("endian") == "little");
    CHECK(j.at("n") == json::array({13, 24}));
    CHECK(j.at("periodic") == json::array({false, true}));
    CHECK(j.at("time").get<double>() == 0.12345);
}

TEST_CASE("version mismatch names both versions") {
    TempFile f("gf_io_version.snap");
    write_snapshot(random_field(4), f.path);
    std::ifstream is(f.path, std::ios::binary);
    std::stringstream buf;
    buf << is.rdbuf();
    std::string data = buf.str();
    auto pos = data.find("\"version\":1");
    REQUIRE(pos != std::string::npos);
    data.replace(pos, 11, "\"version\":9");
    std::ofstream(f.path, std::ios::binary) << data;
    try {
        read_snapshot(f.path);
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        std::string msg = e.what();
        CHECK(msg.find("1") != std::string::npos);
        CHECK(msg.find("9") != std::string::npos);
    }
}

TEST_CASE("truncated payload reports the byte offset") {
    TempFile f("gf_io_trunc.snap");
    write_snapshot(random_field(5), f.path);
    std::ifstream is(f.path, std::ios::binary);
    std::stringstream buf;
    buf << is.rdbuf();
    std::string data = buf.str().substr(0, buf.str().size() - 40);
    std::ofstream(f.path, std::ios::binary) << data;
    try {
        read_snapshot(f.path);
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(e.byte_offset >= 0);
    }
    CHECK_THROWS_AS(read_snapshot("gf_io_missing.snap"), FormatError);
}

TEST_CASE("garbage header is a format error, not a crash") {
    TempFile f("gf_io_garbage.snap");
    std::ofstream(f.path, std::ios::binary) << "not json at all\n\x01\x02\x03";
    CHECK_THROWS_AS(read_snapshot(f.path), FormatError);
}

TEST_CASE("contour CSV carries chain ids and closure flags") {
    Contour c;
    c.chains.push_back({{{0.25, 0.5}, {0.75, 0.5}}, false});
    c.chains.push_back({{{1.0, 1.0}, {2.0, 1.0}, {1.0, 1.0}}, true});
    TempFile f("gf_io_contour.csv");
    write_contour_csv(c, f.path);
    std::ifstream is(f.path);
    std::string line;
    std::getline(is, line);
    CHECK(line == "chain,closed,x0,x1");
    int rows = 0;
    bool saw_closed = false;
    while (std::getline(is, line)) {
        ++rows;
        if (line.rfind("1,1,", 0) == 0) saw_closed = true;
    }
    CHECK(rows == 5);
    CHECK(saw_closed);
}

TEST_CASE("contour JSON parses and mirrors the chain structure") {
    Contour c;
    c.level = 0.5;
    c.source_time = 2.0;
    c.chains.push_back({{{0.0, 0.0}, {1.0, 0.0}}, false});
    json j = json::parse(contour_to_json(c));
    CHECK(j.at("level") == 0.5);
    CHECK(j.at("source_time") == 2.0);
    REQUIRE(j.at("chains").size() == 1);
    CHECK(j.at("chains")[0].at("closed") == false);
    CHECK(j.at("chains")[0].at("points").size() == 2);
}

TEST_CASE("time series survive a write-read cycle at full precision") {
    std::vector<std::pair<double, double>> series = {
        {0.0, 1.0 / 3.0}, {0.1, M_PI}, {0.2, -7.25e-13}};
    TempFile f("gf_io_series.csv");
    write_timeseries_csv(series, "t", "radius", f.path);
    std::ifstream is(f.path);
    std::string line;
    std::getline(is, line);
    CHECK(line == "t,radius");
    for (const auto& [t, v] : series) {
        REQUIRE(std::getline(is, line));
        auto comma = line.find(',');
        CHECK(std::stod(line.substr(0, comma)) == t);
        CHECK(std::stod(line.substr(comma + 1)) == v);
    }
}
