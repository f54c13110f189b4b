#include "geomflow/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace geomflow {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "snapshot format assumes a little-endian host");

namespace {
constexpr int kSnapshotVersion = 1;
}

void write_snapshot(const ScalarField& f, const std::string& path) {
    json hdr;
    hdr["format"] = "geomflow-snapshot";
    hdr["version"] = kSnapshotVersion;
    hdr["lo"] = f.grid.lo;
    hdr["hi"] = f.grid.hi;
    hdr["n"] = f.grid.n;
    hdr["periodic"] = f.grid.periodic;
    hdr["time"] = f.time;
    hdr["endian"] = "little";
    std::ofstream os(path, std::ios::binary);
    if (!os) throw FormatError("cannot open for writing: " + path);
    os << hdr.dump() << "\n";
    os.write(reinterpret_cast<const char*>(f.values.data()),
             static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    if (!os) throw FormatError("short write: " + path);
}

ScalarField read_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FormatError("cannot open: " + path);
    std::string line;
    if (!std::getline(is, line)) throw FormatError("missing header line in " + path, 0);
    json hdr;
    try {
        hdr = json::parse(line);
    } catch (const json::parse_error& e) {
        throw FormatError("bad snapshot header in " + path + ": " + e.what(),
                          static_cast<long>(e.byte));
    }
    if (hdr.value("format", "") != "geomflow-snapshot")
        throw FormatError("not a geomflow snapshot: " + path, 0);
    int ver = hdr.value("version", -1);
    if (ver != kSnapshotVersion)
        throw FormatError("snapshot version mismatch in " + path + ": expected " +
                              std::to_string(kSnapshotVersion) + ", found " +
                              std::to_string(ver),
                          0);
    if (hdr.value("endian", "") != "little")
        throw FormatError("unsupported endianness tag in " + path, 0);

    ChartGrid g(hdr.at("lo").get<std::array<double, 2>>(),
                hdr.at("hi").get<std::array<double, 2>>(),
                hdr.at("n").get<std::array<int, 2>>(),
                hdr.at("periodic").get<std::array<bool, 2>>());
    ScalarField f(g, 0.0, hdr.at("time").get<double>());
    long payload_start = static_cast<long>(is.tellg());
    is.read(reinterpret_cast<char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    if (static_cast<std::size_t>(is.gcount()) != f.values.size() * sizeof(double))
        throw FormatError("truncated snapshot payload in " + path,
                          payload_start + static_cast<long>(is.gcount()));
    return f;
}

void write_contour_csv(const Contour& c, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw FormatError("cannot open for writing: " + path);
    os << "chain,closed,x0,x1\n";
    os << std::setprecision(17);
    for (std::size_t k = 0; k < c.chains.size(); ++k)
        for (const Vec2& p : c.chains[k].pts)
            os << k << "," << (c.chains[k].closed ? 1 : 0) << "," << p[0] << "," << p[1]
               << "\n";
}

std::string contour_to_json(const Contour& c) {
    json j;
    j["format"] = "geomflow-contour";
    j["version"] = 1;
    j["level"] = c.level;
    j["source_time"] = c.source_time;
    j["chains"] = json::array();
    for (const auto& ch : c.chains) {
        json jc;
        jc["closed"] = ch.closed;
        jc["points"] = json::array();
        for (const Vec2& p : ch.pts) jc["points"].push_back({p[0], p[1]});
        j["chains"].push_back(std::move(jc));
    }
    return j.dump();
}

void write_contour_json(const Contour& c, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw FormatError("cannot open for writing: " + path);
    os << contour_to_json(c) << "\n";
}

void write_timeseries_csv(const std::vector<std::pair<double, double>>& series,
                          const std::string& x_name, const std::string& y_name,
                          const std::string& path) {
    std::ofstream os(path);
    if (!os) throw FormatError("cannot open for writing: " + path);
    os << x_name << "," << y_name << "\n";
    os << std::setprecision(17);
    for (const auto& [x, y] : series) os << x << "," << y << "\n";
}

}  // namespace geomflow
