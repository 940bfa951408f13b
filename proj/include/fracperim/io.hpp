#pragma once

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracperim/energy.hpp"
#include "fracperim/experiments.hpp"
#include "fracperim/lattice.hpp"
#include "fracperim/levelset.hpp"
#include "fracperim/optimise.hpp"

namespace fracperim {

using json = nlohmann::json;

inline json to_json(const LatticeSpec& spec) {
    json extent = json::array();
    for (int a = 0; a < spec.dim; ++a)
        extent.push_back({spec.extent[a].lo, spec.extent[a].hi});
    return {{"dim", spec.dim}, {"h", spec.h}, {"extent", extent}, {"s", spec.s}};
}

inline LatticeSpec lattice_from_json(const json& j) {
    LatticeSpec spec;
    spec.dim = j.at("dim").get<int>();
    spec.h = j.at("h").get<double>();
    spec.s = j.at("s").get<double>();
    const auto& extent = j.at("extent");
    if (!extent.is_array() || int(extent.size()) != spec.dim)
        throw std::invalid_argument("lattice: extent must list one range per axis");
    for (int a = 0; a < spec.dim; ++a)
        spec.extent[a] = {extent[a].at(0).get<std::int32_t>(),
                          extent[a].at(1).get<std::int32_t>()};
    spec.validate();
    return spec;
}

inline json cells_to_json(const std::vector<CellId>& cells, int dim) {
    json out = json::array();
    for (CellId c : cells) {
        if (dim == 1)
            out.push_back(json::array({c.x}));
        else
            out.push_back(json::array({c.x, c.y}));
    }
    return out;
}

inline json to_json(const Region& r, const LatticeSpec& spec) {
    json j = to_json(spec);
    j["cells"] = cells_to_json(r.cells(), spec.dim);
    return j;
}

inline Region region_from_json(const json& j, const LatticeSpec& spec) {
    std::vector<CellId> cells;
    for (const auto& c : j.at("cells")) {
        CellId id{c.at(0).get<std::int32_t>(),
                  spec.dim == 2 ? c.at(1).get<std::int32_t>() : 0};
        if (!spec.in_box(id)) throw std::invalid_argument("region: cell outside box");
        cells.push_back(id);
    }
    return Region(std::move(cells));
}

inline json to_json(const EnergyBreakdown& b) {
    return {{"local", b.local},
            {"nonlocal", b.nonlocal},
            {"ambient", b.ambient},
            {"total", b.total}};
}

inline json to_json(const SetConfig& e) {
    json j = to_json(e.spec);
    j["ambient_mode"] = e.ambient == SetAmbient::Full ? "full" : "empty";
    j["cells"] = cells_to_json(e.support().cells(), e.spec.dim);
    return j;
}

inline json to_json(const FuncConfig& u) {
    json j = to_json(u.spec);
    j["ambient_value"] = u.ambient_value;
    j["values"] = u.values;
    return j;
}

inline json to_json(const MinimiserPair& mp) {
    return {{"optimal_value", mp.optimal_value},
            {"gap_bound", mp.gap_bound},
            {"minimal_set", to_json(mp.minimal_set)},
            {"maximal_set", to_json(mp.maximal_set)}};
}

inline json to_json(const MinimalityReport& r) {
    json levels = json::array();
    for (const auto& v : r.levels)
        levels.push_back({{"lambda", v.lambda},
                          {"level_value", v.level_value},
                          {"optimal_value", v.optimal_value},
                          {"gap_bound", v.gap_bound},
                          {"brute_force", v.certified_by_brute_force},
                          {"pass", v.pass}});
    return {{"minimal", r.minimal}, {"levels", levels}};
}

/// Binary PGM (P5) bitmap of a 2-D region: one pixel per box cell, 255 for
/// members, top row = highest y index.
inline void write_pgm(std::ostream& os, const LatticeSpec& spec,
                      const std::vector<std::uint8_t>& mask) {
    if (spec.dim != 2) throw std::invalid_argument("write_pgm: 2-D only");
    const std::int64_t nx = spec.extent[0].count();
    const std::int64_t ny = spec.extent[1].count();
    os << "P5\n" << nx << " " << ny << "\n255\n";
    for (std::int64_t row = ny - 1; row >= 0; --row)
        for (std::int64_t col = 0; col < nx; ++col)
            os.put(mask[std::size_t(row * nx + col)] ? char(255) : char(0));
}

inline void write_pgm_file(const std::string& path, const LatticeSpec& spec,
                           const std::vector<std::uint8_t>& mask) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    write_pgm(f, spec, mask);
}

inline void write_region_pgm(const std::string& path, const LatticeSpec& spec,
                             const Region& r) {
    std::vector<std::uint8_t> mask(std::size_t(spec.cell_count()), 0);
    for (CellId c : r) mask[std::size_t(spec.linear_index(c))] = 1;
    write_pgm_file(path, spec, mask);
}

inline void write_set_pgm(const std::string& path, const SetConfig& e) {
    write_pgm_file(path, e.spec, e.occupancy);
}

/// Full-precision, locale-independent float formatting for CSV rows.
inline std::string csv_double(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

inline std::string sweep_csv(const std::vector<SweepRecord>& records) {
    std::ostringstream os;
    os << "s,width_diam,filled_fraction,optimal_value,gap_bound,mode\n";
    for (const auto& r : records)
        os << csv_double(r.s) << ',' << csv_double(r.width_diam) << ','
           << csv_double(r.filled_fraction) << ',' << csv_double(r.optimal_value) << ','
           << csv_double(r.gap_bound) << ',' << to_string(r.mode) << '\n';
    return os.str();
}

}  // namespace fracperim
