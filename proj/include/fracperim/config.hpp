#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracperim/energy.hpp"
#include "fracperim/experiments.hpp"
#include "fracperim/io.hpp"
#include "fracperim/lattice.hpp"

namespace fracperim {

/// Anything wrong with user-supplied configuration; mapped to exit code 2.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parsed run configuration: the lattice, named regions, a datum recipe and
/// the knobs shared by all commands.
class RunConfig {
public:
    static RunConfig parse(const json& j) {
        RunConfig c;
        try {
            c.spec_ = lattice_from_json(j.at("lattice"));
        } catch (const json::exception& e) {
            throw config_error(std::string("config: bad lattice: ") + e.what());
        } catch (const std::invalid_argument& e) {
            throw config_error(std::string("config: bad lattice: ") + e.what());
        }
        c.raw_ = j;
        if (j.contains("boxed")) c.opts_.boxed = j.at("boxed").get<bool>();
        if (j.contains("ambient")) {
            const auto& a = j.at("ambient");
            if (a.contains("kappa")) c.ambient_params_.kappa = a.at("kappa").get<double>();
            if (a.contains("refine")) c.ambient_params_.refine = a.at("refine").get<int>();
        }
        if (j.contains("solver") && j.at("solver").contains("scale"))
            c.scale_ = j.at("solver").at("scale").get<double>();
        return c;
    }

    const LatticeSpec& spec() const { return spec_; }
    const EnergyOptions& options() const { return opts_; }
    EnergyOptions& options() { return opts_; }
    const AmbientParams& ambient_params() const { return ambient_params_; }
    double scale() const { return scale_; }
    const json& raw() const { return raw_; }

    Region resolve_region(const json& def) const {
        if (def.is_string()) {
            const std::string name = def.get<std::string>();
            if (!raw_.contains("regions") || !raw_.at("regions").contains(name))
                throw config_error("config: unknown region name '" + name + "'");
            return resolve_region(raw_.at("regions").at(name));
        }
        if (!def.is_object() || !def.contains("type"))
            throw config_error("config: region definition needs a type");
        const std::string type = def.at("type").get<std::string>();
        try {
            if (type == "box") return build_box(spec_);
            if (type == "cells") return region_from_json(def, spec_);
            if (type == "ball") {
                std::array<double, 2> center{0.0, 0.0};
                if (def.contains("center"))
                    for (int a = 0; a < spec_.dim; ++a)
                        center[std::size_t(a)] = def.at("center").at(a).get<double>();
                return ball_region(spec_, center, def.at("radius").get<double>());
            }
            if (type == "ring")
                return ring_region(spec_, resolve_region(def.at("omega")),
                                   def.at("width").get<double>());
            if (type == "half_plane") {
                const double nx = def.at("normal").at(0).get<double>();
                const double ny = spec_.dim == 2 ? def.at("normal").at(1).get<double>() : 0.0;
                const double offset =
                    def.contains("offset") ? def.at("offset").get<double>() : 0.0;
                std::vector<CellId> cells;
                for (CellId c : build_box(spec_)) {
                    const auto p = spec_.center(c);
                    if (nx * p[0] + ny * p[1] > offset) cells.push_back(c);
                }
                return Region(std::move(cells));
            }
            if (type == "sector") {
                std::vector<CellId> cells;
                for (CellId c : build_box(spec_)) {
                    const auto p = spec_.center(c);
                    if (p[0] * p[1] > 0.0) cells.push_back(c);
                }
                return Region(std::move(cells));
            }
            if (type == "complement")
                return complement_in_box(spec_, resolve_region(def.at("of")));
            if (type == "union")
                return region_union(resolve_region(def.at("a")), resolve_region(def.at("b")));
            if (type == "difference")
                return region_difference(resolve_region(def.at("a")),
                                         resolve_region(def.at("b")));
        } catch (const json::exception& e) {
            throw config_error(std::string("config: bad region definition: ") + e.what());
        } catch (const std::invalid_argument& e) {
            throw config_error(std::string("config: bad region definition: ") + e.what());
        }
        throw config_error("config: unknown region type '" + type + "'");
    }

    Region omega() const {
        if (!raw_.contains("omega")) throw config_error("config: missing omega");
        return resolve_region(raw_.at("omega"));
    }

    bool has_set_datum() const {
        return raw_.contains("datum") &&
               raw_.at("datum").value("type", std::string()) == "set";
    }

    SetConfig set_datum(const Region& omega) const {
        if (!raw_.contains("datum")) throw config_error("config: missing datum");
        const json& d = raw_.at("datum");
        if (d.value("type", std::string()) != "set")
            throw config_error("config: datum is not a set");
        SetAmbient ambient = SetAmbient::Empty;
        if (d.contains("ambient")) {
            const std::string m = d.at("ambient").get<std::string>();
            if (m == "full")
                ambient = SetAmbient::Full;
            else if (m != "empty")
                throw config_error("config: set datum ambient must be empty or full");
        }
        SetConfig e = SetConfig::empty_set(spec_, ambient);
        if (d.contains("full"))
            for (CellId c : resolve_region(d.at("full"))) e.set(c, true);
        if (d.contains("exterior_only") && d.at("exterior_only").get<bool>())
            for (CellId x : omega) e.set(x, false);
        return e;
    }

    FuncConfig function_datum() const {
        if (!raw_.contains("datum")) throw config_error("config: missing datum");
        const json& d = raw_.at("datum");
        if (d.value("type", std::string()) != "function")
            throw config_error("config: datum is not a function");
        const double fill = d.value("default", 0.0);
        FuncConfig u = FuncConfig::constant(spec_, fill, d.value("ambient_value", 0.0));
        if (d.contains("layers")) {
            for (const auto& layer : d.at("layers")) {
                const Region r = resolve_region(layer.at("region"));
                const double v = layer.at("value").get<double>();
                for (CellId c : r) u.set(c, v);
            }
        }
        if (d.contains("cells")) {
            const auto& cells = d.at("cells");
            const auto& values = d.at("values");
            if (cells.size() != values.size())
                throw config_error("config: datum cells/values length mismatch");
            for (std::size_t i = 0; i < cells.size(); ++i) {
                CellId id{cells[i].at(0).get<std::int32_t>(),
                          spec_.dim == 2 ? cells[i].at(1).get<std::int32_t>() : 0};
                if (!spec_.in_box(id)) throw config_error("config: datum cell outside box");
                u.set(id, values[i].get<double>());
            }
        }
        return u;
    }

    AmbientMode table_mode(const SetConfig* datum = nullptr) const {
        if (opts_.boxed) return AmbientMode::None;
        if (datum != nullptr)
            return datum->ambient == SetAmbient::Full ? AmbientMode::Full
                                                      : AmbientMode::Empty;
        return AmbientMode::Full;
    }

private:
    LatticeSpec spec_;
    EnergyOptions opts_;
    AmbientParams ambient_params_;
    double scale_ = kDefaultCutScale;
    json raw_;
};

}  // namespace fracperim
