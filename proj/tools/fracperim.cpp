#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fracperim/config.hpp"
#include "fracperim/energy.hpp"
#include "fracperim/experiments.hpp"
#include "fracperim/io.hpp"
#include "fracperim/levelset.hpp"
#include "fracperim/optimise.hpp"
#include "fracperim/verify.hpp"

namespace fp = fracperim;
namespace fs = std::filesystem;

namespace {

struct GlobalArgs {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    bool boxed = true;
    bool ambient = false;
    bool snapshots = false;
    std::size_t max_free_cells = 14;
    std::string inject_fault;
};

fp::json load_config(const GlobalArgs& args) {
    if (args.config_path.empty()) throw fp::config_error("missing --config");
    std::ifstream f(args.config_path);
    if (!f) throw fp::config_error("cannot open config file: " + args.config_path);
    try {
        return fp::json::parse(f);
    } catch (const fp::json::exception& e) {
        throw fp::config_error(std::string("malformed config JSON: ") + e.what());
    }
}

fp::RunConfig make_run_config(const GlobalArgs& args) {
    fp::RunConfig cfg = fp::RunConfig::parse(load_config(args));
    if (args.ambient) cfg.options().boxed = false;
    return cfg;
}

void write_out_file(const GlobalArgs& args, const std::string& name,
                    const std::string& content) {
    if (args.out_dir.empty()) return;
    fs::create_directories(args.out_dir);
    std::ofstream f(fs::path(args.out_dir) / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write output file " + name);
    f << content;
}

void maybe_write_set_pgm(const GlobalArgs& args, const std::string& name,
                         const fp::SetConfig& e) {
    if (args.out_dir.empty() || e.spec.dim != 2) return;
    fs::create_directories(args.out_dir);
    fp::write_set_pgm((fs::path(args.out_dir) / name).string(), e);
}

int cmd_energy(const GlobalArgs& args) {
    const fp::RunConfig cfg = make_run_config(args);
    const fp::Region omega = cfg.omega();
    fp::json out;
    if (cfg.has_set_datum()) {
        const fp::SetConfig e = cfg.set_datum(omega);
        const fp::WeightTable table(cfg.spec(), fp::WeightStrategy::CachedByOffset,
                                    cfg.table_mode(&e), cfg.ambient_params());
        out = fp::to_json(fp::perimeter(e, omega, table, cfg.options()));
    } else {
        const fp::FuncConfig u = cfg.function_datum();
        const fp::WeightTable table(cfg.spec(), fp::WeightStrategy::CachedByOffset,
                                    cfg.table_mode(), cfg.ambient_params());
        out = fp::to_json(fp::g_energy(u, omega, table, cfg.options()));
        out["g_tilde"] = fp::g_tilde(u, omega, table, cfg.options());
        out["global_tail"] = fp::global_tail(u, omega, table, cfg.options());
    }
    const std::string text = out.dump(2) + "\n";
    std::cout << text;
    write_out_file(args, "energy.json", text);
    return 0;
}

int cmd_minimise(const GlobalArgs& args) {
    const fp::RunConfig cfg = make_run_config(args);
    const fp::Region omega = cfg.omega();
    const fp::SetConfig datum = cfg.set_datum(omega);
    const fp::WeightTable table(cfg.spec(), fp::WeightStrategy::CachedByOffset,
                                cfg.table_mode(&datum), cfg.ambient_params());
    const fp::MinimiserPair mp = fp::minimise_perimeter(datum, omega, table, cfg.options(),
                                                        cfg.scale(), args.threads);
    const std::string text = fp::to_json(mp).dump(2) + "\n";
    std::cout << text;
    write_out_file(args, "minimise.json", text);
    maybe_write_set_pgm(args, "minimal.pgm", mp.minimal_set);
    maybe_write_set_pgm(args, "maximal.pgm", mp.maximal_set);
    return 0;
}

int cmd_levelset(const GlobalArgs& args) {
    const fp::RunConfig cfg = make_run_config(args);
    const fp::Region omega = cfg.omega();
    const fp::FuncConfig phi = cfg.function_datum();
    const fp::WeightTable table(cfg.spec(), fp::WeightStrategy::CachedByOffset,
                                cfg.table_mode(), cfg.ambient_params());
    fp::LevelFamily family =
        fp::build_level_family(phi, omega, table, cfg.options(), cfg.scale(), args.threads);
    if (args.inject_fault == "nesting") {
        // test hook: corrupt the family so the loud nesting check trips
        if (family.size() >= 2 && !omega.empty()) {
            const fp::CellId x = omega.cells().front();
            family.sets.back().set(x, true);
            for (auto& set : family.sets) {
                if (&set != &family.sets.back()) set.set(x, false);
            }
        }
        fp::validate_nesting(family);
    }
    const fp::FuncConfig u = fp::assemble_function(family, phi, omega);

    fp::json manifest;
    manifest["thresholds"] = fp::json::array();
    for (std::size_t k = 0; k < family.size(); ++k) {
        fp::json entry;
        entry["t"] = family.thresholds[k];
        entry["energy"] =
            fp::perimeter(family.sets[k], omega, table, cfg.options()).total;
        if (args.snapshots && cfg.spec().dim == 2) {
            const std::string name = "level_" + std::to_string(k) + ".pgm";
            maybe_write_set_pgm(args, name, family.sets[k]);
            entry["pgm"] = name;
        }
        manifest["thresholds"].push_back(entry);
    }
    manifest["function"] = fp::to_json(u);
    const std::string text = manifest.dump(2) + "\n";
    std::cout << text;
    write_out_file(args, "levelset.json", text);
    return 0;
}

int cmd_verify(const GlobalArgs& args) {
    fp::json trials = fp::json::object();
    if (!args.config_path.empty()) {
        const fp::json j = load_config(args);
        if (j.contains("verify")) trials = j.at("verify");
    }
    const int n_coarea = trials.value("coarea", 50);
    const int n_submod = trials.value("submodularity", 50);
    const int n_oracle = trials.value("oracle", 25);
    const int n_closure = trials.value("closure", 10);
    const int n_ster = trials.value("ster", 5);
    const int n_split = trials.value("splitting", 50);
    const int n_cutoff = trials.value("cutoff", 5);

    fp::Rng rng(args.seed);
    std::vector<fp::SuiteResult> results;
    results.push_back(fp::suite_coarea(rng, n_coarea));
    results.push_back(fp::suite_submodularity(rng, n_submod));
    results.push_back(
        fp::suite_oracle_equivalence(rng, n_oracle, std::min<std::size_t>(args.max_free_cells, 14)));
    results.push_back(fp::suite_closure(rng, n_closure, std::min<std::size_t>(args.max_free_cells, 12)));
    results.push_back(fp::suite_ster(rng, n_ster, std::min<std::size_t>(args.max_free_cells, 12)));
    results.push_back(fp::suite_splitting(rng, n_split));
    results.push_back(fp::suite_cutoff_stability(rng, n_cutoff, std::min<std::size_t>(args.max_free_cells, 12)));

    fp::json out;
    out["seed"] = args.seed;
    int passed = 0, failed = 0;
    out["suites"] = fp::json::object();
    for (const auto& r : results) {
        out["suites"][r.name] = {{"passed", r.passed}, {"failed", r.failed}};
        passed += r.passed;
        failed += r.failed;
    }
    out["passed"] = passed;
    out["failed"] = failed;
    const std::string text = out.dump(2) + "\n";
    std::cout << text;
    write_out_file(args, "verify.json", text);
    return failed == 0 ? 0 : 3;
}

int cmd_yinyang(const GlobalArgs& args) {
    const fp::RunConfig cfg = make_run_config(args);
    const fp::Region omega = cfg.omega();
    const fp::json& raw = cfg.raw();
    if (!raw.contains("experiment")) throw fp::config_error("config: missing experiment");
    const fp::json& exp = raw.at("experiment");
    const std::string mode_name = exp.value("mode", std::string("full_ring_empty_far"));
    fp::YinYangMode mode;
    if (mode_name == "full_ring_empty_far")
        mode = fp::YinYangMode::FullRingEmptyFar;
    else if (mode_name == "empty_ring_full_far")
        mode = fp::YinYangMode::EmptyRingFullFar;
    else
        throw fp::config_error("config: unknown yin-yang mode " + mode_name);
    std::vector<double> widths, svals;
    try {
        widths = exp.at("widths_diam").get<std::vector<double>>();
        svals = exp.at("s_values").get<std::vector<double>>();
    } catch (const fp::json::exception& e) {
        throw fp::config_error(std::string("config: bad experiment lists: ") + e.what());
    }
    const auto records =
        fp::yin_yang_sweep(cfg.spec(), omega, widths, svals, mode, cfg.options(),
                           cfg.scale(), args.threads, cfg.ambient_params());
    const std::string csv = fp::sweep_csv(records);
    std::cout << csv;
    write_out_file(args, "yinyang.csv", csv);
    if (args.snapshots && cfg.spec().dim == 2 && !args.out_dir.empty()) {
        // one maximal-minimiser bitmap per sweep point
        for (const auto& r : records) {
            fp::LatticeSpec spec = cfg.spec();
            spec.s = r.s;
            const fp::Region ring = fp::ring_region(
                spec, omega, r.width_diam * fp::diameter(omega, spec));
            fp::SetConfig datum = fp::SetConfig::empty_set(
                spec, mode == fp::YinYangMode::FullRingEmptyFar ? fp::SetAmbient::Empty
                                                                : fp::SetAmbient::Full);
            if (mode == fp::YinYangMode::FullRingEmptyFar) {
                for (fp::CellId c : ring) datum.set(c, true);
            } else {
                for (fp::CellId c :
                     fp::complement_in_box(spec, fp::region_union(omega, ring)))
                    datum.set(c, true);
            }
            const fp::WeightTable table(spec, fp::WeightStrategy::CachedByOffset,
                                        cfg.table_mode(&datum), cfg.ambient_params());
            const fp::MinimiserPair mp = fp::minimise_perimeter(
                datum, omega, table, cfg.options(), cfg.scale(), args.threads);
            std::ostringstream name;
            name << "maximal_s" << r.s << "_w" << r.width_diam << ".pgm";
            fs::create_directories(args.out_dir);
            fp::write_set_pgm((fs::path(args.out_dir) / name.str()).string(),
                              mp.maximal_set);
        }
    }
    return 0;
}

int cmd_sector(const GlobalArgs& args) {
    double h = 0.5, s = 0.5, box_half_width = 6.0;
    bool run_bf = true;
    fp::EnergyOptions opts;
    double scale = fp::kDefaultCutScale;
    if (!args.config_path.empty()) {
        const fp::json j = load_config(args);
        if (j.contains("sector")) {
            const fp::json& sec = j.at("sector");
            h = sec.value("h", h);
            s = sec.value("s", s);
            box_half_width = sec.value("box_half_width", box_half_width);
            run_bf = sec.value("brute_force", run_bf);
        }
        if (j.contains("solver") && j.at("solver").contains("scale"))
            scale = j.at("solver").at("scale").get<double>();
    }
    opts.boxed = !args.ambient;
    const fp::SectorReport rep =
        fp::sector_nonuniqueness(h, s, box_half_width, opts, scale, run_bf, args.threads);

    fp::json out;
    out["h"] = h;
    out["s"] = s;
    out["symmetric_difference_volume"] = rep.symmetric_difference_volume;
    out["minimal_energy"] = rep.minimal_energy;
    out["maximal_energy"] = rep.maximal_energy;
    out["rotated_complement_energy"] = rep.rotated_complement_energy;
    out["gap_bound"] = rep.pair.gap_bound;
    if (run_bf) {
        out["brute_force_optima"] = rep.brute_force_optima;
        out["brute_force_value"] = rep.brute_force_value;
    }
    out["minimal_set"] = fp::to_json(rep.pair.minimal_set);
    out["maximal_set"] = fp::to_json(rep.pair.maximal_set);
    const std::string text = out.dump(2) + "\n";
    std::cout << text;
    write_out_file(args, "sector.json", text);
    maybe_write_set_pgm(args, "sector_minimal.pgm", rep.pair.minimal_set);
    maybe_write_set_pgm(args, "sector_maximal.pgm", rep.pair.maximal_set);
    return 0;
}

int cmd_bench(const GlobalArgs& args) {
    std::vector<std::int64_t> sizes = {512, 2048, 4608};
    std::vector<std::int64_t> solve_sizes = {512, 2048, 4608};
    if (!args.config_path.empty()) {
        const fp::json j = load_config(args);
        if (j.contains("bench")) {
            if (j.at("bench").contains("sizes"))
                sizes = j.at("bench").at("sizes").get<std::vector<std::int64_t>>();
            if (j.at("bench").contains("solve_sizes"))
                solve_sizes = j.at("bench").at("solve_sizes").get<std::vector<std::int64_t>>();
        }
    }
    using clock = std::chrono::steady_clock;
    auto ms_since = [](clock::time_point t0) {
        return std::chrono::duration_cast<std::chrono::milliseconds>(clock::now() - t0)
            .count();
    };

    std::ostringstream csv;
    csv << "stage,n_cells,millis\n";
    for (std::int64_t n : sizes) {
        const std::int32_t side = std::int32_t(std::ceil(std::sqrt(double(n)))) + 2;
        fp::LatticeSpec spec{2, 0.25, {fp::AxisRange{0, side - 1}, fp::AxisRange{0, side - 1}},
                             0.5};
        auto t0 = clock::now();
        const fp::WeightTable table(spec);
        csv << "kernel_fill," << n << ',' << ms_since(t0) << '\n';

        std::vector<fp::CellId> cells;
        for (std::int64_t i = 0; i < n; ++i) cells.push_back(spec.cell_at(i));
        const fp::Region omega{std::move(cells)};
        fp::SetConfig e = fp::SetConfig::empty_set(spec);
        for (std::int64_t i = 0; i < spec.cell_count(); ++i)
            if (i % 3 == 0) e.occupancy[std::size_t(i)] = 1;
        t0 = clock::now();
        const auto breakdown = fp::perimeter(e, omega, table);
        csv << "energy_eval," << n << ',' << ms_since(t0) << '\n';
        (void)breakdown;

        if (std::find(solve_sizes.begin(), solve_sizes.end(), n) != solve_sizes.end()) {
            fp::SetConfig datum = fp::SetConfig::empty_set(spec);
            for (fp::CellId c : fp::complement_in_box(spec, omega))
                if (c.x < side / 2) datum.set(c, true);
            t0 = clock::now();
            const auto mp = fp::minimise_perimeter(datum, omega, table, {}, fp::kDefaultCutScale,
                                                   args.threads);
            csv << "mincut_solve," << n << ',' << ms_since(t0) << '\n';
            (void)mp;
        }
    }
    std::cout << csv.str();
    write_out_file(args, "bench.csv", csv.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fracperim: discrete fractional perimeters, exact minimisers, "
                 "level-set constructions and experiments"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalArgs args;
    app.add_option("--config", args.config_path, "JSON config file");
    app.add_option("--out", args.out_dir, "output directory");
    app.add_option("--seed", args.seed, "seed for randomized suites");
    app.add_option("--threads", args.threads, "worker thread cap (never changes results)");
    auto* boxed_flag = app.add_flag("--boxed", "drop beyond-box interactions (default)");
    auto* ambient_flag = app.add_flag("--ambient", "enable beyond-box interactions");
    app.add_flag("--snapshots", args.snapshots, "write PGM snapshots where applicable");
    app.add_option("--max-free-cells", args.max_free_cells,
                   "brute-force bound for verification suites");
    app.add_option("--inject-fault", args.inject_fault, "test hook")->group("");

    auto* energy = app.add_subcommand("energy", "evaluate the configured energy");
    auto* minimise = app.add_subcommand("minimise", "exact perimeter minimisation");
    auto* levelset = app.add_subcommand("levelset", "level-set function construction");
    auto* verify = app.add_subcommand("verify", "randomized property suites");
    auto* yinyang = app.add_subcommand("yinyang", "ring fill/empty sweep");
    auto* sector = app.add_subcommand("sector", "plane-sector non-uniqueness experiment");
    auto* bench = app.add_subcommand("bench", "timing of kernel fill, energy, one solve");

    CLI11_PARSE(app, argc, argv);
    args.boxed = !(*ambient_flag);
    args.ambient = bool(*ambient_flag);
    (void)boxed_flag;
    if (args.threads == 0) args.threads = 1;

    try {
        if (*energy) return cmd_energy(args);
        if (*minimise) return cmd_minimise(args);
        if (*levelset) return cmd_levelset(args);
        if (*verify) return cmd_verify(args);
        if (*yinyang) return cmd_yinyang(args);
        if (*sector) return cmd_sector(args);
        if (*bench) return cmd_bench(args);
    } catch (const fp::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const fp::invariant_error& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
