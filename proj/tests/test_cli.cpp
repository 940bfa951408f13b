#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string cli_path() {
    const char* p = std::getenv("FRACPERIM_CLI");
    REQUIRE(p != nullptr);
    return p;
}

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path dir = fs::temp_directory_path() / "fracperim_cli_test";
    fs::create_directories(dir);
    const fs::path out = dir / ("out" + std::to_string(counter) + ".txt");
    const fs::path err = dir / ("err" + std::to_string(counter) + ".txt");
    ++counter;
    const std::string cmd =
        cli_path() + " " + args + " > " + out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(status);
    std::ostringstream so, se;
    so << std::ifstream(out).rdbuf();
    se << std::ifstream(err).rdbuf();
    r.out = so.str();
    r.err = se.str();
    return r;
}

fs::path write_config(const std::string& name, const json& j) {
    const fs::path dir = fs::temp_directory_path() / "fracperim_cli_test";
    fs::create_directories(dir);
    const fs::path p = dir / name;
    std::ofstream f(p);
    f << j.dump(2);
    return p;
}

json reference_1d_config() {
    return {
        {"lattice", {{"dim", 1}, {"h", 1.0}, {"extent", {{-2, 2}}}, {"s", 0.5}}},
        {"regions", {{"omega", {{"type", "cells"}, {"cells", {{0}}}}}}},
        {"omega", "omega"},
        {"datum",
         {{"type", "set"}, {"full", {{"type", "cells"}, {"cells", {{0}, {1}}}}}}},
    };
}

}  // namespace

TEST_CASE("energy command reproduces the reference total") {
    const fs::path cfg = write_config("energy.json", reference_1d_config());
    const RunResult r = run_cli("energy --config " + cfg.string());
    REQUIRE(r.exit_code == 0);
    const json out = json::parse(r.out);
    REQUIRE(out.at("total").get<double>() == Catch::Approx(1.7071068).epsilon(1e-6));
}

TEST_CASE("empty set datum has zero energy") {
    json cfg = reference_1d_config();
    cfg["datum"] = {{"type", "set"}};
    const fs::path path = write_config("energy_empty.json", cfg);
    const RunResult r = run_cli("energy --config " + path.string());
    REQUIRE(r.exit_code == 0);
    REQUIRE(json::parse(r.out).at("total").get<double>() == 0.0);
}

TEST_CASE("malformed config exits with code 2") {
    const fs::path dir = fs::temp_directory_path() / "fracperim_cli_test";
    fs::create_directories(dir);
    const fs::path bad = dir / "bad.json";
    std::ofstream(bad) << "{ not json";
    const RunResult r = run_cli("energy --config " + bad.string());
    REQUIRE(r.exit_code == 2);
    REQUIRE(r.err.find("config error") != std::string::npos);

    const RunResult missing = run_cli("energy");
    REQUIRE(missing.exit_code == 2);
}

TEST_CASE("minimise command on the reference instance") {
    json cfg = reference_1d_config();
    cfg["datum"] = {{"type", "set"},
                    {"full", {{"type", "cells"}, {"cells", {{1}}}}},
                    {"exterior_only", true}};
    const fs::path path = write_config("minimise.json", cfg);
    const RunResult r = run_cli("minimise --config " + path.string());
    REQUIRE(r.exit_code == 0);
    const json out = json::parse(r.out);
    REQUIRE(out.at("optimal_value").get<double>() == Catch::Approx(1.0).epsilon(1e-9));
    REQUIRE(out.at("minimal_set").at("cells").size() == 1);  // only the datum cell
    REQUIRE(out.at("maximal_set").at("cells").size() == 1);
}

TEST_CASE("minimise with an empty omega echoes the datum") {
    json cfg = reference_1d_config();
    cfg["regions"]["omega"] = {{"type", "cells"}, {"cells", json::array()}};
    cfg["datum"] = {{"type", "set"}, {"full", {{"type", "cells"}, {"cells", {{1}}}}}};
    const fs::path path = write_config("minimise_empty.json", cfg);
    const RunResult r = run_cli("minimise --config " + path.string());
    REQUIRE(r.exit_code == 0);
    const json out = json::parse(r.out);
    REQUIRE(out.at("optimal_value").get<double>() == 0.0);
    REQUIRE(out.at("minimal_set").at("cells").size() == 1);
    REQUIRE(out.at("minimal_set").at("cells")[0][0] == 1);
}

TEST_CASE("levelset command emits a manifest and the constant function") {
    json cfg = {
        {"lattice", {{"dim", 1}, {"h", 1.0}, {"extent", {{-4, 4}}}, {"s", 0.5}}},
        {"regions", {{"omega", {{"type", "cells"}, {"cells", {{0}}}}}}},
        {"omega", "omega"},
        {"datum",
         {{"type", "function"},
          {"default", 1.5},
          {"ambient_value", 0.0}}},
    };
    const fs::path path = write_config("levelset.json", cfg);
    const RunResult r = run_cli("levelset --config " + path.string());
    REQUIRE(r.exit_code == 0);
    const json out = json::parse(r.out);
    REQUIRE(out.at("thresholds").size() == 1);
    // constant ring datum: u == 1.5 on omega
    const json& values = out.at("function").at("values");
    REQUIRE(values[4].get<double>() == 1.5);

    SECTION("two-valued datum produces two manifest entries") {
        json cfg2 = cfg;
        cfg2["datum"]["layers"] = {{{"region", {{"type", "cells"}, {"cells", {{2}}}}},
                                    {"value", 2.0}}};
        const fs::path p2 = write_config("levelset2.json", cfg2);
        const RunResult r2 = run_cli("levelset --config " + p2.string());
        REQUIRE(r2.exit_code == 0);
        REQUIRE(json::parse(r2.out).at("thresholds").size() == 2);
    }
    SECTION("injected nesting fault exits with code 3") {
        json cfg3 = cfg;
        cfg3["datum"]["layers"] = {{{"region", {{"type", "cells"}, {"cells", {{2}}}}},
                                    {"value", 2.0}}};
        const fs::path p3 = write_config("levelset3.json", cfg3);
        const RunResult r3 =
            run_cli("levelset --config " + p3.string() + " --inject-fault nesting");
        REQUIRE(r3.exit_code == 3);
        REQUIRE(r3.err.find("invariant") != std::string::npos);
    }
}

TEST_CASE("verify command reports suite tallies") {
    const fs::path cfg = write_config(
        "verify.json",
        {{"verify",
          {{"coarea", 5}, {"submodularity", 5}, {"oracle", 3}, {"closure", 2},
           {"ster", 1}, {"splitting", 5}, {"cutoff", 1}}}});
    const RunResult r = run_cli("verify --config " + cfg.string() + " --seed 7");
    REQUIRE(r.exit_code == 0);
    const json out = json::parse(r.out);
    REQUIRE(out.at("failed").get<int>() == 0);
    REQUIRE(out.at("seed").get<int>() == 7);
    REQUIRE(out.at("suites").contains("oracle_equivalence"));

    SECTION("the seed changes instances but not verdicts") {
        const RunResult r2 = run_cli("verify --config " + cfg.string() + " --seed 8");
        REQUIRE(r2.exit_code == 0);
        REQUIRE(json::parse(r2.out).at("failed").get<int>() == 0);
    }
}

TEST_CASE("verify runs with built-in defaults when no config is given") {
    const RunResult r = run_cli("verify --seed 3");
    REQUIRE(r.exit_code == 0);
    REQUIRE(json::parse(r.out).at("failed").get<int>() == 0);
}

TEST_CASE("yinyang command emits the reference CSV") {
    json cfg = {
        {"lattice", {{"dim", 1}, {"h", 1.0}, {"extent", {{-3, 3}}}, {"s", 0.5}}},
        {"regions", {{"omega", {{"type", "cells"}, {"cells", {{0}}}}}}},
        {"omega", "omega"},
        {"experiment",
         {{"mode", "full_ring_empty_far"},
          {"widths_diam", {0.5, 1.5}},
          {"s_values", {0.5}}}},
    };
    const fs::path path = write_config("yinyang.json", cfg);
    const RunResult r = run_cli("yinyang --config " + path.string());
    REQUIRE(r.exit_code == 0);
    std::istringstream lines(r.out);
    std::string header, row1, row2;
    std::getline(lines, header);
    std::getline(lines, row1);
    std::getline(lines, row2);
    REQUIRE(header == "s,width_diam,filled_fraction,optimal_value,gap_bound,mode");
    REQUIRE(row1.find("0.5,0.5,0,0,") == 0);   // empty datum -> empty optimum
    REQUIRE(row2.rfind("0.5,1.5,1,", 0) == 0);  // full ring -> filled
}

TEST_CASE("sector command writes PGMs when asked") {
    const fs::path cfg =
        write_config("sector.json", {{"sector", {{"h", 0.5}, {"s", 0.5},
                                                 {"box_half_width", 3.0},
                                                 {"brute_force", false}}}});
    const fs::path outdir = fs::temp_directory_path() / "fracperim_cli_test" / "sector_out";
    fs::remove_all(outdir);
    const RunResult r = run_cli("sector --config " + cfg.string() + " --out " +
                                outdir.string());
    REQUIRE(r.exit_code == 0);
    const json out = json::parse(r.out);
    REQUIRE(out.contains("symmetric_difference_volume"));
    REQUIRE(fs::exists(outdir / "sector_minimal.pgm"));
    REQUIRE(fs::exists(outdir / "sector_maximal.pgm"));
}

TEST_CASE("bench command prints the timing schema") {
    const fs::path cfg = write_config(
        "bench.json", {{"bench", {{"sizes", {64}}, {"solve_sizes", {64}}}}});
    const RunResult r = run_cli("bench --config " + cfg.string());
    REQUIRE(r.exit_code == 0);
    std::istringstream lines(r.out);
    std::string header;
    std::getline(lines, header);
    REQUIRE(header == "stage,n_cells,millis");
    REQUIRE(r.out.find("kernel_fill,64,") != std::string::npos);
    REQUIRE(r.out.find("energy_eval,64,") != std::string::npos);
    REQUIRE(r.out.find("mincut_solve,64,") != std::string::npos);
}
