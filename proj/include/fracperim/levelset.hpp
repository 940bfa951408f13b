#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracperim/energy.hpp"
#include "fracperim/optimise.hpp"
#include "fracperim/parallel.hpp"

namespace fracperim {

/// Maximal minimisers of the thresholded data {phi >= t}, one per distinct
/// datum value, nested decreasingly in t.
struct LevelFamily {
    std::vector<double> thresholds;  // strictly increasing
    std::vector<SetConfig> sets;     // sets[k] solves datum {phi >= thresholds[k]}

    std::size_t size() const { return thresholds.size(); }
};

/// Cell-wise containment of a in b over the whole box.
inline bool config_subset(const SetConfig& a, const SetConfig& b) {
    for (std::size_t i = 0; i < a.occupancy.size(); ++i)
        if (a.occupancy[i] && !b.occupancy[i]) return false;
    return true;
}

inline void validate_nesting(const LevelFamily& family) {
    for (std::size_t k = 1; k < family.size(); ++k)
        if (!config_subset(family.sets[k], family.sets[k - 1]))
            throw invariant_error("level family: nesting violated between thresholds " +
                                  std::to_string(family.thresholds[k - 1]) + " and " +
                                  std::to_string(family.thresholds[k]));
}

/// Distinct datum values of phi outside omega (plus the ambient value when
/// beyond-box interactions are on); these are the only thresholds at which
/// the level-set data change.
inline std::vector<double> datum_value_grid(const FuncConfig& phi, const Region& omega,
                                            const EnergyOptions& opts) {
    std::vector<double> grid;
    const Region rest = complement_in_box(phi.spec, omega);
    grid.reserve(rest.size() + 1);
    for (CellId y : rest) grid.push_back(phi.at(y));
    if (!opts.boxed) grid.push_back(phi.ambient_value);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

/// Solves one min-cut per distinct datum value, keeping the maximal optimal
/// set. The quantization factor is table-intrinsic, so the rounded costs are
/// monotone across thresholds and the nesting is guaranteed rather than
/// incidental; it is still checked loudly.
inline LevelFamily build_level_family(const FuncConfig& phi, const Region& omega,
                                      const WeightTable& table,
                                      const EnergyOptions& opts = {},
                                      double scale = kDefaultCutScale,
                                      unsigned threads = 1) {
    if (!omega.inside_box(phi.spec))
        throw std::invalid_argument("build_level_family: omega not inside box");
    LevelFamily family;
    family.thresholds = datum_value_grid(phi, omega, opts);
    if (family.thresholds.empty())
        throw std::invalid_argument("build_level_family: datum has no cells");

    family.sets.resize(family.thresholds.size());
    parallel_for_indexed(family.thresholds.size(), threads, [&](std::size_t k) {
        const CutProblem p =
            build_cut_problem(level_set(phi, family.thresholds[k]), omega, table, opts, scale);
        family.sets[k] = solve_mincut(p, table).maximal_set;
    });

    validate_nesting(family);
    return family;
}

/// u := phi outside omega; inside, the largest threshold whose set contains
/// the cell, falling back to the smallest datum value. The output attains
/// only datum values.
inline FuncConfig assemble_function(const LevelFamily& family, const FuncConfig& phi,
                                    const Region& omega) {
    validate_nesting(family);
    if (family.size() == 0)
        throw std::invalid_argument("assemble_function: empty family");
    FuncConfig u = phi;
    for (CellId x : omega) {
        double value = family.thresholds.front();
        for (std::size_t k = family.size(); k-- > 0;) {
            if (family.sets[k].at(x)) {
                value = family.thresholds[k];
                break;
            }
        }
        u.set(x, value);
    }
    return u;
}

struct LevelVerdict {
    double lambda = 0.0;
    double level_value = 0.0;    // perimeter of {u >= lambda}
    double optimal_value = 0.0;  // certified optimum for the same datum
    double gap_bound = 0.0;
    bool certified_by_brute_force = false;
    bool pass = false;
};

struct MinimalityReport {
    std::vector<LevelVerdict> levels;
    bool minimal = false;
};

/// Exact discrete level-set criterion: u is minimal iff each attained level
/// set attains the optimal perimeter for its own exterior datum. Certifies
/// with brute force when the free-cell count permits, min-cut otherwise.
inline MinimalityReport verify_function_minimality(const FuncConfig& u, const Region& omega,
                                                   const WeightTable& table,
                                                   const EnergyOptions& opts = {},
                                                   double scale = kDefaultCutScale,
                                                   std::size_t brute_force_limit = 0,
                                                   unsigned threads = 1) {
    std::vector<double> grid = u.values;
    if (!opts.boxed) grid.push_back(u.ambient_value);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    MinimalityReport report;
    report.levels.resize(grid.size());
    parallel_for_indexed(grid.size(), threads, [&](std::size_t k) {
        LevelVerdict v;
        v.lambda = grid[k];
        const SetConfig level = level_set(u, grid[k]);
        v.level_value = perimeter(level, omega, table, opts).total;
        if (brute_force_limit > 0 && omega.size() <= brute_force_limit) {
            v.optimal_value = brute_force(level, omega, table, opts, brute_force_limit).value;
            v.gap_bound = 0.0;
            v.certified_by_brute_force = true;
        } else {
            const MinimiserPair mp = minimise_perimeter(level, omega, table, opts, scale);
            v.optimal_value = mp.optimal_value;
            v.gap_bound = mp.gap_bound;
        }
        v.pass = v.level_value <=
                 v.optimal_value + v.gap_bound + 1e-9 * std::max(1.0, std::abs(v.optimal_value));
        report.levels[k] = v;
    });
    report.minimal = std::all_of(report.levels.begin(), report.levels.end(),
                                 [](const LevelVerdict& v) { return v.pass; });
    return report;
}

/// Direct competitor comparison; every competitor must share u_star's values
/// outside omega (and its ambient value).
inline bool competitor_test(const FuncConfig& u_star, const std::vector<FuncConfig>& competitors,
                            const Region& omega, const WeightTable& table,
                            const EnergyOptions& opts = {}, double tol_rel = 1e-9) {
    const Region rest = complement_in_box(u_star.spec, omega);
    for (const auto& v : competitors) {
        if (v.ambient_value != u_star.ambient_value)
            throw std::invalid_argument("competitor_test: competitor differs outside omega");
        for (CellId y : rest)
            if (v.at(y) != u_star.at(y))
                throw std::invalid_argument("competitor_test: competitor differs outside omega");
    }
    const double base = g_energy(u_star, omega, table, opts).total;
    const double tol = tol_rel * std::max(1.0, std::abs(base));
    for (const auto& v : competitors)
        if (base > g_energy(v, omega, table, opts).total + tol) return false;
    return true;
}

}  // namespace fracperim
