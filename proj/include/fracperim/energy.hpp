#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fracperim/kernel.hpp"
#include "fracperim/lattice.hpp"

namespace fracperim {

/// Compensated (Kahan) accumulator. All energy sums run through this in a
/// fixed cell-pair order so results are bit-stable across thread counts.
struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        const double y = x - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

enum class SetAmbient { Empty, Full };

/// Binary occupancy over the box plus the beyond-box mode; discretises a
/// measurable set E.
struct SetConfig {
    LatticeSpec spec;
    std::vector<std::uint8_t> occupancy;  // one entry per box cell
    SetAmbient ambient = SetAmbient::Empty;

    static SetConfig empty_set(const LatticeSpec& spec,
                               SetAmbient ambient = SetAmbient::Empty) {
        spec.validate();
        return {spec, std::vector<std::uint8_t>(std::size_t(spec.cell_count()), 0), ambient};
    }
    static SetConfig from_region(const LatticeSpec& spec, const Region& r,
                                 SetAmbient ambient = SetAmbient::Empty) {
        SetConfig e = empty_set(spec, ambient);
        for (CellId c : r) e.set(c, true);
        return e;
    }

    bool at(CellId c) const { return occupancy[std::size_t(spec.linear_index(c))] != 0; }
    void set(CellId c, bool v) { occupancy[std::size_t(spec.linear_index(c))] = v ? 1 : 0; }
    double ambient_indicator() const { return ambient == SetAmbient::Full ? 1.0 : 0.0; }

    Region support() const {
        std::vector<CellId> cells;
        for (std::int64_t i = 0; i < spec.cell_count(); ++i)
            if (occupancy[std::size_t(i)]) cells.push_back(spec.cell_at(i));
        return Region(std::move(cells));
    }

    bool operator==(const SetConfig&) const = default;
};

/// Real value per cell plus a constant ambient value; discretises a function
/// of the competitor class.
struct FuncConfig {
    LatticeSpec spec;
    std::vector<double> values;
    double ambient_value = 0.0;

    static FuncConfig constant(const LatticeSpec& spec, double v, double ambient = 0.0) {
        spec.validate();
        return {spec, std::vector<double>(std::size_t(spec.cell_count()), v), ambient};
    }

    double at(CellId c) const { return values[std::size_t(spec.linear_index(c))]; }
    void set(CellId c, double v) { values[std::size_t(spec.linear_index(c))] = v; }

    bool operator==(const FuncConfig&) const = default;
};

inline FuncConfig indicator(const SetConfig& e) {
    FuncConfig u{e.spec, std::vector<double>(e.occupancy.size(), 0.0),
                 e.ambient_indicator()};
    for (std::size_t i = 0; i < e.occupancy.size(); ++i)
        u.values[i] = e.occupancy[i] ? 1.0 : 0.0;
    return u;
}

/// Level set {u >= lambda}; the ambient mode follows the ambient value.
inline SetConfig level_set(const FuncConfig& u, double lambda) {
    SetConfig e = SetConfig::empty_set(
        u.spec, u.ambient_value >= lambda ? SetAmbient::Full : SetAmbient::Empty);
    for (std::size_t i = 0; i < u.values.size(); ++i)
        e.occupancy[i] = u.values[i] >= lambda ? 1 : 0;
    return e;
}

struct EnergyBreakdown {
    double local = 0.0;     // both cells in omega, unordered pairs counted once
    double nonlocal = 0.0;  // omega x (box \ omega)
    double ambient = 0.0;   // omega x beyond-box
    double total = 0.0;
};

struct EnergyOptions {
    // Boxed energies drop all beyond-box interactions; the default, making
    // every oracle example hand-computable.
    bool boxed = true;
};

namespace detail {

// Shared pair-sum engine; perimeter() and g_energy() must agree bit-for-bit
// on indicators, so both go through here.
inline EnergyBreakdown value_breakdown(const LatticeSpec& spec,
                                       const std::vector<double>& values,
                                       double ambient_ref, const Region& omega,
                                       const WeightTable& table,
                                       const EnergyOptions& opts) {
    if (!omega.inside_box(spec))
        throw std::invalid_argument("energy: omega not inside box");
    if (spec != table.spec())
        throw std::invalid_argument("energy: weight table built for another lattice");

    const auto& oc = omega.cells();
    const Region rest = complement_in_box(spec, omega);

    KahanSum local;
    for (std::size_t i = 0; i < oc.size(); ++i) {
        const double vi = values[std::size_t(spec.linear_index(oc[i]))];
        for (std::size_t j = i + 1; j < oc.size(); ++j) {
            const double vj = values[std::size_t(spec.linear_index(oc[j]))];
            if (vi != vj) local.add(table.weight(oc[i], oc[j]) * std::abs(vi - vj));
        }
    }

    KahanSum nonlocal;
    for (CellId x : oc) {
        const double vx = values[std::size_t(spec.linear_index(x))];
        for (CellId y : rest) {
            const double vy = values[std::size_t(spec.linear_index(y))];
            if (vx != vy) nonlocal.add(table.weight(x, y) * std::abs(vx - vy));
        }
    }

    KahanSum ambient;
    if (!opts.boxed) {
        for (CellId x : oc) {
            const double vx = values[std::size_t(spec.linear_index(x))];
            ambient.add(table.ambient_tail(x) * std::abs(vx - ambient_ref));
        }
    }

    EnergyBreakdown b;
    b.local = local.value();
    b.nonlocal = nonlocal.value();
    b.ambient = ambient.value();
    b.total = b.local + b.nonlocal + b.ambient;
    return b;
}

}  // namespace detail

/// Discrete fractional perimeter of E relative to omega, split into local,
/// nonlocal and ambient contributions.
inline EnergyBreakdown perimeter(const SetConfig& e, const Region& omega,
                                 const WeightTable& table, const EnergyOptions& opts = {}) {
    std::vector<double> values(e.occupancy.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        values[i] = e.occupancy[i] ? 1.0 : 0.0;
    return detail::value_breakdown(e.spec, values, e.ambient_indicator(), omega, table,
                                   opts);
}

/// The W^{s,1}-type interaction energy of u over all pairs meeting omega.
inline EnergyBreakdown g_energy(const FuncConfig& u, const Region& omega,
                                const WeightTable& table, const EnergyOptions& opts = {}) {
    return detail::value_breakdown(u.spec, u.values, u.ambient_value, omega, table, opts);
}

/// Interaction of omega with |datum|: the part of the energy that every
/// competitor with the same exterior values shares.
inline double global_tail(const FuncConfig& u, const Region& omega,
                          const WeightTable& table, const EnergyOptions& opts = {}) {
    if (!omega.inside_box(u.spec))
        throw std::invalid_argument("global_tail: omega not inside box");
    const Region rest = complement_in_box(u.spec, omega);
    KahanSum t;
    for (CellId x : omega) {
        for (CellId y : rest) {
            const double vy = u.at(y);
            if (vy != 0.0) t.add(table.weight(x, y) * std::abs(vy));
        }
    }
    if (!opts.boxed && u.ambient_value != 0.0) {
        for (CellId x : omega) t.add(table.ambient_tail(x) * std::abs(u.ambient_value));
    }
    return t.value();
}

/// Renormalised energy: g_energy minus the global tail. May be negative.
inline double g_tilde(const FuncConfig& u, const Region& omega, const WeightTable& table,
                      const EnergyOptions& opts = {}) {
    return g_energy(u, omega, table, opts).total - global_tail(u, omega, table, opts);
}

struct LocalTail {
    std::vector<std::pair<CellId, double>> per_cell;  // one entry per omega cell
    double sum = 0.0;                                 // its L1(omega) norm
};

/// Per-cell interaction of omega with |phi| restricted to a ring.
inline LocalTail local_tail(const FuncConfig& phi, const Region& ring, const Region& omega,
                            const WeightTable& table) {
    if (!region_intersection(ring, omega).empty())
        throw std::invalid_argument("local_tail: ring intersects omega");
    LocalTail out;
    out.per_cell.reserve(omega.size());
    KahanSum total;
    for (CellId x : omega) {
        KahanSum cell;
        for (CellId y : ring) {
            const double vy = phi.at(y);
            if (vy != 0.0) cell.add(table.weight(x, y) * std::abs(vy));
        }
        out.per_cell.emplace_back(x, cell.value());
        total.add(cell.value());
    }
    out.sum = total.value();
    return out;
}

/// [u]_{W^{s,1}}-analogue: ordered pairs inside omega, i.e. twice the local
/// part of g_energy.
inline double seminorm(const FuncConfig& u, const Region& omega, const WeightTable& table) {
    EnergyOptions boxed{true};
    return 2.0 * g_energy(u, omega, table, boxed).local;
}

/// Pointwise positive/negative parts, ambient value included.
inline std::pair<FuncConfig, FuncConfig> split_parts(const FuncConfig& u) {
    FuncConfig plus = u, minus = u;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        plus.values[i] = std::max(u.values[i], 0.0);
        minus.values[i] = std::min(u.values[i], 0.0);
    }
    plus.ambient_value = std::max(u.ambient_value, 0.0);
    minus.ambient_value = std::min(u.ambient_value, 0.0);
    return {std::move(plus), std::move(minus)};
}

/// min{eps, max{u - lambda + sqrt(eps), 0}} / eps, applied pointwise; values
/// land in [0,1].
inline FuncConfig cutoff(const FuncConfig& u, double lambda, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("cutoff: eps must be > 0");
    const double root = std::sqrt(eps);
    auto clip = [&](double v) {
        return std::min(eps, std::max(v - lambda + root, 0.0)) / eps;
    };
    FuncConfig out = u;
    for (double& v : out.values) v = clip(v);
    out.ambient_value = clip(u.ambient_value);
    return out;
}

struct CoareaResult {
    double lhs = 0.0;  // g_energy(u, omega).total
    double rhs = 0.0;  // sum over the sorted value grid of gap * level perimeter
};

/// Discrete co-area identity: the energy of u equals the grid-weighted sum of
/// its level-set perimeters. Exact up to floating round-off; the ambient
/// value is always part of the grid so arbitrary constants are handled.
inline CoareaResult coarea_check(const FuncConfig& u, const Region& omega,
                                 const WeightTable& table, const EnergyOptions& opts = {}) {
    CoareaResult r;
    r.lhs = g_energy(u, omega, table, opts).total;

    std::vector<double> grid = u.values;
    if (!opts.boxed) grid.push_back(u.ambient_value);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    KahanSum rhs;
    for (std::size_t k = 1; k < grid.size(); ++k) {
        const SetConfig level = level_set(u, grid[k]);
        rhs.add((grid[k] - grid[k - 1]) * perimeter(level, omega, table, opts).total);
    }
    r.rhs = rhs.value();
    return r;
}

}  // namespace fracperim
