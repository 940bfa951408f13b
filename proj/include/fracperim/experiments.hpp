#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracperim/energy.hpp"
#include "fracperim/levelset.hpp"
#include "fracperim/optimise.hpp"

namespace fracperim {

enum class YinYangMode { FullRingEmptyFar, EmptyRingFullFar };

inline const char* to_string(YinYangMode m) {
    return m == YinYangMode::FullRingEmptyFar ? "full_ring_empty_far" : "empty_ring_full_far";
}

struct SweepRecord {
    double s = 0.0;
    double width_diam = 0.0;       // ring width in units of diam(omega)
    double filled_fraction = 0.0;  // |maximal minimiser ∩ omega| / |omega|
    double optimal_value = 0.0;
    double gap_bound = 0.0;
    YinYangMode mode = YinYangMode::FullRingEmptyFar;
};

namespace detail {

// Width check: the ideal ring must not spill past the box, i.e. no cell of
// the infinite lattice just outside the box may lie within `width` of omega.
inline double max_ring_width(const LatticeSpec& spec, const Region& omega) {
    double best_sq = std::numeric_limits<double>::infinity();
    auto consider = [&](CellId outside) {
        for (CellId o : omega)
            best_sq = std::min(best_sq, double(sq_offset_norm(outside, o)));
    };
    const AxisRange ax = spec.extent[0];
    if (spec.dim == 1) {
        consider({ax.lo - 1, 0});
        consider({ax.hi + 1, 0});
    } else {
        const AxisRange ay = spec.extent[1];
        for (std::int32_t i = ax.lo - 1; i <= ax.hi + 1; ++i) {
            consider({i, ay.lo - 1});
            consider({i, ay.hi + 1});
        }
        for (std::int32_t j = ay.lo; j <= ay.hi; ++j) {
            consider({ax.lo - 1, j});
            consider({ax.hi + 1, j});
        }
    }
    return spec.h * std::sqrt(best_sq);
}

}  // namespace detail

/// One minimisation per (s, ring width): the datum is a full (or empty) ring
/// around omega with the opposite state beyond it; records how much of omega
/// the maximal minimiser fills.
inline std::vector<SweepRecord> yin_yang_sweep(const LatticeSpec& base_spec,
                                               const Region& omega,
                                               const std::vector<double>& widths_diam,
                                               const std::vector<double>& s_values,
                                               YinYangMode mode,
                                               const EnergyOptions& opts = {},
                                               double scale = kDefaultCutScale,
                                               unsigned threads = 1,
                                               AmbientParams ambient_params = {}) {
    base_spec.validate();
    if (omega.empty()) throw std::invalid_argument("yin_yang_sweep: empty omega");
    const double d = diameter(omega, base_spec);
    const double limit = detail::max_ring_width(base_spec, omega);
    for (double wd : widths_diam)
        if (wd * d >= limit)
            throw std::invalid_argument("yin_yang_sweep: ring of width " +
                                        std::to_string(wd) + " diam exceeds the box");

    std::vector<double> widths_sorted = widths_diam;
    std::sort(widths_sorted.begin(), widths_sorted.end());
    std::vector<double> s_sorted = s_values;
    std::sort(s_sorted.begin(), s_sorted.end());

    struct Job {
        double s, wd;
    };
    std::vector<Job> jobs;
    for (double s : s_sorted)
        for (double wd : widths_sorted) jobs.push_back({s, wd});

    std::vector<SweepRecord> records(jobs.size());
    parallel_for_indexed(jobs.size(), threads, [&](std::size_t k) {
        LatticeSpec spec = base_spec;
        spec.s = jobs[k].s;
        const WeightTable table(spec, WeightStrategy::CachedByOffset,
                                opts.boxed ? AmbientMode::None
                                           : (mode == YinYangMode::FullRingEmptyFar
                                                  ? AmbientMode::Empty
                                                  : AmbientMode::Full),
                                ambient_params);
        const Region ring = ring_region(spec, omega, jobs[k].wd * d);
        SetConfig datum = SetConfig::empty_set(
            spec, mode == YinYangMode::FullRingEmptyFar ? SetAmbient::Empty
                                                        : SetAmbient::Full);
        if (mode == YinYangMode::FullRingEmptyFar) {
            for (CellId c : ring) datum.set(c, true);
        } else {
            // empty ring, full beyond it (within the box)
            for (CellId c : complement_in_box(spec, region_union(omega, ring)))
                datum.set(c, true);
        }
        const MinimiserPair mp = minimise_perimeter(datum, omega, table, opts, scale);
        std::size_t filled = 0;
        for (CellId x : omega)
            if (mp.maximal_set.at(x)) ++filled;

        SweepRecord r;
        r.s = jobs[k].s;
        r.width_diam = jobs[k].wd;
        r.filled_fraction = double(filled) / double(omega.size());
        r.optimal_value = mp.optimal_value;
        r.gap_bound = mp.gap_bound;
        r.mode = mode;
        records[k] = r;
    });
    return records;
}

/// Least tested width (in diameters) at which the sweep saturates: fraction 1
/// in the full-ring mode, fraction 0 in the empty-ring mode.
inline std::optional<double> theta_empirical(const std::vector<SweepRecord>& records,
                                             double s) {
    std::optional<double> best;
    for (const auto& r : records) {
        if (r.s != s) continue;
        const bool saturated = r.mode == YinYangMode::FullRingEmptyFar
                                   ? r.filled_fraction == 1.0
                                   : r.filled_fraction == 0.0;
        if (saturated && (!best || r.width_diam < *best)) best = r.width_diam;
    }
    return best;
}

/// Lattice isometry: an orthogonal integer matrix acting on cell indices
/// (rotations by multiples of 90 degrees, reflections, and the identity).
struct LatticeIsometry {
    std::string name;
    std::array<std::array<int, 2>, 2> m{{{1, 0}, {0, 1}}};

    CellId apply(CellId c) const {
        return {m[0][0] * c.x + m[0][1] * c.y, m[1][0] * c.x + m[1][1] * c.y};
    }

    static LatticeIsometry identity() { return {"identity", {{{1, 0}, {0, 1}}}}; }
    static LatticeIsometry rotation90() { return {"rot90", {{{0, -1}, {1, 0}}}}; }
    static LatticeIsometry rotation180() { return {"rot180", {{{-1, 0}, {0, -1}}}}; }
    static LatticeIsometry reflect_x() { return {"reflect_x", {{{1, 0}, {0, -1}}}}; }
    static LatticeIsometry reflect_y() { return {"reflect_y", {{{-1, 0}, {0, 1}}}}; }
    static LatticeIsometry reflect_diag() { return {"reflect_diag", {{{0, 1}, {1, 0}}}}; }
};

inline Region transform_region(const Region& r, const LatticeIsometry& iso) {
    std::vector<CellId> cells;
    cells.reserve(r.size());
    for (CellId c : r) cells.push_back(iso.apply(c));
    return Region(std::move(cells));
}

inline SetConfig transform_config(const SetConfig& e, const LatticeIsometry& iso) {
    SetConfig out = e;
    for (std::int64_t i = 0; i < e.spec.cell_count(); ++i) {
        const CellId c = e.spec.cell_at(i);
        const CellId image = iso.apply(c);
        if (!e.spec.in_box(image))
            throw std::invalid_argument("transform_config: isometry leaves the box");
        out.set(image, e.at(c));
    }
    return out;
}

inline SetConfig complement_config(const SetConfig& e) {
    SetConfig out = e;
    for (auto& v : out.occupancy) v = v ? 0 : 1;
    out.ambient = e.ambient == SetAmbient::Full ? SetAmbient::Empty : SetAmbient::Full;
    return out;
}

struct SectorReport {
    MinimiserPair pair;
    double symmetric_difference_volume = 0.0;  // |minimal Δ maximal| * h^dim inside omega
    double minimal_energy = 0.0;
    double maximal_energy = 0.0;
    double rotated_complement_energy = 0.0;  // perimeter of R90(complement of minimal)
    std::size_t brute_force_optima = 0;      // 0 when brute force was skipped
    double brute_force_value = 0.0;
};

/// The plane-sector datum of the non-uniqueness construction: free disc of
/// radius 1, exterior cells full exactly where the product of the center
/// coordinates is positive.
inline SetConfig sector_datum(const LatticeSpec& spec, const Region& omega) {
    SetConfig datum = SetConfig::empty_set(spec, SetAmbient::Empty);
    for (CellId c : complement_in_box(spec, omega)) {
        const auto p = spec.center(c);
        if (p[0] * p[1] > 0.0) datum.set(c, true);
    }
    return datum;
}

inline SectorReport sector_nonuniqueness(double h, double s, double box_half_width = 6.0,
                                         const EnergyOptions& opts = {},
                                         double scale = kDefaultCutScale,
                                         bool run_brute_force = true, unsigned threads = 1) {
    const std::int32_t r = std::int32_t(std::llround(box_half_width / h));
    LatticeSpec spec{2, h, {AxisRange{-r, r}, AxisRange{-r, r}}, s};
    spec.validate();
    const Region omega = ball_region(spec, {0.0, 0.0}, 1.0);
    if (omega.empty() || complement_in_box(spec, omega).empty())
        throw std::invalid_argument(
            "sector_nonuniqueness: h too coarse for this box, no datum cells");
    const WeightTable table(spec, WeightStrategy::CachedByOffset,
                            opts.boxed ? AmbientMode::None : AmbientMode::Empty);
    const SetConfig datum = sector_datum(spec, omega);

    SectorReport report;
    report.pair = minimise_perimeter(datum, omega, table, opts, scale, threads);
    std::size_t symdiff = 0;
    for (CellId x : omega)
        if (report.pair.minimal_set.at(x) != report.pair.maximal_set.at(x)) ++symdiff;
    report.symmetric_difference_volume = double(symdiff) * std::pow(h, spec.dim);
    report.minimal_energy = perimeter(report.pair.minimal_set, omega, table, opts).total;
    report.maximal_energy = perimeter(report.pair.maximal_set, omega, table, opts).total;

    const SetConfig rotated =
        transform_config(complement_config(report.pair.minimal_set),
                         LatticeIsometry::rotation90());
    report.rotated_complement_energy = perimeter(rotated, omega, table, opts).total;

    if (run_brute_force && omega.size() <= 24) {
        const BruteForceResult bf = brute_force(datum, omega, table, opts, omega.size());
        report.brute_force_optima = bf.optima.size();
        report.brute_force_value = bf.value;
    }
    return report;
}

/// Constant-datum rigidity: datum == lambda on the ring (zero beyond it);
/// the level-set construction must reproduce the constant on omega.
inline bool constant_datum_check(const LatticeSpec& spec, const Region& omega, double lambda,
                                 double ring_width, const EnergyOptions& opts = {},
                                 double scale = kDefaultCutScale, unsigned threads = 1) {
    const WeightTable table(spec, WeightStrategy::CachedByOffset,
                            opts.boxed ? AmbientMode::None : AmbientMode::Empty);
    FuncConfig phi = FuncConfig::constant(spec, 0.0, 0.0);
    for (CellId c : ring_region(spec, omega, ring_width)) phi.set(c, lambda);
    const LevelFamily family = build_level_family(phi, omega, table, opts, scale, threads);
    const FuncConfig u = assemble_function(family, phi, omega);
    return std::all_of(omega.begin(), omega.end(),
                       [&](CellId x) { return u.at(x) == lambda; });
}

/// True iff the maximal minimiser is invariant under every group element.
/// Each isometry must preserve the box, omega and the datum.
inline bool symmetry_inheritance(const SetConfig& datum, const Region& omega,
                                 const std::vector<LatticeIsometry>& group,
                                 const WeightTable& table, const EnergyOptions& opts = {},
                                 double scale = kDefaultCutScale, unsigned threads = 1) {
    const LatticeSpec& spec = datum.spec;
    for (const auto& iso : group) {
        const Region box = build_box(spec);
        if (transform_region(box, iso) != box)
            throw std::invalid_argument("symmetry_inheritance: isometry " + iso.name +
                                        " does not preserve the box");
        if (transform_region(omega, iso) != omega)
            throw std::invalid_argument("symmetry_inheritance: isometry " + iso.name +
                                        " does not preserve omega");
        SetConfig image = transform_config(datum, iso);
        // only the exterior matters for the datum comparison
        for (CellId x : omega) image.set(x, datum.at(x));
        if (!(image == datum))
            throw std::invalid_argument("symmetry_inheritance: isometry " + iso.name +
                                        " does not preserve the datum");
    }
    const MinimiserPair mp = minimise_perimeter(datum, omega, table, opts, scale, threads);
    for (const auto& iso : group) {
        SetConfig image = transform_config(mp.maximal_set, iso);
        if (!(image == mp.maximal_set)) return false;
    }
    return true;
}

}  // namespace fracperim
