#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fracperim/energy.hpp"
#include "fracperim/kernel.hpp"
#include "fracperim/lattice.hpp"
#include "fracperim/maxflow.hpp"
#include "fracperim/parallel.hpp"

namespace fracperim {

/// Loud failure of something the theory forbids (solver bug territory);
/// mapped to a dedicated exit code by the CLI.
struct invariant_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr double kDefaultCutScale = 4294967296.0;  // 2^32
constexpr double kMinCutScale = 1048576.0;         // 2^20

/// Binary submodular minimisation instance: per-free-cell label costs plus
/// symmetric pairwise couplings, with the quantization bookkeeping needed to
/// audit the min-cut reduction.
///
/// Quantization happens per elementary weight: every w(x,y) and tail weight
/// is rounded once at a table-intrinsic scale and the integer images are
/// summed. Integer sums are order-independent, and two configurations whose
/// real energies coincide through a weight-multiset bijection stay exactly
/// tied after quantization, so the minimal/maximal cuts really realise the
/// intersection/union of all optima.
struct CutProblem {
    LatticeSpec spec;
    Region omega;     // free cells
    SetConfig datum;  // authoritative outside omega
    EnergyOptions opts;
    std::vector<double> cost_if_0;  // real sums per free cell, omega order
    std::vector<double> cost_if_1;
    std::vector<std::int64_t> qcost_if_0;  // sums of rounded elementary weights
    std::vector<std::int64_t> qcost_if_1;
    std::vector<double> pairwise;  // packed upper triangle, i < j in omega order
    double scale_factor = 0.0;     // S: elementary capacity = llround(w * S)
    double gap_bound = 0.0;        // <= term_count / (2 S)
    std::int64_t term_count = 0;   // elementary terms a configuration can pay

    std::size_t pair_index(std::size_t i, std::size_t j) const {
        const std::size_t n = omega.size();
        return i * n - i * (i + 1) / 2 + (j - i - 1);
    }
};

struct MinimiserPair {
    double optimal_value = 0.0;  // unquantized energy of minimal_set
    SetConfig minimal_set;
    SetConfig maximal_set;
    double gap_bound = 0.0;
};

/// The scale factor depends only on the weight table and the ambient setup,
/// never on the datum, so every problem over the same lattice quantizes
/// identically (monotone families stay monotone after rounding).
inline double quantization_factor(const WeightTable& table, const EnergyOptions& opts,
                                  double scale) {
    double max_term = table.max_weight();
    if (!opts.boxed && table.ambient_mode() == AmbientMode::Full)
        for (CellId c : build_box(table.spec()))
            max_term = std::max(max_term, table.ambient_tail(c));
    return max_term > 0.0 ? scale / max_term : scale;
}

/// Assembles label costs from the datum: cost_if_1 collects disagreement with
/// empty exterior cells, cost_if_0 with full ones; ambient tails join the
/// side matching the beyond-box indicator.
inline CutProblem build_cut_problem(const SetConfig& datum, const Region& omega,
                                    const WeightTable& table, const EnergyOptions& opts = {},
                                    double scale = kDefaultCutScale, unsigned threads = 1) {
    const LatticeSpec& spec = datum.spec;
    if (!omega.inside_box(spec))
        throw std::invalid_argument("build_cut_problem: omega not inside box");
    if (!(scale >= kMinCutScale))
        throw std::invalid_argument("build_cut_problem: scale must be >= 2^20");

    CutProblem p;
    p.spec = spec;
    p.omega = omega;
    p.datum = datum;
    p.opts = opts;
    p.scale_factor = quantization_factor(table, opts, scale);

    const auto& free_cells = omega.cells();
    const std::size_t n = free_cells.size();
    const Region rest = complement_in_box(spec, omega);
    const double ambient_ref = datum.ambient_indicator();
    const double S = p.scale_factor;

    p.cost_if_0.assign(n, 0.0);
    p.cost_if_1.assign(n, 0.0);
    p.qcost_if_0.assign(n, 0);
    p.qcost_if_1.assign(n, 0);
    parallel_for_indexed(n, threads, [&](std::size_t i) {
        KahanSum c0, c1;
        std::int64_t q0 = 0, q1 = 0;
        for (CellId y : rest) {
            const double w = table.weight(free_cells[i], y);
            if (datum.at(y)) {
                c0.add(w);  // paid when the cell is labeled 0
                q0 += std::llround(w * S);
            } else {
                c1.add(w);  // paid when the cell is labeled 1
                q1 += std::llround(w * S);
            }
        }
        if (!opts.boxed) {
            const double t = table.ambient_tail(free_cells[i]);
            if (ambient_ref == 1.0) {
                c0.add(t);
                q0 += std::llround(t * S);
            } else {
                c1.add(t);
                q1 += std::llround(t * S);
            }
        }
        p.cost_if_0[i] = c0.value();
        p.cost_if_1[i] = c1.value();
        p.qcost_if_0[i] = q0;
        p.qcost_if_1[i] = q1;
    });

    p.pairwise.assign(n * (n - 1) / 2, 0.0);
    parallel_for_indexed(n, threads, [&](std::size_t i) {
        for (std::size_t j = i + 1; j < n; ++j)
            p.pairwise[p.pair_index(i, j)] = table.weight(free_cells[i], free_cells[j]);
    });

    // one elementary term per unary interaction a configuration can pay,
    // plus every pairwise coupling
    p.term_count = std::int64_t(n) * std::int64_t(rest.size() + (opts.boxed ? 0 : 1)) +
                   std::int64_t(p.pairwise.size());
    double total_caps = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        total_caps += double(p.qcost_if_0[i]) + double(p.qcost_if_1[i]);
    total_caps += 2.0 * double(p.pairwise.size()) * scale;
    if (total_caps > 4.0e18)
        throw std::invalid_argument("build_cut_problem: scale overflow vs term count");
    p.gap_bound = p.term_count > 0 ? double(p.term_count) / (2.0 * S) : 0.0;
    return p;
}

/// Exact minimiser of the quantized energy via max-flow. Source side = label
/// 1; the minimal and maximal optimal sets come from residual reachability
/// and realise the intersection and union of all quantized optima.
inline MinimiserPair solve_mincut(const CutProblem& p, const WeightTable& table) {
    const auto& free_cells = p.omega.cells();
    const int n = int(free_cells.size());

    MinimiserPair out;
    out.gap_bound = p.gap_bound;
    out.minimal_set = p.datum;
    out.maximal_set = p.datum;

    if (n > 0) {
        MaxFlow flow(n + 2);
        const int src = n, snk = n + 1;
        for (int i = 0; i < n; ++i) {
            // paying cost_if_0 <=> node ends on the sink side
            const std::int64_t c0 = p.qcost_if_0[std::size_t(i)];
            const std::int64_t c1 = p.qcost_if_1[std::size_t(i)];
            if (c0 > 0) flow.add_edge(src, i, c0, 0);
            if (c1 > 0) flow.add_edge(i, snk, c1, 0);
        }
        for (std::size_t i = 0; i + 1 < std::size_t(n); ++i)
            for (std::size_t j = i + 1; j < std::size_t(n); ++j) {
                const std::int64_t c =
                    std::llround(p.pairwise[p.pair_index(i, j)] * p.scale_factor);
                if (c > 0) flow.add_edge(int(i), int(j), c, c);
            }
        flow.solve(src, snk);
        const auto mn = flow.min_cut_source_side();
        const auto mx = flow.max_cut_source_side();
        for (int i = 0; i < n; ++i) {
            out.minimal_set.set(free_cells[std::size_t(i)], mn[std::size_t(i)] != 0);
            out.maximal_set.set(free_cells[std::size_t(i)], mx[std::size_t(i)] != 0);
        }
    }
    out.optimal_value = perimeter(out.minimal_set, p.omega, table, p.opts).total;
    return out;
}

inline MinimiserPair minimise_perimeter(const SetConfig& datum, const Region& omega,
                                        const WeightTable& table,
                                        const EnergyOptions& opts = {},
                                        double scale = kDefaultCutScale,
                                        unsigned threads = 1) {
    return solve_mincut(build_cut_problem(datum, omega, table, opts, scale, threads), table);
}

struct BruteForceResult {
    double value = 0.0;
    std::vector<SetConfig> optima;  // every configuration within the tie window
};

/// Exhaustive certifying oracle over all 2^n occupancies of omega. Gray-code
/// deltas with periodic resync keep it fast; candidates near the minimum are
/// re-evaluated exactly before being reported as optima.
inline BruteForceResult brute_force(const SetConfig& datum, const Region& omega,
                                    const WeightTable& table, const EnergyOptions& opts = {},
                                    std::size_t max_free = 24, double tie_rel = 1e-9) {
    const auto& free_cells = omega.cells();
    const std::size_t n = free_cells.size();
    if (n > max_free)
        throw std::invalid_argument("brute_force: too many free cells");
    if (n >= 63) throw std::invalid_argument("brute_force: free cell count unsupported");

    const CutProblem p = build_cut_problem(datum, omega, table, opts);

    auto exact_energy = [&](std::uint64_t bits) {
        KahanSum e;
        for (std::size_t i = 0; i < n; ++i)
            e.add((bits >> i) & 1 ? p.cost_if_1[i] : p.cost_if_0[i]);
        for (std::size_t i = 0; i + 1 < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (((bits >> i) & 1) != ((bits >> j) & 1))
                    e.add(p.pairwise[p.pair_index(i, j)]);
        return e.value();
    };

    auto flip_delta = [&](std::uint64_t bits, std::size_t k) {
        // energy change of flipping cell k away from its state in `bits`
        const bool was = (bits >> k) & 1;
        double d = was ? p.cost_if_0[k] - p.cost_if_1[k] : p.cost_if_1[k] - p.cost_if_0[k];
        for (std::size_t j = 0; j < n; ++j) {
            if (j == k) continue;
            const bool other = (bits >> j) & 1;
            const double w =
                j < k ? p.pairwise[p.pair_index(j, k)] : p.pairwise[p.pair_index(k, j)];
            d += (was == other) ? w : -w;
        }
        return d;
    };

    const std::uint64_t total = std::uint64_t(1) << n;
    double running = exact_energy(0);
    double best = running;
    std::vector<std::uint64_t> near;  // configs within a safety window of best
    near.push_back(0);
    const double safety = 1e-7;

    std::uint64_t bits = 0;
    for (std::uint64_t g = 1; g < total; ++g) {
        const std::size_t k = std::size_t(std::countr_zero(g));  // Gray-code flip
        running += flip_delta(bits, k);
        bits ^= std::uint64_t(1) << k;
        if ((g & 0xFFF) == 0) running = exact_energy(bits);  // kill drift
        const double window = safety * std::max(1.0, std::abs(best));
        if (running < best - window) {
            best = running;
            near.clear();
            near.push_back(bits);
        } else if (running <= best + window) {
            near.push_back(bits);
        }
    }

    // exact pass over the surviving candidates
    double true_best = std::numeric_limits<double>::infinity();
    std::vector<std::pair<std::uint64_t, double>> evaluated;
    evaluated.reserve(near.size());
    for (std::uint64_t b : near) {
        const double e = exact_energy(b);
        evaluated.emplace_back(b, e);
        true_best = std::min(true_best, e);
    }

    BruteForceResult out;
    out.value = true_best;
    const double tol = tie_rel * std::max(1.0, std::abs(true_best));
    for (const auto& [b, e] : evaluated) {
        if (e <= true_best + tol) {
            SetConfig cfg = datum;
            for (std::size_t i = 0; i < n; ++i)
                cfg.set(free_cells[i], ((b >> i) & 1) != 0);
            out.optima.push_back(std::move(cfg));
        }
    }
    return out;
}

/// Checks closure of a family of optima under union and intersection: every
/// pairwise union/intersection must again attain the optimal value.
inline bool lattice_closure_check(const std::vector<SetConfig>& optima, const Region& omega,
                                  const WeightTable& table, const EnergyOptions& opts = {},
                                  double tol_rel = 1e-9) {
    if (optima.empty()) return true;
    const LatticeSpec& spec = optima.front().spec;
    const Region rest = complement_in_box(spec, omega);
    for (const auto& e : optima) {
        if (e.ambient != optima.front().ambient)
            throw std::invalid_argument("lattice_closure_check: mismatched datum");
        for (CellId y : rest)
            if (e.at(y) != optima.front().at(y))
                throw std::invalid_argument("lattice_closure_check: mismatched datum");
    }

    double opt = std::numeric_limits<double>::infinity();
    for (const auto& e : optima)
        opt = std::min(opt, perimeter(e, omega, table, opts).total);
    const double tol = tol_rel * std::max(1.0, std::abs(opt));

    for (std::size_t a = 0; a < optima.size(); ++a) {
        for (std::size_t b = a + 1; b < optima.size(); ++b) {
            SetConfig uni = optima[a], inter = optima[a];
            for (std::int64_t i = 0; i < spec.cell_count(); ++i) {
                const std::uint8_t xa = optima[a].occupancy[std::size_t(i)];
                const std::uint8_t xb = optima[b].occupancy[std::size_t(i)];
                uni.occupancy[std::size_t(i)] = xa | xb;
                inter.occupancy[std::size_t(i)] = xa & xb;
            }
            if (perimeter(uni, omega, table, opts).total > opt + tol) return false;
            if (perimeter(inter, omega, table, opts).total > opt + tol) return false;
        }
    }
    return true;
}

}  // namespace fracperim
