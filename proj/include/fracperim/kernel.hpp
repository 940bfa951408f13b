#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "fracperim/lattice.hpp"

namespace fracperim {

enum class WeightStrategy { OnTheFly, CachedByOffset };

/// Convention for the datum beyond the computational box.
///   Empty: exterior indicator is 0 and contributes nothing (tail weight 0).
///   Full:  exterior indicator is 1; interactions use the quadrature tail.
///   None:  beyond-box interactions are forbidden; querying them is an error.
enum class AmbientMode { Empty, Full, None };

struct AmbientParams {
    double kappa = 4.0;  // shell expansion factor, >= 2
    int refine = 6;      // dyadic quadrature refinement levels, >= 0
};

/// Surface measure of the unit sphere in R^n (n = 1, 2).
inline double sphere_measure(int dim) {
    return dim == 1 ? 2.0 : 2.0 * std::numbers::pi;
}

/// Singular interaction weights w(a,b) = h^{2n} (h|a-b|)^{-(n+s)} between
/// distinct cells, plus the unary tail weights toward the region beyond the
/// box. Immutable once constructed; the offset cache makes lookups O(1).
class WeightTable {
public:
    WeightTable(LatticeSpec spec, WeightStrategy strategy = WeightStrategy::CachedByOffset,
                AmbientMode mode = AmbientMode::None, AmbientParams params = {})
        : spec_(std::move(spec)), strategy_(strategy), mode_(mode), params_(params) {
        spec_.validate();
        if (mode_ != AmbientMode::None) {
            if (!(params_.kappa >= 2.0))
                throw std::invalid_argument("WeightTable: kappa must be >= 2");
            if (params_.refine < 0)
                throw std::invalid_argument("WeightTable: refine must be >= 0");
        }
        exponent_ = -(spec_.dim + spec_.s);
        volume_sq_ = std::pow(spec_.h, 2.0 * spec_.dim);
        span_x_ = spec_.extent[0].count() - 1;
        span_y_ = spec_.dim == 2 ? spec_.extent[1].count() - 1 : 0;
        if (strategy_ == WeightStrategy::CachedByOffset) fill_cache();
        if (mode_ == AmbientMode::Full) fill_tails();
    }

    const LatticeSpec& spec() const { return spec_; }
    AmbientMode ambient_mode() const { return mode_; }
    const AmbientParams& ambient_params() const { return params_; }

    /// w(a,b); zero on the diagonal (a piecewise-constant function has no
    /// self-interaction within one cell).
    double weight(CellId a, CellId b) const {
        const std::int64_t d2 = sq_offset_norm(a, b);
        if (d2 == 0) return 0.0;
        if (strategy_ == WeightStrategy::CachedByOffset) {
            const std::int64_t dx = std::abs(std::int64_t(a.x) - b.x);
            const std::int64_t dy = std::abs(std::int64_t(a.y) - b.y);
            return cache_[cache_index(dx, dy)];
        }
        return raw_weight(d2);
    }

    /// Largest off-diagonal weight realisable inside the box (nearest
    /// neighbours at distance h).
    double max_weight() const { return raw_weight(1); }

    /// Approximate integral of the kernel from cell a over the beyond-box
    /// region: dyadic midpoint quadrature on the shell box..kappa*box plus the
    /// analytic remainder sigma(n) R^{-s}/s beyond the enclosing ball.
    double ambient_tail(CellId a) const {
        switch (mode_) {
            case AmbientMode::None:
                throw std::logic_error("ambient_tail: ambient interactions forbidden");
            case AmbientMode::Empty:
                return 0.0;
            case AmbientMode::Full:
                return tails_[std::size_t(spec_.linear_index(a))];
        }
        return 0.0;
    }

private:
    double raw_weight(std::int64_t d2) const {
        return volume_sq_ * std::pow(spec_.h * std::sqrt(double(d2)), exponent_);
    }

    std::size_t cache_index(std::int64_t adx, std::int64_t ady) const {
        return std::size_t(ady * (span_x_ + 1) + adx);
    }

    void fill_cache() {
        cache_.assign(std::size_t((span_x_ + 1) * (span_y_ + 1)), 0.0);
        for (std::int64_t dy = 0; dy <= span_y_; ++dy)
            for (std::int64_t dx = 0; dx <= span_x_; ++dx)
                if (dx != 0 || dy != 0)
                    cache_[cache_index(dx, dy)] = raw_weight(dx * dx + dy * dy);
    }

    double kernel_at(std::array<double, 2> x, std::array<double, 2> y) const {
        const double dx = x[0] - y[0];
        const double dy = spec_.dim == 2 ? x[1] - y[1] : 0.0;
        return std::pow(std::sqrt(dx * dx + dy * dy), exponent_);
    }

    // Midpoint rule over an axis-aligned rectangle split into 2^r pieces per
    // axis (an interval when dim == 1).
    double quad_rect(std::array<double, 2> x, std::array<double, 2> lo,
                     std::array<double, 2> hi) const {
        const std::int64_t m = std::int64_t(1) << params_.refine;
        double total = 0.0;
        if (spec_.dim == 1) {
            const double step = (hi[0] - lo[0]) / double(m);
            for (std::int64_t i = 0; i < m; ++i)
                total += step * kernel_at(x, {lo[0] + (i + 0.5) * step, 0.0});
        } else {
            const double sx = (hi[0] - lo[0]) / double(m);
            const double sy = (hi[1] - lo[1]) / double(m);
            for (std::int64_t j = 0; j < m; ++j)
                for (std::int64_t i = 0; i < m; ++i)
                    total += sx * sy *
                             kernel_at(x, {lo[0] + (i + 0.5) * sx, lo[1] + (j + 0.5) * sy});
        }
        return total;
    }

    double tail_at(CellId a) const {
        const auto x = spec_.center(a);
        const auto c = spec_.box_center();
        double shell = 0.0;
        if (spec_.dim == 1) {
            const double w = spec_.box_half_width(0);
            const double lo = c[0] - w, hi = c[0] + w;
            shell += quad_rect(x, {c[0] - params_.kappa * w, 0.0}, {lo, 0.0});
            shell += quad_rect(x, {hi, 0.0}, {c[0] + params_.kappa * w, 0.0});
        } else {
            const double wx = spec_.box_half_width(0), wy = spec_.box_half_width(1);
            const double Lx = c[0] - wx, Hx = c[0] + wx;
            const double Ly = c[1] - wy, Hy = c[1] + wy;
            const double lx = c[0] - params_.kappa * wx, hx = c[0] + params_.kappa * wx;
            const double ly = c[1] - params_.kappa * wy, hy = c[1] + params_.kappa * wy;
            // frame of 8 rectangles tiling (kappa*box) \ box
            shell += quad_rect(x, {lx, ly}, {Lx, Ly});  // corners
            shell += quad_rect(x, {Hx, ly}, {hx, Ly});
            shell += quad_rect(x, {lx, Hy}, {Lx, hy});
            shell += quad_rect(x, {Hx, Hy}, {hx, hy});
            shell += quad_rect(x, {Lx, ly}, {Hx, Ly});  // edges
            shell += quad_rect(x, {Lx, Hy}, {Hx, hy});
            shell += quad_rect(x, {lx, Ly}, {Lx, Hy});
            shell += quad_rect(x, {Hx, Ly}, {hx, Hy});
        }
        const double dx = x[0] - c[0];
        const double dy = spec_.dim == 2 ? x[1] - c[1] : 0.0;
        const double R = params_.kappa * spec_.box_half_width() +
                         std::sqrt(dx * dx + dy * dy);
        const double remainder =
            sphere_measure(spec_.dim) * std::pow(R, -spec_.s) / spec_.s;
        return shell + remainder;
    }

    void fill_tails() {
        const std::int64_t n = spec_.cell_count();
        tails_.resize(std::size_t(n));
        for (std::int64_t i = 0; i < n; ++i)
            tails_[std::size_t(i)] = tail_at(spec_.cell_at(i));
    }

    LatticeSpec spec_;
    WeightStrategy strategy_;
    AmbientMode mode_;
    AmbientParams params_;
    double exponent_ = 0.0;
    double volume_sq_ = 0.0;
    std::int64_t span_x_ = 0;
    std::int64_t span_y_ = 0;
    std::vector<double> cache_;
    std::vector<double> tails_;
};

}  // namespace fracperim
