#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracperim {

/// Inclusive per-axis index range of the computational box.
struct AxisRange {
    std::int32_t lo = 0;
    std::int32_t hi = -1;

    bool empty() const { return hi < lo; }
    std::int64_t count() const { return empty() ? 0 : std::int64_t(hi) - lo + 1; }
    bool operator==(const AxisRange&) const = default;
};

/// Integer cell address. For dim=1 the second coordinate is fixed to 0.
struct CellId {
    std::int32_t x = 0;
    std::int32_t y = 0;

    auto operator<=>(const CellId&) const = default;
};

inline std::int64_t sq_offset_norm(CellId a, CellId b) {
    const std::int64_t dx = std::int64_t(a.x) - b.x;
    const std::int64_t dy = std::int64_t(a.y) - b.y;
    return dx * dx + dy * dy;
}

/// The discretisation universe: dimension, spacing, box extent and the
/// fractional exponent s. Cells are closed cubes of side h centered at
/// index*h; geometric membership is always decided by the center.
struct LatticeSpec {
    int dim = 1;
    double h = 1.0;
    std::array<AxisRange, 2> extent{};  // extent[1] unused when dim == 1
    double s = 0.5;

    void validate() const {
        if (dim != 1 && dim != 2)
            throw std::invalid_argument("LatticeSpec: dim must be 1 or 2");
        if (!(h > 0.0))
            throw std::invalid_argument("LatticeSpec: h must be positive");
        if (!(s > 0.0 && s < 1.0))
            throw std::invalid_argument("LatticeSpec: s must lie in (0,1)");
        for (int a = 0; a < dim; ++a)
            if (extent[a].empty())
                throw std::invalid_argument("LatticeSpec: empty extent on axis " +
                                            std::to_string(a));
    }

    AxisRange axis(int a) const { return a < dim ? extent[a] : AxisRange{0, 0}; }

    std::int64_t cell_count() const {
        std::int64_t n = 1;
        for (int a = 0; a < dim; ++a) n *= extent[a].count();
        return n;
    }

    bool in_box(CellId c) const {
        if (c.x < extent[0].lo || c.x > extent[0].hi) return false;
        if (dim == 2 && (c.y < extent[1].lo || c.y > extent[1].hi)) return false;
        return dim == 2 || c.y == 0;
    }

    // Row-major linear index over the box, x fastest.
    std::int64_t linear_index(CellId c) const {
        const std::int64_t nx = extent[0].count();
        const std::int64_t ix = c.x - extent[0].lo;
        if (dim == 1) return ix;
        return (std::int64_t(c.y) - extent[1].lo) * nx + ix;
    }

    CellId cell_at(std::int64_t idx) const {
        const std::int64_t nx = extent[0].count();
        if (dim == 1) return {std::int32_t(extent[0].lo + idx), 0};
        return {std::int32_t(extent[0].lo + idx % nx),
                std::int32_t(extent[1].lo + idx / nx)};
    }

    std::array<double, 2> center(CellId c) const { return {c.x * h, c.y * h}; }

    double center_distance(CellId a, CellId b) const {
        return h * std::sqrt(double(sq_offset_norm(a, b)));
    }

    // Physical box geometry (the union of the closed cells).
    std::array<double, 2> box_center() const {
        std::array<double, 2> c{0.0, 0.0};
        for (int a = 0; a < dim; ++a)
            c[a] = 0.5 * (extent[a].lo + extent[a].hi) * h;
        return c;
    }
    double box_half_width(int a) const { return 0.5 * extent[a].count() * h; }
    double box_half_width() const {
        double w = box_half_width(0);
        if (dim == 2) w = std::max(w, box_half_width(1));
        return w;
    }

    bool operator==(const LatticeSpec&) const = default;
};

/// A subset of box cells, kept sorted and duplicate-free so that the region
/// algebra is exact and iteration order is deterministic.
class Region {
public:
    Region() = default;
    explicit Region(std::vector<CellId> cells) : cells_(std::move(cells)) {
        std::sort(cells_.begin(), cells_.end());
        cells_.erase(std::unique(cells_.begin(), cells_.end()), cells_.end());
    }

    const std::vector<CellId>& cells() const { return cells_; }
    std::size_t size() const { return cells_.size(); }
    bool empty() const { return cells_.empty(); }

    bool contains(CellId c) const {
        return std::binary_search(cells_.begin(), cells_.end(), c);
    }

    bool is_subset_of(const Region& other) const {
        return std::includes(other.cells_.begin(), other.cells_.end(),
                             cells_.begin(), cells_.end());
    }

    bool inside_box(const LatticeSpec& spec) const {
        return std::all_of(cells_.begin(), cells_.end(),
                           [&](CellId c) { return spec.in_box(c); });
    }

    auto begin() const { return cells_.begin(); }
    auto end() const { return cells_.end(); }

    bool operator==(const Region&) const = default;

private:
    std::vector<CellId> cells_;
};

inline Region region_union(const Region& a, const Region& b) {
    std::vector<CellId> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return Region(std::move(out));
}

inline Region region_intersection(const Region& a, const Region& b) {
    std::vector<CellId> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::back_inserter(out));
    return Region(std::move(out));
}

inline Region region_difference(const Region& a, const Region& b) {
    std::vector<CellId> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
    return Region(std::move(out));
}

/// All cells of the box.
inline Region build_box(const LatticeSpec& spec) {
    spec.validate();
    std::vector<CellId> cells;
    cells.reserve(std::size_t(spec.cell_count()));
    const AxisRange ax = spec.extent[0];
    if (spec.dim == 1) {
        for (std::int32_t i = ax.lo; i <= ax.hi; ++i) cells.push_back({i, 0});
    } else {
        const AxisRange ay = spec.extent[1];
        for (std::int32_t j = ay.lo; j <= ay.hi; ++j)
            for (std::int32_t i = ax.lo; i <= ax.hi; ++i) cells.push_back({i, j});
    }
    return Region(std::move(cells));
}

inline Region complement_in_box(const LatticeSpec& spec, const Region& r) {
    return region_difference(build_box(spec), r);
}

/// Box cells whose centers lie strictly inside the Euclidean ball.
inline Region ball_region(const LatticeSpec& spec, std::array<double, 2> center,
                          double radius) {
    spec.validate();
    if (!(radius > 0.0)) throw std::invalid_argument("ball_region: radius must be > 0");
    std::vector<CellId> cells;
    for (CellId c : build_box(spec)) {
        const auto p = spec.center(c);
        const double dx = p[0] - center[0];
        const double dy = spec.dim == 2 ? p[1] - center[1] : 0.0;
        if (dx * dx + dy * dy < radius * radius) cells.push_back(c);
    }
    return Region(std::move(cells));
}

/// Box cells outside omega whose center lies within `width` of some omega
/// center. Discretises the ring Omega_width \ Omega.
inline Region ring_region(const LatticeSpec& spec, const Region& omega, double width) {
    spec.validate();
    if (!(width > 0.0)) throw std::invalid_argument("ring_region: width must be > 0");
    if (!omega.inside_box(spec))
        throw std::invalid_argument("ring_region: omega not inside box");
    const double w2 = (width / spec.h) * (width / spec.h);
    std::vector<CellId> cells;
    for (CellId c : build_box(spec)) {
        if (omega.contains(c)) continue;
        for (CellId o : omega) {
            if (double(sq_offset_norm(c, o)) < w2) {
                cells.push_back(c);
                break;
            }
        }
    }
    return Region(std::move(cells));
}

/// Maximum pairwise center distance plus one cell spacing, so a single cell
/// has diameter h.
inline double diameter(const Region& omega, const LatticeSpec& spec) {
    if (omega.empty()) throw std::invalid_argument("diameter: empty region");
    std::int64_t best = 0;
    const auto& cs = omega.cells();
    for (std::size_t i = 0; i < cs.size(); ++i)
        for (std::size_t j = i + 1; j < cs.size(); ++j)
            best = std::max(best, sq_offset_norm(cs[i], cs[j]));
    return spec.h * std::sqrt(double(best)) + spec.h;
}

}  // namespace fracperim
