#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fracperim/experiments.hpp"
#include "fracperim/io.hpp"

using namespace fracperim;

namespace {

LatticeSpec spec_1d(std::int32_t lo, std::int32_t hi, double h = 1.0, double s = 0.5) {
    return LatticeSpec{1, h, {AxisRange{lo, hi}, AxisRange{}}, s};
}

}  // namespace

TEST_CASE("1-D yin-yang reference: full ring forces fill") {
    const LatticeSpec spec = spec_1d(-3, 3);
    const Region omega(std::vector<CellId>{{0, 0}});
    // width 1.5 diam -> ring {-1, 1}
    const auto records = yin_yang_sweep(spec, omega, {1.5}, {0.5},
                                        YinYangMode::FullRingEmptyFar);
    REQUIRE(records.size() == 1);
    const double fill_energy = 2.0 * (std::pow(2.0, -1.5) + std::pow(3.0, -1.5));
    REQUIRE(records[0].filled_fraction == 1.0);
    REQUIRE(records[0].optimal_value == Catch::Approx(fill_energy).epsilon(1e-6));

    SECTION("the emptied configuration costs exactly the two ring weights") {
        const WeightTable table(spec);
        SetConfig ring_only = SetConfig::empty_set(spec);
        ring_only.set({-1, 0}, true);
        ring_only.set({1, 0}, true);
        REQUIRE(perimeter(ring_only, omega, table).total ==
                Catch::Approx(2.0).epsilon(1e-12));
    }
}

TEST_CASE("1-D yin-yang reference: empty ring forces empty") {
    const LatticeSpec spec = spec_1d(-3, 3);
    const Region omega(std::vector<CellId>{{0, 0}});
    const auto records = yin_yang_sweep(spec, omega, {1.5}, {0.5},
                                        YinYangMode::EmptyRingFullFar);
    REQUIRE(records.size() == 1);
    const double empty_energy = 2.0 * (std::pow(2.0, -1.5) + std::pow(3.0, -1.5));
    REQUIRE(records[0].filled_fraction == 0.0);
    REQUIRE(records[0].optimal_value == Catch::Approx(empty_energy).epsilon(1e-6));
}

TEST_CASE("vanishing ring width leaves an empty optimum") {
    const LatticeSpec spec = spec_1d(-3, 3);
    const Region omega(std::vector<CellId>{{0, 0}});
    // width 0.5 diam = 0.5 < h: the ring holds no cells, the datum is empty
    const auto records = yin_yang_sweep(spec, omega, {0.5}, {0.5},
                                        YinYangMode::FullRingEmptyFar);
    REQUIRE(records[0].filled_fraction == 0.0);
    REQUIRE(records[0].optimal_value == 0.0);
}

TEST_CASE("rings larger than the box are rejected") {
    const LatticeSpec spec = spec_1d(-3, 3);
    const Region omega(std::vector<CellId>{{0, 0}});
    REQUIRE_THROWS_AS(yin_yang_sweep(spec, omega, {5.0}, {0.5},
                                     YinYangMode::FullRingEmptyFar),
                      std::invalid_argument);
}

TEST_CASE("filled fraction is monotone in ring width (small 2-D)") {
    LatticeSpec spec{2, 0.5, {AxisRange{-6, 6}, AxisRange{-6, 6}}, 0.5};
    const Region omega = ball_region(spec, {0.0, 0.0}, 1.0);
    const std::vector<double> widths{0.25, 0.5, 0.75, 1.0, 1.25, 1.5};
    const auto records = yin_yang_sweep(spec, omega, widths, {0.2, 0.5, 0.8},
                                        YinYangMode::FullRingEmptyFar);
    double prev = -1.0;
    double prev_s = -1.0;
    for (const auto& r : records) {
        if (r.s != prev_s) {
            prev = -1.0;
            prev_s = r.s;
        }
        REQUIRE(r.filled_fraction >= prev);
        prev = r.filled_fraction;
    }
    for (double s : {0.2, 0.5, 0.8}) {
        const auto theta = theta_empirical(records, s);
        REQUIRE(theta.has_value());
    }

    SECTION("empty-ring mode is the exact complement under boxed energies") {
        const auto dual = yin_yang_sweep(spec, omega, widths, {0.2, 0.5, 0.8},
                                         YinYangMode::EmptyRingFullFar);
        for (std::size_t k = 0; k < records.size(); ++k)
            REQUIRE(dual[k].filled_fraction ==
                    Catch::Approx(1.0 - records[k].filled_fraction).margin(1e-12));
    }
}

TEST_CASE("sector experiment report is internally consistent") {
    const SectorReport rep = sector_nonuniqueness(0.5, 0.5, 3.0);
    // perimeter is exactly invariant under rotation-plus-complement
    REQUIRE(rep.rotated_complement_energy ==
            Catch::Approx(rep.minimal_energy).epsilon(1e-9));
    REQUIRE(std::abs(rep.minimal_energy - rep.maximal_energy) <=
            2.0 * rep.pair.gap_bound + 1e-12);
    REQUIRE(rep.brute_force_optima >= 1);
    REQUIRE(rep.brute_force_value <=
            rep.minimal_energy + 1e-9 * std::max(1.0, rep.minimal_energy));
    // the min-cut value matches the exhaustive optimum
    REQUIRE(rep.pair.optimal_value ==
            Catch::Approx(rep.brute_force_value)
                .margin(rep.pair.gap_bound + 1e-9));

    REQUIRE_THROWS_AS(sector_nonuniqueness(10.0, 0.5, 4.0), std::invalid_argument);
}

TEST_CASE("sector datum follows the strict center rule") {
    LatticeSpec spec{2, 0.5, {AxisRange{-4, 4}, AxisRange{-4, 4}}, 0.5};
    const Region omega = ball_region(spec, {0.0, 0.0}, 1.0);
    const SetConfig datum = sector_datum(spec, omega);
    REQUIRE(datum.at({3, 3}));
    REQUIRE(datum.at({-3, -2}));
    REQUIRE_FALSE(datum.at({3, -3}));
    REQUIRE_FALSE(datum.at({3, 0}));  // axis cells are empty
    REQUIRE_FALSE(datum.at({0, -3}));
}

TEST_CASE("constant datum rigidity on a 1-D geometry") {
    const LatticeSpec spec = spec_1d(-6, 6);
    const Region omega(std::vector<CellId>{{-1, 0}, {0, 0}, {1, 0}});
    for (double lambda : {-2.5, 0.0, 1.0}) {
        CAPTURE(lambda);
        REQUIRE(constant_datum_check(spec, omega, lambda, 3.5));
    }
}

TEST_CASE("symmetry inheritance") {
    LatticeSpec spec{2, 0.5, {AxisRange{-4, 4}, AxisRange{-4, 4}}, 0.5};
    const Region omega = ball_region(spec, {0.0, 0.0}, 1.0);
    const WeightTable table(spec);

    SECTION("identity group is always satisfied") {
        const SetConfig datum = sector_datum(spec, omega);
        REQUIRE(symmetry_inheritance(datum, omega, {LatticeIsometry::identity()}, table));
    }
    SECTION("left half plane datum inherits the x-axis reflection") {
        SetConfig datum = SetConfig::empty_set(spec);
        for (CellId c : complement_in_box(spec, omega))
            if (spec.center(c)[0] < 0.0) datum.set(c, true);
        REQUIRE(symmetry_inheritance(datum, omega, {LatticeIsometry::reflect_x()}, table));
    }
    SECTION("sector datum inherits the 180-degree rotation and the swap") {
        const SetConfig datum = sector_datum(spec, omega);
        REQUIRE(symmetry_inheritance(
            datum, omega,
            {LatticeIsometry::rotation180(), LatticeIsometry::reflect_diag()}, table));
    }
    SECTION("non-preserving isometry is rejected") {
        SetConfig datum = SetConfig::empty_set(spec);
        datum.set({3, 1}, true);
        REQUIRE_THROWS_AS(
            symmetry_inheritance(datum, omega, {LatticeIsometry::rotation90()}, table),
            std::invalid_argument);
    }
}

TEST_CASE("sweep CSV schema") {
    SweepRecord r;
    r.s = 0.5;
    r.width_diam = 1.5;
    r.filled_fraction = 1.0;
    r.optimal_value = 1.25;
    r.gap_bound = 1e-7;
    const std::string csv = sweep_csv({r});
    REQUIRE(csv.rfind("s,width_diam,filled_fraction,optimal_value,gap_bound,mode\n", 0) ==
            0);
    REQUIRE(csv.find("full_ring_empty_far") != std::string::npos);
}
