#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fracperim/energy.hpp"
#include "fracperim/rng.hpp"
#include "fracperim/verify.hpp"

using namespace fracperim;

namespace {

LatticeSpec spec_1d(std::int32_t lo, std::int32_t hi, double h = 1.0, double s = 0.5) {
    return LatticeSpec{1, h, {AxisRange{lo, hi}, AxisRange{}}, s};
}

const double w2 = std::pow(2.0, -1.5);  // w(0,2) at h=1, s=0.5

}  // namespace

TEST_CASE("perimeter reproduces the hand sums") {
    const LatticeSpec spec = spec_1d(-2, 2);
    const WeightTable table(spec);
    const Region omega(std::vector<CellId>{{0, 0}});

    SetConfig empty = SetConfig::empty_set(spec);
    REQUIRE(perimeter(empty, omega, table).total == 0.0);

    SetConfig full = SetConfig::empty_set(spec, SetAmbient::Full);
    for (auto& v : full.occupancy) v = 1;
    const WeightTable table_full(spec, WeightStrategy::CachedByOffset, AmbientMode::Full);
    REQUIRE(perimeter(full, omega, table_full, EnergyOptions{false}).total == 0.0);

    SetConfig e = SetConfig::empty_set(spec);
    e.set({0, 0}, true);
    e.set({1, 0}, true);
    const EnergyBreakdown b = perimeter(e, omega, table);
    REQUIRE(b.total == Catch::Approx(1.0 + 2.0 * w2).epsilon(1e-14));
    REQUIRE(b.local == 0.0);
    REQUIRE(b.ambient == 0.0);
    REQUIRE(b.total == b.local + b.nonlocal + b.ambient);
}

TEST_CASE("empty set against a full ambient pays the tail") {
    const LatticeSpec spec = spec_1d(-2, 2);
    const WeightTable table(spec, WeightStrategy::CachedByOffset, AmbientMode::Full,
                            AmbientParams{4.0, 6});
    const Region omega(std::vector<CellId>{{0, 0}});
    SetConfig e = SetConfig::empty_set(spec, SetAmbient::Full);
    const EnergyBreakdown b = perimeter(e, omega, table, EnergyOptions{false});
    REQUIRE(b.local == 0.0);
    REQUIRE(b.nonlocal == 0.0);
    const double exact = 4.0 / std::sqrt(2.5);
    REQUIRE(std::abs(b.ambient - exact) / exact < 0.02);
}

TEST_CASE("g_energy on the reference function") {
    const LatticeSpec spec = spec_1d(-2, 2);
    const WeightTable table(spec);
    const Region omega(std::vector<CellId>{{0, 0}});

    REQUIRE(g_energy(FuncConfig::constant(spec, 3.0, 3.0), omega, table).total == 0.0);

    FuncConfig u = FuncConfig::constant(spec, 0.0, 0.0);
    u.set({0, 0}, 0.5);
    u.set({1, 0}, 1.0);
    const double expected = 0.5 * (1.0 + w2) + 0.5 + 0.5 * w2;
    REQUIRE(g_energy(u, omega, table).total == Catch::Approx(expected).epsilon(1e-14));

    SECTION("g_tilde subtracts the tail") {
        REQUIRE(g_tilde(u, omega, table) ==
                Catch::Approx(expected - 1.0).epsilon(1e-12));
        REQUIRE(g_tilde(FuncConfig::constant(spec, 0.0, 0.0), omega, table) == 0.0);
    }
    SECTION("global_tail counts |datum| only") {
        REQUIRE(global_tail(u, omega, table) == 1.0);  // w(0,1) * |1|
        REQUIRE(global_tail(FuncConfig::constant(spec, 0.0, 0.0), omega, table) == 0.0);
        FuncConfig scaled = u;
        for (auto& v : scaled.values) v *= 3.5;
        REQUIRE(global_tail(scaled, omega, table) ==
                Catch::Approx(3.5 * global_tail(u, omega, table)).epsilon(1e-12));
    }
    SECTION("indicator of omega with zero datum: g_tilde equals the perimeter") {
        FuncConfig chi = FuncConfig::constant(spec, 0.0, 0.0);
        chi.set({0, 0}, 1.0);
        SetConfig e = SetConfig::empty_set(spec);
        e.set({0, 0}, true);
        REQUIRE(g_tilde(chi, omega, table) == perimeter(e, omega, table).total);
    }
}

TEST_CASE("indicator consistency is exact") {
    Rng rng(21);
    for (int trial = 0; trial < 30; ++trial) {
        const LatticeSpec spec = testgen::random_spec(rng);
        const WeightTable table(spec);
        const Region omega = testgen::random_omega(rng, spec, 12);
        SetConfig e = testgen::random_set(rng, spec);
        e.ambient = SetAmbient::Empty;
        const EnergyBreakdown pe = perimeter(e, omega, table);
        const EnergyBreakdown ge = g_energy(indicator(e), omega, table);
        REQUIRE(pe.local == ge.local);
        REQUIRE(pe.nonlocal == ge.nonlocal);
        REQUIRE(pe.ambient == ge.ambient);
        REQUIRE(pe.total == ge.total);
    }
}

TEST_CASE("translation and scaling behaviour") {
    Rng rng(22);
    const LatticeSpec spec = spec_1d(-3, 3);
    const WeightTable table(spec);
    const Region omega(std::vector<CellId>{{0, 0}, {1, 0}});
    for (int trial = 0; trial < 20; ++trial) {
        FuncConfig u = testgen::random_func(rng, spec);
        FuncConfig v = u;
        // competitors share exterior values; perturb inside omega only
        v.set({0, 0}, u.at({0, 0}) + rng.next_double());
        v.set({1, 0}, u.at({1, 0}) - rng.next_double());

        const double c = 2.0 * rng.next_double() - 1.0;
        FuncConfig uc = u, vc = v;
        for (auto& x : uc.values) x += c;
        for (auto& x : vc.values) x += c;
        uc.ambient_value += c;
        vc.ambient_value += c;

        const double base = g_energy(u, omega, table).total - g_energy(v, omega, table).total;
        const double shifted =
            g_energy(uc, omega, table).total - g_energy(vc, omega, table).total;
        REQUIRE(std::abs(base - shifted) <= 1e-10 * std::max(1.0, std::abs(base)));

        const double m = 4.0 * rng.next_double() - 2.0;
        FuncConfig um = u;
        for (auto& x : um.values) x *= m;
        um.ambient_value *= m;
        const EnergyBreakdown gu = g_energy(u, omega, table);
        const EnergyBreakdown gm = g_energy(um, omega, table);
        REQUIRE(gm.total ==
                Catch::Approx(std::abs(m) * gu.total).margin(1e-12).epsilon(1e-10));
        REQUIRE(gm.local ==
                Catch::Approx(std::abs(m) * gu.local).margin(1e-12).epsilon(1e-10));
    }
}

TEST_CASE("seminorm counts ordered pairs") {
    const LatticeSpec spec = spec_1d(-2, 2);
    const WeightTable table(spec);
    REQUIRE(seminorm(FuncConfig::constant(spec, 7.0), build_box(spec), table) == 0.0);
    FuncConfig u = FuncConfig::constant(spec, 0.0);
    u.set({1, 0}, 1.0);
    REQUIRE(seminorm(u, Region(std::vector<CellId>{{0, 0}}), table) == 0.0);
    REQUIRE(seminorm(u, Region(std::vector<CellId>{{0, 0}, {1, 0}}), table) == 2.0);
}

TEST_CASE("local_tail sums ring interactions") {
    const LatticeSpec spec = spec_1d(-2, 2);
    const WeightTable table(spec);
    const Region omega(std::vector<CellId>{{0, 0}});

    FuncConfig zero = FuncConfig::constant(spec, 0.0);
    const Region ring(std::vector<CellId>{{-1, 0}, {1, 0}});
    REQUIRE(local_tail(zero, ring, omega, table).sum == 0.0);

    FuncConfig ones = FuncConfig::constant(spec, 1.0);
    const LocalTail lt = local_tail(ones, ring, omega, table);
    REQUIRE(lt.sum == 2.0);
    REQUIRE(lt.per_cell.size() == 1);
    REQUIRE(lt.per_cell[0].second == 2.0);

    const Region outer(std::vector<CellId>{{-2, 0}, {2, 0}});
    REQUIRE(local_tail(ones, outer, omega, table).sum ==
            Catch::Approx(2.0 * w2).epsilon(1e-14));

    REQUIRE_THROWS_AS(local_tail(ones, region_union(ring, omega), omega, table),
                      std::invalid_argument);
}

TEST_CASE("split_parts and cutoff behave pointwise") {
    const LatticeSpec spec = spec_1d(-2, 2);
    FuncConfig u = FuncConfig::constant(spec, 0.0, -1.0);
    u.set({-1, 0}, 2.0);
    u.set({0, 0}, -3.0);

    const auto [plus, minus] = split_parts(u);
    REQUIRE(plus.at({-1, 0}) == 2.0);
    REQUIRE(minus.at({-1, 0}) == 0.0);
    REQUIRE(plus.at({0, 0}) == 0.0);
    REQUIRE(minus.at({0, 0}) == -3.0);
    REQUIRE(plus.ambient_value == 0.0);
    REQUIRE(minus.ambient_value == -1.0);
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        REQUIRE(plus.values[i] + minus.values[i] == u.values[i]);
        REQUIRE(plus.values[i] - minus.values[i] == std::abs(u.values[i]));
    }

    FuncConfig nonneg = FuncConfig::constant(spec, 1.5, 0.5);
    const auto [p2, m2] = split_parts(nonneg);
    REQUIRE(p2 == nonneg);
    REQUIRE(m2 == FuncConfig::constant(spec, 0.0, 0.0));

    SECTION("cutoff saturation") {
        const double eps = 0.25, lambda = 1.0;
        FuncConfig f = FuncConfig::constant(spec, lambda - std::sqrt(eps) + eps, 5.0);
        const FuncConfig hi = cutoff(f, lambda, eps);
        for (double v : hi.values) REQUIRE(v == 1.0);

        FuncConfig g = FuncConfig::constant(spec, lambda);
        REQUIRE(cutoff(g, lambda, eps).values[0] == 1.0);  // min{eps, 0.5}/eps

        FuncConfig l = FuncConfig::constant(spec, lambda - std::sqrt(eps));
        REQUIRE(cutoff(l, lambda, eps).values[0] == 0.0);

        REQUIRE_THROWS_AS(cutoff(g, lambda, 0.0), std::invalid_argument);
        Rng rng(5);
        for (int t = 0; t < 20; ++t) {
            const FuncConfig r = testgen::random_func(rng, spec);
            const FuncConfig c = cutoff(r, rng.next_double(), 0.1 + rng.next_double());
            for (double v : c.values) {
                REQUIRE(v >= 0.0);
                REQUIRE(v <= 1.0);
            }
        }
    }
}

TEST_CASE("splitting identity for g_tilde") {
    Rng rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const LatticeSpec spec = testgen::random_spec(rng);
        const WeightTable table(spec);
        const Region omega = testgen::random_omega(rng, spec, 10);
        const FuncConfig u = testgen::random_func(rng, spec);
        const auto [plus, minus] = split_parts(u);
        const double whole = g_tilde(u, omega, table);
        const double parts = g_tilde(plus, omega, table) + g_tilde(minus, omega, table);
        REQUIRE(std::abs(whole - parts) <= 1e-10 * std::max(1.0, std::abs(whole)));
    }
}

TEST_CASE("coarea identity") {
    const LatticeSpec spec = spec_1d(-2, 2);
    const WeightTable table(spec);
    const Region omega(std::vector<CellId>{{0, 0}});

    SECTION("two-valued functions reduce to one level") {
        FuncConfig u = FuncConfig::constant(spec, 0.0);
        u.set({0, 0}, 1.0);
        u.set({2, 0}, 1.0);
        const CoareaResult c = coarea_check(u, omega, table);
        const double per = perimeter(level_set(u, 1.0), omega, table).total;
        REQUIRE(c.rhs == Catch::Approx(per).epsilon(1e-14));
        REQUIRE(c.lhs == Catch::Approx(c.rhs).epsilon(1e-12));
    }
    SECTION("the reference function decomposes into two levels") {
        FuncConfig u = FuncConfig::constant(spec, 0.0);
        u.set({0, 0}, 0.5);
        u.set({1, 0}, 1.0);
        const CoareaResult c = coarea_check(u, omega, table);
        REQUIRE(c.lhs == Catch::Approx(0.5 * (1.0 + 2.0 * w2) + 0.5).epsilon(1e-14));
        REQUIRE(std::abs(c.lhs - c.rhs) <= 1e-10 * std::max(1.0, c.lhs));
    }
    SECTION("random property") {
        Rng rng(41);
        for (int trial = 0; trial < 60; ++trial) {
            const LatticeSpec rspec = testgen::random_spec(rng);
            const WeightTable rtable(rspec);
            const Region romega = testgen::random_omega(rng, rspec, 10);
            const FuncConfig u = testgen::random_func(rng, rspec);
            const CoareaResult c = coarea_check(u, romega, rtable);
            REQUIRE(std::abs(c.lhs - c.rhs) <= 1e-10 * std::max(1.0, c.lhs));
        }
    }
}

TEST_CASE("layer-cake identity on the value grid") {
    Rng rng(51);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> grid;
        const int m = int(rng.next_int(2, 7));
        for (int i = 0; i < m; ++i) grid.push_back(4.0 * rng.next_double() - 2.0);
        std::sort(grid.begin(), grid.end());
        grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
        const double a = grid[std::size_t(rng.next_int(0, std::int64_t(grid.size()) - 1))];
        const double b = grid[std::size_t(rng.next_int(0, std::int64_t(grid.size()) - 1))];
        double sum = 0.0;
        for (std::size_t k = 1; k < grid.size(); ++k)
            sum += (grid[k] - grid[k - 1]) *
                   std::abs(double(a >= grid[k]) - double(b >= grid[k]));
        REQUIRE(sum == Catch::Approx(std::abs(a - b)).margin(1e-12));
    }
}

TEST_CASE("submodularity of the perimeter") {
    Rng rng(61);
    const SuiteResult r = suite_submodularity(rng, 100);
    REQUIRE(r.failed == 0);
}

TEST_CASE("energy rejects omega outside the box") {
    const LatticeSpec spec = spec_1d(-2, 2);
    const WeightTable table(spec);
    const Region bad(std::vector<CellId>{{5, 0}});
    REQUIRE_THROWS_AS(perimeter(SetConfig::empty_set(spec), bad, table),
                      std::invalid_argument);
}
