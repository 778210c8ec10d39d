#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

#include "ryd/analysis.hpp"

using namespace ryd;

namespace {

ShotRecord shot(std::vector<std::uint8_t> pre, std::vector<std::uint8_t> post) {
    return ShotRecord{std::move(pre), std::move(post)};
}

TaskResult result_with(Register reg, std::vector<ShotRecord> shots) {
    TaskResult r;
    r.program.reg = std::move(reg);
    r.shots = std::move(shots);
    return r;
}

Register two_filled() { return Register{{{0.0, 0.0, true}, {5.0, 0.0, true}}}; }

}  // namespace

TEST_CASE("post selection keeps only completely loaded shots") {
    const auto r = result_with(two_filled(), {
                                                 shot({1, 1}, {0, 1}),
                                                 shot({0, 1}, {0, 1}),
                                                 shot({1, 0}, {1, 0}),
                                                 shot({1, 1}, {1, 1}),
                                             });
    const auto kept = post_select(r);
    REQUIRE(kept.size() == 2);
    REQUIRE(kept[0] == r.shots[0]);
    REQUIRE(kept[1] == r.shots[3]);

    // applying the selection to its own output changes nothing
    auto again = r;
    again.shots = kept;
    REQUIRE(post_select(again) == kept);
}

TEST_CASE("post selection ignores sites the user left unfilled") {
    Register reg{{{0.0, 0.0, true}, {5.0, 0.0, false}}};
    const auto r = result_with(reg, {shot({1, 0}, {0, 0}), shot({0, 0}, {0, 0})});
    const auto kept = post_select(r);
    REQUIRE(kept.size() == 1);
    REQUIRE(kept[0] == r.shots[0]);
}

TEST_CASE("post selection refuses to return an empty ensemble") {
    const auto r = result_with(two_filled(), {shot({0, 1}, {0, 1}), shot({1, 0}, {1, 0})});
    REQUIRE_THROWS_AS(post_select(r), EmptySelectionError);
}

TEST_CASE("rydberg fraction pools filled-site readings") {
    // 4 filled readings, 2 of them Rydberg (post 0)
    const std::vector<ShotRecord> shots{shot({1, 1}, {0, 1}), shot({1, 1}, {1, 0})};
    REQUIRE(rydberg_fraction(shots) == 0.5);

    // unfilled readings are excluded from both numerator and denominator
    const std::vector<ShotRecord> partial{shot({1, 0}, {0, 0}), shot({1, 0}, {1, 0})};
    REQUIRE(rydberg_fraction(partial) == 0.5);

    REQUIRE(rydberg_fraction({shot({1}, {1})}) == 0.0);
    REQUIRE(rydberg_fraction({shot({1}, {0})}) == 1.0);

    REQUIRE_THROWS_AS(rydberg_fraction({}), std::invalid_argument);
    REQUIRE_THROWS_AS(rydberg_fraction({shot({0, 0}, {0, 0})}), std::invalid_argument);
}

TEST_CASE("density map averages per site and flags never-filled sites") {
    const std::vector<ShotRecord> shots{
        shot({1, 1, 0}, {0, 1, 0}),
        shot({1, 0, 0}, {0, 0, 0}),
        shot({1, 1, 0}, {1, 1, 0}),
        shot({1, 1, 0}, {0, 0, 0}),
    };
    const auto d = density_map(shots);
    REQUIRE(d.size() == 3);
    REQUIRE(d[0] == 0.75);                    // Rydberg in 3 of 4 filled readings
    REQUIRE(d[1] == Catch::Approx(1.0 / 3.0));  // filled 3 times, Rydberg once
    REQUIRE(std::isnan(d[2]));                // never filled: no estimate
}

TEST_CASE("bitstring probability reports the empirical rate and its standard error") {
    std::vector<ShotRecord> shots;
    const std::vector<std::uint8_t> target{0, 1};
    for (int i = 0; i < 377; ++i)
        shots.push_back(shot({1, 1}, i < 200 ? target : std::vector<std::uint8_t>{1, 1}));

    const auto [p, se] = bitstring_probability(shots, target);
    REQUIRE(p == Catch::Approx(200.0 / 377.0).epsilon(1e-12));
    REQUIRE(p == Catch::Approx(0.5305).margin(5e-5));
    REQUIRE(se == Catch::Approx(std::sqrt(p * (1.0 - p) / 377.0)).epsilon(1e-12));
    REQUIRE(se == Catch::Approx(0.0257).margin(5e-5));

    const auto [p1, se1] = bitstring_probability(shots, {1, 1});
    REQUIRE(p1 == Catch::Approx(177.0 / 377.0).epsilon(1e-12));
    const auto [p0, se0] = bitstring_probability(shots, {0, 0});
    REQUIRE(p0 == 0.0);
    REQUIRE(se0 == 0.0);
}

TEST_CASE("two alternating crystal strings give the staggered quarter correlation") {
    // 50/50 mix of the two Z2-ordered strings on 6 sites:
    // C_ij = <n_i n_j> - <n_i><n_j> = (-1)^{|i-j|} / 4 exactly
    const int n = 6;
    std::vector<std::uint8_t> pre(n, 1), even(n), odd(n);
    for (int i = 0; i < n; ++i) {
        even[i] = i % 2 == 0 ? 0 : 1;  // Rydberg (absent) on even sites
        odd[i] = i % 2 == 0 ? 1 : 0;
    }
    const std::vector<ShotRecord> shots{shot(pre, even), shot(pre, odd)};

    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    const auto c = connected_correlation_1d(shots, order);
    REQUIRE(c.rows() == n);
    REQUIRE(c.cols() == n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double expected = ((i - j) % 2 == 0 ? 0.25 : -0.25);
            REQUIRE(c(i, j) == Catch::Approx(expected).margin(1e-12));
        }
}

TEST_CASE("chain order remaps correlation indices to register sites") {
    // register site 2 is the middle of the physical chain 0-2-1
    const std::vector<std::uint8_t> pre{1, 1, 1};
    const std::vector<ShotRecord> shots{
        shot(pre, {0, 0, 1}),  // sites 0,1 Rydberg
        shot(pre, {1, 1, 0}),  // site 2 Rydberg
    };
    const auto c = connected_correlation_1d(shots, {0, 2, 1});
    // chain neighbours (rows 0,1) = register sites 0,2: perfectly anti-correlated
    REQUIRE(c(0, 1) == Catch::Approx(-0.25).margin(1e-12));
    // chain ends (rows 0,2) = register sites 0,1: perfectly correlated
    REQUIRE(c(0, 2) == Catch::Approx(0.25).margin(1e-12));
    REQUIRE(c(1, 1) == Catch::Approx(0.25).margin(1e-12));
}

TEST_CASE("correlations require at least two shots") {
    const std::vector<ShotRecord> one{shot({1, 1}, {0, 1})};
    REQUIRE_THROWS_AS(connected_correlation_1d(one, std::vector<int>{0, 1}),
                      InsufficientDataError);
    REQUIRE_THROWS_AS(connected_correlation_2d(one, {{0, 0}, {1, 0}}), InsufficientDataError);
}

TEST_CASE("lattice coordinates are inferred from grid positions") {
    // 3x2 grid, 5 um pitch, offset away from the origin; row-major site order
    std::vector<Vec2> pos;
    for (int row = 0; row < 2; ++row)
        for (int col = 0; col < 3; ++col)
            pos.push_back({10.0 + 5.0 * col, 20.0 + 5.0 * row});
    const auto coords = lattice_coords(Register::from_positions(pos));
    REQUIRE(coords.size() == 6);
    for (int row = 0; row < 2; ++row)
        for (int col = 0; col < 3; ++col) {
            const auto& c = coords[static_cast<std::size_t>(3 * row + col)];
            REQUIRE(c.first == col);
            REQUIRE(c.second == row);
        }
}

TEST_CASE("a single row maps to y coordinate zero everywhere") {
    const auto coords =
        lattice_coords(Register::from_positions({{0.0, 7.0}, {6.0, 7.0}, {12.0, 7.0}}));
    for (int i = 0; i < 3; ++i) {
        REQUIRE(coords[static_cast<std::size_t>(i)].first == i);
        REQUIRE(coords[static_cast<std::size_t>(i)].second == 0);
    }
}

TEST_CASE("off-lattice registers are rejected") {
    // gaps 5 and 7.5: the smaller pitch does not divide the larger gap
    REQUIRE_THROWS_AS(
        lattice_coords(Register::from_positions({{0.0, 0.0}, {5.0, 0.0}, {12.5, 0.0}})),
        std::invalid_argument);
    REQUIRE_THROWS_AS(lattice_coords(Register{}), std::invalid_argument);
}

TEST_CASE("checkerboard ensemble gives parity-staggered displacement correlations") {
    // 4x4 lattice, 50/50 mix of the two checkerboard colourings:
    // G2(k,l) = (-1)^{k+l} / 4 for every displacement class, including (0,0)
    const int side = 4;
    std::vector<Vec2> pos;
    std::vector<std::uint8_t> pre, a, b;
    for (int row = 0; row < side; ++row)
        for (int col = 0; col < side; ++col) {
            pos.push_back({4.5 * col, 4.5 * row});
            pre.push_back(1);
            const bool rydberg = (row + col) % 2 == 0;
            a.push_back(rydberg ? 0 : 1);
            b.push_back(rydberg ? 1 : 0);
        }
    const auto coords = lattice_coords(Register::from_positions(pos));
    const auto g2 = connected_correlation_2d({shot(pre, a), shot(pre, b)}, coords);

    REQUIRE(g2.size() == (2 * side - 1) * (2 * side - 1));  // displacements -3..3 each axis
    for (const auto& [d, value] : g2) {
        const double expected = ((d.first + d.second) % 2 == 0 ? 0.25 : -0.25);
        REQUIRE(value == Catch::Approx(expected).margin(1e-12));
    }
    REQUIRE(g2.at({0, 0}) == Catch::Approx(0.25).margin(1e-12));
}

TEST_CASE("uncorrelated data gives vanishing off-site correlations") {
    // deterministic alternation on site 0, constant on site 1
    const std::vector<std::uint8_t> pre{1, 1};
    const std::vector<ShotRecord> shots{
        shot(pre, {0, 1}), shot(pre, {1, 1}), shot(pre, {0, 1}), shot(pre, {1, 1})};
    const auto c = connected_correlation_1d(shots, {0, 1});
    REQUIRE(c(0, 0) == Catch::Approx(0.25).margin(1e-12));  // variance of a fair coin
    REQUIRE(c(1, 1) == Catch::Approx(0.0).margin(1e-12));   // constant site: zero variance
    REQUIRE(c(0, 1) == Catch::Approx(0.0).margin(1e-12));
}
