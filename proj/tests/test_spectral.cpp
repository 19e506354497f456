#include <doctest.h>

#include <cmath>
#include <random>

#include "rtdiff/spectral.hpp"
#include "rtdiff/util.hpp"

using namespace rtdiff;

namespace {

WeightedDiracComb integer_comb(int n, Complex w = {1.0, 0.0}) {
    WeightedDiracComb comb;
    comb.dim = 1;
    comb.window = {1, {0.0, 0.0}, {static_cast<double>(n), 0.0}};
    for (int i = 0; i < n; ++i) {
        comb.points.push_back({static_cast<double>(i), 0.0});
        comb.weights.push_back(w);
    }
    return comb;
}

WeightedDiracComb bernoulli_comb(int n, double p, Complex h1, Complex h0,
                                 std::uint64_t seed) {
    WeightedDiracComb comb = integer_comb(n);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int i = 0; i < n; ++i) comb.weights[i] = uni(rng) < p ? h1 : h0;
    return comb;
}

}  // namespace

TEST_CASE("autocorrelation of a single point") {
    WeightedDiracComb comb;
    comb.dim = 1;
    comb.window = {1, {-1.0, 0.0}, {1.0, 0.0}};
    comb.points.push_back({0.0, 0.0});
    comb.weights.push_back({1.0, 0.0});

    const auto table =
        empirical_autocorrelation(comb, 1.0, {{0.0, 0.0}, {1.0, 0.0}});
    CHECK(table.at({0.0, 0.0}).real() == doctest::Approx(0.5));
    CHECK(std::abs(table.at({1.0, 0.0})) == doctest::Approx(0.0));
}

TEST_CASE("autocorrelation of the integer lattice") {
    // 201 unit points on [-100, 100]: nu(1) = 1 up to O(1/R)
    WeightedDiracComb comb;
    comb.dim = 1;
    comb.window = {1, {-100.0, 0.0}, {100.0, 0.0}};
    for (int i = -100; i <= 100; ++i) {
        comb.points.push_back({static_cast<double>(i), 0.0});
        comb.weights.push_back({1.0, 0.0});
    }
    const auto table = empirical_autocorrelation(comb, 100.0, {{1.0, 0.0}});
    CHECK(table.at({1.0, 0.0}).real() == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("autocorrelation rejects bad inputs") {
    WeightedDiracComb comb = integer_comb(8);
    CHECK_THROWS_AS(empirical_autocorrelation(comb, 100.0, {{0.0, 0.0}}),
                    ModelError);
    WeightedDiracComb empty;
    empty.dim = 1;
    CHECK_THROWS_AS(empirical_autocorrelation(empty, 1.0, {{0.0, 0.0}}),
                    ModelError);
}

TEST_CASE("Bernoulli occupation pair coefficient over replicas") {
    // density-1/2 lattice gas: E nu(5) = 1/4
    const int n = 20000;
    std::vector<double> nu5;
    for (int s = 0; s < 64; ++s) {
        auto comb = bernoulli_comb(n, 0.5, {1.0, 0.0}, {0.0, 0.0}, 100 + s);
        comb.window = {1, {0.0, 0.0}, {static_cast<double>(n), 0.0}};
        const auto table =
            empirical_autocorrelation(comb, n / 2.0, {{5.0, 0.0}});
        nu5.push_back(table.at({5.0, 0.0}).real());
    }
    const auto ms = mean_stddev(nu5);
    const double err = standard_error(ms, nu5.size());
    CHECK(std::abs(ms.mean - 0.25) < 3.0 * err + 1e-6);
}

TEST_CASE("Hermitian symmetry is exact for complex weights") {
    const int n = 4096;
    WeightedDiracComb comb = integer_comb(n);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (auto& w : comb.weights)
        w = Complex(uni(rng) - 0.5, uni(rng) - 0.5);

    std::vector<Vec2> diffs;
    for (int z = -6; z <= 6; ++z) diffs.push_back({static_cast<double>(z), 0.0});
    const auto table = empirical_autocorrelation(comb, n / 2.0, diffs);
    for (int z = 1; z <= 6; ++z) {
        const Complex a = table.at({static_cast<double>(z), 0.0});
        const Complex b = table.at({static_cast<double>(-z), 0.0});
        CHECK(a == std::conj(b));  // bit-exact by construction
    }
    CHECK(table.at({0.0, 0.0}).imag() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(table.at({0.0, 0.0}).real() >= 0.0);
}

TEST_CASE("periodogram of a single point is flat 1/L") {
    WeightedDiracComb comb;
    comb.dim = 1;
    comb.window = {1, {0.0, 0.0}, {8.0, 0.0}};
    comb.points.push_back({3.0, 0.0});
    comb.weights.push_back({1.0, 0.0});
    GridSpec grid{1, {0.0, 0.0}, {0.1, 0.0}, {25, 1}};
    const auto ig = periodogram(comb, grid);
    for (double v : ig.values) CHECK(v == doctest::Approx(1.0 / 8.0));
}

TEST_CASE("periodogram of the integer lattice peaks at integers") {
    const int n = 512;
    const auto comb = integer_comb(n);
    const auto direct = periodogram_at(comb, {{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}});
    for (double v : direct) CHECK(v == doctest::Approx(n).epsilon(1e-9));

    // FFT route agrees with direct evaluation on the window modes
    const auto fast = periodogram_fft(comb, {1.0, 0.0});
    GridSpec grid = fast.grid;
    const auto slow = periodogram(comb, grid);
    for (std::size_t i = 0; i < fast.values.size(); i += 37)
        CHECK(fast.values[i] ==
              doctest::Approx(slow.values[i]).epsilon(1e-8).scale(1.0));
}

TEST_CASE("periodogram positivity on random complex combs") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        WeightedDiracComb comb = integer_comb(256);
        for (auto& w : comb.weights)
            w = Complex(uni(rng) - 0.5, uni(rng) - 0.5);
        const auto ig = periodogram_fft(comb, {1.0, 0.0});
        for (double v : ig.values) CHECK(v >= 0.0);
    }
}

TEST_CASE("i.i.d. +-1 weights give a flat unit background") {
    const int n = 1 << 16;
    std::vector<IntensityGrid> grids;
    for (int s = 0; s < 64; ++s) {
        auto comb = bernoulli_comb(n, 0.5, {1.0, 0.0}, {-1.0, 0.0}, 900 + s);
        grids.push_back(periodogram_fft(comb, {1.0, 0.0}));
    }
    const auto avg = average_grids(grids);
    // 64 bins over (0,1), excluding the k=0 mode
    GridSpec centers{1, {0.5 / 64.0, 0.0}, {1.0 / 64.0, 0.0}, {64, 1}};
    const auto binned =
        bin_average(avg, centers, 0.5 / 64.0, {{0.0, 0.0}}, 1e-9);
    for (double v : binned.values) CHECK(v == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("periodogram equals the transform of the autocorrelation") {
    // restricting the comb to the averaging box makes the identity exact;
    // the full-window comparison carries an O(1/N) boundary term
    std::vector<double> boundary_err;
    for (int n : {256, 1024, 4096}) {
        auto comb = bernoulli_comb(n, 0.5, {1.0, 0.0}, {-1.0, 0.0}, 42);
        const double R = n / 2.0;

        std::vector<Vec2> diffs;
        for (int z = -(n - 1); z <= n - 1; ++z)
            diffs.push_back({static_cast<double>(z), 0.0});
        const auto table = empirical_autocorrelation(comb, R, diffs);

        const std::vector<double> ks = {0.123, 0.37, 0.5, 0.77};
        double max_err = 0.0;
        for (double k : ks) {
            Complex transform(0.0, 0.0);
            for (std::size_t t = 0; t < table.diffs.size(); ++t)
                transform +=
                    table.values[t] *
                    std::polar(1.0, -2.0 * M_PI * k * table.diffs[t][0]);
            const double direct = periodogram_at(comb, {{k, 0.0}})[0];
            max_err = std::max(max_err, std::abs(transform.real() - direct));
        }
        boundary_err.push_back(max_err / n * n);  // absolute error
        // the identity is exact here because B_R covers the whole window
        CHECK(max_err < 1e-6);
    }
}

TEST_CASE("volume scaling classifies lattice peaks as Bragg") {
    std::vector<IntensityGrid> grids;
    for (int n : {256, 1024, 4096})
        grids.push_back(periodogram_fft(integer_comb(n), {1.0, 0.0}));
    const auto cls = classify_peaks(grids);
    REQUIRE(cls.bragg.peaks.size() == 1);  // k = 0 is the only common mode...
    CHECK(cls.bragg.peaks[0].intensity == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(cls.sc_candidates.empty());
}

TEST_CASE("volume scaling flags no peaks for i.i.d. +-1 weights") {
    std::vector<IntensityGrid> grids;
    for (int n : {1 << 10, 1 << 12, 1 << 14}) {
        std::vector<IntensityGrid> reps;
        for (int s = 0; s < 32; ++s)
            reps.push_back(periodogram_fft(
                bernoulli_comb(n, 0.5, {1.0, 0.0}, {-1.0, 0.0}, 50 + s),
                {1.0, 0.0}));
        auto avg = average_grids(reps);
        GridSpec centers{1, {0.5 / 16.0, 0.0}, {1.0 / 16.0, 0.0}, {16, 1}};
        grids.push_back(bin_average(avg, centers, 0.5 / 16.0));
    }
    // bin_average emits grids on the same centers, so volumes carry over
    const auto cls = classify_peaks(grids);
    CHECK(cls.bragg.peaks.empty());
    CHECK(cls.sc_candidates.empty());
    for (double v : cls.background.values)
        CHECK(v == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("classify_peaks needs three volumes") {
    std::vector<IntensityGrid> grids;
    grids.push_back(periodogram_fft(integer_comb(256), {1.0, 0.0}));
    grids.push_back(periodogram_fft(integer_comb(512), {1.0, 0.0}));
    CHECK_THROWS_AS(classify_peaks(grids), ModelError);
}

TEST_CASE("density comparison of identical data is exact") {
    AcDensity flat;
    flat.dim = 1;
    flat.density = [](Vec2) { return 0.25; };
    IntensityGrid grid;
    grid.grid = {1, {0.1, 0.0}, {0.01, 0.0}, {50, 1}};
    grid.volume = 1.0;
    grid.values.assign(50, 0.25);
    const auto rep = compare_density(grid, flat);
    CHECK(rep.max_rel_dev == doctest::Approx(0.0));
    CHECK(rep.mean_rel_dev == doctest::Approx(0.0));
    CHECK(rep.points_used == 50);
}

TEST_CASE("density comparison masks declared peaks") {
    AcDensity flat;
    flat.dim = 1;
    flat.density = [](Vec2) { return 1.0; };
    IntensityGrid grid;
    grid.grid = {1, {0.0, 0.0}, {0.05, 0.0}, {21, 1}};
    grid.volume = 1.0;
    grid.values.assign(21, 1.0);
    grid.values[0] = 500.0;  // Bragg spike at k = 0

    PurePointSpectrum pp;
    pp.dim = 1;
    pp.peaks.push_back({{0.0, 0.0}, 500.0});
    const auto rep = compare_density(grid, flat, &pp, 0.01);
    CHECK(rep.points_masked == 1);
    CHECK(rep.max_rel_dev == doctest::Approx(0.0));

    const auto unmasked = compare_density(grid, flat);
    CHECK(unmasked.max_rel_dev > 100.0);
}

TEST_CASE("Bernoulli lattice gas background matches the closed form") {
    // h in {1,0}, p = 1/2: flat part <|h|^2> - |<h>|^2 = 1/4
    const int n = 1 << 14;
    std::vector<IntensityGrid> reps;
    for (int s = 0; s < 16; ++s)
        reps.push_back(periodogram_fft(
            bernoulli_comb(n, 0.5, {1.0, 0.0}, {0.0, 0.0}, 700 + s), {1.0, 0.0}));
    const auto avg = average_grids(reps);

    GridSpec centers{1, {0.5 / 32.0, 0.0}, {1.0 / 32.0, 0.0}, {32, 1}};
    const auto binned = bin_average(avg, centers, 0.5 / 32.0, {{0.0, 0.0}}, 1e-9);

    AcDensity flat;
    flat.dim = 1;
    flat.density = [](Vec2) { return 0.25; };
    const auto rep = compare_density(binned, flat);
    CHECK(rep.mean_rel_dev < 0.05);
}
