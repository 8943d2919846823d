#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "wssus/constellation.hpp"

using namespace wssus;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// direct tensor-rule route, independent of the factorized implementation
double awgn_mi_direct(const Constellation& c, double snr, int order) {
    const auto& pts = c.points();
    const double root = std::sqrt(snr);
    double outer = 0.0;
    for (const auto& x : pts) {
        outer += expect_complex_gaussian_2d(
            [&](double a, double b) {
                double s = 0.0;
                for (const auto& xp : pts) {
                    const std::complex<double> d = root * (x - xp);
                    s += std::exp(-std::norm(d) - 2.0 * (d.real() * a + d.imag() * b));
                }
                return std::log(s);
            },
            order);
    }
    return std::log(static_cast<double>(pts.size())) - outer / static_cast<double>(pts.size());
}

// joint (h, z) Monte-Carlo oracle for the Rayleigh-faded mutual information
MiEstimate mc_rayleigh_mi(const Constellation& c, double avg_snr, std::int64_t n,
                          std::uint64_t seed) {
    const auto& pts = c.points();
    const std::size_t m = pts.size();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, m - 1);
    std::normal_distribution<double> axis(0.0, std::sqrt(0.5));
    std::exponential_distribution<double> h2(1.0);
    const double logm = std::log(static_cast<double>(m));

    double mean = 0.0, m2 = 0.0;
    for (std::int64_t t = 0; t < n; ++t) {
        const double root = std::sqrt(avg_snr * h2(rng));
        const std::complex<double> x = pts[pick(rng)];
        const std::complex<double> z(axis(rng), axis(rng));
        double s = 0.0;
        for (const auto& xp : pts) {
            const std::complex<double> d = root * (x - xp);
            s += std::exp(-std::norm(d) - 2.0 * (d.real() * z.real() + d.imag() * z.imag()));
        }
        const double v = logm - std::log(s);
        const double delta = v - mean;
        mean += delta / static_cast<double>(t + 1);
        m2 += delta * (v - mean);
    }
    return {mean, std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n))};
}

}  // namespace

TEST_CASE("constellation validation") {
    using Points = std::vector<std::complex<double>>;
    CHECK_THROWS_AS(Constellation(Points{{1.0, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(Constellation(Points{{1.0, 0.0}, {0.5, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(Constellation(Points{{1.0, 0.0}, {1.0, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(Constellation::psk(1), std::invalid_argument);

    const auto q = Constellation::qpsk();
    REQUIRE(q.size() == 4);
    const double r = 1.0 / std::sqrt(2.0);
    for (const auto& p : q.points()) {
        CHECK_THAT(std::fabs(p.real()), WithinRel(r, 1e-12));
        CHECK_THAT(std::fabs(p.imag()), WithinRel(r, 1e-12));
    }
    CHECK(Constellation::bpsk().size() == 2);
    CHECK(Constellation::psk(8).size() == 8);
}

TEST_CASE("awgn_cm_mi endpoints") {
    const auto q = Constellation::qpsk();
    CHECK(awgn_cm_mi(q, 0.0) == 0.0);
    CHECK_THAT(awgn_cm_mi(q, 1e4), WithinAbs(std::log(4.0), 1e-3));  // saturates at log |c|
    CHECK_THROWS_AS(awgn_cm_mi(q, -1.0), std::invalid_argument);
}

TEST_CASE("awgn_cm_mi frozen reference values") {
    const auto q = Constellation::qpsk();
    CHECK_THAT(awgn_cm_mi(q, 0.1), WithinAbs(0.09529846779343254, 1e-6));
    CHECK_THAT(awgn_cm_mi(q, 1.0), WithinAbs(0.6736616406936633, 1e-6));
    CHECK_THAT(awgn_cm_mi(q, 10.0), WithinAbs(1.3817976879883112, 1e-6));
    CHECK_THAT(awgn_cm_mi(Constellation::bpsk(), 1.0), WithinAbs(0.5000721360669277, 1e-6));
}

TEST_CASE("factorized evaluation equals the direct tensor rule") {
    const auto q = Constellation::qpsk();
    for (double snr : {0.5, 4.0}) {
        CHECK_THAT(awgn_cm_mi(q, snr, 48), WithinAbs(awgn_mi_direct(q, snr, 48), 1e-12));
    }
    const auto p8 = Constellation::psk(8);
    CHECK_THAT(awgn_cm_mi(p8, 2.0, 48), WithinAbs(awgn_mi_direct(p8, 2.0, 48), 1e-12));
}

TEST_CASE("awgn_cm_mi vs Monte-Carlo oracle") {
    const auto q = Constellation::qpsk();
    const MiEstimate mc = mc_mi_oracle(q, 1.0, 10000000, 31337);
    CHECK_THAT(awgn_cm_mi(q, 1.0), WithinAbs(mc.value, 3.0 * mc.std_error));

    const auto b = Constellation::bpsk();
    const MiEstimate mcb = mc_mi_oracle(b, 1.0, 1000000, 4242);
    CHECK_THAT(awgn_cm_mi(b, 1.0), WithinAbs(mcb.value, 3.0 * mcb.std_error));
}

TEST_CASE("mc_mi_oracle behavior") {
    const auto q = Constellation::qpsk();
    const MiEstimate zero = mc_mi_oracle(q, 0.0, 20000, 1);
    CHECK(zero.value == 0.0);  // every sample is exactly log m - log m
    CHECK(zero.std_error == 0.0);

    const MiEstimate sat = mc_mi_oracle(q, 1e4, 1000000, 17);
    CHECK_THAT(sat.value, WithinAbs(std::log(4.0), std::max(3.0 * sat.std_error, 1e-9)));

    // seeded determinism
    const MiEstimate a = mc_mi_oracle(q, 1.0, 20000, 5);
    const MiEstimate b = mc_mi_oracle(q, 1.0, 20000, 5);
    CHECK(a.value == b.value);
    CHECK(a.std_error == b.std_error);
    const MiEstimate c = mc_mi_oracle(q, 1.0, 20000, 6);
    CHECK(a.value != c.value);

    CHECK_THROWS_AS(mc_mi_oracle(q, 1.0, 100, 1), std::invalid_argument);
}

TEST_CASE("monotone, bounded, rotation invariant") {
    const auto q = Constellation::qpsk();
    double prev = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double snr = 0.05 * std::pow(1.5, i);
        const double v = awgn_cm_mi(q, snr);
        CHECK(v >= prev - 1e-12);
        CHECK(v >= 0.0);
        CHECK(v <= std::log(4.0) + 1e-12);
        prev = v;
    }
    // multiplying every point by a unit-modulus scalar leaves the MI unchanged
    const auto rotated = Constellation::psk(4, M_PI / 4.0 + 0.7);
    for (double snr : {0.2, 1.0, 5.0})
        CHECK_THAT(awgn_cm_mi(rotated, snr), WithinAbs(awgn_cm_mi(q, snr), 1e-10));
}

TEST_CASE("rayleigh_cm_mi") {
    const auto q = Constellation::qpsk();
    CHECK(rayleigh_cm_mi(q, 0.0) == 0.0);
    CHECK_THAT(rayleigh_cm_mi(q, 1.0), WithinAbs(0.5532928695366294, 1e-7));

    // joint Monte-Carlo oracle
    const MiEstimate mc = mc_rayleigh_mi(q, 1.0, 10000000, 2718);
    CHECK_THAT(rayleigh_cm_mi(q, 1.0), WithinAbs(mc.value, 3.0 * mc.std_error));

    // Jensen: fading cannot beat the AWGN channel at the same mean SNR
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> snrs(0.05, 20.0);
    for (int i = 0; i < 10; ++i) {
        const double s = snrs(rng);
        CHECK(rayleigh_cm_mi(q, s) <= awgn_cm_mi(q, s) + 1e-10);
    }

    // continuity in the mean SNR
    for (double s : {0.1, 0.5, 1.0, 3.0, 10.0}) {
        const double delta = 1e-3 * s;
        const double diff = std::fabs(rayleigh_cm_mi(q, s + delta) - rayleigh_cm_mi(q, s));
        CHECK(diff <= 1.5 * delta);
    }
}
