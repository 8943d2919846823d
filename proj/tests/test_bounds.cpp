#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "wssus/bounds.hpp"
#include "wssus/constellation.hpp"
#include "wssus/quadrature.hpp"

using namespace wssus;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kTau0 = 0.5e-6;
constexpr double kNu0 = 500.0;
constexpr double kSigma2 = 1e-9;  // -90 dB
constexpr double kP = 1e-3;
constexpr double kN0 = 4.14e-21;
constexpr double kU = 2.4154589371980676e8;  // (P/N0) sigma^2

LinkConfig reference_link(double beta = 1.0, double tf = 1.25) {
    return LinkConfig(ScatteringSpec::brick(kTau0, kNu0, kSigma2), PowerBudget(kP, kN0, beta), tf);
}

LinkConfig zero_power_link() {
    return LinkConfig(ScatteringSpec::brick(kTau0, kNu0, kSigma2), PowerBudget(0.0, kN0, 1.0),
                      1.25);
}

double qpsk_mi(double s) { return rayleigh_cm_mi(Constellation::qpsk(), s); }

// quadrature route for the brick penalty, independent of the closed form
double penalty_quadrature(double w, double beta, const LinkConfig& cfg) {
    const double rho = cfg.rho();
    const auto& sf = cfg.sf;
    QuadResult r = integrate_2d(
        [&](double tau, double nu) { return std::log1p(beta * rho / w * sf.density(tau, nu)); },
        Rect{-sf.tau0(), sf.tau0(), -sf.nu0(), sf.nu0()}, Tolerance{1e-12, 0.0, 20000});
    return (w / beta) * r.value;
}

struct RandomParams {
    double tau0, nu0, sigma2, p, n0, beta, w;
};

RandomParams draw_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    RandomParams r{};
    r.tau0 = std::pow(10.0, -7.0 + 2.0 * u01(rng));             // 1e-7 .. 1e-5 s
    // spread at most 0.5 so that TF = 1.25 <= 1/spread always holds
    const double max_nu0 = 0.5 / (4.0 * r.tau0);
    r.nu0 = max_nu0 * std::pow(10.0, -3.0 * u01(rng));
    r.sigma2 = std::pow(10.0, -11.0 + 4.0 * u01(rng));
    r.p = std::pow(10.0, -4.0 - 2.0 * u01(rng));
    r.n0 = 4.14e-21;
    r.beta = std::pow(10.0, 2.0 * u01(rng));
    r.w = std::pow(10.0, 6.0 + 5.0 * u01(rng));
    return r;
}

}  // namespace

TEST_CASE("link config invariants") {
    CHECK_THROWS_AS(reference_link(1.0, 0.5), std::invalid_argument);    // TF < 1
    CHECK_THROWS_AS(reference_link(1.0, 2000.0), std::invalid_argument);  // TF > 1/spread
    CHECK_NOTHROW(reference_link(1.0, 1000.0));                           // TF = 1/spread
    CHECK_THAT(reference_link().snr_rate(), WithinRel(kU, 1e-12));
}

TEST_CASE("penalty_A brick closed form") {
    const auto link = reference_link();
    CHECK(penalty_A(1e9, 1.0, zero_power_link()) == 0.0);
    CHECK_THAT(penalty_A(1e9, 1.0, link), WithinRel(5491190.944924363, 1e-12));
    CHECK_THROWS_AS(penalty_A(0.0, 1.0, link), std::invalid_argument);
    CHECK_THROWS_AS(penalty_A(1e9, 0.5, link), std::invalid_argument);
}

TEST_CASE("penalty_A closed form agrees with adaptive quadrature") {
    std::mt19937_64 rng(404);
    for (int trial = 0; trial < 20; ++trial) {
        const RandomParams pr = draw_params(rng);
        LinkConfig cfg(ScatteringSpec::brick(pr.tau0, pr.nu0, pr.sigma2),
                       PowerBudget(pr.p, pr.n0, pr.beta), 1.25);
        const double closed = penalty_A(pr.w, pr.beta, cfg);
        const double quad = penalty_quadrature(pr.w, pr.beta, cfg);
        CHECK_THAT(closed, WithinRel(quad, 1e-10));
    }
}

TEST_CASE("penalty_A decreases with the peak ratio") {
    std::mt19937_64 rng(405);
    for (int trial = 0; trial < 20; ++trial) {
        const RandomParams pr = draw_params(rng);
        LinkConfig cfg(ScatteringSpec::brick(pr.tau0, pr.nu0, pr.sigma2),
                       PowerBudget(pr.p, pr.n0, 2.0 * pr.beta), 1.25);
        CHECK(penalty_A(pr.w, 2.0 * pr.beta, cfg) <= penalty_A(pr.w, pr.beta, cfg) * (1.0 + 1e-12));
    }
}

TEST_CASE("ub1 at the reference point") {
    const auto link = reference_link();
    const Ub1Result r = ub1(1e9, link);
    CHECK_THAT(r.value, WithinRel(205588486.72202188, 1e-10));
    CHECK(r.alpha_star == 1.0);  // unclamped maximizer is ~142

    CHECK(ub1(1e9, zero_power_link()).value == 0.0);

    // overspreading: collapses toward zero as W grows
    const double a = ub1(1e10, link).value;
    const double b = ub1(1e11, link).value;
    const double c = ub1(1e12, link).value;
    CHECK(a > b);
    CHECK(b > c);
    CHECK(c > 0.0);
}

TEST_CASE("ub1 beta=1 consistency") {
    // with alpha* = 1 the bound has the constant-modulus structure exactly
    const auto link = reference_link();
    for (double w : {1e8, 1e9, 1e10, 1e12}) {
        const Ub1Result r = ub1(w, link);
        REQUIRE(r.alpha_star == 1.0);
        const double direct =
            (w / link.tf) * std::log1p(kU * link.tf / w) - penalty_A(w, 1.0, link);
        CHECK_THAT(r.value, WithinRel(direct, 1e-14));
    }
}

TEST_CASE("ub1 interior alpha is stationary") {
    // TF at the critical product makes the unclamped alpha land inside (0,1)
    const auto link = reference_link(1.0, 1000.0);
    const double w = 1e12;
    const Ub1Result r = ub1(w, link);
    REQUIRE(r.alpha_star > 0.0);
    REQUIRE(r.alpha_star < 1.0);
    CHECK_THAT(r.alpha_star, WithinRel(0.4819842764108187, 1e-9));
    CHECK_THAT(r.value, WithinRel(5847509.455164418, 1e-9));

    const double a = penalty_A(w, 1.0, link);
    auto objective = [&](double alpha) {
        return (w / link.tf) * std::log1p(alpha * kU * link.tf / w) - alpha * a;
    };
    CHECK(objective(r.alpha_star) >= objective(r.alpha_star + 1e-4));
    CHECK(objective(r.alpha_star) >= objective(r.alpha_star - 1e-4));
}

TEST_CASE("ub2") {
    const auto link = reference_link();
    CHECK(ub2(1e9, zero_power_link()) == 0.0);
    CHECK_THAT(ub2(1e9, link), WithinRel(193308190.276609, 1e-8));
    // infinite-bandwidth limit (P/N0) sigma^2
    CHECK_THAT(ub2(1e13, link), WithinRel(241538601.10782197, 1e-9));
    CHECK(std::fabs(ub2(1e13, link) - kU) <= 0.01 * kU);

    std::mt19937_64 rng(406);
    for (int trial = 0; trial < 20; ++trial) {
        const RandomParams pr = draw_params(rng);
        LinkConfig cfg(ScatteringSpec::brick(pr.tau0, pr.nu0, pr.sigma2),
                       PowerBudget(pr.p, pr.n0, pr.beta), 1.25);
        CHECK(ub2(2.0 * pr.w, cfg) >= ub2(pr.w, cfg) * (1.0 - 1e-12));
    }
}

TEST_CASE("lb at the reference point") {
    const auto link = reference_link();
    const LbResult r = lb(1e9, link, qpsk_mi);
    CHECK(r.gamma_star == 1.0);  // singleton feasible set at beta = 1
    CHECK(r.value > 0.0);
    CHECK(r.value <= ub1(1e9, link).value);
    CHECK_THAT(r.value, WithinRel(185474549.386, 1e-6));

    LinkConfig zero_var(ScatteringSpec::brick(kTau0, kNu0, 0.0), PowerBudget(kP, kN0, 1.0), 1.25);
    CHECK(lb(1e9, zero_var, qpsk_mi).value == 0.0);
}

TEST_CASE("lb_approx values and decay") {
    const auto link = reference_link();
    const LbResult r = lb_approx(1e9, link);
    CHECK(r.gamma_star == 1.0);
    CHECK_THAT(r.value, WithinRel(163124179.3087572, 1e-10));
    CHECK(std::fabs(lb_approx(1e12, link).value) < lb_approx(1e9, link).value);
    CHECK(lb_approx(1e9, zero_power_link()).value == 0.0);
}

TEST_CASE("peak sharing: the gamma search rides the beta=1 curve") {
    // LB(W, gamma) = LB(W/gamma, 1), so for W above the beta=1 maximizer the
    // optimized bound plateaus at the peak value with gamma* ~ W / W*(1).
    const auto link1 = reference_link(1.0);
    const auto link4 = reference_link(4.0);

    const CriticalResult peak =
        critical_bandwidth(BoundKind::LbApprox, link1, 1e7, 1e12);
    const LbResult plateau = lb_approx(1.9e10, link4);
    CHECK_THAT(plateau.value, WithinRel(peak.value, 1e-6));
    CHECK_THAT(plateau.gamma_star, WithinRel(1.9e10 / peak.w_star_hz, 1e-2));

    // below the peak the constraint gamma >= 1 binds
    CHECK_THAT(lb_approx(1e8, link4).value, WithinRel(lb_approx(1e8, link1).value, 1e-9));
}

TEST_CASE("viterbi_lb") {
    const auto link = reference_link();
    CHECK_THAT(viterbi_lb(1.0, link), WithinRel(241533498.90089664, 1e-12));
    CHECK(viterbi_lb(1.0, zero_power_link()) == 0.0);
    CHECK_THROWS_AS(viterbi_lb(0.5, link), std::invalid_argument);

    // quadrature route through the power-Doppler profile
    const double direct =
        kU - integrate_1d([&](double nu) {
                 return std::log1p(link.rho() * power_doppler_profile(link.sf, nu));
             },
             -kNu0, kNu0, Tolerance{1e-12, 0.0, 20000}).value;
    CHECK_THAT(viterbi_lb(1.0, link), WithinRel(direct, 1e-10));

    std::mt19937_64 rng(407);
    for (int trial = 0; trial < 20; ++trial) {
        const RandomParams pr = draw_params(rng);
        LinkConfig cfg(ScatteringSpec::brick(pr.tau0, pr.nu0, pr.sigma2),
                       PowerBudget(pr.p, pr.n0, 2.0 * pr.beta), 1.25);
        const double lo = viterbi_lb(pr.beta, cfg);
        const double hi = viterbi_lb(2.0 * pr.beta, cfg);
        const double awgn = awgn_inf_capacity(cfg);
        CHECK(hi >= lo * (1.0 - 1e-12) - 1e-12 * awgn);
        CHECK(lo <= awgn);
        CHECK(hi <= awgn);
    }
}

TEST_CASE("awgn_inf_capacity") {
    CHECK_THAT(awgn_inf_capacity(reference_link()), WithinRel(kU, 1e-14));
    LinkConfig zero_var(ScatteringSpec::brick(kTau0, kNu0, 0.0), PowerBudget(kP, kN0, 1.0), 1.25);
    CHECK(awgn_inf_capacity(zero_var) == 0.0);
    LinkConfig doubled(ScatteringSpec::brick(kTau0, kNu0, kSigma2),
                       PowerBudget(2.0 * kP, kN0, 1.0), 1.25);
    CHECK_THAT(awgn_inf_capacity(doubled), WithinRel(2.0 * kU, 1e-14));
}

TEST_CASE("critical_bandwidth of lb_approx") {
    const auto link = reference_link();
    const CriticalResult r = critical_bandwidth(BoundKind::LbApprox, link, 1e7, 1e12);
    CHECK_THAT(r.w_star_hz, WithinRel(4.998801e9, 1e-3));
    CHECK_THAT(r.value, WithinRel(2.074692e8, 1e-6));

    // scaling P and N0 together leaves the maximizer unchanged
    LinkConfig scaled(ScatteringSpec::brick(kTau0, kNu0, kSigma2),
                      PowerBudget(7.5 * kP, 7.5 * kN0, 1.0), 1.25);
    const CriticalResult rs = critical_bandwidth(BoundKind::LbApprox, scaled, 1e7, 1e12);
    CHECK_THAT(rs.w_star_hz, WithinRel(r.w_star_hz, 1e-6));
}

TEST_CASE("critical_bandwidth boundary and validation") {
    const auto link = reference_link();
    // ub2 is nondecreasing in W: the maximum sits at the upper endpoint
    try {
        critical_bandwidth(BoundKind::Ub2, link, 1e7, 1e11);
        FAIL("expected BoundaryError");
    } catch (const BoundaryError& e) {
        CHECK(e.at_upper);
        CHECK_THAT(e.endpoint_w_hz, WithinRel(1e11, 1e-12));
        CHECK(std::string(e.what()).find("upper endpoint") != std::string::npos);
    }
    CHECK_THROWS_AS(critical_bandwidth(BoundKind::Ub1, link, 1e9, 1e10), std::invalid_argument);
}

TEST_CASE("sandwich at spot bandwidths") {
    const auto link = reference_link();
    for (double w : {1e7, 1e8, 1e9, 5e9, 1e11, 1e12}) {
        const double l = std::max(0.0, lb(w, link, qpsk_mi).value);
        const double top = std::min(ub1(w, link).value, ub2(w, link));
        CHECK(l <= top + 1e-6 * ub2(w, link));
    }
}
