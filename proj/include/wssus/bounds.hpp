#pragma once

// Capacity bounds for noncoherent underspread WSSUS Rayleigh fading under
// peak constraints: UB1 (with its maximizing alpha), the perfect-CSI bound
// UB2, the constant-modulus lower bound LB (with the peak-sharing gamma
// search), its low-SNR approximation, the infinite-bandwidth lower bound
// under a peak constraint in time only, and the critical-bandwidth search.
// Rates are nat/s throughout; unit conversion is a presentation concern.

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wssus/constellation.hpp"
#include "wssus/quadrature.hpp"
#include "wssus/scattering.hpp"

namespace wssus {

/// Scattering function + power budget + lattice density TF. Only the product
/// T*F enters the bounds, never T and F separately.
struct LinkConfig {
    ScatteringSpec sf;
    PowerBudget power;
    double tf;

    LinkConfig(ScatteringSpec scattering, PowerBudget budget, double tf_product)
        : sf(std::move(scattering)), power(budget), tf(tf_product) {
        if (!(tf >= 1.0))
            throw std::invalid_argument("LinkConfig: TF must be >= 1");
        if (tf > 1.0 / sf.spread() * (1.0 + 1e-12))
            throw std::invalid_argument("LinkConfig: TF must be <= 1/spread");
    }

    double rho() const { return power.snr_density(); }           // P/N0, Hz
    double snr_rate() const { return rho() * sf.sigma2(); }       // (P/N0) sigma^2, nat/s
};

/// Per-bandwidth evaluation record. lb = max(0, lb_raw); rate 0 is always
/// achievable while the raw Theorem-2 value stays inspectable.
struct BoundPoint {
    double w_hz = std::numeric_limits<double>::quiet_NaN();
    double ub1 = std::numeric_limits<double>::quiet_NaN();
    double ub2 = std::numeric_limits<double>::quiet_NaN();
    double lb_raw = std::numeric_limits<double>::quiet_NaN();
    double lb = std::numeric_limits<double>::quiet_NaN();
    double lb_approx = std::numeric_limits<double>::quiet_NaN();
    double alpha_star = std::numeric_limits<double>::quiet_NaN();
    double gamma_star = std::numeric_limits<double>::quiet_NaN();
};

struct BoundCurve {
    std::vector<BoundPoint> points;
};

/// Penalty A(W, beta) = (W/beta) * integral log(1 + beta (P/N0) C_H / W).
/// Brick support makes the integrand constant, giving the closed form
/// (W spread / beta) * log(1 + beta (P/N0) sigma^2 / (W spread)).
inline double penalty_A(double w_hz, double beta, const LinkConfig& cfg) {
    if (!(w_hz > 0.0)) throw std::invalid_argument("penalty_A: W must be > 0");
    if (!(beta >= 1.0)) throw std::invalid_argument("penalty_A: beta must be >= 1");
    const double rho = cfg.rho();
    if (rho * cfg.sf.sigma2() == 0.0) return 0.0;
    if (cfg.sf.shape() == ScatteringSpec::Shape::Brick) {
        const double spread = cfg.sf.spread();
        return (w_hz * spread / beta) * std::log1p(beta * rho * cfg.sf.sigma2() / (w_hz * spread));
    }
    Rect support{-cfg.sf.tau0(), cfg.sf.tau0(), -cfg.sf.nu0(), cfg.sf.nu0()};
    QuadResult r = integrate_2d(
        [&](double tau, double nu) { return std::log1p(beta * rho / w_hz * cfg.sf.density(tau, nu)); },
        support, Tolerance{1e-9, 0.0, 20000});
    return (w_hz / beta) * r.value;
}

struct Ub1Result {
    double value;       // nat/s
    double alpha_star;  // in [0,1]
};

/// First upper bound: max over alpha in [0,1] of
///   (W/TF) log(1 + alpha (P/N0) (TF/W) sigma^2) - alpha A(W, beta),
/// with the stationary point clamped to [0,1]. Since log(1+x) <= x implies
/// A <= (P/N0) sigma^2, the unclamped maximizer is never negative.
inline Ub1Result ub1(double w_hz, const LinkConfig& cfg) {
    if (!(w_hz > 0.0)) throw std::invalid_argument("ub1: W must be > 0");
    const double u = cfg.snr_rate();
    if (u == 0.0) return {0.0, 1.0};
    const double a = penalty_A(w_hz, cfg.power.beta, cfg);
    const double alpha_raw = (w_hz / cfg.tf) * (1.0 / a - 1.0 / u);
    const double alpha = std::min(1.0, std::max(0.0, alpha_raw));
    const double value = (w_hz / cfg.tf) * std::log1p(alpha * u * cfg.tf / w_hz) - alpha * a;
    return {value, alpha};
}

/// Perfect-receive-CSI upper bound (peak constraint dropped):
///   (W/TF) E[log(1 + (P/N0)(TF/W) |h|^2)], |h|^2 ~ Exp(sigma^2).
inline double ub2(double w_hz, const LinkConfig& cfg) {
    if (!(w_hz > 0.0)) throw std::invalid_argument("ub2: W must be > 0");
    const double u = cfg.snr_rate();
    if (u == 0.0) return 0.0;
    const double c = u * cfg.tf / w_hz;
    return (w_hz / cfg.tf) *
           expect_exponential([c](double x) { return std::log1p(c * x); }, 1.0, 64);
}

struct LbResult {
    double value;       // nat/s (raw; may be negative at small W)
    double gamma_star;  // in [1, beta]
};

namespace detail {

/// Coarse log grid over [1, beta] followed by golden-section refinement;
/// returns (gamma, objective(gamma)).
template <class F>
std::pair<double, double> maximize_over_gamma(double beta, F&& objective) {
    if (beta <= 1.0) return {1.0, objective(1.0)};

    constexpr int kCoarse = 32;
    const double log_beta = std::log(beta);
    std::vector<double> gammas(kCoarse), values(kCoarse);
    int best = 0;
    for (int i = 0; i < kCoarse; ++i) {
        gammas[i] = std::exp(log_beta * i / (kCoarse - 1));
        values[i] = objective(gammas[i]);
        if (values[i] > values[best]) best = i;
    }

    double lo = std::log(gammas[std::max(0, best - 1)]);
    double hi = std::log(gammas[std::min(kCoarse - 1, best + 1)]);
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - invphi * (hi - lo);
    double x2 = lo + invphi * (hi - lo);
    double f1 = objective(std::exp(x1));
    double f2 = objective(std::exp(x2));
    while (hi - lo > 1e-4) {  // relative in gamma (log domain)
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = objective(std::exp(x2));
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = objective(std::exp(x1));
        }
    }
    const double g = std::exp(0.5 * (lo + hi));
    const double v = objective(g);
    if (values[best] > v) return {gammas[best], values[best]};
    return {g, v};
}

}  // namespace detail

/// Lower bound of the constant-modulus scheme: max over gamma in [1, beta] of
///   (W/(gamma TF)) * mi(s) - (W/gamma) * integral log(1 + gamma (P/N0) C_H / W)
/// where mi maps the mean per-symbol SNR s = gamma (P/N0) sigma^2 TF / W to
/// the perfect-CSI mutual information in nat/symbol.
template <class Mi>
LbResult lb(double w_hz, const LinkConfig& cfg, Mi&& mi) {
    if (!(w_hz > 0.0)) throw std::invalid_argument("lb: W must be > 0");
    const double u = cfg.snr_rate();
    if (u == 0.0) return {0.0, 1.0};
    auto objective = [&](double gamma) {
        const double s = gamma * u * cfg.tf / w_hz;
        return (w_hz / (gamma * cfg.tf)) * mi(s) - penalty_A(w_hz, gamma, cfg);
    };
    auto [gamma, value] = detail::maximize_over_gamma(cfg.power.beta, objective);
    return {value, gamma};
}

/// Second-order (low-SNR) expansion of the lower bound:
///   max over gamma of  u - gamma u^2 TF/W - (W/gamma) integral log(1 + gamma (P/N0) C_H / W).
inline LbResult lb_approx(double w_hz, const LinkConfig& cfg) {
    if (!(w_hz > 0.0)) throw std::invalid_argument("lb_approx: W must be > 0");
    const double u = cfg.snr_rate();
    if (u == 0.0) return {0.0, 1.0};
    auto objective = [&](double gamma) {
        return u - gamma * u * u * cfg.tf / w_hz - penalty_A(w_hz, gamma, cfg);
    };
    auto [gamma, value] = detail::maximize_over_gamma(cfg.power.beta, objective);
    return {value, gamma};
}

/// Infinite-bandwidth lower bound under a peak constraint in time only:
///   (P/N0) sigma^2 - (1/beta) integral log(1 + beta (P/N0) S(nu)) dnu
/// with S the power-Doppler profile.
inline double viterbi_lb(double beta, const LinkConfig& cfg) {
    if (!(beta >= 1.0)) throw std::invalid_argument("viterbi_lb: beta must be >= 1");
    const double u = cfg.snr_rate();
    if (u == 0.0) return 0.0;
    const double rho = cfg.rho();
    if (cfg.sf.shape() == ScatteringSpec::Shape::Brick) {
        const double two_nu0 = 2.0 * cfg.sf.nu0();
        return u - (two_nu0 / beta) * std::log1p(beta * rho * cfg.sf.sigma2() / two_nu0);
    }
    QuadResult r = integrate_1d(
        [&](double nu) { return std::log1p(beta * rho * power_doppler_profile(cfg.sf, nu)); },
        -cfg.sf.nu0(), cfg.sf.nu0(), Tolerance{1e-9, 0.0, 20000});
    return u - r.value / beta;
}

/// Infinite-bandwidth AWGN capacity at the same receive SNR: (P/N0) sigma^2.
inline double awgn_inf_capacity(const LinkConfig& cfg) { return cfg.snr_rate(); }

enum class BoundKind { Ub1, Ub2, Lb, LbApprox };

inline std::string to_string(BoundKind k) {
    switch (k) {
        case BoundKind::Ub1: return "ub1";
        case BoundKind::Ub2: return "ub2";
        case BoundKind::Lb: return "lb";
        case BoundKind::LbApprox: return "lb_approx";
    }
    return "?";
}

/// The searched bound attains its maximum at an endpoint of the requested
/// range; the range must be widened for the maximizer to be meaningful.
class BoundaryError : public std::runtime_error {
public:
    BoundaryError(bool upper, double w_hz, double value)
        : std::runtime_error(std::string("maximum at the ") + (upper ? "upper" : "lower") +
                             " endpoint W = " + std::to_string(w_hz) +
                             " Hz; widen the bandwidth range"),
          at_upper(upper), endpoint_w_hz(w_hz), endpoint_value(value) {}

    bool at_upper;
    double endpoint_w_hz;
    double endpoint_value;
};

struct CriticalResult {
    double w_star_hz;
    double value;  // bound value at w_star, nat/s
};

/// Golden-section maximization on [a, b]; returns (argmax, max).
template <class F>
std::pair<double, double> golden_section_max(F&& f, double a, double b, double xtol) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > xtol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        }
    }
    if (f1 >= f2) return {x1, f1};
    return {x2, f2};
}

/// Locates the bandwidth maximizing one bound: coarse log-spaced scan (at
/// least 40 points per decade) plus golden-section refinement around the
/// bracketing grid interval. Throws BoundaryError when the scan peaks at an
/// endpoint of the range.
template <class F>
CriticalResult critical_bandwidth_of(F&& bound_at, double w_lo, double w_hi,
                                     int points_per_decade = 40) {
    if (!(w_lo > 0.0) || !(w_hi > w_lo))
        throw std::invalid_argument("critical_bandwidth: invalid range");
    const double decades = std::log10(w_hi / w_lo);
    if (decades < 2.0)
        throw std::invalid_argument("critical_bandwidth: range must span >= 2 decades");
    points_per_decade = std::max(points_per_decade, 40);

    const int n = static_cast<int>(std::ceil(decades * points_per_decade)) + 1;
    const double lg_lo = std::log10(w_lo);
    const double step = decades / (n - 1);
    std::vector<double> values(n);
    int best = 0;
    for (int i = 0; i < n; ++i) {
        values[i] = bound_at(std::pow(10.0, lg_lo + step * i));
        if (values[i] > values[best]) best = i;
    }
    if (best == 0) throw BoundaryError(false, w_lo, values[0]);
    if (best == n - 1) throw BoundaryError(true, w_hi, values[n - 1]);

    auto [lg_star, value] = golden_section_max(
        [&](double lg) { return bound_at(std::pow(10.0, lg)); },
        lg_lo + step * (best - 1), lg_lo + step * (best + 1), 1e-8);
    return {std::pow(10.0, lg_star), value};
}

/// critical_bandwidth for a named bound. The lb variant needs a constellation
/// for the mutual-information term.
inline CriticalResult critical_bandwidth(BoundKind kind, const LinkConfig& cfg,
                                         double w_lo, double w_hi,
                                         int points_per_decade = 40,
                                         const Constellation& c = Constellation::qpsk(),
                                         Tolerance mi_tol = {}) {
    switch (kind) {
        case BoundKind::Ub1:
            return critical_bandwidth_of([&](double w) { return ub1(w, cfg).value; }, w_lo, w_hi,
                                         points_per_decade);
        case BoundKind::Ub2:
            return critical_bandwidth_of([&](double w) { return ub2(w, cfg); }, w_lo, w_hi,
                                         points_per_decade);
        case BoundKind::Lb:
            return critical_bandwidth_of(
                [&](double w) {
                    return lb(w, cfg, [&](double s) { return rayleigh_cm_mi(c, s, mi_tol); }).value;
                },
                w_lo, w_hi, points_per_decade);
        case BoundKind::LbApprox:
            return critical_bandwidth_of([&](double w) { return lb_approx(w, cfg).value; }, w_lo,
                                         w_hi, points_per_decade);
    }
    throw std::invalid_argument("critical_bandwidth: unknown bound");
}

}  // namespace wssus
