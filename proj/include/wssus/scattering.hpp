#pragma once

// WSSUS scattering functions with compact rectangular support, their derived
// statistics (variance, spread, power-Doppler profile, TF-correlation), and
// the lattice parameter constraints.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wssus/quadrature.hpp"

namespace wssus {

/// sin(pi x)/(pi x), continuous at 0.
inline double sinc(double x) {
    if (x == 0.0) return 1.0;
    const double px = M_PI * x;
    return std::sin(px) / px;
}

class ScatteringSpec {
public:
    enum class Shape { Brick, Grid };

    /// Constant density sigma2 / (4 tau0 nu0) on [-tau0,tau0] x [-nu0,nu0].
    static ScatteringSpec brick(double tau0, double nu0, double sigma2) {
        return ScatteringSpec(Shape::Brick, tau0, nu0, sigma2, {}, 0, 0);
    }

    /// Bilinearly interpolated density from a uniform mesh spanning the
    /// support (rows = tau samples, cols = nu samples, row-major). The mesh
    /// is rescaled at construction so the density integrates to sigma2.
    static ScatteringSpec grid(double tau0, double nu0, double sigma2,
                               std::vector<double> mesh, int rows, int cols) {
        return ScatteringSpec(Shape::Grid, tau0, nu0, sigma2, std::move(mesh), rows, cols);
    }

    Shape shape() const { return shape_; }
    double tau0() const { return tau0_; }
    double nu0() const { return nu0_; }
    double sigma2() const { return sigma2_; }

    /// Support area Delta_H = 4 tau0 nu0.
    double spread() const { return 4.0 * tau0_ * nu0_; }

    /// Scattering density C_H(tau, nu); zero outside the support rectangle.
    double density(double tau, double nu) const {
        if (std::fabs(tau) > tau0_ || std::fabs(nu) > nu0_) return 0.0;
        if (shape_ == Shape::Brick) return sigma2_ / spread();
        return interpolate(tau, nu);
    }

private:
    ScatteringSpec(Shape shape, double tau0, double nu0, double sigma2,
                   std::vector<double> mesh, int rows, int cols)
        : shape_(shape), tau0_(tau0), nu0_(nu0), sigma2_(sigma2),
          mesh_(std::move(mesh)), rows_(rows), cols_(cols) {
        if (!(tau0_ > 0.0)) throw std::invalid_argument("ScatteringSpec: tau0 must be > 0");
        if (!(nu0_ > 0.0)) throw std::invalid_argument("ScatteringSpec: nu0 must be > 0");
        if (!(sigma2_ >= 0.0) || !std::isfinite(sigma2_))
            throw std::invalid_argument("ScatteringSpec: sigma2 must be finite and >= 0");
        if (spread() > 1.0)
            throw std::invalid_argument(
                "ScatteringSpec: spread 4*tau0*nu0 = " + std::to_string(spread()) +
                " exceeds 1 (channel not underspread)");
        if (shape_ == Shape::Grid) normalize_mesh();
    }

    void normalize_mesh() {
        if (rows_ < 2 || cols_ < 2)
            throw std::invalid_argument("ScatteringSpec: mesh needs at least 2x2 nodes");
        if (mesh_.size() != static_cast<std::size_t>(rows_) * cols_)
            throw std::invalid_argument("ScatteringSpec: mesh size does not match rows*cols");
        for (double v : mesh_)
            if (!(v >= 0.0) || !std::isfinite(v))
                throw std::invalid_argument("ScatteringSpec: mesh values must be finite and >= 0");

        // Exact integral of the bilinear interpolant: per cell, area times the
        // mean of its four corner values.
        const double htau = 2.0 * tau0_ / (rows_ - 1);
        const double hnu = 2.0 * nu0_ / (cols_ - 1);
        double integral = 0.0;
        for (int i = 0; i + 1 < rows_; ++i)
            for (int j = 0; j + 1 < cols_; ++j)
                integral += 0.25 * (at(i, j) + at(i + 1, j) + at(i, j + 1) + at(i + 1, j + 1));
        integral *= htau * hnu;

        if (sigma2_ == 0.0) {
            for (double& v : mesh_) v = 0.0;
            return;
        }
        if (!(integral > 0.0))
            throw std::invalid_argument("ScatteringSpec: mesh integrates to zero, cannot scale to sigma2");
        const double scale = sigma2_ / integral;
        for (double& v : mesh_) v *= scale;
    }

    double at(int i, int j) const { return mesh_[static_cast<std::size_t>(i) * cols_ + j]; }

    double interpolate(double tau, double nu) const {
        const double htau = 2.0 * tau0_ / (rows_ - 1);
        const double hnu = 2.0 * nu0_ / (cols_ - 1);
        double fi = (tau + tau0_) / htau;
        double fj = (nu + nu0_) / hnu;
        int i = std::min(static_cast<int>(fi), rows_ - 2);
        int j = std::min(static_cast<int>(fj), cols_ - 2);
        i = std::max(i, 0);
        j = std::max(j, 0);
        const double s = fi - i;
        const double t = fj - j;
        return (1 - s) * (1 - t) * at(i, j) + s * (1 - t) * at(i + 1, j) +
               (1 - s) * t * at(i, j + 1) + s * t * at(i + 1, j + 1);
    }

    Shape shape_;
    double tau0_;
    double nu0_;
    double sigma2_;
    std::vector<double> mesh_;
    int rows_ = 0;
    int cols_ = 0;
};

/// Power-Doppler profile S(nu) = integral of C_H(tau, nu) over tau.
inline double power_doppler_profile(const ScatteringSpec& sf, double nu) {
    if (std::fabs(nu) > sf.nu0()) return 0.0;
    if (sf.shape() == ScatteringSpec::Shape::Brick) return sf.sigma2() / (2.0 * sf.nu0());
    // The bilinear density is piecewise linear in tau at fixed nu, so the
    // trapezoid over the tau nodes is exact.
    QuadResult r = integrate_1d([&](double tau) { return sf.density(tau, nu); },
                                -sf.tau0(), sf.tau0(), Tolerance{1e-10, 0.0, 4000});
    return r.value;
}

/// TF-correlation R_H(dt, df) = integral of C_H(tau,nu) e^{+j2pi(nu dt - tau df)}.
/// Brick support factorizes into sinc(2 nu0 dt) * sinc(2 tau0 df).
inline std::complex<double> correlation(const ScatteringSpec& sf, double dt, double df) {
    if (sf.shape() == ScatteringSpec::Shape::Brick)
        return {sf.sigma2() * sinc(2.0 * sf.nu0() * dt) * sinc(2.0 * sf.tau0() * df), 0.0};
    Rect support{-sf.tau0(), sf.tau0(), -sf.nu0(), sf.nu0()};
    Tolerance tol{1e-9, 1e-12 * std::max(sf.sigma2(), 1e-300), 20000};
    auto phase = [dt, df](double tau, double nu) { return 2.0 * M_PI * (nu * dt - tau * df); };
    QuadResult re = integrate_2d(
        [&](double tau, double nu) { return sf.density(tau, nu) * std::cos(phase(tau, nu)); },
        support, tol);
    QuadResult im = integrate_2d(
        [&](double tau, double nu) { return sf.density(tau, nu) * std::sin(phase(tau, nu)); },
        support, tol);
    return {re.value, im.value};
}

/// OFDM lattice parameters: symbol duration T (s), subcarrier spacing F (Hz).
struct GridParams {
    double T;
    double F;

    GridParams(double symbol_duration, double subcarrier_spacing)
        : T(symbol_duration), F(subcarrier_spacing) {
        if (!(T > 0.0) || !(F > 0.0))
            throw std::invalid_argument("GridParams: T and F must be > 0");
    }
};

enum class GridViolation {
    TFProductBelowOne,       // T*F >= 1 violated
    SymbolTimeTooLong,       // T <= 1/(2 nu0) violated
    SubcarrierSpacingTooWide  // F <= 1/(2 tau0) violated
};

inline std::string to_string(GridViolation v) {
    switch (v) {
        case GridViolation::TFProductBelowOne: return "T*F >= 1";
        case GridViolation::SymbolTimeTooLong: return "T <= 1/(2*nu0)";
        case GridViolation::SubcarrierSpacingTooWide: return "F <= 1/(2*tau0)";
    }
    return "?";
}

/// Violations are data, not failures; an empty list means the lattice is valid.
inline std::vector<GridViolation> validate_grid(const GridParams& g, const ScatteringSpec& sf) {
    std::vector<GridViolation> out;
    if (g.T * g.F < 1.0) out.push_back(GridViolation::TFProductBelowOne);
    if (g.T > 1.0 / (2.0 * sf.nu0())) out.push_back(GridViolation::SymbolTimeTooLong);
    if (g.F > 1.0 / (2.0 * sf.tau0())) out.push_back(GridViolation::SubcarrierSpacingTooWide);
    return out;
}

/// Average power, one-sided noise density and peak-to-average ratio.
struct PowerBudget {
    double P;     // W
    double N0;    // W/Hz
    double beta;  // >= 1

    PowerBudget(double avg_power_w, double noise_density_w_per_hz, double peak_to_avg)
        : P(avg_power_w), N0(noise_density_w_per_hz), beta(peak_to_avg) {
        if (!(P >= 0.0) || !std::isfinite(P))
            throw std::invalid_argument("PowerBudget: P must be finite and >= 0");
        if (!(N0 > 0.0)) throw std::invalid_argument("PowerBudget: N0 must be > 0");
        if (!(beta >= 1.0)) throw std::invalid_argument("PowerBudget: beta must be >= 1");
    }

    double peak_power() const { return beta * P; }
    /// rho = P/N0 in Hz; every bound depends on P and N0 through this ratio.
    double snr_density() const { return P / N0; }
};

}  // namespace wssus
