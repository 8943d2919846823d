#pragma once

// Perfect-CSI mutual information of y = h x + z for constant-modulus
// constellations: Gauss-Hermite quadrature over the noise, Gauss-Laguerre
// over the Rayleigh fading gain, and a seeded Monte-Carlo oracle.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "wssus/quadrature.hpp"

namespace wssus {

class Constellation {
public:
    explicit Constellation(std::vector<std::complex<double>> points)
        : points_(std::move(points)) {
        if (points_.size() < 2)
            throw std::invalid_argument("Constellation: needs at least 2 points");
        for (const auto& p : points_)
            if (std::fabs(std::abs(p) - 1.0) > 1e-12)
                throw std::invalid_argument("Constellation: points must have unit modulus");
        for (std::size_t i = 0; i < points_.size(); ++i)
            for (std::size_t j = i + 1; j < points_.size(); ++j)
                if (std::abs(points_[i] - points_[j]) < 1e-9)
                    throw std::invalid_argument("Constellation: points must be distinct");
    }

    static Constellation psk(int m, double phase = 0.0) {
        if (m < 2) throw std::invalid_argument("Constellation::psk: m must be >= 2");
        std::vector<std::complex<double>> pts(m);
        for (int i = 0; i < m; ++i)
            pts[i] = std::polar(1.0, phase + 2.0 * M_PI * i / m);
        return Constellation(std::move(pts));
    }

    static Constellation qpsk() { return psk(4, M_PI / 4.0); }  // {+-1 +-j}/sqrt(2)
    static Constellation bpsk() { return psk(2); }

    std::size_t size() const { return points_.size(); }
    const std::vector<std::complex<double>>& points() const { return points_; }

private:
    std::vector<std::complex<double>> points_;
};

/// I(y;x) in nats for y = sqrt(snr) x + z, x uniform over the constellation,
/// z ~ CN(0,1).  Exact sum over symbol pairs, tensor Gauss-Hermite over z:
///
///   I = log m - (1/m) sum_x E_z[ log sum_x' exp(-|d|^2 - 2 Re(conj(d) z)) ],
///   d = sqrt(snr) (x - x').
///
/// The exponential splits into per-axis factors, so the tensor rule needs
/// only O(m^2 * order) exp evaluations instead of O(m^2 * order^2).
inline double awgn_cm_mi(const Constellation& c, double snr, int order = 64) {
    if (!(snr >= 0.0) || !std::isfinite(snr))
        throw std::invalid_argument("awgn_cm_mi: snr must be finite and >= 0");
    if (snr == 0.0) return 0.0;

    const auto& pts = c.points();
    const std::size_t m = pts.size();
    const double root = std::sqrt(snr);

    if (order <= 160) {  // factorized exponents stay below exp overflow here
        const GaussRule& rule = gauss_hermite(order);
        const std::size_t n = rule.nodes.size();
        std::vector<double> fa(m * n), fb(m * n), row(n);
        double outer = 0.0;
        for (std::size_t xi = 0; xi < m; ++xi) {
            for (std::size_t xj = 0; xj < m; ++xj) {
                const std::complex<double> d = root * (pts[xi] - pts[xj]);
                const double half = -0.5 * std::norm(d);
                for (std::size_t i = 0; i < n; ++i) {
                    fa[xj * n + i] = std::exp(half - 2.0 * d.real() * rule.nodes[i]);
                    fb[xj * n + i] = std::exp(half - 2.0 * d.imag() * rule.nodes[i]);
                }
            }
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    double s = 0.0;
                    for (std::size_t xj = 0; xj < m; ++xj)
                        s += fa[xj * n + i] * fb[xj * n + j];
                    row[j] = rule.weights[j] * std::log(s);
                }
                double inner = 0.0;
                for (std::size_t j = 0; j < n; ++j) inner += row[j];
                acc += rule.weights[i] * inner;
            }
            outer += acc / M_PI;
        }
        return std::log(static_cast<double>(m)) - outer / static_cast<double>(m);
    }

    // Generic path via expect_complex_gaussian_2d with a log-sum-exp guard.
    double outer = 0.0;
    for (std::size_t xi = 0; xi < m; ++xi) {
        outer += expect_complex_gaussian_2d(
            [&](double a, double b) {
                double mx = 0.0;  // the x'=x term has exponent 0
                std::vector<double> expo(m);
                for (std::size_t xj = 0; xj < m; ++xj) {
                    const std::complex<double> d = root * (pts[xi] - pts[xj]);
                    expo[xj] = -std::norm(d) - 2.0 * (d.real() * a + d.imag() * b);
                    mx = std::max(mx, expo[xj]);
                }
                double s = 0.0;
                for (double e : expo) s += std::exp(e - mx);
                return mx + std::log(s);
            },
            order);
    }
    return std::log(static_cast<double>(m)) - outer / static_cast<double>(m);
}

/// E over |h|^2 ~ Exp(1) of awgn_cm_mi(c, avg_snr |h|^2): the perfect-CSI
/// mutual information over Rayleigh fading with mean receive SNR avg_snr.
/// Evaluated at Laguerre orders 64 and 96; a third refinement at 144 kicks in
/// if the two disagree beyond tol.
inline double rayleigh_cm_mi(const Constellation& c, double avg_snr, Tolerance tol = {}) {
    if (!(avg_snr >= 0.0) || !std::isfinite(avg_snr))
        throw std::invalid_argument("rayleigh_cm_mi: avg_snr must be finite and >= 0");
    if (avg_snr == 0.0) return 0.0;
    auto g = [&](double x) { return awgn_cm_mi(c, avg_snr * x); };
    const double coarse = expect_exponential(g, 1.0, 64);
    const double fine = expect_exponential(g, 1.0, 96);
    if (std::fabs(fine - coarse) <= std::max(tol.abs, tol.rel * std::fabs(fine)))
        return fine;
    return expect_exponential(g, 1.0, 144);
}

struct MiEstimate {
    double value;      // nat/symbol
    double std_error;  // standard error of the mean
};

/// Monte-Carlo estimate of awgn_cm_mi over random (x, z); deterministic for a
/// fixed seed.
inline MiEstimate mc_mi_oracle(const Constellation& c, double snr, std::int64_t n,
                               std::uint64_t seed) {
    if (n < 10000) throw std::invalid_argument("mc_mi_oracle: needs n >= 1e4 samples");
    if (!(snr >= 0.0)) throw std::invalid_argument("mc_mi_oracle: snr must be >= 0");

    const auto& pts = c.points();
    const std::size_t m = pts.size();
    const double root = std::sqrt(snr);
    const double logm = std::log(static_cast<double>(m));

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, m - 1);
    std::normal_distribution<double> axis(0.0, std::sqrt(0.5));

    double mean = 0.0, m2 = 0.0;
    for (std::int64_t t = 0; t < n; ++t) {
        const std::complex<double> x = pts[pick(rng)];
        const std::complex<double> z(axis(rng), axis(rng));
        double s = 0.0;
        for (std::size_t xj = 0; xj < m; ++xj) {
            const std::complex<double> d = root * (x - pts[xj]);
            s += std::exp(-std::norm(d) - 2.0 * (d.real() * z.real() + d.imag() * z.imag()));
        }
        const double v = logm - std::log(s);
        const double delta = v - mean;
        mean += delta / static_cast<double>(t + 1);
        m2 += delta * (v - mean);
    }
    const double var = m2 / static_cast<double>(n - 1);
    return {mean, std::sqrt(var / static_cast<double>(n))};
}

}  // namespace wssus
