#pragma once

// Brute-force verification of the block-Toeplitz Szego approximation:
// explicit finite channel covariance matrices, stable log-determinants, and
// the comparison against the asymptotic integral that both bound penalties
// rely on.

#include <cmath>
#include <complex>
#include <ostream>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "wssus/bounds.hpp"
#include "wssus/numfmt.hpp"
#include "wssus/scattering.hpp"

namespace wssus {

class SizeExceeded : public std::length_error {
public:
    explicit SizeExceeded(int km)
        : std::length_error("covariance size K*M = " + std::to_string(km) +
                            " exceeds the desk-scale cap of 4096") {}
};

class NumericalFailure : public std::runtime_error {
public:
    explicit NumericalFailure(const char* what) : std::runtime_error(what) {}
};

/// Finite block-Toeplitz channel covariance description: K OFDM symbols by
/// M subcarriers sampled from a scattering spec on a valid lattice.
struct CovarianceSpec {
    int K;
    int M;
    GridParams grid;
    ScatteringSpec sf;

    static constexpr int kMaxEntries = 4096;

    CovarianceSpec(int symbols, int subcarriers, GridParams g, ScatteringSpec scattering)
        : K(symbols), M(subcarriers), grid(g), sf(std::move(scattering)) {
        if (K < 1 || M < 1) throw std::invalid_argument("CovarianceSpec: K and M must be >= 1");
        if (static_cast<long long>(K) * M > kMaxEntries) throw SizeExceeded(K * M);
        auto violations = validate_grid(grid, sf);
        if (!violations.empty())
            throw std::invalid_argument("CovarianceSpec: lattice violates " +
                                        to_string(violations.front()));
    }
};

/// Hermitian KM x KM covariance, time-major layout: entry ((k,m),(k',m')) =
/// R_H((k-k')T, (m-m')F). Block-Toeplitz with Toeplitz blocks by stationarity.
inline Eigen::MatrixXcd build_covariance(const CovarianceSpec& spec) {
    const int n = spec.K * spec.M;
    Eigen::MatrixXcd r(n, n);
    // Correlation depends only on the lag pair; precompute one quadrant.
    std::vector<std::complex<double>> lag((2 * spec.K - 1) * (2 * spec.M - 1));
    auto lag_at = [&](int dk, int dm) -> std::complex<double>& {
        return lag[static_cast<std::size_t>(dk + spec.K - 1) * (2 * spec.M - 1) + (dm + spec.M - 1)];
    };
    for (int dk = -(spec.K - 1); dk <= spec.K - 1; ++dk)
        for (int dm = -(spec.M - 1); dm <= spec.M - 1; ++dm)
            lag_at(dk, dm) = correlation(spec.sf, dk * spec.grid.T, dm * spec.grid.F);

    for (int k = 0; k < spec.K; ++k)
        for (int m = 0; m < spec.M; ++m)
            for (int k2 = 0; k2 < spec.K; ++k2)
                for (int m2 = 0; m2 < spec.M; ++m2)
                    r(k * spec.M + m, k2 * spec.M + m2) = lag_at(k - k2, m - m2);

    // Enforce exact Hermitian symmetry against quadrature round-off.
    r = 0.5 * (r + r.adjoint()).eval();
    return r;
}

/// Finite-size penalty (1/(K T)) log det(I + gamma (P/N0) (T/M) R_h) in nat/s,
/// via Cholesky of the Hermitian positive-definite argument.
inline double penalty_finite(const CovarianceSpec& spec, const PowerBudget& power, double gamma) {
    if (!(gamma >= 1.0)) throw std::invalid_argument("penalty_finite: gamma must be >= 1");
    const double c = gamma * power.snr_density() * spec.grid.T / spec.M;
    if (c == 0.0) return 0.0;
    Eigen::MatrixXcd a = build_covariance(spec);
    a *= c;
    a.diagonal().array() += 1.0;
    Eigen::LLT<Eigen::MatrixXcd> llt(a);
    if (llt.info() != Eigen::Success)
        throw NumericalFailure("penalty_finite: Cholesky factorization failed "
                               "(matrix lost positive definiteness)");
    double logdet = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        logdet += 2.0 * std::log(llt.matrixLLT()(i, i).real());
    return logdet / (spec.K * spec.grid.T);
}

struct SzegoRow {
    int K;
    double finite;      // nat/s
    double asymptotic;  // nat/s
    double rel_error;
};

/// Asymptotic value of the penalty per the block-Toeplitz Szego limit:
///   W * integral log(1 + gamma (P/N0) C_H / W),  W = M F.
inline double szego_asymptotic(int m_subcarriers, const GridParams& grid,
                               const ScatteringSpec& sf, const PowerBudget& power,
                               double gamma) {
    const double w_hz = m_subcarriers * grid.F;
    LinkConfig cfg(sf, power, std::min(grid.T * grid.F, 1.0 / sf.spread()));
    // penalty_A(W, gamma) = (W/gamma) integral log(1 + gamma rho C_H / W);
    // the Szego limit carries no 1/gamma prefactor.
    return gamma * penalty_A(w_hz, gamma, cfg);
}

/// Finite log-det penalty versus the asymptotic integral for an increasing
/// list of K at fixed M.
inline std::vector<SzegoRow> szego_check(const std::vector<int>& k_list, int m_subcarriers,
                                         const GridParams& grid, const ScatteringSpec& sf,
                                         const PowerBudget& power, double gamma = 1.0) {
    if (k_list.empty()) throw std::invalid_argument("szego_check: empty K list");
    for (std::size_t i = 1; i < k_list.size(); ++i)
        if (k_list[i] <= k_list[i - 1])
            throw std::invalid_argument("szego_check: K list must be increasing");
    if (auto violations = validate_grid(grid, sf); !violations.empty())
        throw std::invalid_argument("szego_check: lattice violates " +
                                    to_string(violations.front()));

    const double asym = szego_asymptotic(m_subcarriers, grid, sf, power, gamma);
    std::vector<SzegoRow> rows;
    rows.reserve(k_list.size());
    for (int k : k_list) {
        CovarianceSpec spec(k, m_subcarriers, grid, sf);
        const double fin = penalty_finite(spec, power, gamma);
        const double rel = (asym == 0.0 && fin == 0.0) ? 0.0 : std::fabs(fin - asym) / asym;
        rows.push_back({k, fin, asym, rel});
    }
    return rows;
}

inline void write_szego_csv(std::ostream& os, const std::vector<SzegoRow>& rows) {
    os << "K,finite,asymptotic,rel_error\n";
    for (const SzegoRow& r : rows)
        os << r.K << ',' << fmt_double(r.finite) << ',' << fmt_double(r.asymptotic) << ','
           << fmt_double(r.rel_error) << '\n';
}

}  // namespace wssus
