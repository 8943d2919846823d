#pragma once

// Bandwidth sweeps: parallel evaluation of all bounds on a log-spaced grid,
// deterministic CSV emission, the JSON reproducibility sidecar, and the
// critical-bandwidth report.

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "wssus/bounds.hpp"
#include "wssus/config.hpp"
#include "wssus/numfmt.hpp"

namespace wssus {

/// Worker count: WSSUS_THREADS caps parallelism, 0 or unset means auto.
inline unsigned sweep_thread_count(std::size_t jobs) {
    unsigned n = 0;
    if (const char* env = std::getenv("WSSUS_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v >= 0) n = static_cast<unsigned>(v);
    }
    if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

/// Index-parallel map with deterministic output placement; fn must not throw.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const unsigned workers = sweep_thread_count(n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    for (auto& th : pool) th.join();
}

struct SweepResult {
    BoundCurve curve;
    bool had_failure = false;  // at least one point recorded as NaN
};

/// Log-spaced bandwidth grid, both endpoints included exactly.
inline std::vector<double> sweep_grid(double w_min, double w_max, int points_per_decade) {
    const double decades = std::log10(w_max / w_min);
    const int n = static_cast<int>(std::lround(decades * points_per_decade)) + 1;
    std::vector<double> w(n);
    const double lg = std::log10(w_min);
    const double step = decades / (n - 1);
    for (int i = 0; i < n; ++i) w[i] = std::pow(10.0, lg + step * i);
    w.front() = w_min;
    w.back() = w_max;
    return w;
}

/// Evaluates ub1, ub2, lb (configured constellation) and lb_approx at every
/// grid bandwidth. A numerical failure marks that point NaN and the sweep
/// continues.
inline SweepResult run_sweep(const RunConfig& cfg) {
    if (auto violations = validate_config(cfg); !violations.empty())
        throw std::invalid_argument("config violates: " + violations.front());

    const LinkConfig link = make_link(cfg);
    const Constellation constellation = make_constellation(cfg);
    const std::vector<double> grid = sweep_grid(cfg.w_min_hz, cfg.w_max_hz, cfg.points_per_decade);

    SweepResult result;
    result.curve.points.resize(grid.size());
    std::atomic<bool> failed{false};

    parallel_for(grid.size(), [&](std::size_t i) {
        BoundPoint& p = result.curve.points[i];
        p.w_hz = grid[i];
        try {
            const Ub1Result u1 = ub1(grid[i], link);
            const LbResult l = lb(grid[i], link,
                                  [&](double s) { return rayleigh_cm_mi(constellation, s); });
            p.ub1 = u1.value;
            p.alpha_star = u1.alpha_star;
            p.ub2 = ub2(grid[i], link);
            p.lb_raw = l.value;
            p.lb = std::max(0.0, l.value);
            p.lb_approx = lb_approx(grid[i], link).value;
            p.gamma_star = l.gamma_star;
        } catch (const std::exception&) {
            failed = true;  // rate fields stay NaN
        }
    });
    result.had_failure = failed;
    return result;
}

inline constexpr char kCurveHeader[] =
    "bandwidth_hz,ub1,ub2,lb_raw,lb,lb_approx,alpha_star,gamma_star";

/// CSV emission; unit "bit" divides every rate column by log 2 at write time.
inline void write_curve_csv(std::ostream& os, const BoundCurve& curve,
                            const std::string& unit = "nat") {
    const double scale = unit == "bit" ? 1.0 / std::numbers::ln2 : 1.0;
    os << kCurveHeader << '\n';
    for (const BoundPoint& p : curve.points)
        os << fmt_double(p.w_hz) << ',' << fmt_double(p.ub1 * scale) << ','
           << fmt_double(p.ub2 * scale) << ',' << fmt_double(p.lb_raw * scale) << ','
           << fmt_double(p.lb * scale) << ',' << fmt_double(p.lb_approx * scale) << ','
           << fmt_double(p.alpha_star) << ',' << fmt_double(p.gamma_star) << '\n';
}

inline BoundCurve read_curve_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCurveHeader)
        throw std::invalid_argument("curve CSV: missing or unexpected header");
    BoundCurve curve;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(parse_double(cell));
        if (cells.size() != 8)
            throw std::invalid_argument("curve CSV: expected 8 columns, got " +
                                        std::to_string(cells.size()));
        curve.points.push_back(BoundPoint{cells[0], cells[1], cells[2], cells[3], cells[4],
                                          cells[5], cells[6], cells[7]});
    }
    return curve;
}

/// Sidecar path: the output path with its extension replaced by .json.
inline std::string sidecar_path(const std::string& out_path) {
    const auto slash = out_path.find_last_of("/\\");
    const auto dot = out_path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return out_path + ".json";
    return out_path.substr(0, dot) + ".json";
}

struct CriticalReport {
    BoundKind bound;
    double w_star_hz;
    double value;         // searched bound at w_star
    double ub1_at;        // all four bounds evaluated at w_star
    double ub2_at;
    double lb_at;
    double lb_approx_at;
};

/// Critical-bandwidth search for one bound plus the other bounds evaluated at
/// the maximizer. BoundaryError propagates to the caller verbatim.
inline CriticalReport find_critical(const RunConfig& cfg, BoundKind bound) {
    if (auto violations = validate_config(cfg); !violations.empty())
        throw std::invalid_argument("config violates: " + violations.front());
    const LinkConfig link = make_link(cfg);
    const Constellation constellation = make_constellation(cfg);

    const CriticalResult r = critical_bandwidth(bound, link, cfg.w_min_hz, cfg.w_max_hz,
                                                cfg.points_per_decade, constellation);
    CriticalReport rep{};
    rep.bound = bound;
    rep.w_star_hz = r.w_star_hz;
    rep.value = r.value;
    rep.ub1_at = ub1(r.w_star_hz, link).value;
    rep.ub2_at = ub2(r.w_star_hz, link);
    rep.lb_at = std::max(0.0, lb(r.w_star_hz, link, [&](double s) {
                                  return rayleigh_cm_mi(constellation, s);
                              }).value);
    rep.lb_approx_at = lb_approx(r.w_star_hz, link).value;
    return rep;
}

}  // namespace wssus
