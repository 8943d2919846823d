#pragma once

// Run configuration: flat key/value files, JSON sidecars and command-line
// overrides, all sharing one key set. Defaults reproduce the reference
// experiment (brick scattering, spread 1e-3, sigma^2 = -90 dB, 1 mW transmit
// power, N0 = 4.14e-21 W/Hz, TF = 1.25, QPSK, beta = 1).

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "wssus/bounds.hpp"
#include "wssus/constellation.hpp"
#include "wssus/numfmt.hpp"
#include "wssus/scattering.hpp"

namespace wssus {

struct RunConfig {
    std::string shape = "brick";
    double tau0_s = 0.5e-6;
    double nu0_hz = 500.0;
    double sigma2_db = -90.0;
    std::string mesh_path;  // grid shape only

    double p_w = 1e-3;
    double n0_w_per_hz = 4.14e-21;
    double beta = 1.0;
    double tf = 1.25;

    double w_min_hz = 1e7;
    double w_max_hz = 1e12;
    int points_per_decade = 40;

    std::string constellation = "qpsk";
    std::string unit = "nat";
    std::uint64_t seed = 1;

    int oracle_m = 8;
    std::vector<int> oracle_k_list = {16, 32, 64};
    double oracle_time_oversampling = 0.9;  // 1 = exact critical lattice
    double oracle_gamma = 1.0;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(std::stoi(item));
    }
    return out;
}

}  // namespace detail

/// Applies one key=value override; throws invalid_argument on unknown keys or
/// malformed values.
inline void config_set(RunConfig& cfg, const std::string& key, const std::string& value) {
    try {
        if (key == "shape") cfg.shape = value;
        else if (key == "tau0_s") cfg.tau0_s = parse_double(value);
        else if (key == "nu0_hz") cfg.nu0_hz = parse_double(value);
        else if (key == "sigma2_db") cfg.sigma2_db = parse_double(value);
        else if (key == "mesh_path") cfg.mesh_path = value;
        else if (key == "p_w") cfg.p_w = parse_double(value);
        else if (key == "n0_w_per_hz") cfg.n0_w_per_hz = parse_double(value);
        else if (key == "beta") cfg.beta = parse_double(value);
        else if (key == "tf") cfg.tf = parse_double(value);
        else if (key == "w_min_hz") cfg.w_min_hz = parse_double(value);
        else if (key == "w_max_hz") cfg.w_max_hz = parse_double(value);
        else if (key == "points_per_decade") cfg.points_per_decade = std::stoi(value);
        else if (key == "constellation") cfg.constellation = value;
        else if (key == "unit") cfg.unit = value;
        else if (key == "seed") cfg.seed = std::stoull(value);
        else if (key == "oracle_m") cfg.oracle_m = std::stoi(value);
        else if (key == "oracle_k_list") cfg.oracle_k_list = detail::parse_int_list(value);
        else if (key == "oracle_time_oversampling") cfg.oracle_time_oversampling = parse_double(value);
        else if (key == "oracle_gamma") cfg.oracle_gamma = parse_double(value);
        else throw std::invalid_argument("unknown config key '" + key + "'");
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception&) {
        throw std::invalid_argument("bad value '" + value + "' for config key '" + key + "'");
    }
}

/// Flat key/value text: one `key = value` per line, `#` comments.
inline void load_flat_config(RunConfig& cfg, std::istream& in) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        config_set(cfg, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
    }
}

inline nlohmann::json config_to_json(const RunConfig& cfg) {
    return nlohmann::json{{"shape", cfg.shape},
                          {"tau0_s", cfg.tau0_s},
                          {"nu0_hz", cfg.nu0_hz},
                          {"sigma2_db", cfg.sigma2_db},
                          {"mesh_path", cfg.mesh_path},
                          {"p_w", cfg.p_w},
                          {"n0_w_per_hz", cfg.n0_w_per_hz},
                          {"beta", cfg.beta},
                          {"tf", cfg.tf},
                          {"w_min_hz", cfg.w_min_hz},
                          {"w_max_hz", cfg.w_max_hz},
                          {"points_per_decade", cfg.points_per_decade},
                          {"constellation", cfg.constellation},
                          {"unit", cfg.unit},
                          {"seed", cfg.seed},
                          {"oracle_m", cfg.oracle_m},
                          {"oracle_k_list", cfg.oracle_k_list},
                          {"oracle_time_oversampling", cfg.oracle_time_oversampling},
                          {"oracle_gamma", cfg.oracle_gamma}};
}

inline RunConfig config_from_json(const nlohmann::json& j) {
    RunConfig cfg;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        if (key == "oracle_k_list") {
            cfg.oracle_k_list = it.value().get<std::vector<int>>();
        } else if (key == "seed") {
            cfg.seed = it.value().get<std::uint64_t>();
        } else if (key == "points_per_decade") {
            cfg.points_per_decade = it.value().get<int>();
        } else if (key == "oracle_m") {
            cfg.oracle_m = it.value().get<int>();
        } else if (it.value().is_string()) {
            config_set(cfg, key, it.value().get<std::string>());
        } else {
            config_set(cfg, key, fmt_double(it.value().get<double>()));
        }
    }
    return cfg;
}

/// Loads a config file; JSON sidecars (by extension or leading '{') and flat
/// key/value files are both accepted.
inline void load_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    const std::string trimmed = detail::trim(text);
    const bool json = (path.size() >= 5 && path.substr(path.size() - 5) == ".json") ||
                      (!trimmed.empty() && trimmed.front() == '{');
    if (json) {
        cfg = config_from_json(nlohmann::json::parse(text));
    } else {
        std::stringstream ss(text);
        load_flat_config(cfg, ss);
    }
}

/// All violated invariants, each message naming the constraint. Empty means
/// the config is runnable.
inline std::vector<std::string> validate_config(const RunConfig& cfg) {
    std::vector<std::string> v;
    if (cfg.shape != "brick" && cfg.shape != "grid")
        v.push_back("shape must be 'brick' or 'grid'");
    if (!(cfg.tau0_s > 0.0)) v.push_back("tau0_s must be > 0");
    if (!(cfg.nu0_hz > 0.0)) v.push_back("nu0_hz must be > 0");
    if (cfg.shape == "grid" && cfg.mesh_path.empty())
        v.push_back("grid shape requires mesh_path");
    const double spread = 4.0 * cfg.tau0_s * cfg.nu0_hz;
    if (spread > 1.0) v.push_back("spread 4*tau0*nu0 must be <= 1 (underspread)");
    if (!(cfg.p_w >= 0.0)) v.push_back("p_w must be >= 0");
    if (!(cfg.n0_w_per_hz > 0.0)) v.push_back("n0_w_per_hz must be > 0");
    if (!(cfg.beta >= 1.0)) v.push_back("beta must be >= 1");
    if (!(cfg.tf >= 1.0)) v.push_back("tf must be >= 1");
    if (spread > 0.0 && cfg.tf > 1.0 / spread * (1.0 + 1e-12))
        v.push_back("tf must be <= 1/spread");
    if (!(cfg.w_min_hz > 0.0)) v.push_back("w_min_hz must be > 0");
    if (!(cfg.w_min_hz < cfg.w_max_hz)) v.push_back("w_min_hz must be < w_max_hz");
    if (cfg.points_per_decade < 10) v.push_back("points_per_decade must be >= 10");
    if (cfg.unit != "nat" && cfg.unit != "bit") v.push_back("unit must be 'nat' or 'bit'");
    if (cfg.constellation != "qpsk" && cfg.constellation != "bpsk") {
        const auto& s = cfg.constellation;
        const bool npsk = s.size() > 3 && s.substr(s.size() - 3) == "psk" &&
                          s.find_first_not_of("0123456789") == s.size() - 3;
        if (!npsk) v.push_back("constellation must be qpsk, bpsk or <n>psk");
    }
    if (cfg.oracle_m < 1) v.push_back("oracle_m must be >= 1");
    if (cfg.oracle_k_list.empty()) v.push_back("oracle_k_list must be nonempty");
    for (std::size_t i = 0; i < cfg.oracle_k_list.size(); ++i) {
        if (cfg.oracle_k_list[i] < 1) { v.push_back("oracle_k_list entries must be >= 1"); break; }
        if (i > 0 && cfg.oracle_k_list[i] <= cfg.oracle_k_list[i - 1]) {
            v.push_back("oracle_k_list must be strictly increasing");
            break;
        }
    }
    if (!(cfg.oracle_time_oversampling > 0.0 && cfg.oracle_time_oversampling <= 1.0))
        v.push_back("oracle_time_oversampling must be in (0, 1]");
    if (!(cfg.oracle_gamma >= 1.0)) v.push_back("oracle_gamma must be >= 1");
    return v;
}

inline double sigma2_linear(const RunConfig& cfg) { return std::pow(10.0, cfg.sigma2_db / 10.0); }

/// Mesh file: plain text, one tau row per line, whitespace-separated
/// nonnegative nu samples.
inline ScatteringSpec load_mesh_scattering(const RunConfig& cfg) {
    std::ifstream in(cfg.mesh_path);
    if (!in) throw std::invalid_argument("cannot open mesh file '" + cfg.mesh_path + "'");
    std::vector<double> mesh;
    int rows = 0, cols = -1;
    std::string line;
    while (std::getline(in, line)) {
        line = detail::trim(line);
        if (line.empty()) continue;
        std::stringstream ss(line);
        double v;
        int n = 0;
        while (ss >> v) {
            mesh.push_back(v);
            ++n;
        }
        if (cols == -1) cols = n;
        else if (n != cols)
            throw std::invalid_argument("mesh file '" + cfg.mesh_path + "': ragged rows");
        ++rows;
    }
    return ScatteringSpec::grid(cfg.tau0_s, cfg.nu0_hz, sigma2_linear(cfg), std::move(mesh), rows,
                                cols);
}

inline ScatteringSpec make_scattering(const RunConfig& cfg) {
    if (cfg.shape == "grid") return load_mesh_scattering(cfg);
    return ScatteringSpec::brick(cfg.tau0_s, cfg.nu0_hz, sigma2_linear(cfg));
}

inline PowerBudget make_power(const RunConfig& cfg) {
    return PowerBudget(cfg.p_w, cfg.n0_w_per_hz, cfg.beta);
}

inline LinkConfig make_link(const RunConfig& cfg) {
    return LinkConfig(make_scattering(cfg), make_power(cfg), cfg.tf);
}

inline Constellation make_constellation(const RunConfig& cfg) {
    if (cfg.constellation == "qpsk") return Constellation::qpsk();
    if (cfg.constellation == "bpsk") return Constellation::bpsk();
    return Constellation::psk(std::stoi(cfg.constellation.substr(0, cfg.constellation.size() - 3)));
}

inline BoundKind parse_bound_kind(const std::string& name) {
    if (name == "ub1") return BoundKind::Ub1;
    if (name == "ub2") return BoundKind::Ub2;
    if (name == "lb") return BoundKind::Lb;
    if (name == "lb_approx") return BoundKind::LbApprox;
    throw std::invalid_argument("unknown bound '" + name + "' (ub1, ub2, lb, lb_approx)");
}

}  // namespace wssus
