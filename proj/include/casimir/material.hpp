#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dielectric.hpp"
#include "optical_data.hpp"

namespace casimir {

// Flat key-value material description.  Defaults are the standard
// literature gold parameters (omega_p = 9.0 eV, nu = 0.035 eV).
struct MaterialConfig {
    std::string model = "drude";  // drude | plasma | ideal | mim | tabulated
    double omega_p_rad_s = 1.37e16;
    double nu_rad_s = 5.32e13;
    std::string data_file;                // used by model = tabulated
    std::string data_axis = "imaginary";  // imaginary | real_loss
    std::string extrapolation = "error";  // error | drude
    std::string source_path;              // config file it came from, if any
};

namespace material_detail {

inline std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

inline std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

inline double parse_number(const std::string& text, const std::string& key,
                           int line_no) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || !std::isfinite(v))
        throw std::runtime_error("material config line " +
                                 std::to_string(line_no) + ": key '" + key +
                                 "' needs a number, got '" + text + "'");
    return v;
}

}  // namespace material_detail

// Syntax: one `key = value` (or `key value`) per line, '#' comments.
inline MaterialConfig load_material_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open material config: " + path);

    MaterialConfig cfg;
    cfg.source_path = path;

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = material_detail::trim(line);
        if (line.empty()) continue;

        std::string key, value;
        if (auto eq = line.find('='); eq != std::string::npos) {
            key = material_detail::trim(line.substr(0, eq));
            value = material_detail::trim(line.substr(eq + 1));
        } else if (auto sp = line.find_first_of(" \t");
                   sp != std::string::npos) {
            key = material_detail::trim(line.substr(0, sp));
            value = material_detail::trim(line.substr(sp + 1));
        } else {
            throw std::runtime_error("material config line " +
                                     std::to_string(line_no) +
                                     ": expected 'key = value'");
        }
        key = material_detail::lower(key);
        if (key.empty() || value.empty())
            throw std::runtime_error("material config line " +
                                     std::to_string(line_no) +
                                     ": expected 'key = value'");

        if (key == "model") {
            cfg.model = material_detail::lower(value);
        } else if (key == "omega_p_rad_s") {
            cfg.omega_p_rad_s =
                material_detail::parse_number(value, key, line_no);
        } else if (key == "nu_rad_s") {
            cfg.nu_rad_s = material_detail::parse_number(value, key, line_no);
        } else if (key == "data_file") {
            cfg.data_file = value;
        } else if (key == "data_axis") {
            cfg.data_axis = material_detail::lower(value);
        } else if (key == "extrapolation") {
            cfg.extrapolation = material_detail::lower(value);
        } else {
            throw std::runtime_error("material config line " +
                                     std::to_string(line_no) +
                                     ": unknown key '" + key + "'");
        }
    }
    return cfg;
}

// Relative data files are looked up in CASIMIR_DATA_DIR, then next to the
// config file, then in the working directory.
inline std::string find_data_file(const std::string& name,
                                  const std::string& config_path) {
    namespace fs = std::filesystem;
    const fs::path p(name);
    if (p.is_absolute()) {
        if (fs::exists(p)) return p.string();
        throw std::runtime_error("data file not found: " + name);
    }
    std::vector<fs::path> candidates;
    if (const char* env = std::getenv("CASIMIR_DATA_DIR"))
        candidates.push_back(fs::path(env) / p);
    if (!config_path.empty())
        candidates.push_back(fs::path(config_path).parent_path() / p);
    candidates.push_back(p);
    for (const auto& c : candidates)
        if (fs::exists(c)) return c.string();
    throw std::runtime_error("data file not found on search path: " + name +
                             " (set CASIMIR_DATA_DIR or use an absolute path)");
}

// Grid used when real-axis loss data is pre-transformed to the imaginary
// axis: 50 points per decade across every Matsubara frequency the engine
// can request (q <= y_max at a >= 1 nm stays below ~1e19 rad/s).
inline std::vector<double> default_kk_grid() {
    const double lo = 1e9, hi = 3e19;
    const int per_decade = 50;
    const int n =
        static_cast<int>(std::ceil(std::log10(hi / lo) * per_decade)) + 1;
    std::vector<double> grid(static_cast<std::size_t>(n));
    const double step = std::log(hi / lo) / (n - 1);
    for (int i = 0; i < n; ++i) grid[static_cast<std::size_t>(i)] = lo * std::exp(step * i);
    return grid;
}

inline DielectricModel build_model(const MaterialConfig& cfg) {
    if (cfg.model == "drude") return Drude{cfg.omega_p_rad_s, cfg.nu_rad_s};
    if (cfg.model == "plasma") return Plasma{cfg.omega_p_rad_s};
    if (cfg.model == "ideal") return IdealMetal{};
    if (cfg.model == "mim") return ModifiedIdealMetal{};
    if (cfg.model != "tabulated")
        throw std::runtime_error("unknown material model '" + cfg.model +
                                 "' (expected drude, plasma, ideal, mim or "
                                 "tabulated)");

    if (cfg.data_file.empty())
        throw std::runtime_error("model = tabulated requires data_file");

    Extrapolation policy;
    if (cfg.extrapolation == "error")
        policy = Extrapolation::Error;
    else if (cfg.extrapolation == "drude")
        policy = Extrapolation::DrudeTail;
    else
        throw std::runtime_error("unknown extrapolation policy '" +
                                 cfg.extrapolation +
                                 "' (expected error or drude)");

    DataAxis axis;
    if (cfg.data_axis == "imaginary")
        axis = DataAxis::Imaginary;
    else if (cfg.data_axis == "real_loss")
        axis = DataAxis::RealLoss;
    else
        throw std::runtime_error("unknown data_axis '" + cfg.data_axis +
                                 "' (expected imaginary or real_loss)");

    const std::string resolved =
        find_data_file(cfg.data_file, cfg.source_path);
    std::ifstream data(resolved);
    if (!data) throw std::runtime_error("cannot open data file: " + resolved);
    PermittivityTable table = load_table(data, axis, resolved);

    if (axis == DataAxis::RealLoss)
        table = kk_tabulate(table, default_kk_grid());
    return Tabulated{std::move(table), policy};
}

}  // namespace casimir
