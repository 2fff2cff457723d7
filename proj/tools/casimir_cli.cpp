// casimir: parallel-plate Casimir pressure / free energy tables from the
// finite-temperature Lifshitz formula.  See README for the file formats.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "casimir/casimir.hpp"

namespace {

using namespace casimir;

enum class OutputMode { Table, Csv };

// table mode mirrors the reference tables (4 significant digits, pressure
// magnitudes); csv mode is machine-oriented (10 significant digits, signed
// pressure, negative = attractive).
std::string fmt_real(double v, OutputMode mode) {
    char buf[40];
    std::snprintf(buf, sizeof buf, mode == OutputMode::Csv ? "%.9e" : "%.4g",
                  v);
    return buf;
}

std::string fmt_int(long long v) { return std::to_string(v); }

struct OutputTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

void emit(const OutputTable& t, OutputMode mode, std::ostream& out) {
    if (mode == OutputMode::Csv) {
        for (std::size_t c = 0; c < t.columns.size(); ++c)
            out << (c ? "," : "") << t.columns[c];
        out << "\n";
        for (const auto& row : t.rows) {
            for (std::size_t c = 0; c < row.size(); ++c)
                out << (c ? "," : "") << row[c];
            out << "\n";
        }
        return;
    }
    std::vector<std::size_t> width(t.columns.size());
    for (std::size_t c = 0; c < t.columns.size(); ++c)
        width[c] = t.columns[c].size();
    for (const auto& row : t.rows)
        for (std::size_t c = 0; c < row.size(); ++c)
            width[c] = std::max(width[c], row[c].size());
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c) out << "  ";
            out << std::string(width[c] - cells[c].size(), ' ') << cells[c];
        }
        out << "\n";
    };
    line(t.columns);
    for (const auto& row : t.rows) line(row);
}

struct CommonOptions {
    std::string material_path;
    std::vector<std::string> models;  // overrides config; >1 only for compare
    std::vector<double> separations_nm;
    std::vector<double> temperatures_K;
    std::string zero_mode = "default";
    NumericsSettings numerics;
    std::string output_path;
    std::string format = "table";
};

void add_common_flags(CLI::App* cmd, CommonOptions& o, bool many_models) {
    cmd->add_option("--material", o.material_path,
                    "material config file (key = value lines)");
    auto* model = cmd->add_option(
        "--model", o.models,
        "dielectric model: drude, plasma, ideal, mim or tabulated");
    model->delimiter(',');
    if (!many_models) model->expected(0, 1);
    cmd->add_option("--separations-nm", o.separations_nm,
                    "plate separations in nm")
        ->delimiter(',');
    cmd->add_option("--temperatures-K", o.temperatures_K, "temperatures in K")
        ->delimiter(',');
    cmd->add_option("--zero-mode", o.zero_mode,
                    "m = 0 policy: default, tm-only or tm-te")
        ->check(CLI::IsMember({"default", "tm-only", "tm-te"}));
    cmd->add_option("--ymax", o.numerics.y_max, "dimensionless y cutoff");
    cmd->add_option("--int-tol", o.numerics.integral_tol,
                    "relative quadrature tolerance");
    cmd->add_option("--sum-tol", o.numerics.sum_tol,
                    "Matsubara-sum truncation tolerance");
    cmd->add_option("--output", o.output_path, "write output here (default stdout)");
    cmd->add_option("--format", o.format, "table (4 digits) or csv (full precision)")
        ->check(CLI::IsMember({"table", "csv"}));
}

OutputMode mode_of(const CommonOptions& o) {
    return o.format == "csv" ? OutputMode::Csv : OutputMode::Table;
}

ZeroModePolicy policy_of(const CommonOptions& o) {
    if (o.zero_mode == "tm-only") return ZeroModePolicy::ForceTmOnly;
    if (o.zero_mode == "tm-te") return ZeroModePolicy::ForceTmAndTe;
    return ZeroModePolicy::ModelDefault;
}

DielectricModel resolve_model(const CommonOptions& o,
                              const std::string& override_name) {
    MaterialConfig cfg;
    if (!o.material_path.empty()) cfg = load_material_config(o.material_path);
    if (!override_name.empty()) cfg.model = override_name;
    return build_model(cfg);
}

std::string scenario_name(double a_nm, double T) {
    std::ostringstream s;
    s << "a = " << a_nm << " nm, T = " << T << " K";
    return s.str();
}

void write_output(const OutputTable& table, const CommonOptions& o) {
    if (o.output_path.empty()) {
        emit(table, mode_of(o), std::cout);
        return;
    }
    std::ofstream out(o.output_path);
    if (!out)
        throw std::runtime_error("cannot open output file: " + o.output_path);
    emit(table, mode_of(o), out);
}

// ---------------------------------------------------------------------------

int run_pressure_table(const CommonOptions& o, const std::string& term_log_path) {
    const DielectricModel model =
        resolve_model(o, o.models.empty() ? "" : o.models.front());
    const ZeroModePolicy policy = policy_of(o);
    const bool csv = mode_of(o) == OutputMode::Csv;

    OutputTable table;
    table.columns = {"separation_nm", "temperature_K", "pressure_mPa",
                     "highest_frequency_rad_s", "n_terms"};
    std::ostringstream term_log;
    term_log << "separation_nm,temperature_K,m,zeta_rad_s,term\n";

    for (double T : o.temperatures_K) {
        for (double a_nm : o.separations_nm) {
            const GapConfig gap{a_nm * 1e-9, T};
            PressureResult r;
            try {
                r = casimir_pressure(gap, model, policy, o.numerics,
                                     !term_log_path.empty());
            } catch (const std::exception& e) {
                throw std::runtime_error("scenario " + scenario_name(a_nm, T) +
                                         ": " + e.what());
            }
            const double p_mPa = r.pressure * 1e3;
            table.rows.push_back({fmt_real(a_nm, mode_of(o)),
                                  fmt_real(T, mode_of(o)),
                                  fmt_real(csv ? p_mPa : std::fabs(p_mPa),
                                           mode_of(o)),
                                  fmt_real(r.highest_frequency, mode_of(o)),
                                  fmt_int(r.n_terms)});
            for (const auto& [m, value] : r.per_term_log) {
                char buf[128];
                std::snprintf(buf, sizeof buf, "%g,%g,%d,%.9e,%.9e\n", a_nm, T,
                              m, matsubara_frequency(m, T), value);
                term_log << buf;
            }
        }
    }
    write_output(table, o);
    if (!term_log_path.empty()) {
        std::ofstream log(term_log_path);
        if (!log)
            throw std::runtime_error("cannot open per-term log: " +
                                     term_log_path);
        log << term_log.str();
    }
    return 0;
}

// Reference fixture: CSV whose first column is separation_nm and whose
// remaining columns hold pressure magnitudes in mPa.
struct Fixture {
    std::vector<std::string> columns;  // names of the value columns
    std::vector<double> separations_nm;
    std::vector<std::vector<double>> values;  // [row][column]
};

Fixture load_fixture(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open fixture: " + path);
    Fixture fx;
    std::string line;
    int line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::string trimmed = line;
        trimmed.erase(0, trimmed.find_first_not_of(" \t\r"));
        if (trimmed.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream row(trimmed);
        std::string cell;
        while (std::getline(row, cell, ',')) {
            cell.erase(0, cell.find_first_not_of(" \t\r"));
            cell.erase(cell.find_last_not_of(" \t\r") + 1);
            cells.push_back(cell);
        }
        if (!have_header) {
            if (cells.size() < 2 || cells.front() != "separation_nm")
                throw std::runtime_error(
                    "fixture line " + std::to_string(line_no) +
                    ": header must start with separation_nm");
            fx.columns.assign(cells.begin() + 1, cells.end());
            have_header = true;
            continue;
        }
        if (cells.size() != fx.columns.size() + 1)
            throw std::runtime_error("fixture line " + std::to_string(line_no) +
                                     ": expected " +
                                     std::to_string(fx.columns.size() + 1) +
                                     " columns");
        try {
            fx.separations_nm.push_back(std::stod(cells.front()));
            std::vector<double> vals;
            for (std::size_t i = 1; i < cells.size(); ++i)
                vals.push_back(std::stod(cells[i]));
            fx.values.push_back(std::move(vals));
        } catch (const std::exception&) {
            throw std::runtime_error("fixture line " + std::to_string(line_no) +
                                     ": malformed number");
        }
    }
    if (!have_header || fx.separations_nm.empty())
        throw std::runtime_error("fixture has no data rows: " + path);
    return fx;
}

int run_compare_models(const CommonOptions& o, const std::string& fixture_path) {
    const Fixture fx = load_fixture(fixture_path);
    const double T = o.temperatures_K.front();
    const ZeroModePolicy policy = policy_of(o);

    std::vector<std::string> model_names = o.models;
    if (model_names.empty()) {
        MaterialConfig cfg;
        if (!o.material_path.empty())
            cfg = load_material_config(o.material_path);
        model_names.push_back(cfg.model);
    }
    std::vector<DielectricModel> models;
    for (const auto& name : model_names)
        models.push_back(resolve_model(o, name));

    // rows follow the fixture; --separations-nm, when given, filters them
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < fx.separations_nm.size(); ++i) {
        if (o.separations_nm.empty()) {
            rows.push_back(i);
            continue;
        }
        for (double want : o.separations_nm)
            if (std::fabs(fx.separations_nm[i] - want) <=
                1e-9 * std::fabs(want)) {
                rows.push_back(i);
                break;
            }
    }
    if (rows.empty())
        throw std::runtime_error(
            "no fixture rows match the requested separations");

    OutputTable table;
    table.columns = {"separation_nm"};
    for (const auto& name : model_names)
        table.columns.push_back("computed_" + name + "_mPa");
    for (const auto& col : fx.columns) table.columns.push_back("fixture_" + col);
    for (const auto& name : model_names)
        for (const auto& col : fx.columns)
            table.columns.push_back("reldiff_" + name + "_vs_" + col);

    for (std::size_t i : rows) {
        const double a_nm = fx.separations_nm[i];
        const GapConfig gap{a_nm * 1e-9, T};
        std::vector<double> computed;
        for (std::size_t k = 0; k < models.size(); ++k) {
            try {
                computed.push_back(std::fabs(
                    casimir_pressure(gap, models[k], policy, o.numerics)
                        .pressure) *
                                   1e3);
            } catch (const std::exception& e) {
                throw std::runtime_error("scenario " + scenario_name(a_nm, T) +
                                         " (" + model_names[k] + "): " +
                                         e.what());
            }
        }
        std::vector<std::string> row{fmt_real(a_nm, mode_of(o))};
        for (double p : computed) row.push_back(fmt_real(p, mode_of(o)));
        for (double v : fx.values[i]) row.push_back(fmt_real(v, mode_of(o)));
        for (double p : computed)
            for (double v : fx.values[i])
                row.push_back(fmt_real((p - v) / v, mode_of(o)));
        table.rows.push_back(std::move(row));
    }
    write_output(table, o);
    return 0;
}

int run_temperature_sweep(const CommonOptions& o) {
    const DielectricModel model =
        resolve_model(o, o.models.empty() ? "" : o.models.front());
    const ZeroModePolicy policy = policy_of(o);

    OutputTable table;
    table.columns = {"temperature_K", "separation_nm", "pressure_mPa",
                     "ratio_to_first_T"};
    const bool csv = mode_of(o) == OutputMode::Csv;

    std::map<double, double> reference;  // separation -> P(first T)
    for (double T : o.temperatures_K) {
        for (double a_nm : o.separations_nm) {
            const GapConfig gap{a_nm * 1e-9, T};
            double p;
            try {
                p = casimir_pressure(gap, model, policy, o.numerics).pressure;
            } catch (const std::exception& e) {
                throw std::runtime_error("scenario " + scenario_name(a_nm, T) +
                                         ": " + e.what());
            }
            auto [it, inserted] = reference.try_emplace(a_nm, p);
            const double ratio = (it->second != 0.0) ? p / it->second : 1.0;
            const double p_mPa = p * 1e3;
            table.rows.push_back({fmt_real(T, mode_of(o)),
                                  fmt_real(a_nm, mode_of(o)),
                                  fmt_real(csv ? p_mPa : std::fabs(p_mPa),
                                           mode_of(o)),
                                  fmt_real(ratio, mode_of(o))});
        }
    }
    write_output(table, o);
    return 0;
}

int run_entropy_scan(const CommonOptions& o) {
    const DielectricModel model =
        resolve_model(o, o.models.empty() ? "" : o.models.front());
    const ZeroModePolicy policy = policy_of(o);
    const double a_nm = o.separations_nm.front();

    OutputTable table;
    table.columns = {"T_K", "S_J_per_K_m2"};
    for (double T : o.temperatures_K) {
        // 0.25 K steps resolve the low-temperature approach to zero; 1 K is
        // plenty elsewhere.  Keep T - dT inside the validated regime.
        double dT = (T <= 4.0) ? 0.25 : 1.0;
        dT = std::min(dT, 0.5 * T);
        double s;
        try {
            s = entropy_per_area(a_nm * 1e-9, T, model, policy, o.numerics, dT);
        } catch (const std::exception& e) {
            throw std::runtime_error("scenario " + scenario_name(a_nm, T) +
                                     ": " + e.what());
        }
        table.rows.push_back({fmt_real(T, mode_of(o)), fmt_real(s, mode_of(o))});
    }
    write_output(table, o);
    return 0;
}

int run_kk_transform(const CommonOptions& o, const std::string& input_path,
                     double zeta_min, double zeta_max, int zeta_points) {
    std::ifstream in(input_path);
    if (!in) throw std::runtime_error("cannot open data file: " + input_path);
    const PermittivityTable table =
        load_table(in, DataAxis::RealLoss, input_path);

    if (!(zeta_min > 0.0) || !(zeta_max > zeta_min) || zeta_points < 2)
        throw std::runtime_error(
            "kk-transform: need 0 < zeta-min < zeta-max and >= 2 points");

    OutputTable out;
    out.columns = {"zeta_rad_s", "eps_i_zeta"};
    const double step = std::log(zeta_max / zeta_min) / (zeta_points - 1);
    for (int i = 0; i < zeta_points; ++i) {
        const double zeta = zeta_min * std::exp(step * i);
        out.rows.push_back(
            {fmt_real(zeta, mode_of(o)),
             fmt_real(kramers_kronig_to_imaginary_axis(table, zeta),
                      mode_of(o))});
    }
    write_output(out, o);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Casimir pressure and free energy between parallel metal plates "
        "(finite-temperature Lifshitz formula)"};
    app.require_subcommand(1);

    // the default manifest is the room-temperature reference grid
    const std::vector<double> default_grid{160, 200, 250, 400, 500, 700, 1000};

    CommonOptions po;
    po.separations_nm = default_grid;
    po.temperatures_K = {300};
    std::string term_log_path;
    auto* pressure = app.add_subcommand(
        "pressure-table", "pressure over a (separation, temperature) grid");
    add_common_flags(pressure, po, false);
    pressure->add_option("--per-term-log", term_log_path,
                         "write per-term CSV (m, zeta_rad_s, term) here");

    CommonOptions co;
    co.temperatures_K = {300};
    std::string fixture_path;
    auto* compare = app.add_subcommand(
        "compare-models", "computed pressures vs a reference fixture");
    add_common_flags(compare, co, true);
    compare->add_option("--fixture", fixture_path, "reference fixture CSV")
        ->required();

    CommonOptions so;
    so.separations_nm = {1000};
    auto* sweep = app.add_subcommand("temperature-sweep",
                                     "pressure vs temperature, with ratios");
    add_common_flags(sweep, so, false);

    CommonOptions eo;
    eo.separations_nm = {1000};
    eo.temperatures_K = {1, 2, 4, 10, 50, 100, 200, 300};
    auto* entropy = app.add_subcommand("entropy-scan",
                                       "entropy per area over a temperature grid");
    add_common_flags(entropy, eo, false);

    CommonOptions ko;
    std::string kk_input;
    double zeta_min = 1e12, zeta_max = 1e16;
    int zeta_points = 81;
    auto* kk = app.add_subcommand(
        "kk-transform", "Kramers-Kronig transform of real-axis loss data");
    kk->add_option("input", kk_input, "two-column eps''(omega) file")
        ->required();
    kk->add_option("--zeta-min-rad-s", zeta_min, "lowest output frequency");
    kk->add_option("--zeta-max-rad-s", zeta_max, "highest output frequency");
    kk->add_option("--zeta-points", zeta_points, "log-spaced output points");
    kk->add_option("--output", ko.output_path, "write output here (default stdout)");
    kk->add_option("--format", ko.format, "table or csv")
        ->check(CLI::IsMember({"table", "csv"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (pressure->parsed()) {
            if (po.separations_nm.empty() || po.temperatures_K.empty())
                throw CLI::ValidationError(
                    "pressure-table",
                    "separations and temperatures must be nonempty");
            return run_pressure_table(po, term_log_path);
        }
        if (compare->parsed()) {
            if (co.temperatures_K.empty())
                throw CLI::ValidationError("compare-models",
                                           "temperatures must be nonempty");
            return run_compare_models(co, fixture_path);
        }
        if (sweep->parsed()) {
            if (so.temperatures_K.size() < 2)
                throw CLI::ValidationError(
                    "temperature-sweep", "need at least two temperatures");
            if (so.separations_nm.empty())
                throw CLI::ValidationError("temperature-sweep",
                                           "separations must be nonempty");
            return run_temperature_sweep(so);
        }
        if (entropy->parsed()) {
            if (eo.separations_nm.size() != 1)
                throw CLI::ValidationError("entropy-scan",
                                           "expects exactly one separation");
            if (eo.temperatures_K.empty())
                throw CLI::ValidationError("entropy-scan",
                                           "temperatures must be nonempty");
            return run_entropy_scan(eo);
        }
        if (kk->parsed())
            return run_kk_transform(ko, kk_input, zeta_min, zeta_max,
                                    zeta_points);
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
