#include <sys/wait.h>

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "casimir/constants.hpp"
#include "casimir/matsubara.hpp"

// End-to-end tests against the installed binary (path injected by the build).

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path dir = fs::temp_directory_path();
    const fs::path out = dir / ("casimir_cli_out_" + std::to_string(++counter));
    const fs::path err = dir / ("casimir_cli_err_" + std::to_string(counter));
    const std::string cmd = std::string("\"") + CASIMIR_CLI_FOR_TESTS + "\" " +
                            args + " > \"" + out.string() + "\" 2> \"" +
                            err.string() + "\"";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    std::error_code ec;
    fs::remove(out, ec);
    fs::remove(err, ec);
    return r;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::stringstream s(text);
    std::string line;
    while (std::getline(s, line))
        if (!line.empty()) lines.push_back(line);
    return lines;
}

std::vector<std::string> fields_of(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream s(line);
    std::string cell;
    while (std::getline(s, cell, ',')) cells.push_back(cell);
    return cells;
}

// scratch file helper
struct TempFile {
    fs::path path;
    TempFile(const std::string& name, const std::string& content) {
        path = fs::temp_directory_path() / name;
        std::ofstream out(path);
        out << content;
    }
    ~TempFile() {
        std::error_code ec;
        fs::remove(path, ec);
    }
    std::string str() const { return path.string(); }
};

std::string drude_loss_text(int n) {
    std::string text;
    const double omega_p = 1.37e16, nu = 5.32e13;
    const double lo = 1e9, hi = 1e19;
    for (int i = 0; i < n; ++i) {
        const double w = lo * std::pow(hi / lo, double(i) / (n - 1));
        const double loss = omega_p * omega_p * nu / (w * (w * w + nu * nu));
        char buf[80];
        std::snprintf(buf, sizeof buf, "%.12e %.12e\n", w, loss);
        text += buf;
    }
    return text;
}

}  // namespace

TEST_CASE("pressure-table default manifest", "[cli]") {
    const RunResult r1 = run_cli("pressure-table --format csv");
    REQUIRE(r1.code == 0);
    CHECK(r1.err.empty());

    const auto lines = lines_of(r1.out);
    REQUIRE(lines.size() == 8);  // header + 7 grid rows
    CHECK(lines[0] ==
          "separation_nm,temperature_K,pressure_mPa,highest_frequency_rad_s,"
          "n_terms");

    SECTION("byte-identical across runs") {
        const RunResult r2 = run_cli("pressure-table --format csv");
        REQUIRE(r2.code == 0);
        CHECK(r2.out == r1.out);
    }
    SECTION("row values are physical and self-consistent") {
        const double zeta1 = casimir::matsubara_frequency(1, 300.0);
        double prev_abs = 1e9;
        for (std::size_t i = 1; i < lines.size(); ++i) {
            const auto f = fields_of(lines[i]);
            REQUIRE(f.size() == 5);
            const double p_mPa = std::stod(f[2]);
            const double highest = std::stod(f[3]);
            const long n_terms = std::stol(f[4]);
            CHECK(p_mPa < 0.0);  // csv keeps the attractive sign
            CHECK(std::fabs(p_mPa) < prev_abs);
            prev_abs = std::fabs(p_mPa);
            CHECK(n_terms > 0);
            CHECK(highest ==
                  Catch::Approx(double(n_terms) * zeta1).epsilon(1e-9));
        }
        // frozen spot value at a = 1000 nm, T = 300 K
        const auto last = fields_of(lines.back());
        CHECK(std::stod(last[0]) == 1000.0);
        CHECK(std::stod(last[2]) ==
              Catch::Approx(-0.98343697683).epsilon(1e-7));
        CHECK(std::stol(last[4]) == 16);
    }
    SECTION("table mode prints 4-digit magnitudes") {
        const RunResult t =
            run_cli("pressure-table --separations-nm 1000 --temperatures-K 300");
        REQUIRE(t.code == 0);
        CHECK(t.out.find("pressure_mPa") != std::string::npos);
        CHECK(t.out.find("0.9834") != std::string::npos);
        CHECK(t.out.find("-0.9834") == std::string::npos);
    }
}

TEST_CASE("pressure-table output file and per-term log", "[cli]") {
    const fs::path dir = fs::temp_directory_path();
    const fs::path out_path = dir / "casimir_table.csv";
    const fs::path log_path = dir / "casimir_terms.csv";

    const std::string args =
        "pressure-table --separations-nm 1000 --temperatures-K 300 --format csv";
    const RunResult direct = run_cli(args);
    REQUIRE(direct.code == 0);

    const RunResult filed = run_cli(args + " --output \"" + out_path.string() +
                                    "\" --per-term-log \"" +
                                    log_path.string() + "\"");
    REQUIRE(filed.code == 0);
    CHECK(filed.out.empty());
    CHECK(slurp(out_path) == direct.out);

    const auto log_lines = lines_of(slurp(log_path));
    REQUIRE(log_lines.size() >= 2);
    CHECK(log_lines[0] == "separation_nm,temperature_K,m,zeta_rad_s,term");

    const long n_terms = std::stol(fields_of(lines_of(direct.out)[1])[4]);
    REQUIRE(log_lines.size() == std::size_t(n_terms) + 2);  // header + m=0..n

    const auto first = fields_of(log_lines[1]);
    CHECK(first[2] == "0");
    CHECK(std::stod(first[3]) == 0.0);
    CHECK(std::stod(fields_of(log_lines.back())[2]) == double(n_terms));

    SECTION("logged terms rebuild the pressure") {
        double sum = 0.0;
        for (std::size_t i = 1; i < log_lines.size(); ++i)
            sum += std::stod(fields_of(log_lines[i])[4]);
        const double a = 1e-6;
        const double p = -casimir::constants.k_boltzmann * 300.0 * sum /
                         (casimir::pi * a * a * a);
        const double p_csv = std::stod(fields_of(lines_of(direct.out)[1])[2]);
        CHECK(p * 1e3 == Catch::Approx(p_csv).epsilon(1e-6));
    }

    std::error_code ec;
    fs::remove(out_path, ec);
    fs::remove(log_path, ec);
}

TEST_CASE("compare-models round trip", "[cli]") {
    // build a fixture from the tool's own output, then compare against it
    const RunResult base = run_cli(
        "pressure-table --separations-nm 400,1000 --temperatures-K 300 "
        "--format csv");
    REQUIRE(base.code == 0);
    const auto base_lines = lines_of(base.out);
    REQUIRE(base_lines.size() == 3);

    std::string fixture_text = "# reference pressures, magnitudes in mPa\n";
    fixture_text += "separation_nm,reference_mPa\n";
    for (std::size_t i = 1; i < base_lines.size(); ++i) {
        const auto f = fields_of(base_lines[i]);
        char buf[80];
        std::snprintf(buf, sizeof buf, "%g,%.9e\n", std::stod(f[0]),
                      std::fabs(std::stod(f[2])));
        fixture_text += buf;
    }
    TempFile fixture("casimir_fixture.csv", fixture_text);

    SECTION("self-comparison gives zero residual") {
        const RunResult r = run_cli("compare-models --model drude --fixture \"" +
                                    fixture.str() + "\" --format csv");
        REQUIRE(r.code == 0);
        const auto lines = lines_of(r.out);
        REQUIRE(lines.size() == 3);
        CHECK(lines[0] ==
              "separation_nm,computed_drude_mPa,fixture_reference_mPa,"
              "reldiff_drude_vs_reference_mPa");
        for (std::size_t i = 1; i < lines.size(); ++i) {
            const auto f = fields_of(lines[i]);
            REQUIRE(f.size() == 4);
            CHECK(std::fabs(std::stod(f[3])) < 1e-8);
        }
    }
    SECTION("several models side by side") {
        const RunResult r = run_cli(
            "compare-models --model drude,ideal --fixture \"" + fixture.str() +
            "\" --separations-nm 1000 --format csv");
        REQUIRE(r.code == 0);
        const auto lines = lines_of(r.out);
        REQUIRE(lines.size() == 2);  // filtered to one row
        const auto f = fields_of(lines[1]);
        REQUIRE(f.size() == 6);
        CHECK(std::fabs(std::stod(f[4])) < 1e-8);  // drude vs itself
        CHECK(std::stod(f[5]) > 0.05);  // ideal metal binds stronger
    }
    SECTION("no matching rows is an error") {
        const RunResult r = run_cli("compare-models --model drude --fixture \"" +
                                    fixture.str() +
                                    "\" --separations-nm 123 --format csv");
        CHECK(r.code == 1);
        CHECK(r.err.find("error:") != std::string::npos);
    }
}

TEST_CASE("temperature-sweep ratios", "[cli]") {
    const RunResult r = run_cli(
        "temperature-sweep --separations-nm 1000 --temperatures-K 300,350 "
        "--format csv");
    REQUIRE(r.code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "temperature_K,separation_nm,pressure_mPa,ratio_to_first_T");

    const auto row300 = fields_of(lines[1]);
    const auto row350 = fields_of(lines[2]);
    CHECK(std::stod(row300[3]) == 1.0);
    CHECK(std::stod(row350[3]) == Catch::Approx(0.9734).margin(0.002));

    SECTION("one temperature is a usage error") {
        const RunResult bad =
            run_cli("temperature-sweep --separations-nm 1000 --temperatures-K 300");
        CHECK(bad.code != 0);
        CHECK_FALSE(bad.err.empty());
    }
}

TEST_CASE("entropy-scan output", "[cli]") {
    const RunResult r = run_cli(
        "entropy-scan --separations-nm 1000 --temperatures-K 200,300 "
        "--format csv");
    REQUIRE(r.code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "T_K,S_J_per_K_m2");
    const double s300 = std::stod(fields_of(lines[2])[1]);
    CHECK(std::stod(fields_of(lines[1])[1]) < 0.0);
    CHECK(s300 == Catch::Approx(-1.851651e-13).epsilon(2e-3));

    SECTION("exactly one separation") {
        const RunResult bad = run_cli(
            "entropy-scan --separations-nm 500,1000 --temperatures-K 300");
        CHECK(bad.code != 0);
        CHECK_FALSE(bad.err.empty());
    }
}

TEST_CASE("kk-transform command", "[cli]") {
    SECTION("lossless input gives unit permittivity") {
        std::string text;
        for (int i = 0; i < 10; ++i) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.3e 0.0\n", 1e10 * std::pow(10, i));
            text += buf;
        }
        TempFile data("casimir_lossless.dat", text);
        const RunResult r = run_cli("kk-transform \"" + data.str() +
                                    "\" --zeta-points 3 --format csv");
        REQUIRE(r.code == 0);
        const auto lines = lines_of(r.out);
        REQUIRE(lines.size() == 4);
        CHECK(lines[0] == "zeta_rad_s,eps_i_zeta");
        CHECK(fields_of(lines[1])[0] == "1.000000000e+12");
        for (std::size_t i = 1; i < lines.size(); ++i)
            CHECK(fields_of(lines[i])[1] == "1.000000000e+00");
    }
    SECTION("drude loss data lands on the analytic curve") {
        TempFile data("casimir_drude_loss.dat", drude_loss_text(400));
        const RunResult r = run_cli(
            "kk-transform \"" + data.str() +
            "\" --zeta-min-rad-s 1e13 --zeta-max-rad-s 1e15 --zeta-points 3 "
            "--format csv");
        REQUIRE(r.code == 0);
        const auto lines = lines_of(r.out);
        REQUIRE(lines.size() == 4);
        for (std::size_t i = 1; i < lines.size(); ++i) {
            const auto f = fields_of(lines[i]);
            const double z = std::stod(f[0]);
            const double want = 1.0 + 1.37e16 * 1.37e16 / (z * (z + 5.32e13));
            CHECK(std::stod(f[1]) == Catch::Approx(want).epsilon(1e-3));
        }
    }
    SECTION("input validation") {
        const RunResult missing = run_cli("kk-transform /no/such/file.dat");
        CHECK(missing.code == 1);
        CHECK(missing.err.find("error:") != std::string::npos);

        TempFile data("casimir_loss_ok.dat", drude_loss_text(20));
        const RunResult bad_points =
            run_cli("kk-transform \"" + data.str() + "\" --zeta-points 1");
        CHECK(bad_points.code == 1);
        CHECK(bad_points.err.find("error:") != std::string::npos);
    }
}

TEST_CASE("material config file drives the run", "[cli]") {
    TempFile cfg("casimir_cli_mat.cfg", "model = plasma\n");
    const std::string tail =
        " --separations-nm 500 --temperatures-K 300 --format csv";
    const RunResult by_file =
        run_cli("pressure-table --material \"" + cfg.str() + "\"" + tail);
    const RunResult by_flag = run_cli("pressure-table --model plasma" + tail);
    REQUIRE(by_file.code == 0);
    REQUIRE(by_flag.code == 0);
    CHECK(by_file.out == by_flag.out);

    SECTION("missing config is reported") {
        const RunResult r =
            run_cli("pressure-table --material /no/such.cfg" + tail);
        CHECK(r.code == 1);
        CHECK(r.err.find("cannot open material config") != std::string::npos);
    }
}

TEST_CASE("usage and regime errors", "[cli]") {
    SECTION("a subcommand is required") {
        CHECK(run_cli("").code != 0);
    }
    SECTION("unknown flag") {
        CHECK(run_cli("pressure-table --bogus 1").code != 0);
    }
    SECTION("bad zero-mode value") {
        CHECK(run_cli("pressure-table --zero-mode both").code != 0);
    }
    SECTION("compare-models requires a fixture") {
        CHECK(run_cli("compare-models --model drude").code != 0);
    }
    SECTION("out-of-regime separation names the scenario") {
        const RunResult r = run_cli(
            "pressure-table --separations-nm 0.5 --temperatures-K 300");
        CHECK(r.code == 1);
        CHECK(r.err.find("scenario") != std::string::npos);
        CHECK(r.err.find("1 nm") != std::string::npos);
    }
}
