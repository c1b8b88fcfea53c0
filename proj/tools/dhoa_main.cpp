// Command-line front end. Links only the shared C API; JSON plumbing and flag
// parsing are local to the tool.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "dhoa/dhoa.h"

namespace {

using Json = nlohmann::json;

constexpr int kExitVerificationFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitNumericalFailure = 3;

struct AnalyzeFlags {
    std::string config_path;
    std::string family;
    double sigma = 0.0, eta = 0.0, alpha = 0.0, mu = 0.0;
    std::string beta; // number or "inf"
    long k = 1, m = 1;
    int n = 1;
    long nmax = 64;
    std::string mode = "annihilation";
    std::string method = "auto";
    std::string out_path;
    std::string csv_dir;
    bool quiet = false;

    bool sigma_set = false, eta_set = false, alpha_set = false, beta_set = false;
    bool k_set = false, m_set = false, n_set = false, mode_set = false, mu_set = false;
    bool nmax_set = false, method_set = false;
};

Json load_config(const AnalyzeFlags& f) {
    Json cfg = Json::object();
    if (!f.config_path.empty()) {
        std::ifstream in(f.config_path);
        if (!in)
            throw std::runtime_error("cannot open config file: " + f.config_path);
        cfg = Json::parse(in, nullptr, false);
        if (cfg.is_discarded())
            throw std::runtime_error("config file is not valid JSON: " + f.config_path);
    }
    if (!cfg.contains("weight"))
        cfg["weight"] = Json::object();

    Json& w = cfg["weight"];
    if (!f.family.empty())
        w["family"] = f.family;
    if (f.sigma_set) w["sigma"] = f.sigma;
    if (f.eta_set) w["eta"] = f.eta;
    if (f.alpha_set) w["alpha"] = f.alpha;
    if (f.beta_set) {
        try {
            const double b = std::stod(f.beta);
            if (std::isfinite(b))
                w["beta"] = b;
            else
                w["beta"] = "inf"; // JSON numbers cannot carry infinity
        } catch (...) {
            w["beta"] = f.beta; // "inf" handled by the core parser
        }
    }
    if (f.k_set) w["k"] = f.k;
    if (f.m_set) w["m"] = f.m;
    if (f.n_set) w["n"] = f.n;

    if (f.mode_set) cfg["mode"] = f.mode;
    if (f.mu_set) cfg["mu"] = f.mu;
    if (f.nmax_set) cfg["nmax"] = f.nmax;
    if (f.method_set) cfg["method"] = f.method;
    return cfg;
}

void print_checks(const Json& report) {
    if (!report.contains("checks"))
        return;
    for (const Json& c : report["checks"]) {
        const std::string status = c["status"].get<std::string>();
        const char* tag = status == "pass" ? "PASS" : (status == "fail" ? "FAIL" : " -- ");
        std::printf("[%s] %-32s %s\n", tag, c["name"].get<std::string>().c_str(),
                    c["statement"].get<std::string>().c_str());
    }
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << text << "\n";
}

void write_csv_tables(const std::string& dir, const Json& report) {
    if (report.contains("psi_samples")) {
        std::ostringstream os;
        os << "rho,psi\n";
        os.precision(17);
        for (const Json& row : report["psi_samples"]) {
            os << row["rho"].get<double>() << ",";
            if (row["psi"].is_number())
                os << row["psi"].get<double>();
            else
                os << row["psi"].get<std::string>();
            os << "\n";
        }
        write_file(dir + "/psi_samples.csv", os.str());
    }
    if (report.contains("checks")) {
        std::ostringstream os;
        os << "name,status,required,residual\n";
        os.precision(17);
        for (const Json& c : report["checks"]) {
            os << c["name"].get<std::string>() << "," << c["status"].get<std::string>() << ","
               << (c["required"].get<bool>() ? 1 : 0) << ",";
            if (c["residual"].is_number())
                os << c["residual"].get<double>();
            else
                os << c["residual"].get<std::string>();
            os << "\n";
        }
        write_file(dir + "/checks.csv", os.str());
    }
    if (report.contains("eigen_samples") && !report["eigen_samples"].empty()) {
        std::ostringstream os;
        os << "z_re,z_im,inside,residual\n";
        os.precision(17);
        for (const Json& e : report["eigen_samples"]) {
            os << e["z_re"].get<double>() << "," << e["z_im"].get<double>() << ","
               << (e["inside"].get<bool>() ? 1 : 0) << ",";
            if (e["residual"].is_number())
                os << e["residual"].get<double>();
            else
                os << e["residual"].get<std::string>();
            os << "\n";
        }
        write_file(dir + "/eigen_samples.csv", os.str());
    }
}

int run_analyze_command(const AnalyzeFlags& flags) {
    Json cfg;
    try {
        cfg = load_config(flags);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfigError;
    }

    char* report_cstr = nullptr;
    const dhoa_status st = dhoa_analyze(cfg.dump().c_str(), &report_cstr);
    if (st == DHOA_ERR_PARSE || st == DHOA_ERR_INVALID_ARGUMENT) {
        std::fprintf(stderr, "error: %s\n", dhoa_last_error());
        return kExitConfigError;
    }
    if (st != DHOA_OK) {
        std::fprintf(stderr, "error (%s): %s\n", dhoa_status_name(st), dhoa_last_error());
        return kExitNumericalFailure;
    }

    Json report = Json::parse(report_cstr);
    dhoa_string_free(report_cstr);

    if (!flags.quiet) {
        print_checks(report);
        std::printf("verdict: %s\n", report["verdict"].get<std::string>().c_str());
        if (report.contains("rejection_reason"))
            std::printf("reason: %s\n", report["rejection_reason"].get<std::string>().c_str());
    }
    try {
        if (!flags.out_path.empty())
            write_file(flags.out_path, report.dump(2));
        if (!flags.csv_dir.empty())
            write_csv_tables(flags.csv_dir, report);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfigError;
    }
    return report["exit_status"].get<int>();
}

int run_reproduce_command(const std::string& out_dir, int threads, bool quiet) {
    char* report_cstr = nullptr;
    const dhoa_status st = dhoa_reproduce_paper(threads, &report_cstr);
    if (st != DHOA_OK) {
        std::fprintf(stderr, "error (%s): %s\n", dhoa_status_name(st), dhoa_last_error());
        return kExitNumericalFailure;
    }
    Json report = Json::parse(report_cstr);
    dhoa_string_free(report_cstr);

    if (!quiet) {
        for (const Json& ex : report["examples"]) {
            const std::string status = ex["status"].get<std::string>();
            std::printf("[%s] %s\n", status == "pass" ? "PASS" : "FAIL",
                        ex["name"].get<std::string>().c_str());
        }
    }
    if (!out_dir.empty()) {
        try {
            write_file(out_dir + "/reproduce_paper.json", report.dump(2));
        } catch (const std::exception& e) {
            std::fprintf(stderr, "error: %s\n", e.what());
            return kExitConfigError;
        }
    }
    return report["exit_status"].get<int>();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reconstruction of deformed oscillator algebras from weight functions"};
    app.require_subcommand(1);

    AnalyzeFlags flags;
    CLI::App* analyze = app.add_subcommand("analyze", "run the full pipeline on one weight");
    analyze->add_option("--config", flags.config_path, "JSON configuration file");
    analyze->add_option("--family", flags.family,
                        "weight family (power, power_beta, stretched_exp, log_gaussian, "
                        "essential_edge, tabulated)");
    analyze->add_option("--sigma", flags.sigma)->each([&](const std::string&) { flags.sigma_set = true; });
    analyze->add_option("--eta", flags.eta)->each([&](const std::string&) { flags.eta_set = true; });
    analyze->add_option("--alpha", flags.alpha)->each([&](const std::string&) { flags.alpha_set = true; });
    analyze->add_option("--beta", flags.beta)->each([&](const std::string&) { flags.beta_set = true; });
    analyze->add_option("--k", flags.k)->each([&](const std::string&) { flags.k_set = true; });
    analyze->add_option("--m", flags.m)->each([&](const std::string&) { flags.m_set = true; });
    analyze->add_option("--n", flags.n)->each([&](const std::string&) { flags.n_set = true; });
    analyze->add_option("--mode", flags.mode, "annihilation or creation")
        ->each([&](const std::string&) { flags.mode_set = true; });
    analyze->add_option("--mu", flags.mu, "ground-state eigenvalue offset")
        ->each([&](const std::string&) { flags.mu_set = true; });
    analyze->add_option("--nmax", flags.nmax, "basis truncation extent")
        ->each([&](const std::string&) { flags.nmax_set = true; });
    analyze->add_option("--method", flags.method, "auto, closed_form or quadrature")
        ->each([&](const std::string&) { flags.method_set = true; });
    analyze->add_option("--out", flags.out_path, "write the JSON report here");
    analyze->add_option("--csv", flags.csv_dir, "write CSV tables into this directory");
    analyze->add_flag("--quiet", flags.quiet, "suppress the per-check lines");

    std::string rp_out;
    int rp_threads = 0;
    bool rp_quiet = false;
    CLI::App* reproduce =
        app.add_subcommand("reproduce-paper", "run the built-in example battery");
    reproduce->add_option("--out", rp_out, "directory for the suite report");
    reproduce->add_option("--threads", rp_threads,
                          "worker threads (default: DHOA_THREADS or hardware)");
    reproduce->add_flag("--quiet", rp_quiet);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfigError;
    }

    if (analyze->parsed())
        return run_analyze_command(flags);
    if (reproduce->parsed())
        return run_reproduce_command(rp_out, rp_threads, rp_quiet);
    return kExitConfigError;
}
