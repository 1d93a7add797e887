#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ncdist/harness.hpp"
#include "ncdist/spaces.hpp"
#include "ncdist/triangular.hpp"

namespace {

using ncdist::RunConfig;

// flat key=value file; '#' starts a comment
bool apply_config_file(const std::string& path, RunConfig& cfg, std::string& err) {
    std::ifstream in(path);
    if (!in) {
        err = "cannot read config file '" + path + "'";
        return false;
    }
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            s.erase(0, s.find_first_not_of(" \t"));
            auto end = s.find_last_not_of(" \t");
            s.erase(end == std::string::npos ? 0 : end + 1);
            return s;
        };
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        try {
            if (key == "suite") cfg.suite = val;
            else if (key == "trials") cfg.trials = std::stoi(val);
            else if (key == "seed") cfg.seed = std::stoull(val);
            else if (key == "tol") cfg.tol = std::stod(val);
            else if (key == "dims") cfg.caps.max_dim = std::stoi(val);
            else if (key == "levels") cfg.caps.max_levels = std::stoi(val);
            else if (key == "parallel") cfg.parallelism = std::stoi(val);
            else if (key == "out") cfg.out_path = val;
            else if (key.rfind("budget.", 0) == 0)
                cfg.budget_overrides[key.substr(7)] = std::stod(val);
            else {
                err = "unknown config key '" + key + "'";
                return false;
            }
        } catch (const std::exception&) {
            err = "bad value for config key '" + key + "'";
            return false;
        }
    }
    return true;
}

bool write_file(const std::string& path, const std::string& content, std::string& err) {
    std::ofstream out(path);
    if (!out) {
        err = "cannot write '" + path + "'";
        return false;
    }
    out << content;
    return true;
}

int run_verify(const RunConfig& cfg) {
    ncdist::SuiteReport rep = ncdist::run_suite(cfg);
    for (const ncdist::SuiteEntry& e : rep.entries) {
        std::ostringstream line;
        line << (e.pass ? "PASS" : "FAIL") << "  " << e.name << "  trials=" << e.trials
             << "  sup_ratio=" << e.sup_ratio;
        if (!std::isinf(e.budget)) line << "  budget=" << e.budget;
        if (e.violations) line << "  violations=" << e.violations;
        std::cout << line.str() << "\n";
    }
    std::cout << (rep.pass ? "ALL PASS" : "VIOLATIONS FOUND") << "\n";
    if (!cfg.out_path.empty()) {
        std::string err;
        if (!write_file(cfg.out_path, rep.to_json(true), err)) {
            std::cerr << err << "\n";
            return 2;
        }
        for (const ncdist::SuiteEntry& e : rep.entries) {
            if (e.curve.empty()) continue;
            std::string csv = rep.curves_csv(e.name);
            if (!write_file(cfg.out_path + "." + e.name + ".csv", csv, err)) {
                std::cerr << err << "\n";
                return 2;
            }
        }
    }
    return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for distributional martingale inequalities"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;
    std::vector<std::string> budget_args;

    auto* verify = app.add_subcommand("verify", "run a check suite");
    verify->add_option("--suite", cfg.suite, "one of: identities, distributional, classical, "
                                             "paper, moment, optimality, curves, qb, all");
    verify->add_option("--trials", cfg.trials, "base trial count (kinds scale it)");
    verify->add_option("--seed", cfg.seed, "master seed");
    verify->add_option("--tol", cfg.tol, "grid refinement tolerance")->check(CLI::Range(1e-15, 1e-3));
    verify->add_option("--dims", cfg.caps.max_dim, "max block dimension");
    verify->add_option("--levels", cfg.caps.max_levels, "max filtration depth");
    verify->add_option("--parallel", cfg.parallelism, "worker threads");
    verify->add_option("--out", cfg.out_path, "write the JSON report (and curve CSVs) here");
    verify->add_option("--config", config_path, "flat key=value config file; flags override");
    verify->add_option("--budget", budget_args, "override a budget, e.g. dst=1.5");

    std::string est_kind = "st";
    int est_trials = 100;
    std::uint64_t est_seed = 0;
    double est_p = 2.0;
    int est_parallel = 1;
    auto* estimate = app.add_subcommand("estimate", "estimate an empirical constant");
    estimate->add_option("--kind", est_kind, "check kind name");
    estimate->add_option("--trials", est_trials);
    estimate->add_option("--seed", est_seed);
    estimate->add_option("--p", est_p, "exponent for the p-parameterized kinds");
    estimate->add_option("--parallel", est_parallel);
    estimate->add_option("--dims", cfg.caps.max_dim);
    estimate->add_option("--levels", cfg.caps.max_levels);

    std::string demo_what = "triangular";
    std::string demo_sizes = "64,256,1024";
    std::string demo_out;
    auto* demo = app.add_subcommand("demo", "run the triangular truncation demo");
    demo->add_option("what", demo_what, "demo name (triangular)");
    demo->add_option("--sizes", demo_sizes, "comma separated matrix sizes");
    demo->add_option("--out", demo_out, "write CSV here (stdout otherwise)");

    std::string norm_space = "lp:2";
    std::string norm_input;
    std::string norm_pieces;
    auto* norm_cmd = app.add_subcommand("norm", "evaluate one symmetric norm");
    norm_cmd->add_option("--space", norm_space, "space spec, e.g. lp:2.5, lambdalog, "
                                                "marcinkiewicz:phipaper, orlicz:expm1:01");
    norm_cmd->add_option("--input", norm_input, "step function JSON file");
    norm_cmd->add_option("--pieces", norm_pieces, "inline pieces, e.g. [[1,3],[1,2]]");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*verify) {
            if (!config_path.empty()) {
                RunConfig file_cfg;
                std::string err;
                if (!apply_config_file(config_path, file_cfg, err)) {
                    std::cerr << err << "\n";
                    return 2;
                }
                // flags override the file: keep only options the user passed
                cfg = file_cfg;
                for (const CLI::Option* opt : verify->get_options()) {
                    if (opt->count() == 0) continue;
                    const std::string name = opt->get_name();
                    if (name == "--suite") cfg.suite = verify->get_option("--suite")->as<std::string>();
                    else if (name == "--trials") cfg.trials = verify->get_option("--trials")->as<int>();
                    else if (name == "--seed") cfg.seed = verify->get_option("--seed")->as<std::uint64_t>();
                    else if (name == "--tol") cfg.tol = verify->get_option("--tol")->as<double>();
                    else if (name == "--dims") cfg.caps.max_dim = verify->get_option("--dims")->as<int>();
                    else if (name == "--levels") cfg.caps.max_levels = verify->get_option("--levels")->as<int>();
                    else if (name == "--parallel") cfg.parallelism = verify->get_option("--parallel")->as<int>();
                    else if (name == "--out") cfg.out_path = verify->get_option("--out")->as<std::string>();
                }
            }
            for (const std::string& b : budget_args) {
                auto eq = b.find('=');
                if (eq == std::string::npos) {
                    std::cerr << "bad --budget '" << b << "' (want name=value)\n";
                    return 2;
                }
                cfg.budget_overrides[b.substr(0, eq)] = std::stod(b.substr(eq + 1));
            }
            return run_verify(cfg);
        }
        if (*estimate) {
            auto kind = ncdist::kind_from_name(est_kind);
            if (!kind) {
                std::cerr << "unknown kind '" << est_kind << "'\n";
                return 2;
            }
            ncdist::KindParams params;
            params.p = est_p;
            ncdist::ConstantEstimate est = ncdist::estimate_constant(
                *kind, params, cfg.caps, est_seed, est_trials, est_parallel);
            nlohmann::ordered_json j;
            j["kind"] = est.kind;
            j["trials"] = est.trials;
            j["sup_ratio"] = est.sup_ratio;
            j["argmax"] = est.argmax_digest;
            if (!est.curve.empty()) {
                nlohmann::ordered_json c = nlohmann::ordered_json::array();
                for (auto& [x, y] : est.curve) c.push_back({x, y});
                j["curve"] = c;
            }
            std::cout << j.dump(2) << "\n";
            return 0;
        }
        if (*demo) {
            if (demo_what != "triangular") {
                std::cerr << "unknown demo '" << demo_what << "'\n";
                return 2;
            }
            std::vector<int> sizes;
            std::stringstream ss(demo_sizes);
            std::string tok;
            while (std::getline(ss, tok, ',')) sizes.push_back(std::stoi(tok));
            ncdist::GrowthRecord rec = ncdist::hilbert_demo(sizes);
            std::string csv = rec.to_csv();
            if (demo_out.empty()) {
                std::cout << csv;
            } else {
                std::string err;
                if (!write_file(demo_out, csv, err)) {
                    std::cerr << err << "\n";
                    return 2;
                }
            }
            std::cout << "slope=" << rec.slope << "\n";
            bool ok = rec.slope >= 0.2 && rec.slope <= 0.5;
            return ok ? 0 : 1;
        }
        if (*norm_cmd) {
            std::string text;
            if (!norm_input.empty()) {
                std::ifstream in(norm_input);
                if (!in) {
                    std::cerr << "cannot read '" << norm_input << "'\n";
                    return 2;
                }
                std::stringstream buf;
                buf << in.rdbuf();
                text = buf.str();
            } else if (!norm_pieces.empty()) {
                text = "{\"pieces\":" + norm_pieces + "}";
            } else {
                std::cerr << "norm: give --input or --pieces\n";
                return 2;
            }
            ncdist::StepFunction f = ncdist::StepFunction::from_json(text);
            ncdist::SpaceSpec spec = ncdist::SpaceSpec::parse(norm_space);
            std::cout.precision(17);
            std::cout << ncdist::norm(f, spec) << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
