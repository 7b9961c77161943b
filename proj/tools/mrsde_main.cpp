#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mrsde/config.hpp"
#include "mrsde/csv.hpp"
#include "mrsde/empirical.hpp"
#include "mrsde/errors.hpp"
#include "mrsde/experiments.hpp"
#include "mrsde/oracles.hpp"
#include "mrsde/reference.hpp"
#include "mrsde/scheme.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPropertyFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitNumericalFailure = 3;

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
    bool verbose = false;
    bool quiet = false;
};

void report_warnings(const std::vector<std::string>& warnings, const CommonArgs& args) {
    if (args.quiet) return;
    for (const auto& warning : warnings) std::cerr << "warning: " << warning << "\n";
}

mrsde::SimulationConfig load(const CommonArgs& args) {
    mrsde::SimulationConfig config = mrsde::load_config(args.config_path);
    if (args.seed_set) config.seed = args.seed;
    return config;
}

std::string out_file(const CommonArgs& args, const std::string& name) {
    std::filesystem::create_directories(args.out_dir);
    return (std::filesystem::path(args.out_dir) / name).string();
}

std::string json_escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        if (c == '"' || c == '\\') {
            out.push_back('\\');
            out.push_back(c);
        } else if (c == '\n') {
            out += "\\n";
        } else {
            out.push_back(c);
        }
    }
    return out;
}

int cmd_simulate(const CommonArgs& args, bool with_oracle) {
    mrsde::SimulationConfig config = load(args);
    mrsde::PathBundle bundle = mrsde::run(config);
    if (with_oracle) {
        const auto id = mrsde::resolve_oracle_case(config);
        if (!id) throw mrsde::invalid_config_error("configuration has no oracle case");
        const auto params = mrsde::oracle_params(config);
        mrsde::validate_oracle_params(*id, params, &bundle.warnings);
        bundle.oracle_k =
            mrsde::oracle_k_path(*id, config.grid, params, config.root_tol.value_or(1e-10));
    }
    report_warnings(bundle.warnings, args);
    const std::string path = out_file(args, "path.csv");
    mrsde::write_path_csv(path, bundle);
    std::cout << "K_hat(T) = " << mrsde::format_double(bundle.khat.back()) << "\n";
    if (args.verbose) {
        std::cout << "rows: " << bundle.times.size() << "\n"
                  << "max_root_tol: " << mrsde::format_double(bundle.max_root_tol) << "\n"
                  << "wrote " << path << "\n";
    }
    return kExitOk;
}

int cmd_oracle(const CommonArgs& args) {
    mrsde::SimulationConfig config = load(args);
    const auto id = mrsde::resolve_oracle_case(config);
    if (!id) {
        throw mrsde::invalid_config_error(
            "configuration has no oracle case (supported: drifted_bm/ou/ou_random_mean/"
            "black_scholes with a linear constraint, ou with the sin constraint)");
    }
    const auto params = mrsde::oracle_params(config);
    std::vector<std::string> warnings;
    mrsde::validate_oracle_params(*id, params, &warnings);
    report_warnings(warnings, args);
    const auto k = mrsde::oracle_k_path(*id, config.grid, params, config.root_tol.value_or(1e-10));
    const std::string path = out_file(args, "oracle.csv");
    mrsde::write_oracle_csv(path, config.grid.nodes, k);
    std::cout << "case " << mrsde::to_string(*id)
              << ", K(T) = " << mrsde::format_double(k.back()) << "\n";
    if (args.verbose) std::cout << "wrote " << path << "\n";
    return kExitOk;
}

int cmd_validate(const CommonArgs& args) {
    mrsde::SimulationConfig config = load(args);
    const mrsde::InvariantReport report = mrsde::validate_invariants(config);
    report_warnings(report.warnings, args);
    std::cout << "{\n  \"properties\": [\n";
    for (std::size_t i = 0; i < report.checks.size(); ++i) {
        const auto& check = report.checks[i];
        std::cout << "    {\"name\": \"" << json_escape(check.name) << "\", \"pass\": "
                  << (check.pass ? "true" : "false")
                  << ", \"measured\": " << mrsde::format_double(check.measured)
                  << ", \"bound\": " << mrsde::format_double(check.bound) << ", \"detail\": \""
                  << json_escape(check.detail) << "\"}" << (i + 1 < report.checks.size() ? "," : "")
                  << "\n";
    }
    std::cout << "  ],\n  \"pass\": " << (report.pass() ? "true" : "false") << "\n}\n";
    return report.pass() ? kExitOk : kExitPropertyFailure;
}

int cmd_converge(const CommonArgs& args, const std::string& parameter,
                 std::vector<std::size_t> values) {
    mrsde::SimulationConfig config = load(args);
    mrsde::EstimatorOptions options;
    options.threads = args.threads;
    const mrsde::RateStudy study =
        mrsde::rate_study(config, parameter, values, config.replications, options);
    const std::string path = out_file(args, "rate.csv");
    mrsde::write_rate_csv(path, study);
    std::cout << "slope = " << mrsde::format_double(study.fit.slope)
              << ", r2 = " << mrsde::format_double(study.fit.r2) << "\n";
    if (args.verbose) {
        for (const auto& [value, e_hat] : study.points) {
            std::cout << parameter << " = " << value
                      << ": E_hat = " << mrsde::format_double(e_hat) << "\n";
        }
        std::cout << "wrote " << path << "\n";
    }
    return kExitOk;
}

mrsde::SimulationConfig selftest_config(mrsde::ModelKind kind, const CommonArgs& args) {
    mrsde::SimulationConfig config;
    config.model_kind = kind;
    config.grid = mrsde::make_grid(1.0, 50);
    config.particles = 200;
    config.replications = 1;
    config.x0.kind = mrsde::InitialCondition::Kind::point;
    config.x0.value = 1.0;
    config.seed = args.seed_set ? args.seed : 7;
    switch (kind) {
        case mrsde::ModelKind::drifted_bm:
            config.model.beta = 2.0;
            config.model.sigma = 1.0;
            config.constraint = mrsde::ConstraintSpec::linear(0.5);
            break;
        case mrsde::ModelKind::ou:
            config.model.beta = 2.0;
            config.model.a = 1.0;
            config.model.sigma = 1.0;
            config.constraint = mrsde::ConstraintSpec::linear(0.5);
            break;
        default:
            throw mrsde::invalid_config_error("selftest supports drifted_bm and ou");
    }
    return config;
}

int cmd_selftest(const CommonArgs& args) {
    bool all_pass = true;
    auto report_line = [&](const std::string& name, bool pass) {
        std::cout << (pass ? "pass" : "FAIL") << "  " << name << "\n";
        all_pass = all_pass && pass;
    };

    for (const auto kind : {mrsde::ModelKind::drifted_bm, mrsde::ModelKind::ou}) {
        const auto config = selftest_config(kind, args);
        const auto report = mrsde::validate_invariants(config, 0, 50);
        report_line("invariants on " + mrsde::to_string(kind), report.pass());
        if (args.verbose) {
            for (const auto& check : report.checks) {
                std::cout << "      " << (check.pass ? "pass" : "FAIL") << " " << check.name
                          << " (measured " << mrsde::format_double(check.measured) << ", bound "
                          << mrsde::format_double(check.bound) << ")\n";
            }
        }
    }

    {
        // nonlinear oracle degenerates to the linear one when alpha = 0
        auto config = selftest_config(mrsde::ModelKind::ou, args);
        auto params = mrsde::oracle_params(config);
        params.alpha = 0.0;
        const auto grid = mrsde::make_grid(1.0, 400);
        const auto nonlinear = mrsde::k_case_v(grid, params, 1e-12);
        double worst = 0.0;
        for (std::size_t j = 0; j < grid.nodes.size(); ++j) {
            worst = std::max(worst, std::abs(nonlinear[j] - mrsde::k_case_ii(grid.nodes[j], params)));
        }
        report_line("nonlinear oracle matches linear oracle at alpha = 0", worst <= 2.0 / 400 + 1e-9);
    }

    return all_pass ? kExitOk : kExitPropertyFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mean-reflected SDE particle simulator"};
    app.require_subcommand(1);

    CommonArgs args;
    bool with_oracle = false;
    std::string parameter = "n";
    std::vector<std::size_t> ladder;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        auto* config_opt = cmd->add_option("--config", args.config_path, "configuration file");
        if (needs_config) config_opt->required();
        cmd->add_option("--out", args.out_dir, "output directory");
        cmd->add_option("--seed", args.seed, "seed override")->each([&](const std::string&) {
            args.seed_set = true;
        });
        cmd->add_option("--threads", args.threads,
                        "worker threads (0 = MRSDE_THREADS or hardware)");
        cmd->add_flag("-v,--verbose", args.verbose, "verbose output");
        cmd->add_flag("-q,--quiet", args.quiet, "suppress warnings");
    };

    auto* simulate = app.add_subcommand("simulate", "run the particle scheme, write path.csv");
    add_common(simulate, true);
    simulate->add_flag("--with-oracle", with_oracle, "attach the oracle compensator column");

    auto* oracle = app.add_subcommand("oracle", "evaluate the closed-form compensator");
    add_common(oracle, true);

    auto* validate = app.add_subcommand("validate", "check the scheme invariants");
    add_common(validate, true);

    auto* converge = app.add_subcommand("converge", "error-vs-parameter rate study");
    add_common(converge, true);
    converge->add_option("--param", parameter, "ladder parameter: n or N");
    converge->add_option("--values", ladder, "ladder values")->delimiter(',');

    auto* selftest = app.add_subcommand("selftest", "built-in invariant battery");
    add_common(selftest, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& help) {
        return app.exit(help);
    } catch (const CLI::ParseError& error) {
        app.exit(error);
        return kExitConfigError;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(args, with_oracle);
        if (oracle->parsed()) return cmd_oracle(args);
        if (validate->parsed()) return cmd_validate(args);
        if (converge->parsed()) return cmd_converge(args, parameter, ladder);
        if (selftest->parsed()) return cmd_selftest(args);
    } catch (const mrsde::invalid_config_error& error) {
        std::cerr << "config error: " << error.what() << "\n";
        return kExitConfigError;
    } catch (const mrsde::numerical_error& error) {
        std::cerr << "numerical failure: " << error.what() << "\n";
        return kExitNumericalFailure;
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return kExitNumericalFailure;
    }
    return kExitConfigError;
}
