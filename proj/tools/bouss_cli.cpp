#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <string>

#include "bouss/experiments.hpp"
#include "bouss/oracles.hpp"
#include "bouss/reference.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDivergence = 2;

struct Common {
    std::string n_list;
    std::string config;
    std::vector<std::string> set;
    std::string out;
    std::string format = "csv";
    unsigned threads = 0;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--n-list", c.n_list, "comma-separated N values, e.g. 40,80,120");
    cmd->add_option("--config", c.config, "key = value override file")->check(CLI::ExistingFile);
    cmd->add_option("--set", c.set, "single override key=value (repeatable)");
    cmd->add_option("--out", c.out, "output file (default: stdout)");
    cmd->add_option("--format", c.format, "csv or markdown")->check(CLI::IsMember({"csv", "markdown", "md"}));
    cmd->add_option("--threads", c.threads, "worker threads for table rows (0 = hardware)");
}

bouss::ExperimentConfig configure(const std::string& name, const Common& c) {
    bouss::ExperimentConfig cfg = bouss::find_experiment(name);
    if (!c.config.empty()) bouss::apply_overrides(cfg, bouss::parse_key_value_file(c.config));
    std::map<std::string, std::string> kv;
    for (const auto& s : c.set) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got " + s);
        kv[s.substr(0, eq)] = s.substr(eq + 1);
    }
    if (!c.n_list.empty()) kv["n_list"] = c.n_list;
    if (c.threads) kv["threads"] = std::to_string(c.threads);
    bouss::apply_overrides(cfg, kv);
    return cfg;
}

void write(const bouss::ResultTable& t, const Common& c) {
    const auto fmt = bouss::output_format_from_string(c.format);
    if (c.out.empty()) bouss::emit_table(t, std::cout, fmt);
    else bouss::emit_table(t, c.out, fmt);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Galerkin finite element experiments for Boussinesq-type systems"};
    app.require_subcommand(1);

    auto* list = app.add_subcommand("list", "list registered experiments and oracles");

    std::string run_name;
    Common run_opts;
    auto* run = app.add_subcommand("run", "run a registered experiment");
    run->add_option("experiment", run_name)->required();
    add_common(run, run_opts);

    std::string oracle_id;
    bool oracle_all = false;
    auto* oracle = app.add_subcommand("oracle", "run a superaccuracy oracle");
    oracle->add_option("id", oracle_id);
    oracle->add_flag("--all", oracle_all, "run every oracle");

    std::string sweep_scheme;
    std::string sweep_alphas;
    std::string sweep_base = "remark4.2";
    std::size_t sweep_n = 0;
    Common sweep_opts;
    auto* sweep = app.add_subcommand("sweep", "stability sweep with k = h^alpha");
    sweep->add_option("scheme", sweep_scheme)->required();
    sweep->add_option("--alphas", sweep_alphas, "comma-separated exponents")->required();
    sweep->add_option("--n", sweep_n, "number of elements (default from base experiment)");
    sweep->add_option("--base", sweep_base, "experiment supplying the problem setup");
    add_common(sweep, sweep_opts);

    std::string cmp_name;
    std::string cmp_reference;
    Common cmp_opts;
    auto* cmp = app.add_subcommand("compare", "run an experiment and report deviation from the reference CSV");
    cmp->add_option("experiment", cmp_name)->required();
    cmp->add_option("--reference", cmp_reference, "reference CSV (default: bundled)");
    add_common(cmp, cmp_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (list->parsed()) {
            for (const auto& c : bouss::experiment_registry()) std::cout << c.name << "\t" << c.description << "\n";
            std::cout << "\noracles:\n";
            for (const auto& id : bouss::oracle_ids()) std::cout << "  " << id << "\n";
            return kExitOk;
        }
        if (run->parsed()) {
            const auto cfg = configure(run_name, run_opts);
            const auto result = bouss::run_experiment(cfg);
            write(bouss::to_result_table(result), run_opts);
            if (result.table && result.any_divergence()) {
                std::cerr << "divergence detected in convergence run\n";
                return kExitDivergence;
            }
            return kExitOk;
        }
        if (oracle->parsed()) {
            std::vector<std::string> ids;
            if (oracle_all) ids = bouss::oracle_ids();
            else if (!oracle_id.empty()) ids = {oracle_id};
            else throw std::invalid_argument("oracle: give an id or --all");
            bool ok = true;
            for (const auto& id : ids) {
                const auto r = bouss::run_oracle(id);
                std::printf("%-34s %s\n", r.id.c_str(), r.passed() ? "PASS" : "FAIL");
                std::printf("  %s\n", r.description.c_str());
                for (std::size_t i = 0; i < r.measurement.h.size(); ++i)
                    std::printf("  h=%.6f  value=%.6e\n", r.measurement.h[i], r.measurement.values[i]);
                if (r.value_bound >= 0)
                    std::printf("  bound %.1e\n", r.value_bound);
                else
                    std::printf("  exponent %.3f (expected %s%.2f, tolerance %.2f)\n", r.measurement.exponent(),
                                r.check == bouss::ExponentCheck::AtMost ? "<= " : r.check == bouss::ExponentCheck::AtLeast ? ">= " : "", r.expected, r.tolerance);
                ok = ok && r.passed();
            }
            return ok ? kExitOk : kExitUsage;
        }
        if (sweep->parsed()) {
            auto cfg = configure(sweep_base, sweep_opts);
            if (sweep_n) cfg.stability_n = sweep_n;
            std::vector<bouss::StabilityRun> runs;
            const auto scheme = bouss::scheme_from_string(sweep_scheme);
            for (double a : bouss::parse_number_list(sweep_alphas)) runs.push_back({scheme, a});
            write(bouss::to_result_table(bouss::stability_sweep(cfg, runs)), sweep_opts);
            return kExitOk;
        }
        if (cmp->parsed()) {
            const auto cfg = configure(cmp_name, cmp_opts);
            const auto ref = bouss::load_reference(cmp_reference.empty() ? bouss::reference_path(cmp_name) : cmp_reference);
            const auto result = bouss::run_experiment(cfg);
            const auto rep = bouss::compare(result, ref);
            write(bouss::to_result_table(rep), cmp_opts);
            std::fprintf(stderr, "source: %s\nmax relative error deviation: %.4e\nmax absolute order deviation: %.4f\n",
                         rep.source.c_str(), rep.max_error_deviation, rep.max_order_deviation);
            for (const auto& n : rep.notes) std::fprintf(stderr, "note: %s\n", n.c_str());
            return kExitOk;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
