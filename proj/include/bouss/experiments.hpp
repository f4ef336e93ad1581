#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bouss/assembly.hpp"
#include "bouss/errors.hpp"
#include "bouss/integrators.hpp"
#include "bouss/mesh.hpp"
#include "bouss/systems.hpp"

namespace bouss {

// Step-size expression in h (largest element) and dx (nominal spacing), e.g. "h/10", "h^(4/3)", "dx^2/25.6".
double evaluate_step_rule(const std::string& rule, double h, double dx);
double evaluate_step_rule(const std::string& rule, const Mesh& mesh);

struct StabilityRun {
    Scheme scheme = Scheme::Euler;
    double alpha = 2.0;  // k = h^alpha
};

struct ExperimentConfig {
    std::string name;
    std::string description;
    std::vector<std::size_t> n_list;
    std::string mesh = "uniform";
    SystemKind kind = SystemKind::CB;
    int eta_degree = 1;
    int u_degree = 1;
    Scheme scheme = Scheme::RK4;
    std::string k_rule = "h/10";
    double T = 1.0;
    std::vector<std::string> cases{"cb-cos"};
    InitRule eta_init = InitRule::Interpolate;
    InitRule u_init = InitRule::Interpolate;
    EllipticMode elliptic_mode = EllipticMode::AForm;
    std::vector<std::string> norms{"L2"};
    int linf_samples = kLinfSamplesPerElement;  // equispaced per element, endpoints included
    std::vector<double> times;  // error observation times; empty means only T
    bool report_u = true;
    bool report_kappa = false;
    // Stability sweeps (k = h^alpha at a fixed N).
    bool stability = false;
    std::size_t stability_n = 400;
    std::vector<StabilityRun> runs;
    std::vector<double> trace_times;
    // Rows run concurrently when more than one thread is allowed.
    unsigned threads = 0;
};

const std::vector<ExperimentConfig>& experiment_registry();
ExperimentConfig find_experiment(const std::string& name);

// Overrides from "key = value" lines; '#' starts a comment.
void apply_overrides(ExperimentConfig& config, const std::map<std::string, std::string>& kv);
std::map<std::string, std::string> parse_key_value(std::istream& in);
std::map<std::string, std::string> parse_key_value_file(const std::string& path);

std::vector<std::size_t> parse_size_list(const std::string& s);
std::vector<double> parse_number_list(const std::string& s);

struct StabilityOutcome {
    Scheme scheme = Scheme::Euler;
    double alpha = 0.0;
    double k = 0.0;
    bool diverged = false;
    double divergence_time = 0.0;
    double final_time = 0.0;
    double final_error = 0.0;
    std::vector<std::pair<double, double>> trace;  // (t, eta L2 error) at the step nearest each trace time
};

struct StabilityReport {
    std::string experiment;
    std::size_t n = 0;
    std::vector<StabilityOutcome> outcomes;
};

StabilityReport stability_sweep(const ExperimentConfig& base, const std::vector<StabilityRun>& runs);

struct ExperimentResult {
    std::optional<ConvergenceTable> table;
    std::optional<StabilityReport> stability;
    bool any_divergence() const;
};

ConvergenceTable run_convergence(const ExperimentConfig& config);
ExperimentResult run_experiment(const ExperimentConfig& config);

// Flat text table with the same cells as the emitted files.
struct ResultTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

std::string format_error(double v);
std::string format_order(double v);

ResultTable to_result_table(const ConvergenceTable& t);
ResultTable to_result_table(const StabilityReport& r);
ResultTable to_result_table(const ExperimentResult& r);

enum class OutputFormat { Csv, Markdown };
OutputFormat output_format_from_string(const std::string& s);

void emit_table(const ResultTable& t, std::ostream& out, OutputFormat format);
void emit_table(const ResultTable& t, const std::string& path, OutputFormat format);

}  // namespace bouss
