#include "bouss/experiments.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace bouss {

namespace {

class RuleParser {
public:
    RuleParser(const std::string& s, double h, double dx) : s_(s), h_(h), dx_(dx) {}

    double parse() {
        const double v = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& why) const {
        throw std::invalid_argument("step rule '" + s_ + "': " + why);
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(const std::string& tok) {
        skip();
        if (s_.compare(pos_, tok.size(), tok) == 0) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }
    double expr() {
        double v = term();
        for (;;) {
            if (accept("+")) v += term();
            else if (accept("-")) v -= term();
            else return v;
        }
    }
    double term() {
        double v = power();
        for (;;) {
            if (accept("*")) v *= power();
            else if (accept("/")) v /= power();
            else return v;
        }
    }
    double power() {
        const double base = atom();
        if (accept("^")) return std::pow(base, power());
        return base;
    }
    double atom() {
        skip();
        if (accept("(")) {
            const double v = expr();
            if (!accept(")")) fail("missing ')'");
            return v;
        }
        if (accept("-")) return -atom();
        if (accept("dx") || accept("\xCE\x94x")) return dx_;
        if (accept("h")) return h_;
        const char* begin = s_.c_str() + pos_;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) fail("expected a number, h, dx or '('");
        pos_ += static_cast<std::size_t>(end - begin);
        return v;
    }

    const std::string& s_;
    double h_, dx_;
    std::size_t pos_ = 0;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

std::vector<std::size_t> range(std::size_t from, std::size_t to, std::size_t step) {
    std::vector<std::size_t> v;
    for (std::size_t n = from; n <= to; n += step) v.push_back(n);
    return v;
}

std::string time_tag(double t) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", t);
    return buf;
}

}  // namespace

double evaluate_step_rule(const std::string& rule, double h, double dx) {
    const double k = RuleParser(rule, h, dx).parse();
    if (!(k > 0.0) || !std::isfinite(k)) throw std::invalid_argument("step rule '" + rule + "' gives a non-positive step");
    return k;
}

double evaluate_step_rule(const std::string& rule, const Mesh& mesh) {
    return evaluate_step_rule(rule, mesh.h_max(), mesh.dx());
}

std::vector<std::size_t> parse_size_list(const std::string& s) {
    std::vector<std::size_t> out;
    for (const auto& tok : split(s, ',')) {
        std::size_t used = 0;
        const long v = std::stol(tok, &used);
        if (used != tok.size() || v < 2) throw std::invalid_argument("invalid N value: " + tok);
        out.push_back(static_cast<std::size_t>(v));
    }
    if (out.empty()) throw std::invalid_argument("empty N list");
    return out;
}

std::vector<double> parse_number_list(const std::string& s) {
    std::vector<double> out;
    for (const auto& tok : split(s, ',')) out.push_back(RuleParser(tok, 0.0, 0.0).parse());
    return out;
}

const std::vector<ExperimentConfig>& experiment_registry() {
    static const std::vector<ExperimentConfig> reg = [] {
        std::vector<ExperimentConfig> r;
        ExperimentConfig c;

        c = {};
        c.name = "table2.1";
        c.description = "CB system, P1 elements, uniform mesh, rk4 k=h/10, T=1, interpolated initial data";
        c.n_list = range(40, 440, 40);
        c.cases = {"cb-cos"};
        c.norms = {"L2", "Linf", "H1", "H1std"};
        r.push_back(c);

        c.name = "table2.2";
        c.description = "SCB system, P1 elements, uniform mesh, rk4 k=h/10, T=1, interpolated initial data";
        c.kind = SystemKind::SCB;
        r.push_back(c);

        c = {};
        c.name = "table2.3a";
        c.description = "CB system, P1 elements, mesh ratio 1.5, rk4 k=dx/10, T=0.4, eta0 L2-projected, u0 elliptic projection";
        c.n_list = range(80, 560, 80);
        c.mesh = "ratio1.5";
        c.k_rule = "dx/10";
        c.T = 0.4;
        c.cases = {"cb-cubic"};
        c.eta_init = InitRule::L2Project;
        c.u_init = InitRule::EllipticProject;
        r.push_back(c);

        c.name = "table2.3b";
        c.description = "CB system, P1 elements, mesh ratio 150, rk4 k=dx/10, T=0.4, eta0 L2-projected, u0 elliptic projection";
        c.n_list = range(40, 320, 40);
        c.mesh = "ratio150";
        r.push_back(c);

        c = {};
        c.name = "table3.1";
        c.description = "SCB system, cubic splines, uniform mesh, rk4 k=h/10, T=1, eta interpolated, u elliptic projection";
        c.kind = SystemKind::SCB;
        c.eta_degree = c.u_degree = 3;
        c.n_list = range(40, 440, 40);
        c.cases = {"cb-cubic"};
        c.eta_init = InitRule::Interpolate;
        c.u_init = InitRule::EllipticProject;
        c.elliptic_mode = EllipticMode::AForm;
        c.norms = {"L2", "Linf", "H1", "H1std"};
        r.push_back(c);

        c.name = "fig3.1";
        c.description = "kappa = eta L2 error / (h^3.5 sqrt(ln 1/h)) for the cubic SCB run";
        c.norms = {"L2"};
        c.report_u = false;
        c.report_kappa = true;
        r.push_back(c);

        c = {};
        c.name = "table3.2";
        c.description = "SCB system, cubic splines, travelling Gaussian, rk4 k=h/10, eta L2 errors at t=0.5..2.5";
        c.kind = SystemKind::SCB;
        c.eta_degree = c.u_degree = 3;
        c.n_list = {250, 500, 750, 1000};
        c.cases = {"gaussian-travel"};
        c.eta_init = InitRule::Interpolate;
        c.u_init = InitRule::EllipticProject;
        c.T = 2.5;
        c.times = {0.5, 1.0, 1.5, 2.0, 2.5};
        c.report_u = false;
        r.push_back(c);

        c = {};
        c.name = "table4.1";
        c.description = "SCB system, P1, N=400: improved Euler with k=h and k=h^(4/3), rk4 with k=h; eta L2 error history";
        c.kind = SystemKind::SCB;
        c.stability = true;
        c.stability_n = 400;
        c.cases = {"cb-cubic"};
        c.runs = {{Scheme::ImprovedEuler, 1.0}, {Scheme::ImprovedEuler, 4.0 / 3.0}, {Scheme::RK4, 1.0}};
        c.trace_times = {0.05, 0.1, 0.3, 0.5, 0.7, 0.8, 0.825, 0.85, 0.9, 0.95, 1.0};
        r.push_back(c);

        c.name = "remark4.2";
        c.description = "SCB system, P1, N=400: explicit Euler with k=h^alpha, alpha in {2,1.8,1.6,1.4,1.2}";
        c.runs = {{Scheme::Euler, 2.0}, {Scheme::Euler, 1.8}, {Scheme::Euler, 1.6}, {Scheme::Euler, 1.4},
                  {Scheme::Euler, 1.2}};
        c.trace_times = {};
        r.push_back(c);

        c = {};
        c.name = "table5.1";
        c.description = "CB system, eta in P1, u in zero-boundary C1 quadratics, uniform mesh, rk4 k=h/10, T=1";
        c.eta_degree = 1;
        c.u_degree = 2;
        c.n_list = range(40, 140, 20);
        c.cases = {"cb-quad"};
        c.eta_init = InitRule::L2Project;
        c.u_init = InitRule::EllipticProject;
        c.elliptic_mode = EllipticMode::Stiffness;
        c.norms = {"L2", "Linf", "H1", "H1std"};
        r.push_back(c);

        c.name = "table5.2";
        c.description = "CB system, eta in C1 quadratics, u in zero-boundary cubics, uniform mesh, rk4 k=h/10, T=1";
        c.eta_degree = 2;
        c.u_degree = 3;
        r.push_back(c);

        c = {};
        c.name = "table5.3";
        c.description = "CB system, eta in P1, u in zero-boundary C1 quadratics, mesh ratio 1.5, rk4 k=dx/10, T=0.4";
        c.eta_degree = 1;
        c.u_degree = 2;
        c.mesh = "ratio1.5";
        c.k_rule = "dx/10";
        c.T = 0.4;
        c.n_list = range(80, 560, 80);
        c.cases = {"cb-quad"};
        c.eta_init = InitRule::L2Project;
        c.u_init = InitRule::EllipticProject;
        c.elliptic_mode = EllipticMode::Stiffness;
        r.push_back(c);

        c = {};
        c.name = "table6.1";
        c.description = "eta_t + eta_x = 0, P1 with phi(0)=0, Crank-Nicolson k=h/3, T=0.5, eta0 = x^k e^x";
        c.kind = SystemKind::Advection;
        c.scheme = Scheme::CrankNicolson;
        c.k_rule = "h/3";
        c.T = 0.5;
        c.n_list = range(50, 500, 50);
        c.cases = {"adv-x1exp", "adv-x2exp", "adv-x3exp", "adv-x4exp"};
        c.eta_init = InitRule::L2Project;
        c.report_u = false;
        r.push_back(c);

        c = {};
        c.name = "table6.2a";
        c.description = "first-order wave system, P1, mesh pattern (0.75,0.5) dx=1.6/N, rk4 k=dx, T=0.4";
        c.kind = SystemKind::WaveSystem;
        c.mesh = "ratio0.75-0.5";
        c.k_rule = "dx";
        c.T = 0.4;
        c.n_list = range(80, 560, 80);
        c.cases = {"wave-6.15"};
        r.push_back(c);

        c.name = "table6.2b";
        c.description = "first-order wave system, P1, uniform mesh, rk4 k=h, T=0.4";
        c.mesh = "uniform";
        c.k_rule = "h";
        r.push_back(c);

        c = {};
        c.name = "table6.3a";
        c.description = "hyperbolic system with viscous term, P1, mesh pattern (0.75,0.5), rk4 k=dx^2/25.6, T=0.5, L2-projected initial data";
        c.kind = SystemKind::ViscousSystem;
        c.mesh = "ratio0.75-0.5";
        c.k_rule = "dx^2/25.6";
        c.T = 0.5;
        c.n_list = range(20, 120, 20);
        c.cases = {"cb-cubic"};
        c.eta_init = c.u_init = InitRule::L2Project;
        r.push_back(c);

        c.name = "table6.3b";
        c.description = "hyperbolic system with viscous term, P1, uniform mesh, rk4 k=h^2/25, T=0.5, L2-projected initial data";
        c.mesh = "uniform";
        c.k_rule = "h^2/25";
        r.push_back(c);
        return r;
    }();
    return reg;
}

ExperimentConfig find_experiment(const std::string& name) {
    for (const auto& c : experiment_registry())
        if (c.name == name) return c;
    throw std::invalid_argument("unknown experiment: " + name);
}

std::map<std::string, std::string> parse_key_value(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

std::map<std::string, std::string> parse_key_value_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    return parse_key_value(in);
}

namespace {

std::vector<StabilityRun> parse_runs(const std::string& s) {
    std::vector<StabilityRun> runs;
    for (const auto& tok : split(s, ',')) {
        const auto colon = tok.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("stability run must be scheme:alpha, got " + tok);
        runs.push_back({scheme_from_string(trim(tok.substr(0, colon))), RuleParser(tok.substr(colon + 1), 0, 0).parse()});
    }
    return runs;
}

}  // namespace

void apply_overrides(ExperimentConfig& c, const std::map<std::string, std::string>& kv) {
    for (const auto& [key, value] : kv) {
        if (key == "n_list") c.n_list = parse_size_list(value);
        else if (key == "mesh") { preset_pattern(value); c.mesh = value; }
        else if (key == "system") c.kind = system_kind_from_string(value);
        else if (key == "eta_degree") c.eta_degree = std::stoi(value);
        else if (key == "u_degree") c.u_degree = std::stoi(value);
        else if (key == "scheme") c.scheme = scheme_from_string(value);
        else if (key == "k_rule") { evaluate_step_rule(value, 0.1, 0.1); c.k_rule = value; }
        else if (key == "T") c.T = std::stod(value);
        else if (key == "cases") c.cases = split(value, ',');
        else if (key == "eta_init") c.eta_init = init_rule_from_string(value);
        else if (key == "u_init") c.u_init = init_rule_from_string(value);
        else if (key == "elliptic_mode") {
            if (value == "a-form") c.elliptic_mode = EllipticMode::AForm;
            else if (value == "stiffness") c.elliptic_mode = EllipticMode::Stiffness;
            else throw std::invalid_argument("unknown elliptic mode: " + value);
        } else if (key == "norms") c.norms = split(value, ',');
        else if (key == "linf_samples") {
            c.linf_samples = std::stoi(value);
            if (c.linf_samples < 2) throw std::invalid_argument("linf_samples must be at least 2");
        } else if (key == "times") c.times = parse_number_list(value);
        else if (key == "report_u") c.report_u = value == "true" || value == "1";
        else if (key == "stability_n") c.stability_n = parse_size_list(value).at(0);
        else if (key == "runs") c.runs = parse_runs(value);
        else if (key == "trace_times") c.trace_times = parse_number_list(value);
        else if (key == "threads") c.threads = static_cast<unsigned>(std::stoul(value));
        else throw std::invalid_argument("unknown config key: " + key);
    }
    for (const auto& n : c.norms)
        if (n != "L2" && n != "Linf" && n != "H1" && n != "H1std") throw std::invalid_argument("unknown norm: " + n);
}

namespace {

struct SeriesKey {
    std::string case_name;
    std::string field;  // "eta" or "u"
    std::string norm;
    std::optional<double> time;
};

std::string series_name(const SeriesKey& k, bool multi_case, bool order) {
    std::string s = multi_case ? k.case_name + "_" : "";
    s += k.field + "_";
    if (order) s += k.norm == "L2" ? "order" : k.norm + "_order";
    else s += k.norm;
    if (k.time) s += "_t" + time_tag(*k.time);
    return s;
}

std::vector<SeriesKey> series_keys(const ExperimentConfig& c) {
    std::vector<SeriesKey> keys;
    const bool u = c.report_u && has_u_unknown(c.kind);
    std::vector<std::optional<double>> times;
    if (c.times.empty()) times.push_back(std::nullopt);
    else for (double t : c.times) times.push_back(t);
    for (const auto& cs : c.cases)
        for (const auto& t : times)
            for (const auto& norm : c.norms) {
                keys.push_back({cs, "eta", norm, t});
                if (u) keys.push_back({cs, "u", norm, t});
            }
    return keys;
}

double pick(const ErrorReport& r, const std::string& norm) {
    if (norm == "L2") return r.l2;
    if (norm == "Linf") return r.linf;
    if (norm == "H1std") return r.h1_standard;
    return r.h1;
}

struct RowOutcome {
    std::vector<double> values;
    bool divergent = false;
};

RowOutcome run_row(const ExperimentConfig& c, std::size_t n, const std::vector<SeriesKey>& keys) {
    RowOutcome out;
    out.values.assign(keys.size(), std::numeric_limits<double>::quiet_NaN());
    const Mesh mesh = preset_mesh(c.mesh, n);
    const double k = evaluate_step_rule(c.k_rule, mesh);
    for (const auto& cname : c.cases) {
        const SemidiscreteProblem prob(c.kind, mesh, c.eta_degree, c.u_degree, manufactured_case(cname));
        const ManufacturedCase& mc = prob.manufactured();
        auto record = [&](const State& s, std::optional<double> tag) {
            const double t = s.t;
            const ErrorReport ee = error_norms(
                prob.eta_field(s.y), [&](double x) { return mc.eta(x, t); }, [&](double x) { return mc.eta_x(x, t); }, c.linf_samples);
            std::optional<ErrorReport> ue;
            if (prob.has_u())
                ue = error_norms(prob.u_field(s.y), [&](double x) { return mc.u(x, t); },
                                 [&](double x) { return mc.u_x(x, t); }, c.linf_samples);
            for (std::size_t i = 0; i < keys.size(); ++i) {
                const SeriesKey& key = keys[i];
                if (key.case_name != cname || key.time != tag) continue;
                out.values[i] = key.field == "eta" ? pick(ee, key.norm) : pick(*ue, key.norm);
            }
        };
        std::vector<Observer> obs;
        for (double t : c.times) obs.push_back({{t}, false, [&record, t](const State& s) { record(s, t); }});
        const State init = prob.initial_state(c.eta_init, c.u_init, c.elliptic_mode);
        const IntegrationResult res = integrate({c.scheme, k}, prob, init, c.T, obs);
        if (res.diverged) {
            out.divergent = true;
            continue;
        }
        if (c.times.empty()) record(res.state, std::nullopt);
    }
    return out;
}

}  // namespace

ConvergenceTable run_convergence(const ExperimentConfig& c) {
    if (c.n_list.empty()) throw std::invalid_argument("experiment has no N values");
    const auto keys = series_keys(c);
    const bool multi = c.cases.size() > 1;
    ConvergenceTable table;
    table.experiment = c.name;
    for (const auto& key : keys) {
        Series s;
        s.name = series_name(key, multi, false);
        s.order_name = series_name(key, multi, true);
        table.series.push_back(s);
    }
    std::vector<RowOutcome> rows(c.n_list.size());
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned threads = c.threads ? c.threads : hw;
    if (threads <= 1 || c.n_list.size() == 1) {
        for (std::size_t i = 0; i < c.n_list.size(); ++i) rows[i] = run_row(c, c.n_list[i], keys);
    } else {
        std::vector<std::future<RowOutcome>> fut;
        for (std::size_t i = 0; i < c.n_list.size(); ++i)
            fut.push_back(std::async(std::launch::async, run_row, std::cref(c), c.n_list[i], std::cref(keys)));
        for (std::size_t i = 0; i < fut.size(); ++i) rows[i] = fut[i].get();
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        table.n.push_back(static_cast<double>(c.n_list[i]));
        table.divergent.push_back(rows[i].divergent);
        for (std::size_t j = 0; j < keys.size(); ++j) {
            const double v = rows[i].values[j];
            table.series[j].values.push_back(v);
            table.series[j].valid.push_back(std::isfinite(v));
        }
    }
    if (c.report_kappa) {
        Series kappa;
        kappa.name = "kappa";
        const Series& eta = table.series.front();
        for (std::size_t i = 0; i < table.n.size(); ++i) {
            const double h = preset_mesh(c.mesh, c.n_list[i]).h_max();
            const bool ok = eta.valid[i];
            kappa.values.push_back(ok ? kappa_ratio(eta.values[i], h) : std::numeric_limits<double>::quiet_NaN());
            kappa.valid.push_back(ok);
        }
        table.series.push_back(kappa);
    }
    return table;
}

StabilityReport stability_sweep(const ExperimentConfig& base, const std::vector<StabilityRun>& runs) {
    StabilityReport rep;
    rep.experiment = base.name;
    rep.n = base.stability_n;
    const Mesh mesh = preset_mesh(base.mesh, base.stability_n);
    const SemidiscreteProblem prob(base.kind, mesh, base.eta_degree, base.u_degree, manufactured_case(base.cases.at(0)));
    const ManufacturedCase& mc = prob.manufactured();
    const State init = prob.initial_state(base.eta_init, base.u_init, base.elliptic_mode);
    auto eta_error = [&](const State& s) {
        const double t = s.t;
        return error_norms(prob.eta_field(s.y), [&](double x) { return mc.eta(x, t); },
                           [&](double x) { return mc.eta_x(x, t); })
            .l2;
    };
    for (const auto& run : runs) {
        StabilityOutcome o;
        o.scheme = run.scheme;
        o.alpha = run.alpha;
        o.k = std::pow(mesh.h_max(), run.alpha);
        // Trace at the step nearest each requested time, without altering the step sequence.
        std::vector<Observer> obs;
        if (!base.trace_times.empty()) {
            obs.push_back({{}, true, [&, k = o.k](const State& s) {
                               for (double tt : base.trace_times) {
                                   if (tt >= base.T) continue;
                                   if (s.t > tt - 0.5 * k && s.t <= tt + 0.5 * k) o.trace.emplace_back(s.t, eta_error(s));
                               }
                           }});
        }
        const IntegrationResult res = integrate({run.scheme, o.k}, prob, init, base.T, obs);
        o.diverged = res.diverged;
        if (res.diverged) {
            o.divergence_time = res.divergence_time;
        } else {
            o.final_time = res.state.t;
            o.final_error = eta_error(res.state);
        }
        rep.outcomes.push_back(o);
    }
    return rep;
}

bool ExperimentResult::any_divergence() const {
    if (table)
        for (bool d : table->divergent)
            if (d) return true;
    if (stability)
        for (const auto& o : stability->outcomes)
            if (o.diverged) return true;
    return false;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    ExperimentResult r;
    if (config.stability) r.stability = stability_sweep(config, config.runs);
    else r.table = run_convergence(config);
    return r;
}

std::string format_error(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

std::string format_order(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

ResultTable to_result_table(const ConvergenceTable& t) {
    ResultTable r;
    r.header.push_back("N");
    for (const auto& s : t.series) {
        r.header.push_back(s.name);
        if (!s.order_name.empty()) r.header.push_back(s.order_name);
    }
    std::vector<std::vector<std::optional<double>>> orders;
    for (const auto& s : t.series)
        orders.push_back(s.order_name.empty() ? std::vector<std::optional<double>>{} : t.orders(s.name));
    for (std::size_t i = 0; i < t.n.size(); ++i) {
        std::vector<std::string> row{std::to_string(static_cast<long>(t.n[i]))};
        for (std::size_t j = 0; j < t.series.size(); ++j) {
            const Series& s = t.series[j];
            const bool kappa = s.order_name.empty();
            if (!s.valid[i]) row.push_back(t.divergent[i] ? "diverged" : "");
            else row.push_back(kappa ? format_order(s.values[i]) : format_error(s.values[i]));
            if (!kappa) row.push_back(orders[j][i] ? format_order(*orders[j][i]) : "");
        }
        r.rows.push_back(row);
    }
    return r;
}

ResultTable to_result_table(const StabilityReport& rep) {
    ResultTable r;
    r.header = {"scheme", "alpha", "k", "t", "eta_L2", "status"};
    char buf[64];
    for (const auto& o : rep.outcomes) {
        std::snprintf(buf, sizeof buf, "%.4f", o.alpha);
        const std::string alpha = buf;
        const std::string k = format_error(o.k);
        for (const auto& [t, e] : o.trace) {
            std::snprintf(buf, sizeof buf, "%.5f", t);
            r.rows.push_back({to_string(o.scheme), alpha, k, buf, format_error(e), "ok"});
        }
        if (o.diverged) {
            std::snprintf(buf, sizeof buf, "%.5f", o.divergence_time);
            r.rows.push_back({to_string(o.scheme), alpha, k, buf, "", "diverged"});
        } else {
            std::snprintf(buf, sizeof buf, "%.5f", o.final_time);
            r.rows.push_back({to_string(o.scheme), alpha, k, buf, format_error(o.final_error), "ok"});
        }
    }
    return r;
}

ResultTable to_result_table(const ExperimentResult& r) {
    if (r.table) return to_result_table(*r.table);
    if (r.stability) return to_result_table(*r.stability);
    return {};
}

OutputFormat output_format_from_string(const std::string& s) {
    if (s == "csv") return OutputFormat::Csv;
    if (s == "markdown" || s == "md") return OutputFormat::Markdown;
    throw std::invalid_argument("unknown output format: " + s);
}

void emit_table(const ResultTable& t, std::ostream& out, OutputFormat format) {
    auto line = [&](const std::vector<std::string>& cells) {
        if (format == OutputFormat::Csv) {
            for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        } else {
            out << "|";
            for (const auto& c : cells) out << " " << c << " |";
        }
        out << "\n";
    };
    line(t.header);
    if (format == OutputFormat::Markdown) line(std::vector<std::string>(t.header.size(), "---"));
    for (const auto& row : t.rows) line(row);
}

void emit_table(const ResultTable& t, const std::string& path, OutputFormat format) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    emit_table(t, out, format);
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace bouss
