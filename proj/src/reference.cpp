#include "bouss/reference.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#ifndef BOUSS_REFERENCE_DIR
#define BOUSS_REFERENCE_DIR "data/reference"
#endif

namespace bouss {

namespace {

constexpr double kTimeWindow = 5e-3;


std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

bool is_order_column(const std::string& name) {
    return name.size() >= 5 && name.compare(name.size() - 5, 5, "order") == 0;
}

std::optional<double> number(const std::string& s) {
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) return std::nullopt;
    return v;
}

int column(const std::vector<std::string>& header, const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

void add_cell(ComparisonReport& rep, const std::string& row, const std::string& col, double run, double ref) {
    CellDeviation c{row, col, run, ref, 0.0, is_order_column(col)};
    if (c.is_order) {
        c.deviation = std::abs(run - ref);
        rep.max_order_deviation = std::max(rep.max_order_deviation, c.deviation);
    } else {
        c.deviation = ref != 0.0 ? std::abs(run - ref) / std::abs(ref) : std::abs(run);
        rep.max_error_deviation = std::max(rep.max_error_deviation, c.deviation);
    }
    rep.cells.push_back(c);
}

}  // namespace

ReferenceTable parse_reference(std::istream& in, const std::string& origin) {
    ReferenceTable t;
    std::string line;
    if (!std::getline(in, line)) throw MissingSourceTag(origin + ": empty reference file");
    line = trim(line);
    const std::string tag = "# source:";
    if (line.rfind(tag, 0) != 0 || trim(line.substr(tag.size())).empty())
        throw MissingSourceTag(origin + ": first line must be '# source: <tag>'");
    t.source = trim(line.substr(tag.size()));
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        auto cells = split_csv(line);
        if (t.header.empty()) {
            t.header = std::move(cells);
            continue;
        }
        if (cells.size() != t.header.size())
            throw std::invalid_argument(origin + ": row has " + std::to_string(cells.size()) + " cells, header has " +
                                        std::to_string(t.header.size()));
        t.rows.push_back(std::move(cells));
    }
    if (t.header.empty()) throw std::invalid_argument(origin + ": missing header row");
    return t;
}

ReferenceTable load_reference(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open reference file: " + path);
    return parse_reference(in, path);
}

std::string reference_directory() {
    if (const char* env = std::getenv("BOUSS_REFERENCE_DIR")) return env;
    return BOUSS_REFERENCE_DIR;
}

std::string reference_path(const std::string& experiment) {
    return reference_directory() + "/" + experiment + ".csv";
}

ComparisonReport compare(const ConvergenceTable& table, const ReferenceTable& ref) {
    ComparisonReport rep;
    rep.experiment = table.experiment;
    rep.source = ref.source;
    const int ncol = column(ref.header, "N");
    if (ncol < 0) throw std::invalid_argument("reference has no N column");
    std::map<long, const std::vector<std::string>*> by_n;
    for (const auto& row : ref.rows) by_n[std::stol(row[ncol])] = &row;

    const ResultTable run = to_result_table(table);
    for (const auto& row : run.rows) {
        const long n = std::stol(row[0]);
        const auto it = by_n.find(n);
        if (it == by_n.end())
            throw std::invalid_argument("reference " + ref.source + " has no row for N=" + std::to_string(n));
        for (std::size_t j = 1; j < run.header.size(); ++j) {
            const int rc = column(ref.header, run.header[j]);
            if (rc < 0) continue;
            const auto rv = number((*it->second)[rc]);
            if (!rv) continue;
            const auto v = number(row[j]);
            if (!v) {
                rep.notes.push_back("N=" + row[0] + " " + run.header[j] + ": run has no value (" + row[j] + ")");
                continue;
            }
            // Compare at full precision rather than the rounded cell text.
            double full = *v;
            for (std::size_t s = 0; s < table.series.size(); ++s) {
                const Series& ser = table.series[s];
                const std::size_t i = static_cast<std::size_t>(&row - run.rows.data());
                if (ser.name == run.header[j]) full = ser.values[i];
                else if (ser.order_name == run.header[j]) {
                    const auto o = table.orders(ser.name)[i];
                    if (o) full = *o;
                }
            }
            add_cell(rep, row[0], run.header[j], full, *rv);
        }
    }
    return rep;
}

ComparisonReport compare(const StabilityReport& report, const ReferenceTable& ref) {
    ComparisonReport rep;
    rep.experiment = report.experiment;
    rep.source = ref.source;
    const int cs = column(ref.header, "scheme"), ca = column(ref.header, "alpha"), ct = column(ref.header, "t"),
              ce = column(ref.header, "eta_L2"), cst = column(ref.header, "status");
    if (cs < 0 || ca < 0 || ct < 0 || ce < 0)
        throw std::invalid_argument("stability reference needs scheme, alpha, t and eta_L2 columns");
    for (const auto& row : ref.rows) {
        const Scheme scheme = scheme_from_string(row[cs]);
        const double alpha = std::stod(row[ca]);
        const double t = std::stod(row[ct]);
        const std::string status = cst >= 0 ? row[cst] : "ok";
        const StabilityOutcome* match = nullptr;
        for (const auto& o : report.outcomes)
            if (o.scheme == scheme && std::abs(o.alpha - alpha) < 1e-3) match = &o;
        const std::string key = row[cs] + "/" + row[ca] + "/" + row[ct];
        if (!match) throw std::invalid_argument("run has no outcome for " + key);
        std::optional<double> value;
        bool diverged_by_then = match->diverged && match->divergence_time <= t + kTimeWindow;
        double best = kTimeWindow;
        for (const auto& [tt, e] : match->trace)
            if (std::abs(tt - t) <= best) {
                best = std::abs(tt - t);
                value = e;
            }
        if (!match->diverged && std::abs(match->final_time - t) <= best) value = match->final_error;
        if (status != "ok") {
            if (!match->diverged)
                rep.notes.push_back(key + ": reference reports " + status + ", run did not diverge");
            else
                rep.notes.push_back(key + ": reference reports " + status + ", run diverged at t=" +
                                    std::to_string(match->divergence_time));
            continue;
        }
        if (diverged_by_then && !value) {
            rep.notes.push_back(key + ": run diverged at t=" + std::to_string(match->divergence_time));
            continue;
        }
        const auto rv = number(row[ce]);
        if (!rv) continue;
        if (!value) {
            rep.notes.push_back(key + ": no run sample near this time");
            continue;
        }
        add_cell(rep, key, "eta_L2", *value, *rv);
    }
    return rep;
}

ComparisonReport compare(const ExperimentResult& result, const ReferenceTable& ref) {
    if (result.table) return compare(*result.table, ref);
    if (result.stability) return compare(*result.stability, ref);
    throw std::invalid_argument("empty experiment result");
}

ResultTable to_result_table(const ComparisonReport& report) {
    ResultTable t;
    t.header = {"row", "column", "run", "reference", "deviation", "kind"};
    for (const auto& c : report.cells) {
        char dev[32];
        std::snprintf(dev, sizeof dev, c.is_order ? "%.4f" : "%.4e", c.deviation);
        t.rows.push_back({c.row, c.column, c.is_order ? format_order(c.run) : format_error(c.run),
                          c.is_order ? format_order(c.reference) : format_error(c.reference), dev,
                          c.is_order ? "absolute" : "relative"});
    }
    return t;
}

}  // namespace bouss
