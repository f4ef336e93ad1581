#pragma once

#include <string>
#include <vector>

#include "bouss/experiments.hpp"

namespace bouss {

// Published values for one experiment. Cells keep their published spelling, e.g. "0.1894e-1".
struct ReferenceTable {
    std::string source;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

class MissingSourceTag : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

ReferenceTable parse_reference(std::istream& in, const std::string& origin = "<stream>");
ReferenceTable load_reference(const std::string& path);
std::string reference_directory();
std::string reference_path(const std::string& experiment);

struct CellDeviation {
    std::string row;  // N, or scheme/alpha/t for stability rows
    std::string column;
    double run = 0.0;
    double reference = 0.0;
    double deviation = 0.0;  // relative for errors, absolute for orders
    bool is_order = false;
};

struct ComparisonReport {
    std::string experiment;
    std::string source;
    std::vector<CellDeviation> cells;
    double max_error_deviation = 0.0;
    double max_order_deviation = 0.0;
    std::vector<std::string> notes;  // status mismatches and similar
};

ComparisonReport compare(const ConvergenceTable& table, const ReferenceTable& ref);
ComparisonReport compare(const StabilityReport& report, const ReferenceTable& ref);
ComparisonReport compare(const ExperimentResult& result, const ReferenceTable& ref);

ResultTable to_result_table(const ComparisonReport& report);

}  // namespace bouss
