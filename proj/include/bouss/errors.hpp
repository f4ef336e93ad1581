#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bouss/spline.hpp"

namespace bouss {

struct ErrorReport {
    double l2 = 0.0;
    double h1 = 0.0;  // (||e||^2 + (1/3)||e'||^2)^(1/2)
    double linf = 0.0;
    double h1_standard = 0.0;  // (||e||^2 + ||e'||^2)^(1/2)
};

inline constexpr int kNormPoints = 10;
inline constexpr int kLinfSamplesPerElement = 21;

ErrorReport error_norms(const FemField& field, const ScalarFn& exact, const ScalarFn& exact_derivative,
                        int linf_samples = kLinfSamplesPerElement);

// order_i = log(e_{i-1}/e_i) / log(N_i/N_{i-1}); the first entry is empty.
std::vector<std::optional<double>> convergence_orders(const std::vector<double>& n, const std::vector<double>& errors);

double kappa_ratio(double l2_error, double h);

// Least-squares slope of log(value) against log(h), i.e. the decay exponent.
double fit_exponent(const std::vector<double>& h, const std::vector<double>& values);

struct Series {
    std::string name;
    std::string order_name;  // empty: no order column
    std::vector<double> values;
    std::vector<bool> valid;  // false marks a divergent or missing cell
};

struct ConvergenceTable {
    std::string experiment;
    std::vector<double> n;
    std::vector<Series> series;
    std::vector<bool> divergent;

    const Series& find(const std::string& name) const;
    std::vector<std::optional<double>> orders(const std::string& name) const;
};

}  // namespace bouss
