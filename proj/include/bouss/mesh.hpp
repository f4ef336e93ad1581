#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace bouss {

// Partition 0 = x_0 < x_1 < ... < x_N = 1 of the unit interval.
class Mesh {
public:
    explicit Mesh(std::vector<double> breakpoints, double dx = 0.0);

    std::size_t num_elements() const { return x_.size() - 1; }
    const std::vector<double>& breakpoints() const { return x_; }
    double x(std::size_t i) const { return x_[i]; }
    double element_size(std::size_t e) const { return x_[e + 1] - x_[e]; }
    std::vector<double> element_sizes() const;
    double h_max() const { return h_max_; }
    double h_min() const { return h_min_; }
    // Nominal spacing parameter used by time-step rules written in terms of dx.
    double dx() const { return dx_; }
    bool is_uniform() const { return h_max_ - h_min_ <= 1e-14; }
    // Index of the element containing x; the right endpoint maps to the last element.
    std::size_t locate(double x) const;

private:
    std::vector<double> x_;
    double h_max_ = 0.0;
    double h_min_ = 0.0;
    double dx_ = 0.0;
};

Mesh uniform_mesh(std::size_t n);

// Element sizes cycle through pattern * dx, with dx chosen so the total length is 1.
Mesh patterned_mesh(std::size_t n, const std::vector<double>& pattern);

// Named presets: "uniform", "ratio1.5", "ratio150", "ratio0.75-0.5".
Mesh preset_mesh(const std::string& name, std::size_t n);
std::vector<double> preset_pattern(const std::string& name);

}  // namespace bouss
