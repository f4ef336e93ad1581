#include "bouss/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bouss {

Mesh::Mesh(std::vector<double> breakpoints, double dx) : x_(std::move(breakpoints)) {
    if (x_.size() < 3) throw std::invalid_argument("mesh needs at least two elements");
    if (std::abs(x_.front()) > 1e-14 || std::abs(x_.back() - 1.0) > 1e-14)
        throw std::invalid_argument("mesh must span [0,1]");
    x_.front() = 0.0;
    x_.back() = 1.0;
    h_max_ = 0.0;
    h_min_ = 1.0;
    for (std::size_t e = 0; e + 1 < x_.size(); ++e) {
        const double h = x_[e + 1] - x_[e];
        if (!(h > 0.0)) throw std::invalid_argument("mesh breakpoints must be strictly increasing");
        h_max_ = std::max(h_max_, h);
        h_min_ = std::min(h_min_, h);
    }
    dx_ = dx > 0.0 ? dx : 1.0 / static_cast<double>(num_elements());
}

std::vector<double> Mesh::element_sizes() const {
    std::vector<double> h(num_elements());
    for (std::size_t e = 0; e < h.size(); ++e) h[e] = element_size(e);
    return h;
}

std::size_t Mesh::locate(double x) const {
    if (x < 0.0 || x > 1.0) throw std::invalid_argument("point outside [0,1]");
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t e = static_cast<std::size_t>(it - x_.begin());
    e = e == 0 ? 0 : e - 1;
    return std::min(e, num_elements() - 1);
}

Mesh uniform_mesh(std::size_t n) {
    if (n < 2) throw std::invalid_argument("uniform_mesh: N must be at least 2");
    std::vector<double> x(n + 1);
    for (std::size_t i = 0; i <= n; ++i) x[i] = static_cast<double>(i) / static_cast<double>(n);
    return Mesh(std::move(x), 1.0 / static_cast<double>(n));
}

Mesh patterned_mesh(std::size_t n, const std::vector<double>& pattern) {
    if (pattern.empty()) throw std::invalid_argument("patterned_mesh: empty pattern");
    if (n < 2 || n % pattern.size() != 0)
        throw std::invalid_argument("patterned_mesh: N must be a positive multiple of the pattern length");
    double sum = 0.0;
    for (double w : pattern) {
        if (!(w > 0.0)) throw std::invalid_argument("patterned_mesh: weights must be positive");
        sum += w;
    }
    const double dx = 1.0 / (static_cast<double>(n / pattern.size()) * sum);
    std::vector<double> x(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) x[i + 1] = x[i] + pattern[i % pattern.size()] * dx;
    if (std::abs(x.back() - 1.0) > 1e-12) throw std::logic_error("patterned_mesh: length drift");
    x.back() = 1.0;
    return Mesh(std::move(x), dx);
}

std::vector<double> preset_pattern(const std::string& name) {
    if (name == "uniform") return {1.0};
    if (name == "ratio1.5") return {1.2, 0.8};
    if (name == "ratio150") return {0.02, 0.05, 0.08, 0.35, 0.5, 1.0, 1.0, 2.0, 2.0, 3.0};
    if (name == "ratio0.75-0.5") return {0.75, 0.5};
    throw std::invalid_argument("unknown mesh preset: " + name);
}

Mesh preset_mesh(const std::string& name, std::size_t n) {
    if (name == "uniform") return uniform_mesh(n);
    return patterned_mesh(n, preset_pattern(name));
}

}  // namespace bouss
