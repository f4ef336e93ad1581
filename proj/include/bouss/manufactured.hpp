#pragma once

#include <functional>
#include <string>
#include <vector>

namespace bouss {

using SpaceTimeFn = std::function<double(double, double)>;

struct FieldSample {
    double eta = 0, eta_t = 0, eta_x = 0;
    double u = 0, u_t = 0, u_x = 0, u_xx = 0, u_xxt = 0;
};

// Closed-form exact fields (x, t) with the partial derivatives needed for forcing and errors.
// For scalar problems the u-members describe a prescribed velocity, or are zero.
struct ManufacturedCase {
    std::string name;
    SpaceTimeFn eta, eta_t, eta_x;
    SpaceTimeFn u, u_t, u_x, u_xx, u_xxt;
    // Optional fused evaluation of every member at one point; at() falls back to the members.
    std::function<FieldSample(double, double)> sample;

    FieldSample at(double x, double t) const;
};

ManufacturedCase manufactured_case(const std::string& name);
std::vector<std::string> manufactured_case_names();

}  // namespace bouss
