#pragma once

#include <string>
#include <vector>

#include "bouss/spline.hpp"

namespace bouss {

struct DecayMeasurement {
    std::vector<double> h;
    std::vector<double> values;
    // Least-squares slope over the finest three pairs (the last four samples).
    double exponent() const;
};

enum class ErrorOperator { Interpolant, L2Projection, EllipticAForm, EllipticStiffness };

// (psi, phi) = ((w eps)', phi) for all phi in the target space, or (psi, phi) = (eps, phi') when
// `transposed` is set; eps = v - Pi v with Pi the chosen operator on the error space.
struct ResidualSetup {
    SpaceSpec error_space;
    ErrorOperator op = ErrorOperator::Interpolant;
    SpaceSpec target_space;
    bool transposed = false;
    ScalarFn v, dv, w, dw;
    std::string mesh = "uniform";
    std::vector<std::size_t> n_list;
    // The cancellation estimates hold on uniform meshes only; other meshes are rejected unless this
    // is set, as for the negative control.
    bool allow_nonuniform = false;
};

DecayMeasurement weighted_residual(const ResidualSetup& setup);

struct MomentDiagnostics {
    DecayMeasurement element_moments;      // max_i |int_{I_i} rho|
    DecayMeasurement midpoint_derivative;  // max_i |rho'(midpoint)|
    DecayMeasurement interior_moments;     // same as moments, elements at distance >= c h ln(1/h)
};

// rho = eta - P eta on uniform P1 spaces.
MomentDiagnostics projection_moment_diagnostics(const ScalarFn& eta, const std::vector<std::size_t>& n_list,
                                                double interior_factor = 2.0);

struct OrthogonalityDefects {
    double quadratic_elliptic = 0.0;  // max |(sigma', phi)|, phi in free P1
    double p1_projection = 0.0;       // max |(rho', psi)|, psi in zero-boundary C1 quadratics
};

// sigma = u - R u with R the stiffness projection onto zero-boundary C1 quadratics, or the
// L2 projection onto the same space when `use_l2_instead` is set.
OrthogonalityDefects orthogonality_defect(const ScalarFn& u, const ScalarFn& du, const ScalarFn& eta,
                                          std::size_t n, bool use_l2_instead = false);

struct NodeSuperconvergence {
    DecayMeasurement derivative;  // max over interior nodes |e'(x_i)|
    DecayMeasurement difference;  // max over interior elements |e(x_{i+1}) - e(x_i)|
};

// e = v - R v with the cubic a-form projection, interior nodes at distance >= c h ln(1/h).
NodeSuperconvergence cubic_node_superconvergence(const ScalarFn& v, const ScalarFn& dv,
                                                 const std::vector<std::size_t>& n_list,
                                                 double interior_factor = 2.0);

// Within: |exponent - expected| <= tolerance. AtMost: exponent <= expected + tolerance.
// AtLeast: exponent >= expected - tolerance, i.e. the quantity decays at least as fast as the bound.
enum class ExponentCheck { Within, AtMost, AtLeast };

struct OracleReport {
    std::string id;
    std::string description;
    DecayMeasurement measurement;
    double expected = 0.0;
    double tolerance = 0.0;
    ExponentCheck check = ExponentCheck::Within;
    double value_bound = -1.0;      // when set, pass iff every value is at most this bound
    bool passed() const;
};

std::vector<std::string> oracle_ids();
OracleReport run_oracle(const std::string& id);

}  // namespace bouss
