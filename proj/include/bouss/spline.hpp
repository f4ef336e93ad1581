#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "bouss/mesh.hpp"

namespace bouss {

enum class Boundary { Free, ZeroBoth, ZeroLeft, ZeroRight };

std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string& s);

struct SpaceSpec {
    int degree = 1;
    Boundary boundary = Boundary::Free;
};

inline constexpr int kMaxDegree = 3;

// Values (row 0) and derivatives (row d) of the degree+1 clamped B-splines active on one element.
using LocalBasis = std::array<std::array<double, kMaxDegree + 1>, kMaxDegree + 1>;

struct BasisValues {
    std::vector<std::size_t> indices;
    std::vector<double> values;
    std::vector<double> derivatives;
};

// Span of clamped B-splines on a mesh, optionally restricted to functions vanishing at an endpoint.
class SplineSpace {
public:
    SplineSpace(Mesh mesh, SpaceSpec spec);

    const Mesh& mesh() const { return mesh_; }
    const SpaceSpec& spec() const { return spec_; }
    int degree() const { return spec_.degree; }
    Boundary boundary() const { return spec_.boundary; }
    std::size_t dim() const { return dim_; }
    std::size_t num_clamped() const { return mesh_.num_elements() + static_cast<std::size_t>(spec_.degree); }
    const std::vector<double>& knots() const { return knots_; }

    // Clamped B-splines e..e+degree are active on element e; this maps clamped index to
    // space index, returning -1 for functions removed by the boundary restriction.
    long space_index(std::size_t clamped) const {
        const long j = static_cast<long>(clamped) - offset_;
        return (j < 0 || j >= static_cast<long>(dim_)) ? -1 : j;
    }

    // Derivatives 0..nders of the clamped B-splines active on element e, evaluated at x.
    void local_basis(std::size_t e, double x, int nders, LocalBasis& out) const;

    BasisValues eval_basis(double x) const;

private:
    Mesh mesh_;
    SpaceSpec spec_;
    std::vector<double> knots_;
    std::size_t dim_ = 0;
    long offset_ = 0;
};

using SpacePtr = std::shared_ptr<const SplineSpace>;

SpacePtr build_space(const Mesh& mesh, SpaceSpec spec);

class FemField {
public:
    FemField() = default;
    FemField(SpacePtr space, std::vector<double> coefficients);
    explicit FemField(SpacePtr space);

    const SplineSpace& space() const { return *space_; }
    const SpacePtr& space_ptr() const { return space_; }
    const std::vector<double>& coefficients() const { return coef_; }
    std::vector<double>& coefficients() { return coef_; }

    double eval(double x, int derivative_order = 0) const;

private:
    SpacePtr space_;
    std::vector<double> coef_;
};

using ScalarFn = std::function<double(double)>;

// Nodal interpolant for degree 1; complete cubic spline (end slopes from df) for degree 3.
FemField interpolate(const SpacePtr& space, const ScalarFn& f, const ScalarFn& df = nullptr);

}  // namespace bouss
