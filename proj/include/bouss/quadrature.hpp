#pragma once

#include <cstddef>
#include <vector>

#include "bouss/spline.hpp"

namespace bouss {

// Gauss-Legendre rule mapped to the reference element [0,1].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::size_t size() const { return nodes.size(); }
};

// Supported point counts: 1..10, 20.
QuadratureRule gauss_legendre(int points);

// Basis values and first derivatives of a space at every quadrature point of every element.
class SpaceTabulation {
public:
    SpaceTabulation(const SplineSpace& space, const QuadratureRule& rule);

    std::size_t num_elements() const { return ne_; }
    std::size_t points_per_element() const { return nq_; }
    int local_size() const { return p1_; }
    double x(std::size_t e, std::size_t q) const { return x_[e * nq_ + q]; }
    double weight(std::size_t e, std::size_t q) const { return w_[e * nq_ + q]; }
    double value(std::size_t e, std::size_t q, int a) const { return val_[(e * nq_ + q) * p1_ + a]; }
    double deriv(std::size_t e, std::size_t q, int a) const { return der_[(e * nq_ + q) * p1_ + a]; }
    // Space index of local function a on element e, or -1 when removed by the boundary condition.
    long index(std::size_t e, int a) const { return idx_[e * p1_ + a]; }

    // Field value and derivative at quadrature point (e, q).
    void eval(const double* coef, std::size_t e, std::size_t q, double& v, double& dv) const;

private:
    std::size_t ne_, nq_;
    int p1_;
    std::vector<double> x_, w_, val_, der_;
    std::vector<long> idx_;
};

}  // namespace bouss
