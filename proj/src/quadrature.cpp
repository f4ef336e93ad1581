#include "bouss/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <stdexcept>

namespace bouss {

namespace {

template <int N>
QuadratureRule from_boost() {
    using G = boost::math::quadrature::gauss<double, N>;
    const auto& a = G::abscissa();
    const auto& w = G::weights();
    QuadratureRule r;
    // Boost stores the non-negative half of the symmetric rule on [-1,1].
    for (std::size_t i = a.size(); i-- > 0;) {
        if (a[i] == 0.0) continue;
        r.nodes.push_back(0.5 * (1.0 - a[i]));
        r.weights.push_back(0.5 * w[i]);
    }
    if (N % 2 == 1) {
        r.nodes.push_back(0.5);
        r.weights.push_back(0.5 * w[0]);
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) continue;
        r.nodes.push_back(0.5 * (1.0 + a[i]));
        r.weights.push_back(0.5 * w[i]);
    }
    return r;
}

}  // namespace

QuadratureRule gauss_legendre(int points) {
    switch (points) {
        case 1: return from_boost<1>();
        case 2: return from_boost<2>();
        case 3: return from_boost<3>();
        case 4: return from_boost<4>();
        case 5: return from_boost<5>();
        case 6: return from_boost<6>();
        case 7: return from_boost<7>();
        case 8: return from_boost<8>();
        case 9: return from_boost<9>();
        case 10: return from_boost<10>();
        case 20: return from_boost<20>();
        default: throw std::invalid_argument("unsupported Gauss rule size");
    }
}

SpaceTabulation::SpaceTabulation(const SplineSpace& space, const QuadratureRule& rule)
    : ne_(space.mesh().num_elements()), nq_(rule.size()), p1_(space.degree() + 1) {
    const Mesh& m = space.mesh();
    x_.resize(ne_ * nq_);
    w_.resize(ne_ * nq_);
    val_.resize(ne_ * nq_ * p1_);
    der_.resize(ne_ * nq_ * p1_);
    idx_.resize(ne_ * p1_);
    LocalBasis lb;
    for (std::size_t e = 0; e < ne_; ++e) {
        const double a = m.x(e), h = m.element_size(e);
        for (int l = 0; l < p1_; ++l) idx_[e * p1_ + l] = space.space_index(e + static_cast<std::size_t>(l));
        for (std::size_t q = 0; q < nq_; ++q) {
            const double xq = a + h * rule.nodes[q];
            x_[e * nq_ + q] = xq;
            w_[e * nq_ + q] = h * rule.weights[q];
            space.local_basis(e, xq, 1, lb);
            for (int l = 0; l < p1_; ++l) {
                val_[(e * nq_ + q) * p1_ + l] = lb[0][l];
                der_[(e * nq_ + q) * p1_ + l] = lb[1][l];
            }
        }
    }
}

void SpaceTabulation::eval(const double* coef, std::size_t e, std::size_t q, double& v, double& dv) const {
    v = 0.0;
    dv = 0.0;
    const std::size_t base = (e * nq_ + q) * p1_;
    for (int a = 0; a < p1_; ++a) {
        const long j = idx_[e * p1_ + a];
        if (j < 0) continue;
        v += coef[j] * val_[base + a];
        dv += coef[j] * der_[base + a];
    }
}

}  // namespace bouss
