#include "bouss/spline.hpp"

#include <cmath>
#include <stdexcept>

#include "bouss/banded.hpp"

namespace bouss {

std::string to_string(Boundary b) {
    switch (b) {
        case Boundary::Free: return "free";
        case Boundary::ZeroBoth: return "zero";
        case Boundary::ZeroLeft: return "zero-left";
        case Boundary::ZeroRight: return "zero-right";
    }
    return "?";
}

Boundary boundary_from_string(const std::string& s) {
    if (s == "free") return Boundary::Free;
    if (s == "zero" || s == "zero-both") return Boundary::ZeroBoth;
    if (s == "zero-left") return Boundary::ZeroLeft;
    if (s == "zero-right") return Boundary::ZeroRight;
    throw std::invalid_argument("unknown boundary kind: " + s);
}

SplineSpace::SplineSpace(Mesh mesh, SpaceSpec spec) : mesh_(std::move(mesh)), spec_(spec) {
    if (spec_.degree < 1 || spec_.degree > kMaxDegree)
        throw std::invalid_argument("unsupported spline degree " + std::to_string(spec_.degree));
    const int p = spec_.degree;
    const auto& x = mesh_.breakpoints();
    knots_.assign(static_cast<std::size_t>(p), 0.0);
    knots_.insert(knots_.end(), x.begin(), x.end());
    knots_.insert(knots_.end(), static_cast<std::size_t>(p), 1.0);
    const bool drop_left = spec_.boundary == Boundary::ZeroBoth || spec_.boundary == Boundary::ZeroLeft;
    const bool drop_right = spec_.boundary == Boundary::ZeroBoth || spec_.boundary == Boundary::ZeroRight;
    offset_ = drop_left ? 1 : 0;
    dim_ = num_clamped() - (drop_left ? 1 : 0) - (drop_right ? 1 : 0);
}

void SplineSpace::local_basis(std::size_t e, double x, int nders, LocalBasis& out) const {
    const int p = spec_.degree;
    const std::size_t span = e + static_cast<std::size_t>(p);
    const double* U = knots_.data();
    double ndu[kMaxDegree + 1][kMaxDegree + 1];
    double left[kMaxDegree + 1], right[kMaxDegree + 1];
    ndu[0][0] = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[j] = x - U[span + 1 - j];
        right[j] = U[span + j] - x;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            ndu[j][r] = right[r + 1] + left[j - r];
            const double temp = ndu[r][j - 1] / ndu[j][r];
            ndu[r][j] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        ndu[j][j] = saved;
    }
    for (int j = 0; j <= p; ++j) out[0][j] = ndu[j][p];
    nders = std::min(nders, p);
    double a[2][kMaxDegree + 1];
    for (int r = 0; r <= p; ++r) {
        int s1 = 0, s2 = 1;
        a[0][0] = 1.0;
        for (int k = 1; k <= nders; ++k) {
            double d = 0.0;
            const int rk = r - k, pk = p - k;
            if (r >= k) {
                a[s2][0] = a[s1][0] / ndu[pk + 1][rk];
                d = a[s2][0] * ndu[rk][pk];
            }
            const int j1 = rk >= -1 ? 1 : -rk;
            const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
            for (int j = j1; j <= j2; ++j) {
                a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][rk + j];
                d += a[s2][j] * ndu[rk + j][pk];
            }
            if (r <= pk) {
                a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
                d += a[s2][k] * ndu[r][pk];
            }
            out[k][r] = d;
            std::swap(s1, s2);
        }
    }
    double factor = p;
    for (int k = 1; k <= nders; ++k) {
        for (int j = 0; j <= p; ++j) out[k][j] *= factor;
        factor *= (p - k);
    }
}

BasisValues SplineSpace::eval_basis(double x) const {
    const std::size_t e = mesh_.locate(x);
    LocalBasis lb;
    local_basis(e, x, 1, lb);
    BasisValues bv;
    for (int a = 0; a <= spec_.degree; ++a) {
        const long j = space_index(e + static_cast<std::size_t>(a));
        if (j < 0) continue;
        bv.indices.push_back(static_cast<std::size_t>(j));
        bv.values.push_back(lb[0][a]);
        bv.derivatives.push_back(lb[1][a]);
    }
    return bv;
}

SpacePtr build_space(const Mesh& mesh, SpaceSpec spec) {
    return std::make_shared<const SplineSpace>(mesh, spec);
}

FemField::FemField(SpacePtr space, std::vector<double> coefficients)
    : space_(std::move(space)), coef_(std::move(coefficients)) {
    if (!space_) throw std::invalid_argument("FemField: null space");
    if (coef_.size() != space_->dim()) throw std::invalid_argument("FemField: coefficient length mismatch");
}

FemField::FemField(SpacePtr space) : space_(std::move(space)) {
    if (!space_) throw std::invalid_argument("FemField: null space");
    coef_.assign(space_->dim(), 0.0);
}

double FemField::eval(double x, int derivative_order) const {
    if (derivative_order < 0 || derivative_order > space_->degree())
        throw std::invalid_argument("eval_field: derivative order exceeds degree");
    const std::size_t e = space_->mesh().locate(x);
    LocalBasis lb;
    space_->local_basis(e, x, derivative_order, lb);
    double s = 0.0;
    for (int a = 0; a <= space_->degree(); ++a) {
        const long j = space_->space_index(e + static_cast<std::size_t>(a));
        if (j >= 0) s += coef_[static_cast<std::size_t>(j)] * lb[derivative_order][a];
    }
    return s;
}

namespace {

void check_boundary_values(const SplineSpace& s, double f0, double f1) {
    const Boundary b = s.boundary();
    if ((b == Boundary::ZeroBoth || b == Boundary::ZeroLeft) && std::abs(f0) > 1e-12)
        throw std::invalid_argument("interpolate: function does not vanish at x=0");
    if ((b == Boundary::ZeroBoth || b == Boundary::ZeroRight) && std::abs(f1) > 1e-12)
        throw std::invalid_argument("interpolate: function does not vanish at x=1");
}

std::vector<double> restrict_clamped(const SplineSpace& s, const std::vector<double>& clamped) {
    std::vector<double> c(s.dim());
    for (std::size_t j = 0; j < clamped.size(); ++j) {
        const long i = s.space_index(j);
        if (i >= 0) c[static_cast<std::size_t>(i)] = clamped[j];
    }
    return c;
}

}  // namespace

FemField interpolate(const SpacePtr& space, const ScalarFn& f, const ScalarFn& df) {
    const SplineSpace& s = *space;
    const Mesh& m = s.mesh();
    const std::size_t n = m.num_elements();
    check_boundary_values(s, f(0.0), f(1.0));
    std::vector<double> clamped(s.num_clamped());
    if (s.degree() == 1) {
        for (std::size_t i = 0; i <= n; ++i) clamped[i] = f(m.x(i));
    } else if (s.degree() == 3) {
        if (!df) throw std::invalid_argument("interpolate: cubic interpolation needs the derivative");
        // End coefficients follow from the value and slope conditions; interior breakpoints
        // give a tridiagonal system for the remaining coefficients.
        clamped[0] = f(0.0);
        clamped[1] = clamped[0] + m.element_size(0) * df(0.0) / 3.0;
        clamped[n + 2] = f(1.0);
        clamped[n + 1] = clamped[n + 2] - m.element_size(n - 1) * df(1.0) / 3.0;
        const std::size_t k = n - 1;
        std::vector<double> lo(k), di(k), up(k), rhs(k);
        LocalBasis lb;
        for (std::size_t r = 0; r < k; ++r) {
            const std::size_t i = r + 1;
            s.local_basis(i, m.x(i), 0, lb);
            // Active clamped functions at x_i are i, i+1, i+2; unknowns are clamped 2..n.
            lo[r] = lb[0][0];
            di[r] = lb[0][1];
            up[r] = lb[0][2];
            rhs[r] = f(m.x(i));
        }
        rhs[0] -= lo[0] * clamped[1];
        rhs[k - 1] -= up[k - 1] * clamped[n + 1];
        const std::vector<double> sol = solve_tridiagonal(lo, di, up, rhs);
        for (std::size_t r = 0; r < k; ++r) clamped[r + 2] = sol[r];
    } else {
        throw std::invalid_argument("interpolate: no interpolant for degree 2 spaces");
    }
    return FemField(space, restrict_clamped(s, clamped));
}

}  // namespace bouss
