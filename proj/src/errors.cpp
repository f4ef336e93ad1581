#include "bouss/errors.hpp"

#include <cmath>
#include <stdexcept>

#include "bouss/quadrature.hpp"

namespace bouss {

ErrorReport error_norms(const FemField& field, const ScalarFn& exact, const ScalarFn& exact_derivative,
                        int linf_samples) {
    static const QuadratureRule rule = gauss_legendre(kNormPoints);
    const SplineSpace& s = field.space();
    const Mesh& m = s.mesh();
    const double* c = field.coefficients().data();
    const int p = s.degree();
    LocalBasis lb;
    auto eval_local = [&](std::size_t e, double x, double& v, double& dv) {
        s.local_basis(e, x, 1, lb);
        v = dv = 0.0;
        for (int a = 0; a <= p; ++a) {
            const long j = s.space_index(e + static_cast<std::size_t>(a));
            if (j < 0) continue;
            v += c[j] * lb[0][a];
            dv += c[j] * lb[1][a];
        }
    };
    double l2 = 0.0, d2 = 0.0, linf = 0.0;
    for (std::size_t e = 0; e < m.num_elements(); ++e) {
        const double a = m.x(e), h = m.element_size(e);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double x = a + h * rule.nodes[q];
            double v, dv;
            eval_local(e, x, v, dv);
            const double err = exact(x) - v;
            const double derr = exact_derivative ? exact_derivative(x) - dv : 0.0;
            l2 += h * rule.weights[q] * err * err;
            d2 += h * rule.weights[q] * derr * derr;
        }
        for (int i = 0; i <= linf_samples - 1; ++i) {
            const double x = a + h * static_cast<double>(i) / static_cast<double>(linf_samples - 1);
            double v, dv;
            eval_local(e, x, v, dv);
            linf = std::max(linf, std::abs(exact(x) - v));
        }
    }
    ErrorReport r;
    r.l2 = std::sqrt(l2);
    r.h1 = std::sqrt(l2 + d2 / 3.0);
    r.h1_standard = std::sqrt(l2 + d2);
    r.linf = linf;
    return r;
}

std::vector<std::optional<double>> convergence_orders(const std::vector<double>& n, const std::vector<double>& errors) {
    if (n.size() != errors.size()) throw std::invalid_argument("convergence_orders: length mismatch");
    std::vector<std::optional<double>> out(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) {
        if (!(errors[i] > 0.0)) throw std::invalid_argument("convergence_orders: non-positive error");
        if (i > 0 && !(n[i] > n[i - 1])) throw std::invalid_argument("convergence_orders: N must increase");
        if (i > 0) out[i] = std::log(errors[i - 1] / errors[i]) / std::log(n[i] / n[i - 1]);
    }
    return out;
}

double kappa_ratio(double l2_error, double h) {
    if (!(h > 0.0 && h < 1.0)) throw std::invalid_argument("kappa_ratio: h must lie in (0,1)");
    return l2_error / (std::pow(h, 3.5) * std::sqrt(std::log(1.0 / h)));
}

double fit_exponent(const std::vector<double>& h, const std::vector<double>& values) {
    if (h.size() != values.size() || h.size() < 2) throw std::invalid_argument("fit_exponent: need >= 2 samples");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (!(values[i] > 0.0)) throw std::invalid_argument("fit_exponent: non-positive sample");
        const double x = std::log(h[i]), y = std::log(values[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

const Series& ConvergenceTable::find(const std::string& name) const {
    for (const auto& s : series)
        if (s.name == name) return s;
    throw std::out_of_range("no series named " + name);
}

std::vector<std::optional<double>> ConvergenceTable::orders(const std::string& name) const {
    const Series& s = find(name);
    std::vector<std::optional<double>> out(n.size());
    for (std::size_t i = 1; i < n.size(); ++i) {
        if (!s.valid[i] || !s.valid[i - 1] || !(s.values[i] > 0.0) || !(s.values[i - 1] > 0.0)) continue;
        out[i] = std::log(s.values[i - 1] / s.values[i]) / std::log(n[i] / n[i - 1]);
    }
    return out;
}

}  // namespace bouss
