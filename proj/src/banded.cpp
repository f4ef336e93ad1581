#include "bouss/banded.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bouss {

BandedSPDMatrix::BandedSPDMatrix(std::size_t dim, std::size_t bandwidth)
    : dim_(dim), bw_(bandwidth), band_(dim * (bandwidth + 1), 0.0) {}

double BandedSPDMatrix::operator()(std::size_t i, std::size_t j) const {
    if (i < j) std::swap(i, j);
    if (i >= dim_) throw std::out_of_range("banded matrix index");
    if (i - j > bw_) return 0.0;
    return band_[i * (bw_ + 1) + (i - j)];
}

double& BandedSPDMatrix::at(std::size_t i, std::size_t j) {
    if (i < j) std::swap(i, j);
    if (i >= dim_ || i - j > bw_) throw std::out_of_range("banded matrix entry outside band");
    return band_[i * (bw_ + 1) + (i - j)];
}

void BandedSPDMatrix::add(std::size_t i, std::size_t j, double v) { at(i, j) += v; }
void BandedSPDMatrix::set(std::size_t i, std::size_t j, double v) { at(i, j) = v; }

std::vector<double> BandedSPDMatrix::multiply(const std::vector<double>& x) const {
    if (x.size() != dim_) throw std::invalid_argument("banded multiply: dimension mismatch");
    std::vector<double> y(dim_, 0.0);
    for (std::size_t i = 0; i < dim_; ++i) {
        const double* row = &band_[i * (bw_ + 1)];
        y[i] += row[0] * x[i];
        for (std::size_t k = 1; k <= bw_ && k <= i; ++k) {
            y[i] += row[k] * x[i - k];
            y[i - k] += row[k] * x[i];
        }
    }
    return y;
}

double BandedSPDMatrix::max_abs() const {
    double m = 0.0;
    for (double v : band_) m = std::max(m, std::abs(v));
    return m;
}

double BandedSPDMatrix::inner(const std::vector<double>& x, const std::vector<double>& y) const {
    const std::vector<double> ay = multiply(y);
    double s = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) s += x[i] * ay[i];
    return s;
}

BandedSPDMatrix operator+(const BandedSPDMatrix& a, const BandedSPDMatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("banded sum: dimension mismatch");
    const std::size_t bw = std::max(a.bandwidth(), b.bandwidth());
    BandedSPDMatrix c(a.dim(), bw);
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t k = 0; k <= bw && k <= i; ++k) c.set(i, i - k, a(i, i - k) + b(i, i - k));
    return c;
}

BandedSPDMatrix operator*(double s, const BandedSPDMatrix& a) {
    BandedSPDMatrix c(a.dim(), a.bandwidth());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t k = 0; k <= a.bandwidth() && k <= i; ++k) c.set(i, i - k, s * a(i, i - k));
    return c;
}

BandedCholesky::BandedCholesky(const BandedSPDMatrix& m) : dim_(m.dim()), bw_(m.bandwidth()) {
    const std::size_t w = bw_ + 1;
    l_.assign(dim_ * w, 0.0);
    // l_[i*w + k] = L(i, i-k)
    for (std::size_t i = 0; i < dim_; ++i) {
        const std::size_t jlo = i > bw_ ? i - bw_ : 0;
        for (std::size_t j = jlo; j <= i; ++j) {
            double s = m(i, j);
            const std::size_t klo = std::max(jlo, j > bw_ ? j - bw_ : 0);
            for (std::size_t k = klo; k < j; ++k) s -= l_[i * w + (i - k)] * l_[j * w + (j - k)];
            if (j == i) {
                if (!(s > 0.0))
                    throw NotPositiveDefinite("cholesky: non-positive pivot at row " + std::to_string(i));
                l_[i * w] = std::sqrt(s);
            } else {
                l_[i * w + (i - j)] = s / l_[j * w];
            }
        }
    }
}

double BandedCholesky::factor(std::size_t i, std::size_t j) const {
    if (j > i || i - j > bw_) return 0.0;
    return l_[i * (bw_ + 1) + (i - j)];
}

void BandedCholesky::solve_in_place(double* x) const {
    const std::size_t w = bw_ + 1;
    for (std::size_t i = 0; i < dim_; ++i) {
        double s = x[i];
        for (std::size_t k = 1; k <= bw_ && k <= i; ++k) s -= l_[i * w + k] * x[i - k];
        x[i] = s / l_[i * w];
    }
    for (std::size_t ii = dim_; ii-- > 0;) {
        double s = x[ii];
        for (std::size_t k = 1; k <= bw_ && ii + k < dim_; ++k) s -= l_[(ii + k) * w + k] * x[ii + k];
        x[ii] = s / l_[ii * w];
    }
}

std::vector<double> BandedCholesky::solve(const std::vector<double>& rhs) const {
    if (rhs.size() != dim_) throw std::invalid_argument("banded solve: dimension mismatch");
    std::vector<double> x = rhs;
    solve_in_place(x.data());
    return x;
}

std::vector<double> solve_tridiagonal(const std::vector<double>& lower, const std::vector<double>& diag,
                                      const std::vector<double>& upper, std::vector<double> rhs) {
    const std::size_t n = diag.size();
    if (lower.size() != n || upper.size() != n || rhs.size() != n)
        throw std::invalid_argument("solve_tridiagonal: dimension mismatch");
    std::vector<double> c(n), x(n);
    double beta = diag[0];
    if (beta == 0.0) throw std::runtime_error("solve_tridiagonal: zero pivot");
    c[0] = n > 1 ? upper[0] / beta : 0.0;
    rhs[0] /= beta;
    for (std::size_t i = 1; i < n; ++i) {
        beta = diag[i] - lower[i] * c[i - 1];
        if (beta == 0.0) throw std::runtime_error("solve_tridiagonal: zero pivot");
        c[i] = i + 1 < n ? upper[i] / beta : 0.0;
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / beta;
    }
    x[n - 1] = rhs[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = rhs[i] - c[i] * x[i + 1];
    return x;
}

}  // namespace bouss
