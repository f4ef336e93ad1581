#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace bouss {

class NotPositiveDefinite : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Symmetric banded matrix; only the diagonal and the lower bands are stored.
class BandedSPDMatrix {
public:
    BandedSPDMatrix() = default;
    BandedSPDMatrix(std::size_t dim, std::size_t bandwidth);

    std::size_t dim() const { return dim_; }
    std::size_t bandwidth() const { return bw_; }

    // Entry (i, j) with |i - j| <= bandwidth; zero outside the band.
    double operator()(std::size_t i, std::size_t j) const;
    void add(std::size_t i, std::size_t j, double v);
    void set(std::size_t i, std::size_t j, double v);

    std::vector<double> multiply(const std::vector<double>& x) const;
    double max_abs() const;

    // x^T A y
    double inner(const std::vector<double>& x, const std::vector<double>& y) const;

private:
    double& at(std::size_t i, std::size_t j);
    std::size_t dim_ = 0;
    std::size_t bw_ = 0;
    std::vector<double> band_;  // band_[i*(bw+1) + k] = A(i, i-k)
};

BandedSPDMatrix operator+(const BandedSPDMatrix& a, const BandedSPDMatrix& b);
BandedSPDMatrix operator*(double s, const BandedSPDMatrix& a);

class BandedCholesky {
public:
    BandedCholesky() = default;
    explicit BandedCholesky(const BandedSPDMatrix& m);

    std::size_t dim() const { return dim_; }
    std::vector<double> solve(const std::vector<double>& rhs) const;
    void solve_in_place(double* x) const;
    // Entry (i, j) of the lower factor L, with A = L L^T.
    double factor(std::size_t i, std::size_t j) const;

private:
    std::size_t dim_ = 0;
    std::size_t bw_ = 0;
    std::vector<double> l_;
};

inline BandedCholesky cholesky(const BandedSPDMatrix& m) { return BandedCholesky(m); }

// Thomas algorithm for a general tridiagonal system (lower[0] and upper[n-1] are ignored).
std::vector<double> solve_tridiagonal(const std::vector<double>& lower, const std::vector<double>& diag,
                                      const std::vector<double>& upper, std::vector<double> rhs);

}  // namespace bouss
