#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "bouss/banded.hpp"
#include "bouss/quadrature.hpp"
#include "bouss/spline.hpp"

namespace bouss {

enum class Form { Mass, Stiffness, AForm };

enum class EllipticMode { AForm, Stiffness };

class SingularForm : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline constexpr int kAssemblyPoints = 5;

const QuadratureRule& assembly_rule();

BandedSPDMatrix assemble_matrix(const SplineSpace& space, Form form);

// b_i = (f, phi_i)
std::vector<double> assemble_load(const SplineSpace& space, const ScalarFn& f);
// b_i = (f, phi_i')
std::vector<double> assemble_load_derivative(const SplineSpace& space, const ScalarFn& f);

struct Triplet {
    std::size_t row, col;
    double value;
};

// Entries (c * d^a psi_j, d^b phi_i) for trial functions psi_j and test functions phi_i.
std::vector<Triplet> assemble_mixed(const SplineSpace& trial, int trial_deriv, const SplineSpace& test,
                                    int test_deriv, const ScalarFn& coefficient = nullptr);

// Matrices and factorizations of one space, built once and shared read-only.
class AssembledForms {
public:
    explicit AssembledForms(SpacePtr space);

    const SpacePtr& space() const { return space_; }
    const BandedSPDMatrix& mass() const { return mass_; }
    const BandedSPDMatrix& aform() const { return aform_; }
    const BandedSPDMatrix& stiffness() const;
    const BandedCholesky& mass_factor() const { return mass_chol_; }
    const BandedCholesky& aform_factor() const { return aform_chol_; }
    const BandedCholesky& stiffness_factor() const;
    bool has_stiffness() const { return has_stiffness_; }

private:
    SpacePtr space_;
    BandedSPDMatrix mass_, aform_, stiffness_;
    BandedCholesky mass_chol_, aform_chol_, stiffness_chol_;
    bool has_stiffness_ = false;
};

FemField l2_project(const SpacePtr& space, const ScalarFn& f);
FemField l2_project(const AssembledForms& forms, const ScalarFn& f);

FemField elliptic_project(const SpacePtr& space, const ScalarFn& f, const ScalarFn& df, EllipticMode mode);
FemField elliptic_project(const AssembledForms& forms, const ScalarFn& f, const ScalarFn& df, EllipticMode mode);

// Field w in the space with a(w, chi_i) = load_i for every basis function.
FemField apply_A(const AssembledForms& forms, const std::vector<double>& load);

}  // namespace bouss
