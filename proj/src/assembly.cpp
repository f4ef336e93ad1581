#include "bouss/assembly.hpp"

#include <cmath>
#include <map>

namespace bouss {

const QuadratureRule& assembly_rule() {
    static const QuadratureRule rule = gauss_legendre(kAssemblyPoints);
    return rule;
}

BandedSPDMatrix assemble_matrix(const SplineSpace& space, Form form) {
    if (form == Form::Stiffness && space.boundary() == Boundary::Free)
        throw SingularForm("stiffness form is singular on a space without boundary constraint");
    const double cm = form == Form::Stiffness ? 0.0 : 1.0;
    const double cs = form == Form::Mass ? 0.0 : (form == Form::Stiffness ? 1.0 : 1.0 / 3.0);
    const SpaceTabulation tab(space, assembly_rule());
    const int p1 = tab.local_size();
    BandedSPDMatrix m(space.dim(), static_cast<std::size_t>(space.degree()));
    for (std::size_t e = 0; e < tab.num_elements(); ++e) {
        for (int a = 0; a < p1; ++a) {
            const long i = tab.index(e, a);
            if (i < 0) continue;
            for (int b = 0; b <= a; ++b) {
                const long j = tab.index(e, b);
                if (j < 0) continue;
                double s = 0.0;
                for (std::size_t q = 0; q < tab.points_per_element(); ++q)
                    s += tab.weight(e, q) * (cm * tab.value(e, q, a) * tab.value(e, q, b) +
                                             cs * tab.deriv(e, q, a) * tab.deriv(e, q, b));
                m.add(static_cast<std::size_t>(i), static_cast<std::size_t>(j), s);
            }
        }
    }
    return m;
}

namespace {

std::vector<double> load_impl(const SplineSpace& space, const ScalarFn& f, bool derivative) {
    const SpaceTabulation tab(space, assembly_rule());
    std::vector<double> b(space.dim(), 0.0);
    for (std::size_t e = 0; e < tab.num_elements(); ++e) {
        for (std::size_t q = 0; q < tab.points_per_element(); ++q) {
            const double fw = f(tab.x(e, q)) * tab.weight(e, q);
            for (int a = 0; a < tab.local_size(); ++a) {
                const long i = tab.index(e, a);
                if (i >= 0) b[static_cast<std::size_t>(i)] += fw * (derivative ? tab.deriv(e, q, a) : tab.value(e, q, a));
            }
        }
    }
    return b;
}

}  // namespace

std::vector<double> assemble_load(const SplineSpace& space, const ScalarFn& f) { return load_impl(space, f, false); }

std::vector<double> assemble_load_derivative(const SplineSpace& space, const ScalarFn& f) {
    return load_impl(space, f, true);
}

std::vector<Triplet> assemble_mixed(const SplineSpace& trial, int trial_deriv, const SplineSpace& test,
                                    int test_deriv, const ScalarFn& coefficient) {
    if (trial.mesh().breakpoints() != test.mesh().breakpoints())
        throw std::invalid_argument("assemble_mixed: spaces live on different meshes");
    const SpaceTabulation tt(trial, assembly_rule());
    const SpaceTabulation ts(test, assembly_rule());
    std::map<std::pair<std::size_t, std::size_t>, double> acc;
    for (std::size_t e = 0; e < tt.num_elements(); ++e) {
        for (std::size_t q = 0; q < tt.points_per_element(); ++q) {
            const double c = coefficient ? coefficient(tt.x(e, q)) : 1.0;
            const double w = tt.weight(e, q) * c;
            for (int a = 0; a < ts.local_size(); ++a) {
                const long i = ts.index(e, a);
                if (i < 0) continue;
                const double vi = test_deriv ? ts.deriv(e, q, a) : ts.value(e, q, a);
                for (int b = 0; b < tt.local_size(); ++b) {
                    const long j = tt.index(e, b);
                    if (j < 0) continue;
                    const double vj = trial_deriv ? tt.deriv(e, q, b) : tt.value(e, q, b);
                    acc[{static_cast<std::size_t>(i), static_cast<std::size_t>(j)}] += w * vi * vj;
                }
            }
        }
    }
    std::vector<Triplet> out;
    out.reserve(acc.size());
    for (const auto& [key, v] : acc) out.push_back({key.first, key.second, v});
    return out;
}

AssembledForms::AssembledForms(SpacePtr space) : space_(std::move(space)) {
    mass_ = assemble_matrix(*space_, Form::Mass);
    aform_ = assemble_matrix(*space_, Form::AForm);
    mass_chol_ = BandedCholesky(mass_);
    aform_chol_ = BandedCholesky(aform_);
    if (space_->boundary() != Boundary::Free) {
        stiffness_ = assemble_matrix(*space_, Form::Stiffness);
        stiffness_chol_ = BandedCholesky(stiffness_);
        has_stiffness_ = true;
    }
}

const BandedSPDMatrix& AssembledForms::stiffness() const {
    if (!has_stiffness_) throw SingularForm("stiffness form unavailable on a free space");
    return stiffness_;
}

const BandedCholesky& AssembledForms::stiffness_factor() const {
    if (!has_stiffness_) throw SingularForm("stiffness form unavailable on a free space");
    return stiffness_chol_;
}

FemField l2_project(const AssembledForms& forms, const ScalarFn& f) {
    return FemField(forms.space(), forms.mass_factor().solve(assemble_load(*forms.space(), f)));
}

FemField l2_project(const SpacePtr& space, const ScalarFn& f) { return l2_project(AssembledForms(space), f); }

FemField elliptic_project(const AssembledForms& forms, const ScalarFn& f, const ScalarFn& df, EllipticMode mode) {
    const SplineSpace& s = *forms.space();
    if (s.boundary() != Boundary::ZeroBoth)
        throw std::invalid_argument("elliptic_project: requires a zero-boundary space");
    if (std::abs(f(0.0)) > 1e-12 || std::abs(f(1.0)) > 1e-12)
        throw std::invalid_argument("elliptic_project: function does not vanish at the endpoints");
    std::vector<double> b = assemble_load_derivative(s, df);
    if (mode == EllipticMode::Stiffness) return FemField(forms.space(), forms.stiffness_factor().solve(b));
    const std::vector<double> bm = assemble_load(s, f);
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = bm[i] + b[i] / 3.0;
    return FemField(forms.space(), forms.aform_factor().solve(b));
}

FemField elliptic_project(const SpacePtr& space, const ScalarFn& f, const ScalarFn& df, EllipticMode mode) {
    return elliptic_project(AssembledForms(space), f, df, mode);
}

FemField apply_A(const AssembledForms& forms, const std::vector<double>& load) {
    if (load.size() != forms.space()->dim()) throw std::invalid_argument("apply_A: dimension mismatch");
    return FemField(forms.space(), forms.aform_factor().solve(load));
}

}  // namespace bouss
