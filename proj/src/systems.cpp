#include "bouss/systems.hpp"

#include <stdexcept>

namespace bouss {

std::string to_string(SystemKind k) {
    switch (k) {
        case SystemKind::CB: return "cb";
        case SystemKind::SCB: return "scb";
        case SystemKind::LinearizedCB: return "linearized-cb";
        case SystemKind::Advection: return "advection";
        case SystemKind::VariableAdvection: return "variable-advection";
        case SystemKind::WaveSystem: return "wave-system";
        case SystemKind::ViscousSystem: return "viscous-system";
    }
    return "?";
}

SystemKind system_kind_from_string(const std::string& s) {
    for (SystemKind k : {SystemKind::CB, SystemKind::SCB, SystemKind::LinearizedCB, SystemKind::Advection,
                         SystemKind::VariableAdvection, SystemKind::WaveSystem, SystemKind::ViscousSystem})
        if (to_string(k) == s) return k;
    throw std::invalid_argument("unknown system kind: " + s);
}

bool is_linear(SystemKind k) {
    return k == SystemKind::LinearizedCB || k == SystemKind::Advection || k == SystemKind::WaveSystem ||
           k == SystemKind::ViscousSystem;
}

bool has_u_unknown(SystemKind k) { return k != SystemKind::Advection && k != SystemKind::VariableAdvection; }

InitRule init_rule_from_string(const std::string& s) {
    if (s == "interpolate") return InitRule::Interpolate;
    if (s == "l2-project") return InitRule::L2Project;
    if (s == "elliptic-project") return InitRule::EllipticProject;
    throw std::invalid_argument("unknown init rule: " + s);
}

std::string to_string(InitRule r) {
    switch (r) {
        case InitRule::Interpolate: return "interpolate";
        case InitRule::L2Project: return "l2-project";
        case InitRule::EllipticProject: return "elliptic-project";
    }
    return "?";
}

LinearOperator OdeSystem::linear_operator() const {
    throw std::invalid_argument("linear_operator: system is not linear");
}

std::vector<double> OdeSystem::forcing_load(double) const {
    throw std::invalid_argument("forcing_load: system is not linear");
}

std::pair<double, double> forcing_residual(const FieldSample& s, SystemKind kind) {
    switch (kind) {
        case SystemKind::CB:
            return {s.eta_t + s.u_x + s.eta_x * s.u + s.eta * s.u_x,
                    s.u_t + s.eta_x + s.u * s.u_x - s.u_xxt / 3.0};
        case SystemKind::SCB:
            return {s.eta_t + s.u_x + 0.5 * (s.eta_x * s.u + s.eta * s.u_x),
                    s.u_t + s.eta_x + 1.5 * s.u * s.u_x + 0.5 * s.eta * s.eta_x - s.u_xxt / 3.0};
        case SystemKind::LinearizedCB: return {s.eta_t + s.u_x, s.u_t + s.eta_x - s.u_xxt / 3.0};
        case SystemKind::Advection: return {s.eta_t + s.eta_x, 0.0};
        case SystemKind::VariableAdvection: return {s.eta_t + s.u_x * s.eta + s.u * s.eta_x, 0.0};
        case SystemKind::WaveSystem: return {s.eta_t + s.u_x, s.u_t + s.eta_x};
        case SystemKind::ViscousSystem: return {s.eta_t + s.u_x, s.u_t + s.eta_x - s.u_xx};
    }
    throw std::logic_error("bad system kind");
}

Forcing forcing(const ManufacturedCase& c, SystemKind kind) {
    Forcing r;
    r.f = [c, kind](double x, double t) { return forcing_residual(c.at(x, t), kind).first; };
    r.g = [c, kind](double x, double t) { return forcing_residual(c.at(x, t), kind).second; };
    return r;
}

namespace {

Boundary eta_boundary(SystemKind k) {
    return (k == SystemKind::Advection || k == SystemKind::WaveSystem) ? Boundary::ZeroLeft : Boundary::Free;
}

Boundary u_boundary(SystemKind k) { return k == SystemKind::WaveSystem ? Boundary::ZeroRight : Boundary::ZeroBoth; }

bool u_uses_aform(SystemKind k) {
    return k == SystemKind::CB || k == SystemKind::SCB || k == SystemKind::LinearizedCB;
}

}  // namespace

SemidiscreteProblem::SemidiscreteProblem(SystemKind kind, const Mesh& mesh, int eta_degree, int u_degree,
                                         ManufacturedCase mcase, bool forcing_enabled)
    : kind_(kind), case_(std::move(mcase)), forcing_enabled_(forcing_enabled), forcing_(forcing(case_, kind)) {
    eta_forms_ = std::make_shared<AssembledForms>(build_space(mesh, {eta_degree, eta_boundary(kind)}));
    eta_tab_ = std::make_unique<SpaceTabulation>(*eta_forms_->space(), assembly_rule());
    if (has_u_unknown(kind)) {
        u_forms_ = std::make_shared<AssembledForms>(build_space(mesh, {u_degree, u_boundary(kind)}));
        u_tab_ = std::make_unique<SpaceTabulation>(*u_forms_->space(), assembly_rule());
    }
}

const AssembledForms& SemidiscreteProblem::u_forms() const {
    if (!u_forms_) throw std::logic_error("problem has no u unknown");
    return *u_forms_;
}

const BandedCholesky& SemidiscreteProblem::u_matrix_factor() const {
    return u_uses_aform(kind_) ? u_forms_->aform_factor() : u_forms_->mass_factor();
}

void SemidiscreteProblem::loads(double t, const double* y, double* be, double* bu) const {
    const std::size_t ne = eta_dim(), nu = u_dim();
    std::fill(be, be + ne, 0.0);
    if (bu) std::fill(bu, bu + nu, 0.0);
    const double* eta = y;
    const double* u = y + ne;
    const SpaceTabulation& te = *eta_tab_;
    const int pe = te.local_size();
    const int pu = u_tab_ ? u_tab_->local_size() : 0;
    for (std::size_t e = 0; e < te.num_elements(); ++e) {
        for (std::size_t q = 0; q < te.points_per_element(); ++q) {
            const double x = te.x(e, q), w = te.weight(e, q);
            double H, Hx, U = 0.0, Ux = 0.0;
            te.eval(eta, e, q, H, Hx);
            if (u_tab_) u_tab_->eval(u, e, q, U, Ux);
            double re = 0.0, ru = 0.0, rud = 0.0;
            switch (kind_) {
                case SystemKind::CB:
                    re = Ux + Hx * U + H * Ux;
                    ru = Hx + U * Ux;
                    break;
                case SystemKind::SCB:
                    re = Ux + 0.5 * (Hx * U + H * Ux);
                    ru = Hx + 1.5 * U * Ux + 0.5 * H * Hx;
                    break;
                case SystemKind::LinearizedCB:
                case SystemKind::WaveSystem:
                    re = Ux;
                    ru = Hx;
                    break;
                case SystemKind::ViscousSystem:
                    re = Ux;
                    ru = Hx;
                    rud = Ux;
                    break;
                case SystemKind::Advection:
                    re = Hx;
                    break;
                case SystemKind::VariableAdvection:
                    re = case_.u_x(x, t) * H + case_.u(x, t) * Hx;
                    break;
            }
            for (int a = 0; a < pe; ++a) {
                const long i = te.index(e, a);
                if (i >= 0) be[i] -= w * re * te.value(e, q, a);
            }
            for (int a = 0; a < pu; ++a) {
                const long i = u_tab_->index(e, a);
                if (i >= 0) bu[i] -= w * (ru * u_tab_->value(e, q, a) + rud * u_tab_->deriv(e, q, a));
            }
        }
    }
    if (forcing_enabled_) {
        add_forcing(t, be, bu);
    }
}

void SemidiscreteProblem::add_forcing(double t, double* be, double* bu) const {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    const std::size_t ne = eta_dim(), nu = u_dim();
    const auto add = [&](const std::vector<double>& F) {
        for (std::size_t i = 0; i < ne; ++i) be[i] += F[i];
        if (bu)
            for (std::size_t i = 0; i < nu; ++i) bu[i] += F[ne + i];
    };
    for (const auto& slot : forcing_cache_)
        if (slot.valid && slot.t == t) return add(slot.load);
    ForcingSlot& slot = forcing_cache_[next_slot_];
    next_slot_ = (next_slot_ + 1) % forcing_cache_.size();
    slot.t = t;
    slot.valid = true;
    slot.load.assign(dim(), 0.0);
    // Both spaces live on the same mesh and rule, so one sample serves both loads.
    const SpaceTabulation& te = *eta_tab_;
    double* Fe = slot.load.data();
    double* Fu = Fe + ne;
    for (std::size_t e = 0; e < te.num_elements(); ++e)
        for (std::size_t q = 0; q < te.points_per_element(); ++q) {
            const auto [f, g] = forcing_residual(case_.at(te.x(e, q), t), kind_);
            const double w = te.weight(e, q);
            for (int a = 0; a < te.local_size(); ++a) {
                const long i = te.index(e, a);
                if (i >= 0) Fe[i] += w * f * te.value(e, q, a);
            }
            if (!u_tab_) continue;
            for (int a = 0; a < u_tab_->local_size(); ++a) {
                const long i = u_tab_->index(e, a);
                if (i >= 0) Fu[i] += w * g * u_tab_->value(e, q, a);
            }
        }
    add(slot.load);
}

void SemidiscreteProblem::rhs(double t, const double* y, double* dydt) const {
    const std::size_t ne = eta_dim();
    loads(t, y, dydt, u_tab_ ? dydt + ne : nullptr);
    eta_forms_->mass_factor().solve_in_place(dydt);
    if (u_tab_) u_matrix_factor().solve_in_place(dydt + ne);
}

std::vector<double> SemidiscreteProblem::rhs(double t, const std::vector<double>& y) const {
    if (y.size() != dim()) throw std::invalid_argument("rhs: state dimension mismatch");
    std::vector<double> d(dim());
    rhs(t, y.data(), d.data());
    return d;
}

namespace {

FemField init_field(const AssembledForms& forms, InitRule rule, EllipticMode mode, const SpaceTimeFn& v,
                    const SpaceTimeFn& vx) {
    const ScalarFn f = [v](double x) { return v(x, 0.0); };
    const ScalarFn df = [vx](double x) { return vx(x, 0.0); };
    switch (rule) {
        case InitRule::Interpolate: return interpolate(forms.space(), f, df);
        case InitRule::L2Project: return l2_project(forms, f);
        case InitRule::EllipticProject: return elliptic_project(forms, f, df, mode);
    }
    throw std::logic_error("bad init rule");
}

}  // namespace

State SemidiscreteProblem::initial_state(InitRule eta_rule, InitRule u_rule, EllipticMode mode) const {
    State s;
    s.t = 0.0;
    s.y = init_field(*eta_forms_, eta_rule, mode, case_.eta, case_.eta_x).coefficients();
    if (u_forms_) {
        const auto uc = init_field(*u_forms_, u_rule, mode, case_.u, case_.u_x).coefficients();
        s.y.insert(s.y.end(), uc.begin(), uc.end());
    }
    return s;
}

FemField SemidiscreteProblem::eta_field(const std::vector<double>& y) const {
    return FemField(eta_forms_->space(), std::vector<double>(y.begin(), y.begin() + static_cast<long>(eta_dim())));
}

FemField SemidiscreteProblem::u_field(const std::vector<double>& y) const {
    if (!u_forms_) throw std::logic_error("problem has no u unknown");
    return FemField(u_forms_->space(), std::vector<double>(y.begin() + static_cast<long>(eta_dim()), y.end()));
}

LinearOperator SemidiscreteProblem::linear_operator() const {
    if (!bouss::is_linear(kind_)) throw std::invalid_argument("linear_operator: nonlinear system kind " + to_string(kind_));
    LinearOperator op;
    op.dim = dim();
    const std::size_t ne = eta_dim();
    auto push_banded = [](std::vector<Triplet>& out, const BandedSPDMatrix& m, std::size_t off) {
        for (std::size_t i = 0; i < m.dim(); ++i)
            for (std::size_t j = (i > m.bandwidth() ? i - m.bandwidth() : 0);
                 j <= std::min(m.dim() - 1, i + m.bandwidth()); ++j)
                out.push_back({i + off, j + off, m(i, j)});
    };
    auto push = [](std::vector<Triplet>& out, const std::vector<Triplet>& blk, std::size_t ro, std::size_t co) {
        for (const auto& t : blk) out.push_back({t.row + ro, t.col + co, t.value});
    };
    const SplineSpace& se = *eta_forms_->space();
    push_banded(op.M, eta_forms_->mass(), 0);
    if (kind_ == SystemKind::Advection) {
        push(op.K, assemble_mixed(se, 1, se, 0), 0, 0);
        return op;
    }
    const SplineSpace& su = *u_forms_->space();
    push_banded(op.M, u_uses_aform(kind_) ? u_forms_->aform() : u_forms_->mass(), ne);
    push(op.K, assemble_mixed(su, 1, se, 0), 0, ne);
    push(op.K, assemble_mixed(se, 1, su, 0), ne, 0);
    if (kind_ == SystemKind::ViscousSystem) push_banded(op.K, u_forms_->stiffness(), ne);
    return op;
}

std::vector<double> SemidiscreteProblem::forcing_load(double t) const {
    std::vector<double> F(dim(), 0.0);
    if (!forcing_enabled_) return F;
    const auto fe = assemble_load(*eta_forms_->space(), [&](double x) { return forcing_.f(x, t); });
    std::copy(fe.begin(), fe.end(), F.begin());
    if (u_forms_) {
        const auto fu = assemble_load(*u_forms_->space(), [&](double x) { return forcing_.g(x, t); });
        std::copy(fu.begin(), fu.end(), F.begin() + static_cast<long>(eta_dim()));
    }
    return F;
}

double SemidiscreteProblem::energy(const std::vector<double>& y) const {
    const std::size_t ne = eta_dim();
    const std::vector<double> eta(y.begin(), y.begin() + static_cast<long>(ne));
    double E = eta_forms_->mass().inner(eta, eta);
    if (u_forms_) {
        const std::vector<double> u(y.begin() + static_cast<long>(ne), y.end());
        E += u_forms_->aform().inner(u, u);
    }
    return E;
}

double SemidiscreteProblem::energy_rate(double t, const std::vector<double>& y) const {
    const std::size_t ne = eta_dim();
    std::vector<double> be(ne), bu(u_dim());
    loads(t, y.data(), be.data(), u_forms_ ? bu.data() : nullptr);
    // With G eta' = b_eta and A u' = b_u, 2(eta, eta') + 2 a(u, u') = 2 eta.b_eta + 2 u.b_u.
    double s = 0.0;
    for (std::size_t i = 0; i < ne; ++i) s += y[i] * be[i];
    for (std::size_t i = 0; i < bu.size(); ++i) s += y[ne + i] * bu[i];
    return 2.0 * s;
}

}  // namespace bouss
