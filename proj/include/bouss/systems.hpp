#pragma once

#include <array>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "bouss/assembly.hpp"
#include "bouss/manufactured.hpp"
#include "bouss/mesh.hpp"

namespace bouss {

enum class SystemKind { CB, SCB, LinearizedCB, Advection, VariableAdvection, WaveSystem, ViscousSystem };

std::string to_string(SystemKind k);
SystemKind system_kind_from_string(const std::string& s);
bool is_linear(SystemKind k);
bool has_u_unknown(SystemKind k);

struct Forcing {
    SpaceTimeFn f, g;
};

Forcing forcing(const ManufacturedCase& c, SystemKind kind);
// (f, g) residuals of the exact fields at one point.
std::pair<double, double> forcing_residual(const FieldSample& s, SystemKind kind);

struct State {
    double t = 0.0;
    std::vector<double> y;  // eta coefficients followed by u coefficients
};

enum class InitRule { Interpolate, L2Project, EllipticProject };

InitRule init_rule_from_string(const std::string& s);
std::string to_string(InitRule r);

// M y' = -K y + F(t) for the linear kinds.
struct LinearOperator {
    std::size_t dim = 0;
    std::vector<Triplet> M, K;
};

// Interface consumed by the time steppers.
class OdeSystem {
public:
    virtual ~OdeSystem() = default;
    virtual std::size_t dim() const = 0;
    virtual void rhs(double t, const double* y, double* dydt) const = 0;
    virtual bool is_linear() const { return false; }
    virtual LinearOperator linear_operator() const;
    virtual std::vector<double> forcing_load(double t) const;
};

class SemidiscreteProblem : public OdeSystem {
public:
    SemidiscreteProblem(SystemKind kind, const Mesh& mesh, int eta_degree, int u_degree, ManufacturedCase mcase,
                        bool forcing_enabled = true);

    SystemKind kind() const { return kind_; }
    const ManufacturedCase& manufactured() const { return case_; }
    bool forcing_enabled() const { return forcing_enabled_; }
    const AssembledForms& eta_forms() const { return *eta_forms_; }
    const AssembledForms& u_forms() const;
    bool has_u() const { return static_cast<bool>(u_forms_); }
    std::size_t eta_dim() const { return eta_forms_->space()->dim(); }
    std::size_t u_dim() const { return u_forms_ ? u_forms_->space()->dim() : 0; }
    std::size_t dim() const override { return eta_dim() + u_dim(); }
    bool is_linear() const override { return bouss::is_linear(kind_); }

    void rhs(double t, const double* y, double* dydt) const override;
    std::vector<double> rhs(double t, const std::vector<double>& y) const;

    // Load vectors before the mass solves, i.e. M y' = loads.
    void loads(double t, const double* y, double* b_eta, double* b_u) const;

    State initial_state(InitRule eta_rule, InitRule u_rule, EllipticMode mode = EllipticMode::AForm) const;

    FemField eta_field(const std::vector<double>& y) const;
    FemField u_field(const std::vector<double>& y) const;

    LinearOperator linear_operator() const override;
    // Forcing load F(t) of the linear form M y' = -K y + F(t).
    std::vector<double> forcing_load(double t) const override;

    // ||eta_h||^2 + ||u_h||_1^2 with ||v||_1^2 = ||v||^2 + (1/3)||v'||^2.
    double energy(const std::vector<double>& y) const;
    // d/dt of energy along the semidiscrete flow.
    double energy_rate(double t, const std::vector<double>& y) const;

private:
    const BandedCholesky& u_matrix_factor() const;
    void add_forcing(double t, double* b_eta, double* b_u) const;

    struct ForcingSlot {
        bool valid = false;
        double t = 0.0;
        std::vector<double> load;
    };
    // Explicit stages revisit the same times (midpoints, step ends), so two slots suffice.
    mutable std::array<ForcingSlot, 2> forcing_cache_;
    mutable std::size_t next_slot_ = 0;
    mutable std::mutex cache_mutex_;

    SystemKind kind_;
    ManufacturedCase case_;
    bool forcing_enabled_;
    Forcing forcing_;
    std::shared_ptr<AssembledForms> eta_forms_, u_forms_;
    std::unique_ptr<SpaceTabulation> eta_tab_, u_tab_;
};

}  // namespace bouss
