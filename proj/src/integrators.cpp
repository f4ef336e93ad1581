#include "bouss/integrators.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <set>

namespace bouss {

std::string to_string(Scheme s) {
    switch (s) {
        case Scheme::Euler: return "euler";
        case Scheme::ImprovedEuler: return "improved-euler";
        case Scheme::RK4: return "rk4";
        case Scheme::CrankNicolson: return "crank-nicolson";
    }
    return "?";
}

Scheme scheme_from_string(const std::string& s) {
    for (Scheme k : {Scheme::Euler, Scheme::ImprovedEuler, Scheme::RK4, Scheme::CrankNicolson})
        if (to_string(k) == s) return k;
    if (s == "cn") return Scheme::CrankNicolson;
    throw std::invalid_argument("unknown scheme: " + s);
}

Divergence::Divergence(double t) : std::runtime_error("divergence at t=" + std::to_string(t)), time_(t) {}

struct Stepper::CnCache {
    using SpMat = Eigen::SparseMatrix<double>;
    SpMat M, K, B;
    Eigen::SparseLU<SpMat> lu;
    double k = -1.0;

    explicit CnCache(const OdeSystem& sys) {
        const LinearOperator op = sys.linear_operator();
        const auto n = static_cast<Eigen::Index>(op.dim);
        auto build = [n](const std::vector<Triplet>& ts) {
            std::vector<Eigen::Triplet<double>> et;
            et.reserve(ts.size());
            for (const auto& t : ts)
                et.emplace_back(static_cast<Eigen::Index>(t.row), static_cast<Eigen::Index>(t.col), t.value);
            SpMat m(n, n);
            m.setFromTriplets(et.begin(), et.end());
            return m;
        };
        M = build(op.M);
        K = build(op.K);
    }

    void prepare(double step) {
        if (step == k) return;
        SpMat A = M + (0.5 * step) * K;
        A.makeCompressed();
        lu.compute(A);
        if (lu.info() != Eigen::Success) throw std::runtime_error("Crank-Nicolson factorization failed");
        B = M - (0.5 * step) * K;
        k = step;
    }
};

Stepper::Stepper(Scheme scheme, const OdeSystem& system) : scheme_(scheme), sys_(system) {
    const std::size_t n = sys_.dim();
    k1_.resize(n);
    k2_.resize(n);
    k3_.resize(n);
    k4_.resize(n);
    tmp_.resize(n);
    if (scheme_ == Scheme::CrankNicolson) {
        if (!sys_.is_linear()) throw UnsupportedScheme("crank-nicolson requires a linear system");
        cn_ = std::make_unique<CnCache>(sys_);
    }
}

Stepper::~Stepper() = default;

void Stepper::advance(State& s, double k) {
    if (!(k > 0.0)) throw std::invalid_argument("time step must be positive");
    const std::size_t n = sys_.dim();
    if (s.y.size() != n) throw std::invalid_argument("state dimension mismatch");
    double* y = s.y.data();
    const double t = s.t;
    switch (scheme_) {
        case Scheme::Euler:
            sys_.rhs(t, y, k1_.data());
            for (std::size_t i = 0; i < n; ++i) y[i] += k * k1_[i];
            break;
        case Scheme::ImprovedEuler:
            sys_.rhs(t, y, k1_.data());
            for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.5 * k * k1_[i];
            sys_.rhs(t + 0.5 * k, tmp_.data(), k2_.data());
            for (std::size_t i = 0; i < n; ++i) y[i] += k * k2_[i];
            break;
        case Scheme::RK4:
            sys_.rhs(t, y, k1_.data());
            for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.5 * k * k1_[i];
            sys_.rhs(t + 0.5 * k, tmp_.data(), k2_.data());
            for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.5 * k * k2_[i];
            sys_.rhs(t + 0.5 * k, tmp_.data(), k3_.data());
            for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + k * k3_[i];
            sys_.rhs(t + k, tmp_.data(), k4_.data());
            for (std::size_t i = 0; i < n; ++i)
                y[i] += k * (k1_[i] / 6.0 + k2_[i] / 3.0 + k3_[i] / 3.0 + k4_[i] / 6.0);
            break;
        case Scheme::CrankNicolson: {
            cn_->prepare(k);
            const auto n_e = static_cast<Eigen::Index>(n);
            Eigen::Map<Eigen::VectorXd> yv(y, n_e);
            const std::vector<double> F = sys_.forcing_load(t + 0.5 * k);
            Eigen::VectorXd rhs = cn_->B * yv + k * Eigen::Map<const Eigen::VectorXd>(F.data(), n_e);
            yv = cn_->lu.solve(rhs);
            break;
        }
    }
    s.t = t + k;
    for (std::size_t i = 0; i < n; ++i)
        if (!(std::abs(y[i]) <= kDivergenceThreshold)) throw Divergence(s.t);
}

State step(const StepperSpec& spec, const OdeSystem& system, const State& state) {
    Stepper st(spec.scheme, system);
    State out = state;
    st.advance(out, spec.k);
    return out;
}

IntegrationResult integrate(const StepperSpec& spec, const OdeSystem& system, State initial, double T,
                            const std::vector<Observer>& observers) {
    if (!(T > 0.0)) throw std::invalid_argument("integrate: horizon must be positive");
    if (!(spec.k > 0.0)) throw std::invalid_argument("integrate: time step must be positive");
    std::set<double> stops;
    for (const auto& o : observers)
        for (double tt : o.times)
            if (tt > initial.t && tt <= T) stops.insert(tt);
    stops.insert(T);
    const double eps = 1e-12 * std::max(1.0, T);

    Stepper stepper(spec.scheme, system);
    IntegrationResult r;
    r.state = std::move(initial);
    auto notify = [&](bool at_listed, double listed) {
        for (const auto& o : observers) {
            if (!o.callback) continue;
            bool hit = o.every_step;
            if (!hit && at_listed)
                hit = std::any_of(o.times.begin(), o.times.end(), [&](double tt) { return std::abs(tt - listed) <= eps; });
            if (hit) o.callback(r.state);
        }
    };
    for (auto it = stops.begin(); it != stops.end(); ++it) {
        const double target = *it;
        while (r.state.t < target - eps) {
            double k = spec.k;
            bool land = false;
            if (r.state.t + k >= target - eps) {
                k = target - r.state.t;
                land = true;
            }
            try {
                stepper.advance(r.state, k);
            } catch (const Divergence& d) {
                r.diverged = true;
                r.divergence_time = d.time();
                return r;
            }
            if (land) r.state.t = target;
            ++r.steps;
            if (!land) notify(false, 0.0);
        }
        notify(true, target);
    }
    return r;
}

}  // namespace bouss
