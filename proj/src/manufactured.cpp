#include "bouss/manufactured.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bouss {

namespace {

constexpr double pi = std::numbers::pi;

struct Profile {
    std::function<double(double)> f, d1, d2;
};

// eta = exp(a t) q(x)
void set_eta_exp_time(ManufacturedCase& c, double a, Profile q) {
    c.eta = [=](double x, double t) { return std::exp(a * t) * q.f(x); };
    c.eta_t = [=](double x, double t) { return a * std::exp(a * t) * q.f(x); };
    c.eta_x = [=](double x, double t) { return std::exp(a * t) * q.d1(x); };
}

// u = exp(c x t) p(x); needs p, p', p'' (p''' is not required since only u_xxt is used)
void set_u_exp_xt(ManufacturedCase& m, double c, Profile p) {
    m.u = [=](double x, double t) { return std::exp(c * x * t) * p.f(x); };
    m.u_t = [=](double x, double t) { return c * x * std::exp(c * x * t) * p.f(x); };
    m.u_x = [=](double x, double t) { return std::exp(c * x * t) * (p.d1(x) + c * t * p.f(x)); };
    m.u_xx = [=](double x, double t) {
        return std::exp(c * x * t) * (p.d2(x) + 2.0 * c * t * p.d1(x) + c * c * t * t * p.f(x));
    };
    m.u_xxt = [=](double x, double t) {
        const double inner = p.d2(x) + 2.0 * c * t * p.d1(x) + c * c * t * t * p.f(x);
        return std::exp(c * x * t) * (c * x * inner + 2.0 * c * p.d1(x) + 2.0 * c * c * t * p.f(x));
    };
}

// Fused sample for eta = exp(a t) q(x), u = exp(c x t) p(x).
void set_exp_sample(ManufacturedCase& m, double a, Profile q, double c, Profile p) {
    m.sample = [=](double x, double t) {
        FieldSample s;
        const double ea = std::exp(a * t), qf = q.f(x);
        s.eta = ea * qf;
        s.eta_t = a * s.eta;
        s.eta_x = ea * q.d1(x);
        const double ec = std::exp(c * x * t), pf = p.f(x), p1 = p.d1(x), p2 = p.d2(x);
        const double inner = p2 + 2.0 * c * t * p1 + c * c * t * t * pf;
        s.u = ec * pf;
        s.u_t = c * x * s.u;
        s.u_x = ec * (p1 + c * t * pf);
        s.u_xx = ec * inner;
        s.u_xxt = ec * (c * x * inner + 2.0 * c * p1 + 2.0 * c * c * t * pf);
        return s;
    };
}

void set_u_zero(ManufacturedCase& m) {
    const SpaceTimeFn zero = [](double, double) { return 0.0; };
    m.u = m.u_t = m.u_x = m.u_xx = m.u_xxt = zero;
}

const Profile cos_plus_linear{[](double x) { return std::cos(pi * x) + x + 2.0; },
                              [](double x) { return -pi * std::sin(pi * x) + 1.0; },
                              [](double x) { return -pi * pi * std::cos(pi * x); }};

const Profile cos_plus_quadratic{[](double x) { return std::cos(pi * x) + x * x + 2.0; },
                                 [](double x) { return -pi * std::sin(pi * x) + 2.0 * x; },
                                 [](double x) { return -pi * pi * std::cos(pi * x) + 2.0; }};

const Profile sin_plus_cubic{[](double x) { return std::sin(pi * x) + x * x * x - x * x; },
                             [](double x) { return pi * std::cos(pi * x) + 3.0 * x * x - 2.0 * x; },
                             [](double x) { return -pi * pi * std::sin(pi * x) + 6.0 * x - 2.0; }};

const Profile x_sin{[](double x) { return x * std::sin(pi * x); },
                    [](double x) { return std::sin(pi * x) + pi * x * std::cos(pi * x); },
                    [](double x) { return 2.0 * pi * std::cos(pi * x) - pi * pi * x * std::sin(pi * x); }};

ManufacturedCase gaussian_travel() {
    // eta = E(s), s = x - 0.5 - 0.2 t; u = 6 R(s) x (x - 1), R = sqrt(1 + E) - 1.
    struct Derivs {
        double E, R, R1, R2, R3, E1;
    };
    auto derivs = [](double s) {
        const double E = 0.5 * std::exp(-144.0 * s * s);
        const double E1 = -288.0 * s * E;
        const double E2 = 288.0 * (288.0 * s * s - 1.0) * E;
        const double E3 = 288.0 * 288.0 * E * s * (3.0 - 288.0 * s * s);
        const double S = std::sqrt(1.0 + E);
        Derivs d;
        d.E = E;
        d.E1 = E1;
        d.R = S - 1.0;
        d.R1 = E1 / (2.0 * S);
        d.R2 = E2 / (2.0 * S) - E1 * E1 / (4.0 * S * S * S);
        d.R3 = E3 / (2.0 * S) - 3.0 * E1 * E2 / (4.0 * S * S * S) + 3.0 * E1 * E1 * E1 / (8.0 * std::pow(S, 5));
        return d;
    };
    auto s_of = [](double x, double t) { return x - 0.5 - 0.2 * t; };
    ManufacturedCase c;
    c.name = "gaussian-travel";
    c.eta = [=](double x, double t) { return derivs(s_of(x, t)).E; };
    c.eta_x = [=](double x, double t) { return derivs(s_of(x, t)).E1; };
    c.eta_t = [=](double x, double t) { return -0.2 * derivs(s_of(x, t)).E1; };
    c.u = [=](double x, double t) { return 6.0 * derivs(s_of(x, t)).R * x * (x - 1.0); };
    c.u_t = [=](double x, double t) { return 6.0 * (-0.2) * derivs(s_of(x, t)).R1 * x * (x - 1.0); };
    c.u_x = [=](double x, double t) {
        const Derivs d = derivs(s_of(x, t));
        return 6.0 * (d.R1 * x * (x - 1.0) + d.R * (2.0 * x - 1.0));
    };
    c.u_xx = [=](double x, double t) {
        const Derivs d = derivs(s_of(x, t));
        return 6.0 * (d.R2 * x * (x - 1.0) + 2.0 * d.R1 * (2.0 * x - 1.0) + 2.0 * d.R);
    };
    c.u_xxt = [=](double x, double t) {
        const Derivs d = derivs(s_of(x, t));
        return 6.0 * (-0.2) * (d.R3 * x * (x - 1.0) + 2.0 * d.R2 * (2.0 * x - 1.0) + 2.0 * d.R1);
    };
    c.sample = [=](double x, double t) {
        const Derivs d = derivs(s_of(x, t));
        const double b = x * (x - 1.0), b1 = 2.0 * x - 1.0;
        FieldSample r;
        r.eta = d.E;
        r.eta_x = d.E1;
        r.eta_t = -0.2 * d.E1;
        r.u = 6.0 * d.R * b;
        r.u_t = -1.2 * d.R1 * b;
        r.u_x = 6.0 * (d.R1 * b + d.R * b1);
        r.u_xx = 6.0 * (d.R2 * b + 2.0 * d.R1 * b1 + 2.0 * d.R);
        r.u_xxt = -1.2 * (d.R3 * b + 2.0 * d.R2 * b1 + 2.0 * d.R1);
        return r;
    };
    return c;
}

// eta(x, t) = g(x - t) for x > t and 0 otherwise, with g(y) = y^k e^y.
ManufacturedCase shifted_power_exp(int k) {
    auto g = [k](double y) { return std::pow(y, k) * std::exp(y); };
    auto dg = [k](double y) { return (k * std::pow(y, k - 1) + std::pow(y, k)) * std::exp(y); };
    ManufacturedCase c;
    c.name = "adv-x" + std::to_string(k) + "exp";
    c.eta = [=](double x, double t) { return x > t ? g(x - t) : 0.0; };
    c.eta_x = [=](double x, double t) { return x > t ? dg(x - t) : 0.0; };
    c.eta_t = [=](double x, double t) { return x > t ? -dg(x - t) : 0.0; };
    set_u_zero(c);
    return c;
}

}  // namespace

FieldSample ManufacturedCase::at(double x, double t) const {
    if (sample) return sample(x, t);
    FieldSample s;
    s.eta = eta(x, t);
    s.eta_t = eta_t(x, t);
    s.eta_x = eta_x(x, t);
    s.u = u(x, t);
    s.u_t = u_t(x, t);
    s.u_x = u_x(x, t);
    s.u_xx = u_xx(x, t);
    s.u_xxt = u_xxt(x, t);
    return s;
}

std::vector<std::string> manufactured_case_names() {
    return {"cb-cos",    "cb-cubic",  "cb-quad",   "gaussian-travel", "wave-6.15",
            "adv-x1exp", "adv-x2exp", "adv-x3exp", "adv-x4exp",       "var-adv"};
}

ManufacturedCase manufactured_case(const std::string& name) {
    ManufacturedCase c;
    c.name = name;
    if (name == "cb-cos") {
        set_eta_exp_time(c, 2.0, cos_plus_linear);
        set_u_exp_xt(c, -1.0, x_sin);
        set_exp_sample(c, 2.0, cos_plus_linear, -1.0, x_sin);
    } else if (name == "cb-cubic") {
        set_eta_exp_time(c, 2.0, cos_plus_linear);
        set_u_exp_xt(c, 1.0, sin_plus_cubic);
        set_exp_sample(c, 2.0, cos_plus_linear, 1.0, sin_plus_cubic);
    } else if (name == "cb-quad") {
        set_eta_exp_time(c, 2.0, cos_plus_quadratic);
        set_u_exp_xt(c, 1.0, sin_plus_cubic);
        set_exp_sample(c, 2.0, cos_plus_quadratic, 1.0, sin_plus_cubic);
    } else if (name == "gaussian-travel") {
        return gaussian_travel();
    } else if (name == "wave-6.15") {
        // eta = x e^{x(t+1)} = e^{xt} (x e^x), u = (x - 1) e^{xt}
        set_u_exp_xt(c, 1.0, Profile{[](double x) { return x * std::exp(x); },
                                     [](double x) { return (1.0 + x) * std::exp(x); },
                                     [](double x) { return (2.0 + x) * std::exp(x); }});
        const ManufacturedCase tmp = c;
        c.eta = tmp.u;
        c.eta_t = tmp.u_t;
        c.eta_x = tmp.u_x;
        set_u_exp_xt(c, 1.0, Profile{[](double x) { return x - 1.0; }, [](double) { return 1.0; },
                                     [](double) { return 0.0; }});
    } else if (name.size() == 9 && name.rfind("adv-x", 0) == 0 && name.substr(6) == "exp") {
        const int k = name[5] - '0';
        if (k < 1 || k > 4) throw std::invalid_argument("unknown manufactured case: " + name);
        return shifted_power_exp(k);
    } else if (name == "var-adv") {
        set_eta_exp_time(c, -1.0, cos_plus_linear);
        set_u_exp_xt(c, 0.0, Profile{[](double x) { return x * (1.0 - x); }, [](double x) { return 1.0 - 2.0 * x; },
                                     [](double) { return -2.0; }});
    } else {
        throw std::invalid_argument("unknown manufactured case: " + name);
    }
    return c;
}

}  // namespace bouss
