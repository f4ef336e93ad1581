#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "bouss/systems.hpp"

namespace bouss {

enum class Scheme { Euler, ImprovedEuler, RK4, CrankNicolson };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

struct StepperSpec {
    Scheme scheme = Scheme::RK4;
    double k = 0.0;
};

inline constexpr double kDivergenceThreshold = 1e12;

class Divergence : public std::runtime_error {
public:
    explicit Divergence(double t);
    double time() const { return time_; }

private:
    double time_;
};

class UnsupportedScheme : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Reusable stepper; owns stage workspace and, for Crank-Nicolson, the factored implicit matrix.
class Stepper {
public:
    Stepper(Scheme scheme, const OdeSystem& system);
    ~Stepper();
    Stepper(const Stepper&) = delete;
    Stepper& operator=(const Stepper&) = delete;

    // Advances state by k; throws Divergence when a coefficient exceeds the threshold.
    void advance(State& state, double k);

private:
    struct CnCache;
    Scheme scheme_;
    const OdeSystem& sys_;
    std::vector<double> k1_, k2_, k3_, k4_, tmp_;
    std::unique_ptr<CnCache> cn_;
};

State step(const StepperSpec& spec, const OdeSystem& system, const State& state);

struct Observer {
    std::vector<double> times;  // the stepper lands exactly on each listed time
    bool every_step = false;
    std::function<void(const State&)> callback;
};

struct IntegrationResult {
    State state;
    bool diverged = false;
    double divergence_time = 0.0;
    std::size_t steps = 0;
};

IntegrationResult integrate(const StepperSpec& spec, const OdeSystem& system, State initial, double T,
                            const std::vector<Observer>& observers = {});

}  // namespace bouss
