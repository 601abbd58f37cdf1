#pragma once
#include <functional>
#include <string>
#include <vector>

#include "fracdrift/fbm.hpp"
#include "fracdrift/grid.hpp"

namespace fracdrift {

/// Axis-aligned open box parameter domain, with the true parameter for
/// simulation studies kept alongside.
struct ParameterBox {
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<double> true_theta;

    ParameterBox(std::vector<double> lo, std::vector<double> hi, std::vector<double> theta0);

    std::size_t dim() const { return lower.size(); }
    bool contains(const std::vector<double>& theta) const;          // closed box
    bool strictly_contains(const std::vector<double>& theta) const; // open box
    std::vector<double> center() const;
    std::vector<double> project(std::vector<double> theta) const;
    double halfwidth(std::size_t i) const { return 0.5 * (upper[i] - lower[i]); }
};

/// Scalar-state parametric drift family with exact parameter gradient and the
/// growth/Lipschitz metadata of the standing assumptions.
struct DriftModel {
    std::string name;
    std::size_t dim = 1;
    std::function<double(double, const std::vector<double>&)> b;
    std::function<double(double, const std::vector<double>&)> db_dx;
    std::function<std::vector<double>(double, const std::vector<double>&)> grad_theta_b;
    double lipschitz_L = 0;
    double growth_c = 0;
    double growth_N = 0;
};

enum class BuiltinModelKind { constant, linear, sine };

BuiltinModelKind parse_model_name(const std::string& name);

/// constant: b = theta1; linear: b = -theta1 x (theta1 > 0); sine: b = theta1 + theta2 sin x.
/// Growth and Lipschitz constants are taken as suprema over the given box
/// (default box if none is supplied).
DriftModel builtin_model(BuiltinModelKind kind);
DriftModel builtin_model(BuiltinModelKind kind, const ParameterBox& box);
ParameterBox default_box(BuiltinModelKind kind);

struct SdeConfig {
    double x0 = 0.0;
    double epsilon = 1.0;  // in (0, 1]
    HurstIndex H;
    TimeGrid grid;

    SdeConfig(double x0_, double eps, HurstIndex h, TimeGrid g);
};

/// Limit path dx/dt = b(x, theta), x(0) = x0, by classical RK4 on the grid.
SampledPath solve_ode_limit(const DriftModel& model, const std::vector<double>& theta, const SdeConfig& cfg);

/// Euler scheme X_{i+1} = X_i + b(X_i, theta) dt + eps (B_{i+1} - B_i).
SampledPath simulate_sde(const DriftModel& model, const std::vector<double>& theta, const SdeConfig& cfg,
                         const SampledPath& noise);

}  // namespace fracdrift
