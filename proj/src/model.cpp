#include "fracdrift/model.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "fracdrift/errors.hpp"

namespace fracdrift {

ParameterBox::ParameterBox(std::vector<double> lo, std::vector<double> hi, std::vector<double> theta0)
    : lower(std::move(lo)), upper(std::move(hi)), true_theta(std::move(theta0)) {
    if (lower.empty() || lower.size() != upper.size())
        throw ValidationError("ParameterBox: lower/upper must be nonempty and equally sized");
    for (std::size_t i = 0; i < lower.size(); ++i)
        if (!(lower[i] < upper[i])) throw ValidationError("ParameterBox: need lower < upper componentwise");
    if (!true_theta.empty()) {
        if (true_theta.size() != lower.size()) throw ValidationError("ParameterBox: theta0 dimension mismatch");
        if (!strictly_contains(true_theta)) throw ValidationError("ParameterBox: theta0 must be strictly interior");
    }
}

bool ParameterBox::contains(const std::vector<double>& theta) const {
    if (theta.size() != dim()) return false;
    for (std::size_t i = 0; i < dim(); ++i)
        if (theta[i] < lower[i] || theta[i] > upper[i]) return false;
    return true;
}

bool ParameterBox::strictly_contains(const std::vector<double>& theta) const {
    if (theta.size() != dim()) return false;
    for (std::size_t i = 0; i < dim(); ++i)
        if (!(theta[i] > lower[i] && theta[i] < upper[i])) return false;
    return true;
}

std::vector<double> ParameterBox::center() const {
    std::vector<double> c(dim());
    for (std::size_t i = 0; i < dim(); ++i) c[i] = 0.5 * (lower[i] + upper[i]);
    return c;
}

std::vector<double> ParameterBox::project(std::vector<double> theta) const {
    for (std::size_t i = 0; i < dim(); ++i) theta[i] = std::clamp(theta[i], lower[i], upper[i]);
    return theta;
}

BuiltinModelKind parse_model_name(const std::string& name) {
    if (name == "constant") return BuiltinModelKind::constant;
    if (name == "linear") return BuiltinModelKind::linear;
    if (name == "sine") return BuiltinModelKind::sine;
    throw ValidationError("unknown model name '" + name + "' (expected constant|linear|sine)");
}

ParameterBox default_box(BuiltinModelKind kind) {
    switch (kind) {
        case BuiltinModelKind::constant: return ParameterBox({0.5}, {3.5}, {2.0});
        case BuiltinModelKind::linear: return ParameterBox({0.25}, {2.0}, {1.0});
        case BuiltinModelKind::sine: return ParameterBox({-2.0, -1.5}, {2.0, 1.5}, {1.0, 0.5});
    }
    throw ValidationError("unknown builtin model kind");
}

DriftModel builtin_model(BuiltinModelKind kind) { return builtin_model(kind, default_box(kind)); }

DriftModel builtin_model(BuiltinModelKind kind, const ParameterBox& box) {
    DriftModel m;
    const auto absmax = [&box](std::size_t i) { return std::max(std::abs(box.lower[i]), std::abs(box.upper[i])); };
    switch (kind) {
        case BuiltinModelKind::constant:
            if (box.dim() != 1) throw ValidationError("constant model needs a 1-d box");
            m.name = "constant";
            m.dim = 1;
            m.b = [](double, const std::vector<double>& th) { return th[0]; };
            m.db_dx = [](double, const std::vector<double>&) { return 0.0; };
            m.grad_theta_b = [](double, const std::vector<double>&) { return std::vector<double>{1.0}; };
            m.lipschitz_L = 1.0;  // any positive constant is a valid bound for a flat drift
            m.growth_c = absmax(0);
            m.growth_N = 0.0;
            return m;
        case BuiltinModelKind::linear:
            if (box.dim() != 1) throw ValidationError("linear model needs a 1-d box");
            if (box.lower[0] <= 0.0) throw ValidationError("linear model requires theta1 > 0 on the box");
            m.name = "linear";
            m.dim = 1;
            m.b = [](double x, const std::vector<double>& th) { return -th[0] * x; };
            m.db_dx = [](double, const std::vector<double>& th) { return -th[0]; };
            m.grad_theta_b = [](double x, const std::vector<double>&) { return std::vector<double>{-x}; };
            m.lipschitz_L = absmax(0);
            m.growth_c = absmax(0);
            m.growth_N = 1.0;
            return m;
        case BuiltinModelKind::sine:
            if (box.dim() != 2) throw ValidationError("sine model needs a 2-d box");
            m.name = "sine";
            m.dim = 2;
            m.b = [](double x, const std::vector<double>& th) { return th[0] + th[1] * std::sin(x); };
            m.db_dx = [](double x, const std::vector<double>& th) { return th[1] * std::cos(x); };
            m.grad_theta_b = [](double x, const std::vector<double>&) {
                return std::vector<double>{1.0, std::sin(x)};
            };
            m.lipschitz_L = absmax(1);
            m.growth_c = absmax(0) + absmax(1);
            m.growth_N = 0.0;
            return m;
    }
    throw ValidationError("unknown builtin model kind");
}

SdeConfig::SdeConfig(double x0_, double eps, HurstIndex h, TimeGrid g)
    : x0(x0_), epsilon(eps), H(h), grid(std::move(g)) {
    if (!std::isfinite(x0)) throw ValidationError("SdeConfig: x0 must be finite");
    // epsilon = 0 is allowed for noise-free simulation runs; estimation
    // objects require epsilon > 0 and enforce it themselves.
    if (!(eps >= 0.0) || eps > 1.0) throw ValidationError("SdeConfig: epsilon must lie in [0,1]");
}

SampledPath solve_ode_limit(const DriftModel& model, const std::vector<double>& theta, const SdeConfig& cfg) {
    const std::size_t n = cfg.grid.steps();
    const double dt = cfg.grid.dt();
    std::vector<double> x(n + 1);
    x[0] = cfg.x0;
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = x[i];
        const double k1 = model.b(xi, theta);
        const double k2 = model.b(xi + 0.5 * dt * k1, theta);
        const double k3 = model.b(xi + 0.5 * dt * k2, theta);
        const double k4 = model.b(xi + dt * k3, theta);
        x[i + 1] = xi + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!std::isfinite(x[i + 1]))
            throw NumericalError("solve_ode_limit: state blew up at t = " + std::to_string(cfg.grid.node(i + 1)));
    }
    return SampledPath(cfg.grid, std::move(x));
}

SampledPath simulate_sde(const DriftModel& model, const std::vector<double>& theta, const SdeConfig& cfg,
                         const SampledPath& noise) {
    if (!noise.grid.same_as(cfg.grid)) throw ValidationError("simulate_sde: noise grid does not match config grid");
    const std::size_t n = cfg.grid.steps();
    const double dt = cfg.grid.dt();
    std::vector<double> x(n + 1);
    x[0] = cfg.x0;
    for (std::size_t i = 0; i < n; ++i) {
        x[i + 1] = x[i] + model.b(x[i], theta) * dt + cfg.epsilon * (noise.values[i + 1] - noise.values[i]);
        if (!std::isfinite(x[i + 1]))
            throw NumericalError("simulate_sde: state blew up at t = " + std::to_string(cfg.grid.node(i + 1)));
    }
    return SampledPath(cfg.grid, std::move(x));
}

}  // namespace fracdrift
