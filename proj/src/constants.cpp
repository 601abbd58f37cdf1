#include "fracdrift/constants.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>

#include "fracdrift/errors.hpp"

namespace fracdrift {

double dh_const(HurstIndex H) {
    const double h = H.value;
    return std::sqrt(2.0 * h * std::tgamma(1.5 - h) * std::tgamma(h + 0.5) / std::tgamma(2.0 - 2.0 * h));
}

double c1_const(HurstIndex H) {
    if (H.value >= 0.5) throw ValidationError("c1 is defined for H < 1/2");
    const double d = dh_const(H) * std::tgamma(0.5 - H.value);
    return 1.0 / (d * d);
}

double c2_const(HurstIndex H) {
    const double h = H.value;
    if (h <= 0.5) throw ValidationError("c2 is defined for H > 1/2");
    // J via 1-s = u^2:  J = 2 int_0^1 ((1-u^2)^{1/2-H} - 1) u^{-2H} du.
    // The integrand vanishes like u^{2-2H} at u=0 and has an integrable
    // (1-u)^{1/2-H} singularity at u=1.
    boost::math::quadrature::tanh_sinh<double> ts;
    auto f = [h](double u, double xc) {
        const double uu = (xc < 0) ? -xc : u;       // exact near the left endpoint
        const double omu = (xc > 0) ? xc : 1.0 - u; // exact near the right endpoint
        if (uu < 1e-8) return (h - 0.5) * std::pow(uu, 2.0 - 2.0 * h);
        const double om_u2 = omu * (1.0 + u);
        return std::expm1((0.5 - h) * std::log(om_u2)) * std::pow(uu, -2.0 * h);
    };
    const double J = 2.0 * ts.integrate(f, 0.0, 1.0);
    return (1.0 - (h - 0.5) * J) / (dh_const(H) * std::tgamma(1.5 - h));
}

double c3_const(HurstIndex H) {
    const double h = H.value;
    if (h <= 0.5) throw ValidationError("c3 is defined for H > 1/2");
    return (h - 0.5) / (dh_const(H) * std::tgamma(1.5 - h));
}

}  // namespace fracdrift
