#pragma once
#include "fracdrift/fbm.hpp"

namespace fracdrift {

/// d_H = sqrt( 2H Gamma(3/2-H) Gamma(H+1/2) / Gamma(2-2H) ); equals 1 at H = 1/2.
double dh_const(HurstIndex H);

/// c1 = (d_H Gamma(1/2-H))^{-2}, defined for H < 1/2 only.
double c1_const(HurstIndex H);

/// c2 = (d_H Gamma(3/2-H))^{-1} (1 - (H-1/2) J) with
/// J = int_0^1 (s^{1/2-H} - 1)(1-s)^{-(H+1/2)} ds, evaluated by tanh-sinh
/// after the substitution 1-s = u^2. Defined for H > 1/2 only.
/// The bracket equals Gamma(3/2-H)^2 / Gamma(2-2H) analytically, which the
/// tests cross-check.
double c2_const(HurstIndex H);

/// c3 = (H-1/2) (d_H Gamma(3/2-H))^{-1}, defined for H > 1/2 only.
double c3_const(HurstIndex H);

}  // namespace fracdrift
