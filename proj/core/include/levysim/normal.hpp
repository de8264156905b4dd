#pragma once

#include <cmath>

namespace levysim {

inline constexpr double kInvNormClampLo = 1e-15;
inline constexpr double kInvNormClampHi = 1.0 - 1e-15;

/// Standard normal quantile function (inverse CDF).
///
/// Wichura's algorithm AS 241 (PPND16), accurate to about 1 part in 1e16
/// over the full open unit interval; far beyond the 1e-9 absolute accuracy
/// the coupling layer requires. Inputs are clamped to
/// [1e-15, 1 - 1e-15] so extreme empirical ranks map to finite quantiles
/// (about +-7.94) instead of infinities.
inline double inv_norm_cdf(double u) {
    // Coefficients for p close to 0.5
    constexpr double A0 = 3.3871328727963666080e0;
    constexpr double A1 = 1.3314166789178437745e+2;
    constexpr double A2 = 1.9715909503065514427e+3;
    constexpr double A3 = 1.3731693765509461125e+4;
    constexpr double A4 = 4.5921953931549871457e+4;
    constexpr double A5 = 6.7265770927008700853e+4;
    constexpr double A6 = 3.3430575583588128105e+4;
    constexpr double A7 = 2.5090809287301226727e+3;
    constexpr double B1 = 4.2313330701600911252e+1;
    constexpr double B2 = 6.8718700749205790830e+2;
    constexpr double B3 = 5.3941960214247511077e+3;
    constexpr double B4 = 2.1213794301586595867e+4;
    constexpr double B5 = 3.9307895800092710610e+4;
    constexpr double B6 = 2.8729085735721942674e+4;
    constexpr double B7 = 5.2264952788528545610e+3;
    // Coefficients for p not close to 0, 0.5 or 1
    constexpr double C0 = 1.42343711074968357734e0;
    constexpr double C1 = 4.63033784615654529590e0;
    constexpr double C2 = 5.76949722146069140550e0;
    constexpr double C3 = 3.64784832476320460504e0;
    constexpr double C4 = 1.27045825245236838258e0;
    constexpr double C5 = 2.41780725177450611770e-1;
    constexpr double C6 = 2.27238449892691845833e-2;
    constexpr double C7 = 7.74545014278341407640e-4;
    constexpr double D1 = 2.05319162663775882187e0;
    constexpr double D2 = 1.67638483018380384940e0;
    constexpr double D3 = 6.89767334985100004550e-1;
    constexpr double D4 = 1.48103976427480074590e-1;
    constexpr double D5 = 1.51986665636164571966e-2;
    constexpr double D6 = 5.47593808499534494600e-4;
    constexpr double D7 = 1.05075007164441684324e-9;
    // Coefficients for p very close to 0 or 1
    constexpr double E0 = 6.65790464350110377720e0;
    constexpr double E1 = 5.46378491116411436990e0;
    constexpr double E2 = 1.78482653991729133580e0;
    constexpr double E3 = 2.96560571828504891230e-1;
    constexpr double E4 = 2.65321895265761230930e-2;
    constexpr double E5 = 1.24266094738807843860e-3;
    constexpr double E6 = 2.71155556874348757815e-5;
    constexpr double E7 = 2.01033439929228813265e-7;
    constexpr double F1 = 5.99832206555887937690e-1;
    constexpr double F2 = 1.36929880922735805310e-1;
    constexpr double F3 = 1.48753612908506148525e-2;
    constexpr double F4 = 7.86869131145613259100e-4;
    constexpr double F5 = 1.84631831751005468180e-5;
    constexpr double F6 = 1.42151175831644588870e-7;
    constexpr double F7 = 2.04426310338993978564e-15;

    if (u < kInvNormClampLo) u = kInvNormClampLo;
    if (u > kInvNormClampHi) u = kInvNormClampHi;

    const double q = u - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((A7 * r + A6) * r + A5) * r + A4) * r + A3) * r + A2) * r + A1) * r + A0) /
               (((((((B7 * r + B6) * r + B5) * r + B4) * r + B3) * r + B2) * r + B1) * r + 1.0);
    }

    double r = q < 0.0 ? u : 1.0 - u;
    r = std::sqrt(-std::log(r));
    double z;
    if (r <= 5.0) {
        r -= 1.6;
        z = (((((((C7 * r + C6) * r + C5) * r + C4) * r + C3) * r + C2) * r + C1) * r + C0) /
            (((((((D7 * r + D6) * r + D5) * r + D4) * r + D3) * r + D2) * r + D1) * r + 1.0);
    } else {
        r -= 5.0;
        z = (((((((E7 * r + E6) * r + E5) * r + E4) * r + E3) * r + E2) * r + E1) * r + E0) /
            (((((((F7 * r + F6) * r + F5) * r + F4) * r + F3) * r + F2) * r + F1) * r + 1.0);
    }
    return q < 0.0 ? -z : z;
}

/// Standard normal CDF.
inline double norm_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

}  // namespace levysim
