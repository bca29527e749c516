#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "fkh/math_util.hpp"

namespace fkh {

namespace detail {

inline bool is_nonpositive_integer(double s, double tol = 1e-12) {
    return s <= 0.5 && std::abs(s - std::round(s)) < tol;
}

// Lanczos g=7, 15-term coefficients (Godfrey).  Good to ~15 significant
// digits for positive arguments.
inline double lanczos_sum(double x) {
    static const double c[15] = {
        0.99999999999999709182,     57.156235665862923517,     -59.597960355475491248,
        14.136097974741747174,      -0.49191381609762019978,   0.33994649984811888699e-4,
        0.46523628927048575665e-4,  -0.98374475304879564677e-4, 0.15808870322491248884e-3,
        -0.21026444172410488319e-3, 0.21743961811521264320e-3, -0.16431810653676389022e-3,
        0.84418223983852743293e-4,  -0.26190838401581408670e-4, 0.36899182659531622704e-5};
    double s = c[0];
    for (int k = 1; k < 15; ++k) s += c[k] / (x + k - 1.0);
    return s;
}

inline double gamma_positive(double s) {
    const double g = 607.0 / 128.0;  // 4.7421875
    double base = s + g - 0.5;
    if (s > 100.0) {  // avoid overflow in the intermediate power
        double lg = 0.5 * std::log(2.0 * M_PI) + (s - 0.5) * std::log(base) - base +
                    std::log(lanczos_sum(s));
        return std::exp(lg);
    }
    return std::sqrt(2.0 * M_PI) * std::pow(base, s - 0.5) * std::exp(-base) * lanczos_sum(s);
}

}  // namespace detail

/// Gamma function on the real line; poles at non-positive integers are
/// reported, reflection handles s < 0.5.
inline double gamma_fn(double s) {
    if (detail::is_nonpositive_integer(s))
        throw numerical_error("gamma_fn: pole at s = " + std::to_string(s));
    if (s < 0.5) {
        // Gamma(s) Gamma(1-s) = pi / sin(pi s)
        return M_PI / (std::sin(M_PI * s) * detail::gamma_positive(1.0 - s));
    }
    return detail::gamma_positive(s);
}

inline double log_gamma_fn(double s) {
    require(s > 0.0, "log_gamma_fn: needs s > 0");
    const double g = 607.0 / 128.0;
    double base = s + g - 0.5;
    return 0.5 * std::log(2.0 * M_PI) + (s - 0.5) * std::log(base) - base +
           std::log(detail::lanczos_sum(s));
}

/// Digamma Psi(s) = d/ds log Gamma(s).  Recurrence up to s >= 10, then the
/// Bernoulli asymptotic series; reflection for s < 0.5.
inline double digamma_fn(double s) {
    if (detail::is_nonpositive_integer(s))
        throw numerical_error("digamma_fn: pole at s = " + std::to_string(s));
    if (s < 0.5) {
        // Psi(1-s) = Psi(s) + pi cot(pi s)
        return digamma_fn(1.0 - s) - M_PI / std::tan(M_PI * s);
    }
    double acc = 0.0;
    while (s < 10.0) {
        acc -= 1.0 / s;
        s += 1.0;
    }
    const double x2 = 1.0 / (s * s);
    // Psi(s) ~ ln s - 1/(2s) - sum B_{2k}/(2k s^{2k})
    double series = std::log(s) - 0.5 / s -
                    x2 * (1.0 / 12 - x2 * (1.0 / 120 - x2 * (1.0 / 252 - x2 * (1.0 / 240 -
                          x2 * (1.0 / 132 - x2 * (691.0 / 32760 - x2 * (1.0 / 12)))))));
    return acc + series;
}

}  // namespace fkh
