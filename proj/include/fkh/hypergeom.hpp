#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "fkh/gamma.hpp"
#include "fkh/math_util.hpp"

namespace fkh {

struct HyperTriple {
    double a;
    double b;
    double c;
};

// Continuation structure of F(a,b;c;z) past z = -1.  The tag is a pure
// function of the parameters; SeriesDisk is the region label used when
// |z| <= 1 and no continuation formula is involved.
enum class CaseTag {
    SeriesDisk,
    CaseI,
    CaseII,
    CaseIII_generic,
    CaseIII_integer_cma,
    CaseIV_polynomial,
    CaseIV_reflected,
};

inline const char* to_string(CaseTag t) {
    switch (t) {
        case CaseTag::SeriesDisk: return "series_disk";
        case CaseTag::CaseI: return "case_I";
        case CaseTag::CaseII: return "case_II";
        case CaseTag::CaseIII_generic: return "case_III_generic";
        case CaseTag::CaseIII_integer_cma: return "case_III_integer_cma";
        case CaseTag::CaseIV_polynomial: return "case_IV_polynomial";
        case CaseTag::CaseIV_reflected: return "case_IV_reflected";
    }
    return "?";
}

namespace detail {

constexpr double kIntTol = 1e-9;     // integer detection
constexpr double kAmbigTol = 1e-8;   // closer than this but not integral: refuse
constexpr int kMaxTerms = 10000;

// Three-way integer test.  The continuation cases are structurally different
// (logarithmic vs algebraic), so a parameter that is nearly but not exactly
// integral must be rejected, never rounded.
inline bool is_integer_checked(double x, const char* what) {
    double d = std::abs(x - std::round(x));
    if (d < kIntTol) return true;
    if (d < kAmbigTol)
        throw numerical_error(std::string("classify_case: ") + what + " = " +
                              std::to_string(x) + " is ambiguously close to an integer");
    return false;
}

inline bool is_nonpos_int_checked(double x, const char* what) {
    return x < 0.5 && is_integer_checked(x, what) && std::round(x) <= 0.0;
}

// 1/Gamma with the value 0 at the poles.
inline double rgamma(double s) {
    if (is_nonpositive_integer(s)) return 0.0;
    return 1.0 / gamma_fn(s);
}

}  // namespace detail

/// Decide which analytic-continuation formula applies to (a,b,c) for
/// arguments beyond z < -1.  Parameters within 1e-9 of the relevant integers
/// are snapped; parameters within (1e-9, 1e-8] raise an error.
inline CaseTag classify_case(const HyperTriple& t) {
    double a = std::min(t.a, t.b), b = std::max(t.a, t.b), c = t.c;
    if (detail::is_nonpos_int_checked(c, "c"))
        throw numerical_error("classify_case: c is a non-positive integer");
    if (detail::is_nonpos_int_checked(b, "b") || detail::is_nonpos_int_checked(a, "a"))
        return CaseTag::CaseIV_polynomial;
    if (detail::is_nonpos_int_checked(c - b, "c-b") || detail::is_nonpos_int_checked(c - a, "c-a"))
        return CaseTag::CaseIV_reflected;
    if (detail::is_integer_checked(b - a, "b-a")) {
        int m = static_cast<int>(std::lround(b - a));
        double l = c - a;
        if (l > 0.5 && detail::is_integer_checked(l, "c-a")) {
            int li = static_cast<int>(std::lround(l));
            if (li > m) return CaseTag::CaseIII_integer_cma;
            throw numerical_error("classify_case: c-a = " + std::to_string(li) +
                                  " <= b-a = " + std::to_string(m) +
                                  " is outside the implemented continuation sub-cases");
        }
        return m == 0 ? CaseTag::CaseII : CaseTag::CaseIII_generic;
    }
    return CaseTag::CaseI;
}

namespace detail {

// Gauss series, |z| < 1.  Relative tail below 1e-15 or bust.
inline double gauss_series(double a, double b, double c, double z) {
    if (is_nonpositive_integer(c))
        throw numerical_error("hyp2f1: c is a non-positive integer");
    double term = 1.0, sum = 1.0;
    for (int k = 0; k < kMaxTerms; ++k) {
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        sum += term;
        if (std::abs(term) < 1e-16 * std::abs(sum) && k > 2) return sum;
        if (term == 0.0) return sum;  // polynomial terminated
    }
    throw numerical_error("hyp2f1: Gauss series did not converge at z = " + std::to_string(z));
}

// Eq-90 style finite polynomial, a = -m.
inline double polynomial_m(int m, double b, double c, double z) {
    double term = 1.0, sum = 1.0;
    for (int k = 0; k < m; ++k) {
        term *= (-m + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        sum += term;
    }
    return sum;
}

}  // namespace detail

double hyp2f1(const HyperTriple& t, double z);  // forward

namespace detail {

// Case I continuation (A&S 15.3.7).  Valid for any z < 0 (the inner values
// are routed back through the dispatcher); the main dispatcher only uses it
// for z <= -2 where the inner arguments land in the series disk.
inline double continue_case1(double a, double b, double c, double z) {
    double A1 = gamma_fn(c) * gamma_fn(b - a) * rgamma(b) * rgamma(c - a);
    double A2 = gamma_fn(c) * gamma_fn(a - b) * rgamma(a) * rgamma(c - b);
    double w = 1.0 / z;
    double s = 0.0;
    if (A1 != 0.0) s += A1 * std::pow(-z, -a) * hyp2f1({a, a - c + 1.0, a - b + 1.0}, w);
    if (A2 != 0.0) s += A2 * std::pow(-z, -b) * hyp2f1({b, b - c + 1.0, b - a + 1.0}, w);
    return s;
}

// Case II continuation (A&S 15.3.13), a = b, c - a not a positive integer.
inline double continue_case2(double a, double c, double z) {
    double w = 1.0 / z;
    double lg = std::log(-z);
    double coef = 1.0;                       // (a)_k (1-c+a)_k / (k!)^2 * w^k
    double psi_k1 = digamma_fn(1.0);         // Psi(k+1)
    double psi_ak = digamma_fn(a);           // Psi(a+k)
    double psi_ca = digamma_fn(c - a);       // Psi(c-a-k)
    double sum = 0.0;
    for (int k = 0; k < kMaxTerms; ++k) {
        double term = coef * (lg + 2.0 * psi_k1 - psi_ak - psi_ca);
        sum += term;
        if (k > 3 && std::abs(term) < 1e-16 * std::abs(sum)) break;
        if (k == kMaxTerms - 1)
            throw numerical_error("hyp2f1: Case II series did not converge");
        coef *= (a + k) * (1.0 - c + a + k) / ((k + 1.0) * (k + 1.0)) * w;
        psi_k1 += 1.0 / (k + 1.0);
        psi_ak += 1.0 / (a + k);
        psi_ca -= 1.0 / (c - a - k - 1.0);
    }
    return gamma_fn(c) * std::pow(-z, -a) * rgamma(a) * rgamma(c - a) * sum;
}

// Case III continuation (A&S 15.3.14), b = a + m, c - a not a positive integer.
inline double continue_case3(double a, int m, double c, double z) {
    double w = 1.0 / z;
    double lg = std::log(-z);
    // log series
    double coef = 1.0;  // (a)_{k+m} (1-c+a)_{k+m} / ((k+m)! k!) * w^k at k=0
    for (int j = 0; j < m; ++j) coef *= (a + j) * (1.0 - c + a + j);
    coef /= gamma_fn(m + 1.0);
    double psi_mk = digamma_fn(1.0 + m);     // Psi(1+m+k)
    double psi_k1 = digamma_fn(1.0);         // Psi(1+k)
    double psi_am = digamma_fn(a + m);       // Psi(a+m+k)
    double psi_ca = digamma_fn(c - a - m);   // Psi(c-a-m-k)
    double sum = 0.0;
    for (int k = 0; k < kMaxTerms; ++k) {
        double term = coef * (lg + psi_mk + psi_k1 - psi_am - psi_ca);
        sum += term;
        if (k > 3 && std::abs(term) < 1e-16 * std::abs(sum)) break;
        if (k == kMaxTerms - 1)
            throw numerical_error("hyp2f1: Case III series did not converge");
        coef *= (a + m + k) * (1.0 - c + a + m + k) / ((k + m + 1.0) * (k + 1.0)) * w;
        psi_mk += 1.0 / (1.0 + m + k);
        psi_k1 += 1.0 / (1.0 + k);
        psi_am += 1.0 / (a + m + k);
        psi_ca -= 1.0 / (c - a - m - k - 1.0);
    }
    double res = gamma_fn(c) * std::pow(-z, -a - m) * rgamma(a + m) * rgamma(c - a) * sum;
    // finite sum, k = 0 .. m-1
    double fin = 0.0;
    double poch_a = 1.0, kfact = 1.0, wk = 1.0;
    for (int k = 0; k < m; ++k) {
        fin += gamma_fn(static_cast<double>(m - k)) * poch_a / kfact * rgamma(c - a - k) * wk;
        poch_a *= (a + k);
        kfact *= (k + 1.0);
        wk *= w;
    }
    res += std::pow(-z, -a) * gamma_fn(c) * rgamma(a + m) * fin;
    return res;
}

// Case III with c - a = l a positive integer > m (Erdelyi II 2.1.4 (19)).
inline double continue_case3_integer(double a, int m, int l, double z) {
    double w = 1.0 / z;
    double lg = std::log(-z);
    // infinite part: sum_{k=l-m}^inf (a)_{k+m} (k+m-l)! / ((k+m)! k!) w^k
    double sum_inf = 0.0;
    {
        int k0 = l - m;
        // term at k0: (a)_{l} * 0! / (l! * (l-m)!)
        double term = 1.0;
        for (int j = 0; j < l; ++j) term *= (a + j) / (j + 1.0);  // (a)_l / l!
        term /= gamma_fn(l - m + 1.0);
        term *= std::pow(w, k0);
        for (int k = k0; k < kMaxTerms; ++k) {
            sum_inf += term;
            if (k > k0 + 3 && std::abs(term) < 1e-16 * std::abs(sum_inf)) break;
            if (k == kMaxTerms - 1)
                throw numerical_error("hyp2f1: Case III(l) series did not converge");
            term *= (a + m + k) * (k + m - l + 1.0) / ((k + m + 1.0) * (k + 1.0)) * w;
        }
        sum_inf *= ((l % 2) ? -1.0 : 1.0) * std::pow(-z, -m);
    }
    // middle finite sum, k = 0 .. m-1
    double sum_mid = 0.0;
    {
        double poch_a = 1.0, kfact = 1.0, wk = 1.0;
        for (int k = 0; k < m; ++k) {
            sum_mid += gamma_fn(static_cast<double>(m - k)) * poch_a /
                       (gamma_fn(static_cast<double>(l - k)) * kfact) * wk;
            poch_a *= (a + k);
            kfact *= (k + 1.0);
            wk *= w;
        }
    }
    // log finite sum, k = 0 .. l-m-1
    double sum_log = 0.0;
    {
        double coef = 1.0;  // (a)_{k+m} (1-l)_{k+m} / ((k+m)! k!) at k=0
        for (int j = 0; j < m; ++j) coef *= (a + j) * (1.0 - l + j);
        coef /= gamma_fn(m + 1.0);
        double psi_mk = digamma_fn(1.0 + m);
        double psi_k1 = digamma_fn(1.0);
        double psi_am = digamma_fn(a + m);
        double psi_lm = digamma_fn(static_cast<double>(l - m));  // Psi(l-m-k)
        double wk = 1.0;
        for (int k = 0; k <= l - m - 1; ++k) {
            sum_log += coef * wk * (lg + psi_mk + psi_k1 - psi_am - psi_lm);
            coef *= (a + m + k) * (1.0 - l + m + k);
            coef /= (k + m + 1.0) * (k + 1.0);
            wk *= w;
            psi_mk += 1.0 / (1.0 + m + k);
            psi_k1 += 1.0 / (1.0 + k);
            psi_am += 1.0 / (a + m + k);
            psi_lm -= 1.0 / (l - m - k - 1.0);
        }
        sum_log *= std::pow(-z, -m) / gamma_fn(static_cast<double>(l));
    }
    return gamma_fn(a + l) * rgamma(a + m) * std::pow(-z, -a) * (sum_inf + sum_mid + sum_log);
}

}  // namespace detail

/// Pfaff-transformed series: F(a,b;c;z) = (1-z)^{-a} F(a, c-b; c; z/(z-1)).
/// Sound for any z < 0; the dispatcher uses it on (-2, -0.5].
inline double hyp2f1_pfaff(const HyperTriple& t, double z) {
    require(z < 0.0, "hyp2f1_pfaff: needs z < 0");
    double u = z / (z - 1.0);
    return std::pow(1.0 - z, -t.a) * detail::gauss_series(t.a, t.c - t.b, t.c, u);
}

/// Direct Gauss series (|z| < 1).
inline double hyp2f1_series(const HyperTriple& t, double z) {
    require(std::abs(z) < 1.0, "hyp2f1_series: needs |z| < 1");
    return detail::gauss_series(t.a, t.b, t.c, z);
}

/// Case-I continuation formula, exposed for the route-consistency checks.
inline double hyp2f1_continuation_case1(const HyperTriple& t, double z) {
    require(z < 0.0, "continuation: needs z < 0");
    double a = std::min(t.a, t.b), b = std::max(t.a, t.b);
    return detail::continue_case1(a, b, t.c, z);
}

/// Gauss hypergeometric F(a,b;c;z) on the half line z <= 0.
///
/// Region layout: direct series for |z| <= 0.5, the Pfaff map for
/// -2 < z < -0.5, and the parameter-dependent continuation formulas for
/// z <= -2, so every series argument stays at magnitude <= 2/3.  Elementary
/// (polynomial) parameter degeneracies are evaluated in closed form at any z.
inline double hyp2f1(const HyperTriple& t, double z) {
    require(z <= 0.0, "hyp2f1: only z <= 0 is supported");
    if (detail::is_nonpositive_integer(t.c))
        throw numerical_error("hyp2f1: c is a non-positive integer");
    double a = std::min(t.a, t.b), b = std::max(t.a, t.b), c = t.c;
    if (z == 0.0) return 1.0;

    // Elementary degeneracies first: exact at every argument.
    const bool a_poly = detail::is_nonpos_int_checked(a, "a");
    const bool b_poly = detail::is_nonpos_int_checked(b, "b");
    if (a_poly || b_poly) {
        // prefer the lower polynomial degree
        if (b_poly && (!a_poly || -b < -a))
            return detail::polynomial_m(static_cast<int>(std::lround(-b)), a, c, z);
        return detail::polynomial_m(static_cast<int>(std::lround(-a)), b, c, z);
    }
    const bool cb_int = detail::is_nonpos_int_checked(c - b, "c-b");
    const bool ca_int = detail::is_nonpos_int_checked(c - a, "c-a");
    if (cb_int || ca_int) {
        // A&S 15.3.3: F = (1-z)^{c-a-b} F(c-a, c-b; c; z), one factor a polynomial
        int l;
        double other;
        if (cb_int && (!ca_int || c - b > c - a)) {
            l = static_cast<int>(std::lround(b - c));
            other = c - a;
        } else {
            l = static_cast<int>(std::lround(a - c));
            other = c - b;
        }
        return std::pow(1.0 - z, c - a - b) * detail::polynomial_m(l, other, c, z);
    }

    if (z >= -0.5) return detail::gauss_series(a, b, c, z);
    if (z > -2.0) return hyp2f1_pfaff({a, b, c}, z);

    switch (classify_case({a, b, c})) {
        case CaseTag::CaseI:
            return detail::continue_case1(a, b, c, z);
        case CaseTag::CaseII:
            return detail::continue_case2(a, c, z);
        case CaseTag::CaseIII_generic:
            return detail::continue_case3(a, static_cast<int>(std::lround(b - a)), c, z);
        case CaseTag::CaseIII_integer_cma:
            return detail::continue_case3_integer(a, static_cast<int>(std::lround(b - a)),
                                                  static_cast<int>(std::lround(c - a)), z);
        default:
            throw numerical_error("hyp2f1: unreachable continuation case");
    }
}

/// dF/dz = (ab/c) F(a+1, b+1; c+1; z).
inline double hyp2f1_derivative(const HyperTriple& t, double z) {
    return t.a * t.b / t.c * hyp2f1({t.a + 1.0, t.b + 1.0, t.c + 1.0}, z);
}

}  // namespace fkh
