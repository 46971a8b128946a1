#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "aoristic/errors.hpp"

namespace aoristic {

namespace detail {

// log of the lower regularized incomplete gamma P(a, x), by power series.
// Valid for x < a + 1 where the series converges quickly; relative-accurate
// even where P underflows as a plain double.
inline double log_gamma_p_series(double a, double x) {
    const double eps = std::numeric_limits<double>::epsilon();
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (long n = 0; n < 1000000; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * eps)
            break;
    }
    return std::log(sum) - x + a * std::log(x) - std::lgamma(a);
}

inline double gamma_p_series(double a, double x) {
    return std::exp(log_gamma_p_series(a, x));
}

// log of the upper regularized incomplete gamma Q(a, x), modified Lentz
// continued fraction. Valid for x >= a + 1.
inline double log_gamma_q_contfrac(double a, double x) {
    const double eps = std::numeric_limits<double>::epsilon();
    const double fpmin = std::numeric_limits<double>::min() / eps;
    double b = x + 1.0 - a;
    double c = 1.0 / fpmin;
    double d = 1.0 / b;
    double h = d;
    for (long i = 1; i < 1000000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = b + an / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < eps)
            break;
    }
    return std::log(h) - x + a * std::log(x) - std::lgamma(a);
}

inline double gamma_q_contfrac(double a, double x) {
    return std::exp(log_gamma_q_contfrac(a, x));
}

// Standard normal quantile, Acklam's rational approximation refined by one
// Halley step. Used only as an initial guess for the gamma quantile.
inline double normal_quantile(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double q, r, x;
    if (p < plow) {
        q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        q = p - 0.5;
        r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
    return x - u / (1.0 + x * u / 2.0);
}

} // namespace detail

// Lower regularized incomplete gamma P(a, x).
inline double regularized_gamma_p(double a, double x) {
    if (!(a > 0) || !std::isfinite(a) || !std::isfinite(x))
        throw validation_error("regularized_gamma_p: shape must be a finite positive real");
    if (x < 0)
        throw validation_error("regularized_gamma_p: x must be >= 0");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return detail::gamma_p_series(a, x);
    return 1.0 - detail::gamma_q_contfrac(a, x);
}

// Gamma(shape, rate) log-density, shape/rate parameterization (mean = shape/rate).
inline double gamma_log_pdf(double shape, double rate, double x) {
    return shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(x) -
           rate * x;
}

// CDF of Gamma(shape, rate) at x.
inline double gamma_cdf(double shape, double rate, double x) {
    if (!std::isfinite(shape) || !std::isfinite(rate) || !std::isfinite(x))
        throw validation_error("gamma_cdf: non-finite input");
    if (!(shape > 0) || !(rate > 0))
        throw validation_error("gamma_cdf: shape and rate must be > 0");
    if (x < 0)
        throw validation_error("gamma_cdf: x must be >= 0");
    return regularized_gamma_p(shape, rate * x);
}

// Inverse CDF of Gamma(shape, rate): the x with gamma_cdf(shape, rate, x) = q.
//
// Root-finding runs on the logarithm of whichever tail function is computed
// relative-accurately at the current point (series P below a+1, continued
// fraction Q above), so deep-tail quantiles keep full relative precision in x
// instead of stalling once |P - q| drops under an absolute threshold. Newton
// steps are safeguarded by a maintained bracket with geometric bisection.
inline double gamma_quantile(double shape, double rate, double q) {
    if (!std::isfinite(shape) || !std::isfinite(rate) || !std::isfinite(q))
        throw validation_error("gamma_quantile: non-finite input");
    if (!(shape > 0) || !(rate > 0))
        throw validation_error("gamma_quantile: shape and rate must be > 0");
    if (!(q > 0.0 && q < 1.0))
        throw validation_error("gamma_quantile: q must lie strictly inside (0, 1), got " +
                               std::to_string(q));

    const double log_q = std::log(q);
    const double log_1mq = std::log1p(-q);

    // Wilson-Hilferty: the cube-root of a gamma variate is near-normal.
    const double z = detail::normal_quantile(q);
    const double t = 1.0 - 1.0 / (9.0 * shape) + z / (3.0 * std::sqrt(shape));
    double x = shape * t * t * t;
    if (!(x > 0) || !std::isfinite(x))
        x = shape; // fall back to the mean of the unit-rate gamma

    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < 400; ++iter) {
        const bool lower_side = x < shape + 1.0;
        const double log_val = lower_side ? detail::log_gamma_p_series(shape, x)
                                          : detail::log_gamma_q_contfrac(shape, x);
        const double log_target = lower_side ? log_q : log_1mq;
        // h > 0 means cdf(x) > q on the lower side, cdf(x) < q on the upper
        const double h = log_val - log_target;
        const bool cdf_too_high = lower_side ? h > 0.0 : h < 0.0;
        if (cdf_too_high)
            hi = x;
        else
            lo = x;
        if (std::fabs(h) <= 1e-12)
            break;

        // Newton in log x: d(log P)/d(log x) = x pdf / P, and -x pdf / Q on
        // the upper side. Multiplicative steps traverse the many decades of a
        // deep lower tail in a handful of iterations.
        const double log_pdf = gamma_log_pdf(shape, 1.0, x);
        double dlog = std::exp(log_pdf - log_val) * x;
        if (!lower_side) dlog = -dlog;

        double step = h / dlog;
        if (step > 700.0) step = 700.0;
        if (step < -700.0) step = -700.0;
        double next = x * std::exp(-step);
        if (!(next > lo) || !(next < hi) || !std::isfinite(next)) {
            if (std::isfinite(hi))
                next = lo > 0.0 ? std::sqrt(lo * hi) : 0.5 * hi;
            else
                next = x * 4.0;
        }
        if (next == x)
            break;
        x = next;
    }
    return x / rate;
}

} // namespace aoristic
