#include "rankfit/stats.hpp"

#include <cmath>
#include <limits>

#include "rankfit/errors.hpp"

namespace rankfit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;

double rational(double r, const double* num, const double* den, int n) {
    double p = num[n - 1];
    for (int i = n - 2; i >= 0; --i) p = p * r + num[i];
    double q = den[n - 1];
    for (int i = n - 2; i >= 0; --i) q = q * r + den[i];
    return p / q;
}

}  // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }

double normal_sf(double z) { return 0.5 * std::erfc(z / kSqrt2); }

double log_normal_cdf(double z) {
    if (z > 5.0) {
        // Phi(z) is 1 minus a tiny tail; log1p keeps the digits.
        return std::log1p(-normal_sf(z));
    }
    if (z > -37.0) {
        return std::log(normal_cdf(z));
    }
    // erfc underflows past here; continued asymptotic expansion of the tail.
    double zz = z * z;
    double series = 1.0 - 1.0 / zz + 3.0 / (zz * zz) - 15.0 / (zz * zz * zz);
    return -0.5 * zz - std::log(-z) - kLogSqrt2Pi + std::log(series);
}

double normal_quantile(double p) {
    // Wichura (1988), algorithm AS 241, PPND16.
    if (p <= 0.0) return -kInf;
    if (p >= 1.0) return kInf;

    static const double a[8] = {
        3.3871328727963666080e0,  1.3314166789178437745e2,
        1.9715909503065514427e3,  1.3731693765509461125e4,
        4.5921953931549871457e4,  6.7265770927008700853e4,
        3.3430575583588128105e4,  2.5090809287301226727e3};
    static const double b[8] = {
        1.0,                      4.2313330701600911252e1,
        6.8718700749205790830e2,  5.3941960214247511077e3,
        2.1213794301586595867e4,  3.9307895800092710610e4,
        2.8729085735721942674e4,  5.2264952788528545610e3};
    static const double c[8] = {
        1.42343711074968357734e0, 4.63033784615654529590e0,
        5.76949722146069140550e0, 3.64784832476320460504e0,
        1.27045825245236838258e0, 2.41780725177450611770e-1,
        2.27238449892691845833e-2, 7.74545014278341407640e-4};
    static const double d[8] = {
        1.0,                      2.05319162663775882187e0,
        1.67638483018380384940e0, 6.89767334985100004550e-1,
        1.48103976427480074590e-1, 1.51986665636164571966e-2,
        5.47593808499534494600e-4, 1.05075007164441684324e-9};
    static const double e[8] = {
        6.65790464350110377720e0, 5.46378491116411436990e0,
        1.78482653991729133580e0, 2.96560571828504891230e-1,
        2.65321895265761230930e-2, 1.24266094738807843860e-3,
        2.71155556874348757815e-5, 2.01033439929228813265e-7};
    static const double f[8] = {
        1.0,                      5.99832206555887937690e-1,
        1.36929880922735805310e-1, 1.48753612908506148525e-2,
        7.86869131145613259100e-4, 1.84631831751005468180e-5,
        1.42151175831644588870e-7, 2.04426310338993978564e-15};

    double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        double r = 0.180625 - q * q;
        return q * rational(r, a, b, 8);
    }
    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        val = rational(r - 1.6, c, d, 8);
    } else {
        val = rational(r - 5.0, e, f, 8);
    }
    return (q < 0.0) ? -val : val;
}

namespace {

// Standardized draw conditioned to (a, b) with 0 <= a < b, a in the deep
// right tail. Exponential proposal truncated to the interval, then an
// accept step that is exact for the Gaussian target (Robert 1995).
double deep_tail_sample(double a, double b, Rng& rng) {
    double rate = 0.5 * (a + std::sqrt(a * a + 4.0));
    double cap = (b == kInf) ? 1.0 : -std::expm1(-rate * (b - a));
    double peak = (rate < b) ? 0.0 : (b - rate);  // sup of -(z-rate)^2/2 over (a,b)
    for (;;) {
        double w = -std::log1p(-rng.uniform_open() * cap) / rate;
        double z = a + w;
        double dz = z - rate;
        if (std::log(rng.uniform_open()) <= 0.5 * (peak * peak - dz * dz)) return z;
    }
}

// Inverse-CDF draw on the survival scale: valid for 0 <= a < b with
// sf(a) still representable.
double right_tail_inverse(double a, double b, Rng& rng) {
    double qa = normal_sf(a);
    double qb = (b == kInf) ? 0.0 : normal_sf(b);
    double u = rng.uniform_open();
    double q = qb + u * (qa - qb);
    return -normal_quantile(q);
}

double standard_truncated(double a, double b, Rng& rng) {
    if (a == -kInf && b == kInf) return normal_quantile(rng.uniform_open());
    if (b <= 0.0) return -standard_truncated(-b, -a, rng);
    if (a >= 8.0) return deep_tail_sample(a, b, rng);
    if (a >= 0.0) return right_tail_inverse(a, b, rng);
    // interval straddles the mean: plain CDF scale is well conditioned
    double fa = normal_cdf(a);
    double fb = normal_cdf(b);
    double u = rng.uniform_open();
    return normal_quantile(fa + u * (fb - fa));
}

}  // namespace

double truncated_normal_sample(double mean, double sd, double lo, double hi, Rng& rng) {
    if (!(sd > 0.0)) {
        throw ValidationError("truncated normal: sd must be positive");
    }
    if (!(lo < hi)) {
        throw IntervalError("truncated normal: empty interval (lo >= hi)");
    }
    double a = (lo == -kInf) ? -kInf : (lo - mean) / sd;
    double b = (hi == kInf) ? kInf : (hi - mean) / sd;
    double z = standard_truncated(a, b, rng);
    double x = mean + sd * z;
    // quantile rounding can land on a bound; nudge inside
    if (x <= lo) x = std::nextafter(lo, kInf);
    if (x >= hi) x = std::nextafter(hi, -kInf);
    return x;
}

double Rng::normal() { return normal_quantile(uniform_open()); }

}  // namespace rankfit
