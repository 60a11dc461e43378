#include "sourcewave/numerics.hpp"

#include "sourcewave/errors.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <string>

namespace sourcewave {

namespace {

constexpr double two_over_sqrt_pi = 1.12837916709551257388;

// Poppe & Wijers, ACM TOMS 680, restricted to x >= 0, y >= 0.
Complex faddeeva_first_quadrant(double x_abs, double y_abs)
{
    const double xs = x_abs / 6.3;
    const double ys = y_abs / 4.4;
    double qrho = xs * xs + ys * ys;
    const double x_quad = x_abs * x_abs - y_abs * y_abs;
    const double y_quad = 2.0 * x_abs * y_abs;

    if (qrho < 0.085264) {
        // power series of erfc about the origin
        qrho = (1.0 - 0.85 * ys) * std::sqrt(qrho);
        const int n = static_cast<int>(std::lround(6.0 + 72.0 * qrho));
        int j = 2 * n + 1;
        double x_sum = 1.0 / j;
        double y_sum = 0.0;
        for (int i = n; i >= 1; --i) {
            j -= 2;
            const double x_aux = (x_sum * x_quad - y_sum * y_quad) / i;
            y_sum = (x_sum * y_quad + y_sum * x_quad) / i;
            x_sum = x_aux + 1.0 / j;
        }
        const double u1 = -two_over_sqrt_pi * (x_sum * y_abs + y_sum * x_abs) + 1.0;
        const double v1 = two_over_sqrt_pi * (x_sum * x_abs - y_sum * y_abs);
        const double e = std::exp(-x_quad);
        const double u2 = e * std::cos(y_quad);
        const double v2 = -e * std::sin(y_quad);
        return {u1 * u2 - v1 * v2, u1 * v2 + v1 * u2};
    }

    double h = 0.0;
    int kapn = 0;
    int nu = 0;
    if (qrho > 1.0) {
        qrho = std::sqrt(qrho);
        nu = static_cast<int>(3.0 + 1442.0 / (26.0 * qrho + 77.0));
    } else {
        qrho = (1.0 - ys) * std::sqrt(1.0 - qrho);
        h = 1.88 * qrho;
        kapn = static_cast<int>(std::lround(7.0 + 34.0 * qrho));
        nu = static_cast<int>(std::lround(16.0 + 26.0 * qrho));
    }
    const bool taylor = h > 0.0;
    const double h2 = 2.0 * h;
    double qlambda = taylor ? std::pow(h2, kapn) : 0.0;

    double rx = 0.0, ry = 0.0, sx = 0.0, sy = 0.0;
    for (int n = nu; n >= 0; --n) {
        const double np1 = n + 1.0;
        double tx = y_abs + h + np1 * rx;
        const double ty = x_abs - np1 * ry;
        const double c = 0.5 / (tx * tx + ty * ty);
        rx = c * tx;
        ry = c * ty;
        if (taylor && n <= kapn) {
            tx = qlambda + sx;
            sx = rx * tx - ry * sy;
            sy = ry * tx + rx * sy;
            qlambda /= h2;
        }
    }
    double u = taylor ? two_over_sqrt_pi * sx : two_over_sqrt_pi * rx;
    const double v = taylor ? two_over_sqrt_pi * sy : two_over_sqrt_pi * ry;
    if (y_abs == 0.0)
        u = std::exp(-x_abs * x_abs);
    return {u, v};
}

Complex faddeeva_upper(Complex z)
{
    const Complex w = faddeeva_first_quadrant(std::abs(z.real()), z.imag());
    // w(-conj z) = conj w(z)
    return z.real() < 0.0 ? std::conj(w) : w;
}

QuadratureRule build_gauss_legendre(std::size_t order)
{
    QuadratureRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const std::size_t half = (order + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (std::size_t k = 1; k <= order; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p2) / k;
            }
            dp = order * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        rule.nodes[i] = -x;
        rule.nodes[order - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[order - 1 - i] = w;
    }
    return rule;
}

} // namespace

void validate(const PhysicalConstants& consts, std::string_view operation)
{
    if (!(consts.mass > 0.0) || !(consts.hbar > 0.0) || !std::isfinite(consts.mass) ||
        !std::isfinite(consts.hbar))
        fail(ErrorKind::domain, std::string(operation), "mass and hbar must be positive and finite");
}

void require_finite(Complex z, std::string_view operation)
{
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        fail(ErrorKind::domain, std::string(operation), "non-finite complex argument");
}

void require_finite(double x, std::string_view operation)
{
    if (!std::isfinite(x))
        fail(ErrorKind::domain, std::string(operation), "non-finite argument");
}

Complex faddeeva_w(Complex z)
{
    require_finite(z, "faddeeva_w");
    Complex w;
    if (z.imag() >= 0.0) {
        w = faddeeva_upper(z);
    } else {
        w = 2.0 * std::exp(-z * z) - faddeeva_upper(-z);
    }
    if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
        fail(ErrorKind::domain, "faddeeva_w", "result overflows deep in the lower half-plane");
    return w;
}

Complex root_lower_cut(Complex z, double exponent, std::string_view operation)
{
    require_finite(z, operation);
    if (z.real() == 0.0 && z.imag() < 0.0)
        fail(ErrorKind::branch, std::string(operation), "argument lies on the negative imaginary cut");
    if (z == Complex{0.0, 0.0})
        return {0.0, 0.0};
    const double modulus = std::pow(std::abs(z), exponent);
    if (z.imag() == 0.0) {
        if (z.real() > 0.0)
            return {modulus, 0.0};
        if (exponent == 0.5)
            return {0.0, modulus};
        return std::polar(modulus, exponent * std::numbers::pi);
    }
    double arg = std::atan2(z.imag(), z.real());
    if (arg < -0.5 * std::numbers::pi)
        arg += 2.0 * std::numbers::pi;
    return std::polar(modulus, exponent * arg);
}

Complex p_plus(Complex energy, double mass)
{
    if (!(mass > 0.0))
        fail(ErrorKind::domain, "p_plus", "mass must be positive");
    if (energy.real() == 0.0 && energy.imag() < 0.0)
        fail(ErrorKind::branch, "p_plus", "energy lies on the negative imaginary cut");
    return root_lower_cut(2.0 * mass * energy, 0.5, "p_plus");
}

Complex q_of_p(Complex p, double p0)
{
    require_finite(p, "q_of_p");
    if (!(p0 >= 0.0) || !std::isfinite(p0))
        fail(ErrorKind::domain, "q_of_p", "threshold momentum must be non-negative");
    // Real p is read as p + i0: the cut sits just below the axis.
    const Complex pp{p.real(), p.imag() == 0.0 ? 0.0 : p.imag()};
    return std::sqrt(pp - p0) * std::sqrt(pp + p0);
}

const QuadratureRule& gauss_legendre(std::size_t order)
{
    static std::mutex mutex;
    static std::map<std::size_t, QuadratureRule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(order);
    if (it == cache.end())
        it = cache.emplace(order, build_gauss_legendre(order)).first;
    return it->second;
}

} // namespace sourcewave
