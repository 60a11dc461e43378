#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <string_view>
#include <vector>

namespace sourcewave {

using Complex = std::complex<double>;

inline constexpr Complex I{0.0, 1.0};

/// Mass and reduced Planck constant in atomic units. Every figure scenario
/// uses m = 1, hbar = 1.
struct PhysicalConstants {
    double mass = 1.0;
    double hbar = 1.0;

    double planck() const noexcept { return 2.0 * std::numbers::pi * hbar; }

    static PhysicalConstants atomic_units() noexcept { return {}; }
};

void validate(const PhysicalConstants& consts, std::string_view operation);

/// Throws a domain error naming `operation` unless both components are finite.
void require_finite(Complex z, std::string_view operation);
void require_finite(double x, std::string_view operation);

/// Faddeeva function w(z) = exp(-z^2) erfc(-iz).
///
/// The upper half-plane uses the Poppe-Wijers combination of a power series,
/// a Taylor expansion driven by the Laplace continued fraction, and the bare
/// continued fraction far from the origin. The lower half-plane follows from
/// w(z) = 2 exp(-z^2) - w(-z).
Complex faddeeva_w(Complex z);

/// exp(-z^2) erfc(z) for Re z >= 0 along rays where erfc alone under- or
/// overflows; equal to w(iz).
inline Complex scaled_erfc(Complex z) { return faddeeva_w(I * z); }

/// z^exponent on the branch whose cut runs along the negative imaginary axis,
/// so arg z is taken in (-pi/2, 3pi/2). Negative reals map to arg = pi.
/// Throws a branch error for z on the open negative imaginary axis.
Complex root_lower_cut(Complex z, double exponent, std::string_view operation);

/// Momentum p_+ = (2mE)^{1/2} on the branch continuous across the positive
/// real energy axis; positive imaginary for real E < 0.
Complex p_plus(Complex energy, double mass);

/// Momentum relative to the upper level of a step of height p0^2/2m.
///
/// q = (p^2 - p0^2)^{1/2} with the cut joining -p0 and p0 displaced just below
/// the real axis: real p in (-p0, p0) gives +i(p0^2 - p^2)^{1/2}, p < -p0 gives
/// the negative root and p = i*gamma gives i(gamma^2 + p0^2)^{1/2}.
Complex q_of_p(Complex p, double p0);

/// Gauss-Legendre rule on [-1, 1].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const QuadratureRule& gauss_legendre(std::size_t order);

} // namespace sourcewave
