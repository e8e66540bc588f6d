#pragma once

#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <cmath>

namespace dhelm {

using cplx  = std::complex<double>;
using cplxl = std::complex<long double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr long double pil = 3.141592653589793238462643383279502884L;

inline const cplx  iu{0.0, 1.0};
inline const cplxl iul{0.0L, 1.0L};

/// Relative tolerance used for on-surface residual checks.
inline constexpr double tol_disp = 1e-10;

/// Thrown when an input sits too close to a degenerate configuration
/// (coincident roots, branch-point collisions, poles on contours).
class degeneracy_error : public std::runtime_error {
public:
    explicit degeneracy_error(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when an iterative solve fails to converge.
class convergence_error : public std::runtime_error {
public:
    explicit convergence_error(const std::string& what) : std::runtime_error(what) {}
};

template <typename T>
std::complex<T> csqr(const std::complex<T>& z) { return z * z; }

/// Square root branch cut along the ray from the origin opposite to `ref`:
/// returns the root closer in direction to ref (i.e. Re(conj(ref)*root) >= 0).
template <typename T>
std::complex<T> sqrt_toward(const std::complex<T>& z, const std::complex<T>& ref) {
    std::complex<T> r = std::sqrt(z);
    if (std::real(std::conj(ref) * r) < T(0)) r = -r;
    return r;
}

/// Dimensionless lattice wavenumber with positive attenuation.
/// Im(K) > 0 enforces the limiting absorption principle; the recommended
/// operating range 0 < Re(K) < 2 keeps the four branch points of the
/// dispersion relation well separated.
class Wavenumber {
public:
    explicit Wavenumber(cplx k) : k_(k) {
        if (!(k.imag() > 0.0))
            throw std::invalid_argument("Wavenumber: Im(K) must be positive");
        // Branch points collide when (K^2-2)^2 = 4 or (K^2-6)^2 = 4.
        const cplx k2 = k * k;
        if (std::abs(csqr(k2 - 2.0) - 4.0) < 1e-12 || std::abs(csqr(k2 - 6.0) - 4.0) < 1e-12)
            throw degeneracy_error("Wavenumber: branch points collide for this K");
    }
    Wavenumber(double re, double im) : Wavenumber(cplx{re, im}) {}

    cplx  value() const { return k_; }
    cplx  k2() const { return k_ * k_; }
    cplxl value_l() const { return cplxl{k_.real(), k_.imag()}; }
    cplxl k2_l() const { return value_l() * value_l(); }

private:
    cplx k_;
};

} // namespace dhelm
