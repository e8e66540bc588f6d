#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "dhelm/types.hpp"

namespace dhelm {

/// Dispersion function of the square-lattice Helmholtz stencil,
///   Dhat(x,y) = x + 1/x + y + 1/y - 4 + K^2.
/// Plane waves x^m y^n solve the homogeneous stencil exactly when Dhat = 0.
template <typename C>
C dispersion_t(C x, C y, C k2) {
    if (x == C(0) || y == C(0))
        throw std::domain_error("dispersion: x and y must be nonzero");
    return x + C(1) / x + y + C(1) / y - C(4) + k2;
}

inline cplx dispersion(cplx x, cplx y, const Wavenumber& K) {
    return dispersion_t<cplx>(x, y, K.k2());
}

/// Both roots of y^2 + (K^2 - 4 + x + 1/x) y + 1 = 0.
/// .first is the smaller-modulus root (the physical sheet on |x| = 1),
/// .second the larger; their product is 1 exactly, so the small root is
/// computed as the reciprocal of the cancellation-free large root.
template <typename C>
std::pair<C, C> xi_pair_t(C x, C k2) {
    if (x == C(0)) throw std::domain_error("xi: x must be nonzero");
    const C b = k2 - C(4) + x + C(1) / x;
    const C s = sqrt_toward(b * b - C(4), b);
    const C ybig = -(b + s) / C(2);
    return {C(1) / ybig, ybig};
}

/// Smaller-modulus root Xi(x) of the dispersion equation at fixed x.
/// `tol_deg`: rejects x whose two roots have equal modulus within this
/// tolerance (x at or near a branch cut); callers must perturb there.
inline cplx xi(cplx x, const Wavenumber& K, double tol_deg = 1e-12) {
    auto [ysm, ybig] = xi_pair_t<cplx>(x, K.k2());
    if (std::abs(std::abs(ybig) - 1.0) < tol_deg)
        throw degeneracy_error("xi: roots of equal modulus (x on a branch cut)");
    return ysm;
}
inline cplx xi_outer(cplx x, const Wavenumber& K, double tol_deg = 1e-12) {
    auto [ysm, ybig] = xi_pair_t<cplx>(x, K.k2());
    if (std::abs(std::abs(ybig) - 1.0) < tol_deg)
        throw degeneracy_error("xi: roots of equal modulus (x on a branch cut)");
    (void)ysm;
    return ybig;
}

enum class Sheet { Inner, Outer };

/// A point (x, y) of the dispersion surface with the root choice recorded.
struct SurfacePoint {
    cplx x;
    cplx y;
    Sheet sheet = Sheet::Inner;

    static SurfacePoint inner(cplx x, const Wavenumber& K) { return {x, xi(x, K), Sheet::Inner}; }
    static SurfacePoint outer(cplx x, const Wavenumber& K) { return {x, xi_outer(x, K), Sheet::Outer}; }
    /// Classify an explicit root by modulus.
    static SurfacePoint classify(cplx x, cplx y) {
        return {x, y, std::abs(y) <= 1.0 ? Sheet::Inner : Sheet::Outer};
    }
};

inline double surface_residual(const SurfacePoint& p, const Wavenumber& K) {
    const double scale = std::max(1.0, std::abs(p.x) + std::abs(1.0 / p.x) +
                                           std::abs(p.y) + std::abs(1.0 / p.y));
    return std::abs(dispersion(p.x, p.y, K)) / scale;
}

/// The four branch points of Xi. eta21, eta22 lie inside the unit circle,
/// eta11, eta12 outside; eta11*eta21 = eta12*eta22 = 1.
struct BranchPointSet {
    cplx eta11, eta12, eta21, eta22;

    std::array<cplx, 4> all() const { return {eta11, eta12, eta21, eta22}; }

    /// Monic quartic (x-eta11)(x-eta12)(x-eta21)(x-eta22); equals Upsilon^2.
    cplx quartic(cplx x) const {
        return (x - eta11) * (x - eta12) * (x - eta21) * (x - eta22);
    }
    template <typename C>
    C quartic_t(C x) const {
        return (x - C(eta11)) * (x - C(eta12)) * (x - C(eta21)) * (x - C(eta22));
    }
};

inline BranchPointSet branch_points(const Wavenumber& K) {
    auto pair_for = [&](cplx d) -> std::pair<cplx, cplx> {
        const cplx s = sqrt_toward(d * d - cplx(4), d);
        const cplx rbig = -(d + s) / 2.0;   // constructive sum: |rbig| >= 1
        return {cplx(1) / rbig, rbig};      // {inside, outside}
    };
    const cplx k2 = K.k2();
    auto [in1, out1] = pair_for(k2 - 2.0);
    auto [in2, out2] = pair_for(k2 - 6.0);
    BranchPointSet b{out1, out2, in1, in2};
    const double tol = 1e-10;
    if (std::abs(std::abs(out1) - 1.0) < tol || std::abs(std::abs(out2) - 1.0) < tol)
        throw degeneracy_error("branch_points: a root pair sits on the unit circle");
    for (cplx a : {b.eta11, b.eta12})
        for (cplx c : {b.eta21, b.eta22})
            if (std::abs(a - c) < tol)
                throw degeneracy_error("branch_points: coincident branch points");
    if (std::abs(b.eta11 - b.eta12) < tol || std::abs(b.eta21 - b.eta22) < tol)
        throw degeneracy_error("branch_points: coincident branch points");
    return b;
}

/// Upsilon(x) = x (y - 1/y) on the requested sheet; its square is the
/// monic quartic over the branch points.
inline cplx upsilon(cplx x, Sheet sheet, const Wavenumber& K) {
    const cplx y = (sheet == Sheet::Inner) ? xi(x, K) : xi_outer(x, K);
    return x * (y - 1.0 / y);
}
inline cplx upsilon(const SurfacePoint& p) { return p.x * (p.y - 1.0 / p.y); }

/// Lattice plane wave x^m y^n.
template <typename C>
C ipow(C base, long long e) {
    if (e < 0) return C(1) / ipow(base, -e);
    C r(1), b = base;
    unsigned long long u = static_cast<unsigned long long>(e);
    while (u) {
        if (u & 1ull) r *= b;
        b *= b;
        u >>= 1;
    }
    return r;
}

inline cplx plane_wave(long long m, long long n, const SurfacePoint& p) {
    return ipow(p.x, m) * ipow(p.y, n);
}

/// Overflow-safe representation: log|w| and arg(w) of the plane wave.
inline std::pair<double, double> plane_wave_log(long long m, long long n, const SurfacePoint& p) {
    const double lm = double(m) * std::log(std::abs(p.x)) + double(n) * std::log(std::abs(p.y));
    const double ph = double(m) * std::arg(p.x) + double(n) * std::arg(p.y);
    return {lm, ph};
}

/// Density of the surface 1-form Psi in the x chart: 1/(x (y - 1/y)).
/// Psi itself is holomorphic on the whole surface; this chart density is
/// singular only at the branch points, where the y chart takes over.
inline cplx psi_integrand(const SurfacePoint& p, double tol = 1e-9) {
    const cplx d = p.y - 1.0 / p.y;
    if (std::abs(d) < tol)
        throw degeneracy_error("psi_integrand: branch point (y - 1/y vanishes)");
    return 1.0 / (p.x * d);
}

/// Incident lattice plane wave pinned to the real-wave branch.
struct IncidentWave {
    double phi_in = 0.0;
    cplx x_in, y_in;
    cplxl x_in_l, y_in_l;   // long-double-consistent copies for the residue engines

    SurfacePoint point() const { return SurfacePoint::classify(x_in, y_in); }
};

namespace detail {

/// Solve the coupled system Dhat(x,y;Ks)=0, (y-1/y) = t (x-1/x) by Newton.
template <typename C>
bool newton_ratio_point(C& x, C& y, C k2, C t, int iters = 60,
                        typename C::value_type tol = 1e4 * std::numeric_limits<typename C::value_type>::epsilon()) {
    using R = typename C::value_type;
    for (int it = 0; it < iters; ++it) {
        const C g1 = x + C(1) / x + y + C(1) / y - C(4) + k2;
        const C g2 = (y - C(1) / y) - t * (x - C(1) / x);
        const C a = C(1) - C(1) / (x * x), b = C(1) - C(1) / (y * y);
        const C c = -t * (C(1) + C(1) / (x * x)), d = C(1) + C(1) / (y * y);
        const C det = a * d - b * c;
        if (det == C(0)) return false;
        const C dx = (g1 * d - g2 * b) / det;
        const C dy = (a * g2 - c * g1) / det;
        x -= dx;
        y -= dy;
        if (std::abs(dx) + std::abs(dy) < tol * (R(1) + std::abs(x) + std::abs(y))) {
            // one extra polish step, then accept
            if (it > 0) return true;
        }
    }
    const C g1 = x + C(1) / x + y + C(1) / y - C(4) + k2;
    const C g2 = (y - C(1) / y) - t * (x - C(1) / x);
    return std::abs(g1) + std::abs(g2) < R(1e-10);
}

/// Real-K seed on the real-wave circle for ratio (y-1/y)/(x-1/x) = t, |t| <= 1.
/// Returns (xi1, xi2) real with x = e^{i xi1}, y = e^{i xi2}.
inline std::pair<double, double> real_seed_ratio_le1(double kre, double t) {
    const double c = (4.0 - kre * kre) / 2.0;
    auto g = [&](double a) {
        const double s = t * std::sin(a);
        return std::cos(a) + std::sqrt(std::max(0.0, 1.0 - s * s)) - c;
    };
    double lo = 0.0, hi = pi;
    if (g(lo) <= 0.0 || g(hi) >= 0.0)
        throw convergence_error("real_wave seed: no bracket (K outside operating range?)");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) > 0.0 ? lo : hi) = mid;
    }
    const double xi1 = 0.5 * (lo + hi);
    const double s2 = t * std::sin(xi1);
    const double xi2 = std::atan2(s2, std::sqrt(std::max(0.0, 1.0 - s2 * s2)));
    return {xi1, xi2};
}

/// Continuation from Im K = 0 to the target K along the real-wave branch.
/// `t` is the target ratio (y-1/y)/(x-1/x); |t| <= 1 is required here, the
/// caller swaps the roles of x and y otherwise.
inline std::pair<cplx, cplx> track_ratio_point(const Wavenumber& K, double t, int steps = 8) {
    auto [xi1, xi2] = real_seed_ratio_le1(K.value().real(), t);
    cplx x = std::polar(1.0, xi1), y = std::polar(1.0, xi2);
    for (int s = 1; s <= steps; ++s) {
        const cplx ks{K.value().real(), K.value().imag() * double(s) / steps};
        if (!newton_ratio_point<cplx>(x, y, ks * ks, cplx(t)))
            throw convergence_error("real_wave continuation: Newton failed");
    }
    return {x, y};
}

} // namespace detail

/// Point of the real-wave branch with propagation angle phi: solves
/// tan(phi) (x - 1/x) = (y - 1/y) jointly with the dispersion equation,
/// picking the branch that limits to |x| = |y| = 1 as Im K -> 0.
inline IncidentWave real_wave_point(double phi_in, const Wavenumber& K) {
    if (!(std::abs(phi_in) < pi / 2))
        throw std::invalid_argument("real_wave_point: phi_in must lie in (-pi/2, pi/2)");
    const double t = std::tan(phi_in);
    cplx x, y;
    if (std::abs(t) <= 1.0) {
        auto [xx, yy] = detail::track_ratio_point(K, t);
        x = xx;
        y = yy;
    } else {
        auto [yy, xx] = detail::track_ratio_point(K, 1.0 / t);  // swapped roles
        x = xx;
        y = yy;
    }
    if (!(std::abs(x) < 1.0))
        throw convergence_error("real_wave_point: landed off the |x|<1 branch");
    // long-double polish for downstream consistency-sensitive algebra
    cplxl xl{x.real(), x.imag()}, yl{y.real(), y.imag()};
    detail::newton_ratio_point<cplxl>(xl, yl, K.k2_l(), cplxl((long double)t), 8);
    IncidentWave w;
    w.phi_in = phi_in;
    w.x_in_l = xl;
    w.y_in_l = yl;
    w.x_in = cplx{(double)xl.real(), (double)xl.imag()};
    w.y_in = cplx{(double)yl.real(), (double)yl.imag()};
    return w;
}

/// The two real-wave-branch solutions of (y - 1/y)/(x - 1/x) = n/m,
/// i.e. the stationary points of x^m y^n along the surface.
inline std::pair<SurfacePoint, SurfacePoint> saddle_points(long long m, long long n, const Wavenumber& K) {
    if (m == 0 && n == 0)
        throw std::invalid_argument("saddle_points: (m,n) must be nonzero");
    if (n == 0) {
        // ratio 0: y - 1/y = 0, the branch points with y = 1
        const auto b = branch_points(K);
        return {SurfacePoint{b.eta21, cplx(1.0), Sheet::Inner},
                SurfacePoint{b.eta11, cplx(1.0), Sheet::Outer}};
    }
    if (m == 0) {
        // x - 1/x = 0 with x = 1; the two y roots mirror the n = 0 case
        const auto b = branch_points(K);
        return {SurfacePoint{cplx(1.0), b.eta21, Sheet::Inner},
                SurfacePoint{cplx(1.0), b.eta11, Sheet::Outer}};
    }
    const double t = double(n) / double(m);
    cplx x, y;
    if (std::abs(t) <= 1.0) {
        auto [xx, yy] = detail::track_ratio_point(K, t);
        x = xx;
        y = yy;
    } else {
        auto [yy, xx] = detail::track_ratio_point(K, 1.0 / t);
        x = xx;
        y = yy;
    }
    return {SurfacePoint::classify(x, y), SurfacePoint::classify(1.0 / x, 1.0 / y)};
}

} // namespace dhelm
