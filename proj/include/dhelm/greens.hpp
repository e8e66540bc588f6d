#pragma once

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "dhelm/core.hpp"
#include "dhelm/quadrature.hpp"
#include "dhelm/types.hpp"

namespace dhelm {

// ---------------------------------------------------------------------------
// Double integral representation
// ---------------------------------------------------------------------------

/// Green's function u(m,n) of the lattice Helmholtz equation by the
/// M x M periodic trapezoid rule on the Brillouin square. Spectrally
/// accurate for Im K > 0. The error estimate compares against the nested
/// M/2 subgrid.
inline QuadResult green_double(long long m, long long n, int M, const Wavenumber& K) {
    if (M < 16 || (M % 2) != 0)
        throw std::invalid_argument("green_double: M must be even and >= 16");
    const cplx shift = K.k2() - 4.0;
    cplx full{}, half{};
    for (int j = 0; j < M; ++j) {
        const double x1 = -pi + 2.0 * pi * j / M;
        const cplx em = std::polar(1.0, double(m) * x1);
        cplx row{}, rowh{};
        for (int l = 0; l < M; ++l) {
            const double x2 = -pi + 2.0 * pi * l / M;
            const cplx v = std::polar(1.0, double(n) * x2) /
                           (2.0 * std::cos(x1) + 2.0 * std::cos(x2) + shift);
            row += v;
            if ((l % 2) == 0) rowh += v;
        }
        full += em * row;
        if ((j % 2) == 0) half += em * rowh;
    }
    QuadResult r;
    r.value = full / double(M) / double(M);
    const cplx vhalf = half / double(M / 2) / double(M / 2);
    r.error_estimate = std::abs(r.value - vhalf);
    return r;
}

/// green_double with grid doubling until the two-grid estimate meets tol.
inline QuadResult green_double_adaptive(long long m, long long n, const Wavenumber& K,
                                        double tol = 1e-12, int M0 = 64, int Mmax = 2048) {
    QuadResult r;
    for (int M = M0; M <= Mmax; M *= 2) {
        r = green_double(m, n, M, K);
        if (r.error_estimate <= tol) return r;
    }
    r.converged = false;
    return r;
}

// ---------------------------------------------------------------------------
// Single integral representations
// ---------------------------------------------------------------------------

enum class SingleRep { NPlus, NMinus, MPlus, MMinus, Auto };

struct GreenSingleResult {
    cplx value{};
    double error_estimate = 0.0;
    bool near_cut_warning = false;   // |y - 1/y| dipped below 1e-6 on the contour
    SingleRep rep_used = SingleRep::Auto;
};

namespace detail {

/// One unit-circle contour representation in long double.
/// swapped = false integrates over the x circle (y from the dispersion
/// root), swapped = true over the y circle. `outer` selects the root.
inline cplxl green_single_sum(long long m, long long n, int M, const Wavenumber& K,
                              bool swapped, bool outer, double* min_ydiff) {
    const cplxl k2 = K.k2_l();
    cplxl acc{};
    long double mindist = 1e30L;
    for (int q = 0; q < M; ++q) {
        const long double th = 2 * pil * q / M;
        const cplxl z = std::polar(1.0L, th);
        auto [ysm, ybig] = xi_pair_t<cplxl>(z, k2);
        const cplxl w = outer ? ybig : ysm;
        const cplxl d = w - cplxl(1) / w;
        mindist = std::min(mindist, (long double)std::abs(d));
        // swapped: z plays the role of y, w the role of x
        const cplxl xm = swapped ? ipow(w, m) : ipow(z, m);
        const cplxl yn = swapped ? ipow(z, n) : ipow(w, n);
        acc += xm * yn / d;
    }
    if (min_ydiff) *min_ydiff = (double)mindist;
    const long double sign = outer ? -1.0L : 1.0L;
    return sign * acc / (long double)M;
}

inline SingleRep pick_single_rep(long long m, long long n, int Mprobe, const Wavenumber& K) {
    if (std::llabs(n) > std::llabs(m)) return n >= 0 ? SingleRep::NPlus : SingleRep::NMinus;
    if (std::llabs(m) > std::llabs(n)) return m >= 0 ? SingleRep::MPlus : SingleRep::MMinus;
    // |m| == |n|: two representations remain valid; when they use different
    // root sheets, prefer the one whose root keeps the larger distance from
    // the contour.
    if ((m >= 0) == (n >= 0)) return n >= 0 ? SingleRep::NPlus : SingleRep::NMinus;
    const cplxl k2 = K.k2_l();
    long double margin_in = 1e30L, margin_out = 1e30L;
    for (int q = 0; q < Mprobe; ++q) {
        const cplxl z = std::polar(1.0L, 2 * pil * q / Mprobe);
        auto [ysm, ybig] = xi_pair_t<cplxl>(z, k2);
        margin_in = std::min(margin_in, 1 - std::abs(ysm));
        margin_out = std::min(margin_out, std::abs(ybig) - 1);
    }
    if (n >= 0)  // m <= 0: NPlus (inner) vs MMinus (outer)
        return margin_in >= margin_out ? SingleRep::NPlus : SingleRep::MMinus;
    // m >= 0, n <= 0: MPlus (inner) vs NMinus (outer)
    return margin_in >= margin_out ? SingleRep::MPlus : SingleRep::NMinus;
}

} // namespace detail

/// Green's function by the quadrant-selected single contour integral.
inline GreenSingleResult green_single(long long m, long long n, int M, const Wavenumber& K,
                                      SingleRep rep = SingleRep::Auto) {
    if (rep == SingleRep::Auto) rep = detail::pick_single_rep(m, n, 64, K);
    bool swapped = false, outer = false;
    switch (rep) {
        case SingleRep::NPlus:
            if (n < 0) throw std::invalid_argument("green_single: NPlus needs n >= 0");
            break;
        case SingleRep::NMinus:
            if (n > 0) throw std::invalid_argument("green_single: NMinus needs n <= 0");
            outer = true;
            break;
        case SingleRep::MPlus:
            if (m < 0) throw std::invalid_argument("green_single: MPlus needs m >= 0");
            swapped = true;
            break;
        case SingleRep::MMinus:
            if (m > 0) throw std::invalid_argument("green_single: MMinus needs m <= 0");
            swapped = true;
            outer = true;
            break;
        case SingleRep::Auto: break;
    }
    double mind = 0.0;
    const cplxl vfull = detail::green_single_sum(m, n, M, K, swapped, outer, &mind);
    const cplxl vhalf = detail::green_single_sum(m, n, M / 2, K, swapped, outer, nullptr);
    GreenSingleResult r;
    r.value = cplx{(double)vfull.real(), (double)vfull.imag()};
    r.error_estimate = (double)std::abs(vfull - vhalf);
    r.near_cut_warning = mind < 1e-6;
    r.rep_used = rep;
    return r;
}

/// Long-double single-integral value (used for recursion seeds and
/// high-precision cross-checks).
inline cplxl green_single_l(long long m, long long n, int M, const Wavenumber& K) {
    const SingleRep rep = detail::pick_single_rep(m, n, 64, K);
    bool swapped = (rep == SingleRep::MPlus || rep == SingleRep::MMinus);
    bool outer = (rep == SingleRep::NMinus || rep == SingleRep::MMinus);
    return detail::green_single_sum(m, n, M, K, swapped, outer, nullptr);
}

// ---------------------------------------------------------------------------
// Recursive computation
// ---------------------------------------------------------------------------

enum class GreensMethod { Double, Single, Recursive };

/// Symmetric table of u(m,n) over the window |m| + |n| <= N.
class GreensTable {
public:
    GreensTable(int N, GreensMethod method, const Wavenumber& K)
        : N_(N), method_(method), K_(K.value()), data_((N + 1) * (N + 1), cplx{}) {}

    int nmax() const { return N_; }
    GreensMethod method() const { return method_; }
    cplx wavenumber() const { return K_; }

    /// u(m,n); the four-fold reflection symmetry and m<->n exchange are
    /// built into the accessor.
    cplx u(long long m, long long n) const {
        long long am = std::llabs(m), an = std::llabs(n);
        if (am + an > N_) throw std::out_of_range("GreensTable: outside window");
        return data_[idx(am, an)];
    }
    void set(long long m, long long n, cplx v) { data_[idx(m, n)] = v; }

    bool instability_flag = false;
    long long first_failing_m = 0, first_failing_n = 0;
    double max_spotcheck_dev = 0.0;

private:
    size_t idx(long long m, long long n) const {
        return size_t(std::max(m, n)) * (N_ + 1) + size_t(std::min(m, n));
    }
    int N_;
    GreensMethod method_;
    cplx K_;
    std::vector<cplx> data_;
};

/// Tabulates u over |m|+|n| <= N from two quadrature seeds u(0,0), u(2,0):
/// the axis row via the five-term recursion (its m = 0 instance, combined
/// with the stencil at the origin, yields u(1,0) and u(3,0)); the rest of
/// the table by marching the stencil along diagonals. Three spot checks
/// against quadrature guard against parasitic growth of the recursion.
inline GreensTable green_recursive(int N, const Wavenumber& K, int M_seed = 1024,
                                   double tol_rec = 1e-7) {
    if (N < 1) throw std::invalid_argument("green_recursive: N must be >= 1");
    const cplxl k2 = K.k2_l();
    const cplxl b = k2 - cplxl(4);
    // quartic coefficients of Upsilon^2 = (x^2 + (K^2-4)x + 1)^2 - 4x^2
    const cplxl a0 = 1, a1 = cplxl(2) * b, a2 = b * b - cplxl(2), a3 = cplxl(2) * b;

    const int NR = std::max(N, 3);
    std::vector<cplxl> row(size_t(NR) + 1);
    row[0] = green_single_l(0, 0, M_seed, K);
    if (NR >= 2) row[2] = green_single_l(2, 0, M_seed, K);
    row[1] = (cplxl(1) - b * row[0]) / cplxl(4);   // stencil at the origin
    for (int m = 0; m + 3 <= NR; ++m) {
        const cplxl lm = (long double)m;
        // m = 0 uses u(-1,0) = u(1,0); the m*a0 factor kills that term anyway
        row[m + 3] = -((lm + 1.5L) * a3 * row[m + 2] + (lm + 1.0L) * a2 * row[m + 1] +
                       (lm + 0.5L) * a1 * row[m] + lm * a0 * (m >= 1 ? row[m - 1] : cplxl(0))) /
                     (lm + 2.0L);
    }

    // first-quadrant triangular table in long double
    std::vector<std::vector<cplxl>> T(size_t(N) + 1);
    for (int m = 0; m <= N; ++m) T[m].assign(size_t(N - m) + 1, cplxl{});
    auto tval = [&](long long m, long long n) -> cplxl {
        const long long a = std::max(m, n), c = std::min(m, n);
        return T[size_t(a)][size_t(c)];
    };
    for (int m = 0; m <= N; ++m) T[m][0] = row[m];
    for (int D = 2; D <= N; ++D) {
        for (int n = 1; 2 * n <= D; ++n) {
            const long long cm = D - n, cn = n - 1;  // stencil center
            cplxl v;
            if (n == 1)
                v = -(tval(cm + 1, 0) + tval(cm - 1, 0) + b * tval(cm, 0)) / cplxl(2);
            else
                v = -tval(cm + 1, cn) - tval(cm - 1, cn) - tval(cm, cn - 1) - b * tval(cm, cn);
            T[size_t(std::max(cm, (long long)n))][size_t(std::min(cm, (long long)n))] = v;
        }
    }

    GreensTable tab(N, GreensMethod::Recursive, K);
    for (int m = 0; m <= N; ++m)
        for (int n = 0; m + n <= N; ++n) {
            const cplxl v = tval(m, n);
            tab.set(m, n, cplx{(double)v.real(), (double)v.imag()});
        }

    // spot checks at three deterministic pseudo-random nodes
    unsigned state = 0x9e3779b9u;
    auto next = [&state](int lo, int hi) {
        state = state * 1664525u + 1013904223u;
        return lo + int(state % unsigned(hi - lo + 1));
    };
    for (int s = 0; s < 3 && N >= 2; ++s) {
        const int m = next(0, N);
        const int n = next(0, N - m);
        const cplxl ref = green_single_l(m, n, M_seed, K);
        const double dev = (double)std::abs(tval(m, n) - ref);
        tab.max_spotcheck_dev = std::max(tab.max_spotcheck_dev, dev);
        if (dev > tol_rec && !tab.instability_flag) {
            tab.instability_flag = true;
            tab.first_failing_m = m;
            tab.first_failing_n = n;
        }
    }
    return tab;
}

/// Assembles a table using one of the quadrature representations.
inline GreensTable green_table(int N, const Wavenumber& K, GreensMethod method, int M = 256) {
    if (method == GreensMethod::Recursive) return green_recursive(N, K, std::max(M, 1024));
    GreensTable tab(N, method, K);
    for (int m = 0; m <= N; ++m)
        for (int n = 0; m + n <= N; ++n) {
            if (method == GreensMethod::Double)
                tab.set(m, n, green_double(m, n, M, K).value);
            else
                tab.set(m, n, green_single(m, n, M, K).value);
        }
    return tab;
}

} // namespace dhelm
