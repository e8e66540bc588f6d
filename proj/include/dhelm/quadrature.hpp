#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "dhelm/types.hpp"

namespace dhelm {

/// Gauss-Legendre nodes/weights on [-1, 1], computed by Newton on the
/// Legendre recurrence (standard Golub-free construction, good to eps).
template <typename R>
struct GaussLegendre {
    std::vector<R> nodes, weights;

    explicit GaussLegendre(int n) : nodes(n), weights(n) {
        for (int i = 0; i < n; ++i) {
            R x = std::cos(R(pil) * (R(i) + R(0.75L)) / (R(n) + R(0.5L)));
            R dp = 0;
            for (int it = 0; it < 100; ++it) {
                R p0 = 1, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const R p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / R(k);
                    p0 = p1;
                    p1 = p2;
                }
                dp = R(n) * (x * p1 - p0) / (x * x - 1);
                const R dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 4 * std::numeric_limits<R>::epsilon()) break;
            }
            nodes[i] = x;
            weights[i] = 2 / ((1 - x * x) * dp * dp);
        }
    }
};

/// Integral of f over [a, b] by n-point Gauss-Legendre.
template <typename R, typename F>
auto gauss_integrate(const GaussLegendre<R>& gl, R a, R b, F&& f) {
    const R half = (b - a) / 2, mid = (a + b) / 2;
    decltype(f(a)) acc{};
    for (size_t i = 0; i < gl.nodes.size(); ++i)
        acc += gl.weights[i] * f(mid + half * gl.nodes[i]);
    return acc * half;
}

/// Mean of f over the unit circle parameter (periodic trapezoid with M
/// nodes). For integrands analytic in an annulus around |z| = 1 this is
/// spectrally accurate.
template <typename C, typename F>
C circle_mean(int M, F&& f) {
    using R = typename C::value_type;
    C acc{};
    for (int q = 0; q < M; ++q) {
        const R th = 2 * R(pil) * R(q) / R(M);
        acc += f(th);
    }
    return acc / R(M);
}

/// Value plus a two-grid error estimate |I_M - I_{M/2}|.
struct QuadResult {
    cplx value{};
    double error_estimate = 0.0;
    bool converged = true;
};

} // namespace dhelm
