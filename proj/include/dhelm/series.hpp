#pragma once

#include <algorithm>
#include <cassert>
#include <complex>
#include <stdexcept>
#include <vector>

#include "dhelm/types.hpp"

namespace dhelm {

/// Truncated Taylor series about a fixed expansion point in a fixed local
/// variable. Arithmetic is exact through the stored order; products and
/// quotients truncate. Scalar is a std::complex type (the residue engines
/// instantiate with complex<long double> to survive the coefficient growth
/// of high-order expansions).
template <typename C>
class SeriesT {
public:
    using scalar_type = C;
    using real_type = typename C::value_type;

    SeriesT() : c_(1, C(0)) {}
    explicit SeriesT(int order) : c_(static_cast<size_t>(order) + 1, C(0)) {}
    SeriesT(std::vector<C> coeffs) : c_(std::move(coeffs)) {
        if (c_.empty()) c_.assign(1, C(0));
    }

    static SeriesT constant(C v, int order) {
        SeriesT s(order);
        s.c_[0] = v;
        return s;
    }
    /// The local variable itself.
    static SeriesT var(int order) {
        SeriesT s(order);
        if (order >= 1) s.c_[1] = C(1);
        return s;
    }

    int order() const { return static_cast<int>(c_.size()) - 1; }
    const C& operator[](int k) const { return c_[static_cast<size_t>(k)]; }
    C& operator[](int k) { return c_[static_cast<size_t>(k)]; }
    const std::vector<C>& coeffs() const { return c_; }

    SeriesT truncated(int order) const {
        SeriesT r(order);
        const int n = std::min(order, this->order());
        for (int k = 0; k <= n; ++k) r.c_[k] = c_[k];
        return r;
    }

    friend SeriesT operator+(const SeriesT& a, const SeriesT& b) {
        SeriesT r(std::min(a.order(), b.order()));
        for (int k = 0; k <= r.order(); ++k) r.c_[k] = a.c_[k] + b.c_[k];
        return r;
    }
    friend SeriesT operator-(const SeriesT& a, const SeriesT& b) {
        SeriesT r(std::min(a.order(), b.order()));
        for (int k = 0; k <= r.order(); ++k) r.c_[k] = a.c_[k] - b.c_[k];
        return r;
    }
    SeriesT operator-() const {
        SeriesT r = *this;
        for (auto& v : r.c_) v = -v;
        return r;
    }
    friend SeriesT operator*(const SeriesT& a, C s) {
        SeriesT r = a;
        for (auto& v : r.c_) v *= s;
        return r;
    }
    friend SeriesT operator*(C s, const SeriesT& a) { return a * s; }

    friend SeriesT operator*(const SeriesT& a, const SeriesT& b) {
        SeriesT r(std::min(a.order(), b.order()));
        for (int k = 0; k <= r.order(); ++k) {
            C acc(0);
            for (int j = 0; j <= k; ++j) acc += a.c_[j] * b.c_[k - j];
            r.c_[k] = acc;
        }
        return r;
    }

    /// 1/this; requires a nonzero constant term.
    SeriesT reciprocal() const {
        if (c_[0] == C(0))
            throw std::domain_error("SeriesT::reciprocal: zero constant term");
        SeriesT r(order());
        r.c_[0] = C(1) / c_[0];
        for (int k = 1; k <= order(); ++k) {
            C acc(0);
            for (int j = 1; j <= k; ++j) acc += c_[j] * r.c_[k - j];
            r.c_[k] = -acc / c_[0];
        }
        return r;
    }

    friend SeriesT operator/(const SeriesT& a, const SeriesT& b) {
        return a * b.reciprocal().truncated(std::min(a.order(), b.order()));
    }

    /// Square root with the branch whose constant term is `root0`
    /// (root0^2 must equal the series constant term).
    SeriesT sqrt_branch(C root0) const {
        if (c_[0] == C(0))
            throw std::domain_error("SeriesT::sqrt_branch: zero constant term");
        SeriesT r(order());
        r.c_[0] = root0;
        for (int k = 1; k <= order(); ++k) {
            C acc(0);
            for (int j = 1; j < k; ++j) acc += r.c_[j] * r.c_[k - j];
            r.c_[k] = (c_[k] - acc) / (C(2) * root0);
        }
        return r;
    }
    SeriesT sqrt_principal() const { return sqrt_branch(std::sqrt(c_[0])); }

    /// Integer power; negative exponents go through reciprocal().
    SeriesT pow_int(int n) const {
        if (n < 0) return reciprocal().pow_int(-n);
        SeriesT r = constant(C(1), order());
        SeriesT base = *this;
        unsigned e = static_cast<unsigned>(n);
        while (e) {
            if (e & 1u) r = r * base;
            base = base * base;
            e >>= 1;
        }
        return r;
    }

    SeriesT derivative() const {
        SeriesT r(std::max(order() - 1, 0));
        for (int k = 1; k <= order(); ++k) r.c_[k - 1] = C(real_type(k)) * c_[k];
        return r;
    }
    /// Antiderivative vanishing at the expansion point.
    SeriesT antiderivative() const {
        SeriesT r(order() + 1);
        for (int k = 0; k <= order(); ++k) r.c_[k + 1] = c_[k] / C(real_type(k + 1));
        return r;
    }

    C eval(C z) const {
        C acc(0);
        for (int k = order(); k >= 0; --k) acc = acc * z + c_[k];
        return acc;
    }

    /// Composition this(g(z)) for g with zero constant term.
    SeriesT compose(const SeriesT& g) const {
        if (g.c_[0] != C(0))
            throw std::domain_error("SeriesT::compose: inner series must vanish at 0");
        const int n = std::min(order(), g.order());
        SeriesT r = constant(c_[n], n);
        for (int k = n - 1; k >= 0; --k) {
            r = r * g;
            r.c_[0] += c_[k];
        }
        return r;
    }

    real_type max_abs() const {
        real_type m(0);
        for (const auto& v : c_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    std::vector<C> c_;
};

using PowerSeries  = SeriesT<cplx>;
using PowerSeriesL = SeriesT<cplxl>;

/// Laurent element: z^lead * unit(z) with unit a plain Taylor series.
template <typename C>
struct LaurentT {
    int lead = 0;
    SeriesT<C> unit;

    /// Coefficient of z^k.
    C coeff(int k) const {
        const int idx = k - lead;
        if (idx < 0 || idx > unit.order()) return C(0);
        return unit[idx];
    }
    C residue() const { return coeff(-1); }

    friend LaurentT operator*(const LaurentT& a, const LaurentT& b) {
        return {a.lead + b.lead, a.unit * b.unit};
    }
    friend LaurentT operator*(const LaurentT& a, const SeriesT<C>& b) {
        return {a.lead, a.unit * b};
    }
};

using Laurent  = LaurentT<cplx>;
using LaurentL = LaurentT<cplxl>;

} // namespace dhelm
