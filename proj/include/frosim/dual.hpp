#pragma once

#include <array>
#include <cmath>

namespace frosim::detail {

/// Forward-mode scalar carrying a value and its gradient with respect to a
/// fixed set of N active unknowns. The nonlinear converter equations are
/// written once as templates and instantiated with Dual to assemble exact
/// Jacobian blocks; constants convert implicitly with a zero gradient.
template <int N>
struct Dual {
    double v{};
    std::array<double, N> g{};

    Dual() = default;
    Dual(double value) : v(value) {} // NOLINT: implicit by design

    static Dual active(double value, int slot) {
        Dual d(value);
        d.g[static_cast<std::size_t>(slot)] = 1.0;
        return d;
    }

    Dual operator-() const {
        Dual r(-v);
        for (int i = 0; i < N; ++i) r.g[i] = -g[i];
        return r;
    }

    Dual& operator+=(const Dual& o) {
        v += o.v;
        for (int i = 0; i < N; ++i) g[i] += o.g[i];
        return *this;
    }
    Dual& operator-=(const Dual& o) {
        v -= o.v;
        for (int i = 0; i < N; ++i) g[i] -= o.g[i];
        return *this;
    }

    friend Dual operator+(Dual a, const Dual& b) { return a += b; }
    friend Dual operator-(Dual a, const Dual& b) { return a -= b; }

    friend Dual operator*(const Dual& a, const Dual& b) {
        Dual r(a.v * b.v);
        for (int i = 0; i < N; ++i) r.g[i] = a.g[i] * b.v + a.v * b.g[i];
        return r;
    }
    friend Dual operator*(const Dual& a, double s) {
        Dual r(a.v * s);
        for (int i = 0; i < N; ++i) r.g[i] = a.g[i] * s;
        return r;
    }
    friend Dual operator*(double s, const Dual& a) { return a * s; }

    friend Dual operator/(const Dual& a, const Dual& b) {
        const double inv = 1.0 / b.v;
        Dual r(a.v * inv);
        for (int i = 0; i < N; ++i) r.g[i] = (a.g[i] - r.v * b.g[i]) * inv;
        return r;
    }
    friend Dual operator/(const Dual& a, double s) { return a * (1.0 / s); }
    friend Dual operator/(double s, const Dual& b) { return Dual(s) / b; }
};

template <int N>
Dual<N> sin(const Dual<N>& x) {
    Dual<N> r(std::sin(x.v));
    const double c = std::cos(x.v);
    for (int i = 0; i < N; ++i) r.g[i] = c * x.g[i];
    return r;
}

template <int N>
Dual<N> cos(const Dual<N>& x) {
    Dual<N> r(std::cos(x.v));
    const double s = -std::sin(x.v);
    for (int i = 0; i < N; ++i) r.g[i] = s * x.g[i];
    return r;
}

template <int N>
Dual<N> sqrt(const Dual<N>& x) {
    Dual<N> r(std::sqrt(x.v));
    const double d = 0.5 / r.v;
    for (int i = 0; i < N; ++i) r.g[i] = d * x.g[i];
    return r;
}

/// Plain value of a scalar (double or Dual).
inline double value_of(double x) { return x; }
template <int N>
double value_of(const Dual<N>& x) {
    return x.v;
}

} // namespace frosim::detail
