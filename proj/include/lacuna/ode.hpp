#pragma once

// Linear second-order propagation u'' = (q(s) - k^2) u in the interaction picture
// u = A cos(ks) + (B/k) sin(ks), u' = -kA sin(ks) + B cos(ks); for k = 0, u = A + B s, u' = B.
// The rotating frame removes the fast free oscillation so the integrator only sees q.

#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace lacuna {

template <class T>
struct Mat2T {
  T a = 0, b = 0, c = 0, d = 0;  // [[a, b], [c, d]]
  T det() const { return a * d - b * c; }
  T trace() const { return a + d; }
  friend Mat2T operator*(const Mat2T& x, const Mat2T& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
  }
};
using Mat2 = Mat2T<double>;

template <class T>
struct Vec2T {
  T u = 0, du = 0;
};
using Vec2 = Vec2T<double>;

struct OdeOptions {
  double abs_tol = 1e-15;
  double rel_tol = 1e-14;
  double max_step = 1.0 / 64;
};

struct OdeFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

template <class T>
using State4 = std::array<T, 4>;
template <class T>
using State2 = std::array<T, 2>;

template <class T>
struct Frame {
  T k;
  // free propagator U(s) = [[c, s/k], [-k s, c]]; at k = 0, [[1, s], [0, 1]]
  Mat2T<T> U(T s) const {
    if (k == 0) return {1, s, 0, 1};
    T c = std::cos(k * s), sn = std::sin(k * s);
    return {c, sn / k, -k * sn, c};
  }
  Mat2T<T> Uinv(T s) const {
    if (k == 0) return {1, -s, 0, 1};
    T c = std::cos(k * s), sn = std::sin(k * s);
    return {c, -sn / k, k * sn, c};
  }
  // generator of the interaction-picture flow, z' = G z
  Mat2T<T> G(T s, T q) const {
    if (k == 0) return {-q * s, -q * s * s, q, q * s};  // U^{-1} [[0, 0], [q, 0]] U
    T c = std::cos(k * s), sn = std::sin(k * s);
    return {-q * c * sn / k, -q * sn * sn / (k * k), q * c * c, q * c * sn / k};
  }
};

template <class T, class Sys, class X>
void run(Sys sys, X& x, T s0, T s1, const OdeOptions& opt) {
  using namespace boost::numeric::odeint;
  if (s1 == s0) return;
  using Stepper = runge_kutta_fehlberg78<X, T>;
  T span = s1 - s0;
  T hmax = std::min<T>(static_cast<T>(opt.max_step), std::abs(span));
  auto stepper = make_controlled<Stepper>(static_cast<T>(opt.abs_tol), static_cast<T>(opt.rel_tol), hmax, Stepper());
  try {
    if (span > 0) {
      integrate_adaptive(stepper, sys, x, s0, s1, hmax / 4);
    } else {
      // the max_dt guard of the controlled stepper assumes forward time; integrate in sigma = -s
      auto rev = [&](const X& y, X& dy, T sigma) {
        sys(y, dy, -sigma);
        for (auto& v : dy) v = -v;
      };
      integrate_adaptive(stepper, rev, x, -s0, -s1, hmax / 4);
    }
  } catch (const std::exception& e) {
    throw OdeFailure(std::string("ODE integration failed: ") + e.what());
  }
}

}  // namespace detail

// Deviation Z = R - I of the interaction-picture propagator from s0 to s1 (R(s0) = I).
// The direct-frame propagator is U(s1) (I + Z) U(s0)^{-1}.
template <class T, class Q>
Mat2T<T> deviation_propagator(Q q, T k, T s0, T s1, const OdeOptions& opt) {
  detail::Frame<T> fr{k};
  detail::State4<T> z{0, 0, 0, 0};
  auto sys = [&](const detail::State4<T>& x, detail::State4<T>& dx, T s) {
    Mat2T<T> g = fr.G(s, q(s));
    // d/ds (I + Z) = G (I + Z)
    T r11 = 1 + x[0], r12 = x[1], r21 = x[2], r22 = 1 + x[3];
    dx[0] = g.a * r11 + g.b * r21;
    dx[1] = g.a * r12 + g.b * r22;
    dx[2] = g.c * r11 + g.d * r21;
    dx[3] = g.c * r12 + g.d * r22;
  };
  detail::run<T>(sys, z, s0, s1, opt);
  return {z[0], z[1], z[2], z[3]};
}

// Full direct-frame propagator from s0 to s1 (maps (u, u') at s0 to s1).
template <class T, class Q>
Mat2T<T> propagator(Q q, T k, T s0, T s1, const OdeOptions& opt) {
  detail::Frame<T> fr{k};
  Mat2T<T> Z = deviation_propagator<T>(q, k, s0, s1, opt);
  Mat2T<T> R{1 + Z.a, Z.b, Z.c, 1 + Z.d};
  return fr.U(s1) * R * fr.Uinv(s0);
}

// Propagates a single (u, u') vector, returning the values at each requested abscissa
// (monotone, starting after s0). Used for shooting over many cells.
template <class T, class Q>
std::vector<Vec2T<T>> propagate_samples(Q q, T k, T s0, Vec2T<T> y0, const std::vector<T>& stops,
                                        const OdeOptions& opt) {
  detail::Frame<T> fr{k};
  Mat2T<T> Ui = fr.Uinv(s0);
  detail::State2<T> z{Ui.a * y0.u + Ui.b * y0.du, Ui.c * y0.u + Ui.d * y0.du};
  auto sys = [&](const detail::State2<T>& x, detail::State2<T>& dx, T s) {
    Mat2T<T> g = fr.G(s, q(s));
    dx[0] = g.a * x[0] + g.b * x[1];
    dx[1] = g.c * x[0] + g.d * x[1];
  };
  std::vector<Vec2T<T>> out;
  T s = s0;
  for (T stop : stops) {
    detail::run<T>(sys, z, s, stop, opt);
    s = stop;
    Mat2T<T> U = fr.U(s);
    out.push_back({U.a * z[0] + U.b * z[1], U.c * z[0] + U.d * z[1]});
  }
  return out;
}

template <class T, class Q>
Vec2T<T> propagate(Q q, T k, T s0, T s1, Vec2T<T> y0, const OdeOptions& opt) {
  return propagate_samples<T>(q, k, s0, y0, std::vector<T>{s1}, opt).back();
}

}  // namespace lacuna
