#pragma once

// One-dimensional adaptive quadrature on [a, b] and on (0, b] for integrands
// with an integrable singularity at 0.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <functional>
#include <sstream>
#include <string>

#include "qma/error.hpp"

namespace qma {

using RealFunction = std::function<double(double)>;

/// Adaptive Gauss-Kronrod, run on [0, 1] with the integrand normalized by a
/// sampled magnitude: the library's termination test misbehaves on tiny
/// intervals and tiny values.
inline double integrate(const RealFunction& f, double a, double b, double rel_tol = 1e-11) {
  if (a == b) return 0.0;
  double scale = 0.0;
  for (double u : {0.5, 0.25, 0.75, 0.1, 0.9}) scale = std::max(scale, std::abs(f(a + u * (b - a))));
  if (!std::isfinite(scale)) throw NumericalError("quadrature: integrand is not finite");
  if (scale == 0.0 || scale < 1e-300) scale = 1.0;
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      [&](double u) { return f(a + u * (b - a)) / scale; }, 0.0, 1.0, 10, rel_tol, &err);
  if (!std::isfinite(v)) throw NumericalError("quadrature produced a non-finite value");
  return v * scale * (b - a);
}

struct GradedOptions {
  double rel_tol = 1e-11;
  std::size_t max_pieces = 1000;
  std::size_t quiet_pieces = 3;  // consecutive negligible pieces needed to stop
  std::size_t flat_pieces = 200;  // consecutive non-decaying pieces that signal divergence
};

/// Integral over (0, b] split at b 2^{-k}. Pieces are summed from the outside
/// in; throws with a diagnostic if they stop decaying (non-integrable at 0).
inline double integrate_from_zero(const RealFunction& f, double b, const GradedOptions& opt = {}) {
  if (b < 0.0) throw InputError("integrate_from_zero: negative upper limit");
  if (b == 0.0) return 0.0;
  double sum = 0.0;
  double hi = b;
  double prev = 0.0;
  std::size_t quiet = 0;
  std::size_t flat = 0;
  for (std::size_t k = 0; k < opt.max_pieces; ++k) {
    const double lo = hi * 0.5;
    const double piece = integrate(f, lo, hi, opt.rel_tol);
    sum += piece;
    hi = lo;
    // an integrand that vanishes on (b 2^-60, b] is taken to vanish identically
    if (sum == 0.0 && k >= 60) return 0.0;
    if (sum != 0.0 && std::abs(piece) <= opt.rel_tol * std::abs(sum)) {
      if (++quiet >= opt.quiet_pieces) return sum;
    } else {
      quiet = 0;
    }
    flat = (k > 0 && std::abs(piece) >= (1.0 - 1e-3) * std::abs(prev) && piece != 0.0) ? flat + 1 : 0;
    if (flat >= opt.flat_pieces) {
      std::ostringstream os;
      os << "integrand is not integrable at 0: the last " << flat << " dyadic pieces do not decay (down to t = "
         << hi << ", piece " << piece << ")";
      throw NumericalError(os.str());
    }
    prev = piece;
    if (hi == 0.0) break;
  }
  std::ostringstream os;
  os << "integral over (0, " << b << "] did not settle within " << opt.max_pieces << " dyadic pieces";
  throw NumericalError(os.str());
}

}  // namespace qma
