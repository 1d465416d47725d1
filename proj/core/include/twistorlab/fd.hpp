#pragma once

#include <functional>
#include <span>
#include <vector>

namespace twistorlab::fd {

// Central-difference oracles, independent of the jet machinery. Evaluation
// runs in long double (64-bit mantissa on x86) so that nested differences of
// second and third order keep rounding noise well below the comparison
// tolerances.

using RealFn = std::function<long double(std::span<const long double>)>;

// Mixed partial d^alpha f at x by recursively nested central differences,
// one variable at a time, default step 1e-4 per level.
inline long double mixed_partial(const RealFn& f,
                                 std::span<const long double> x,
                                 std::span<const int> alpha,
                                 long double step = 1e-4L) {
  int var = -1;
  for (size_t v = 0; v < alpha.size(); ++v)
    if (alpha[v] > 0) {
      var = static_cast<int>(v);
      break;
    }
  if (var < 0) return f(x);
  std::vector<int> lower(alpha.begin(), alpha.end());
  lower[var] -= 1;
  std::vector<long double> xp(x.begin(), x.end());
  std::vector<long double> xm(x.begin(), x.end());
  xp[var] += step;
  xm[var] -= step;
  long double up = mixed_partial(f, xp, lower, step);
  long double dn = mixed_partial(f, xm, lower, step);
  return (up - dn) / (2.0L * step);
}

inline long double mixed_partial(const RealFn& f,
                                 std::span<const long double> x,
                                 std::initializer_list<int> alpha,
                                 long double step = 1e-4L) {
  return mixed_partial(f, x, std::span<const int>(alpha.begin(), alpha.size()),
                       step);
}

}  // namespace twistorlab::fd
