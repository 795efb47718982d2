#include "chaos/rng.hpp"

#include <cmath>

#include "chaos/errors.hpp"

namespace chaos {

namespace {

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

std::uint64_t splitmix(std::uint64_t z) {
  z += kGamma;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t word_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::uint64_t w = splitmix(seed ^ 0x6a09e667f3bcc908ULL);
  w = splitmix(w ^ stream);
  w = splitmix(w ^ index);
  return w;
}

}  // namespace

std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
  return splitmix(splitmix(a) ^ (b + kGamma));
}

CounterRng CounterRng::fork(std::uint64_t tag) const {
  return CounterRng(mix64(seed_, tag));
}

double CounterRng::uniform(std::uint64_t stream, std::uint64_t index) const {
  // (w >> 11) + 0.5 lies in (0, 2^53), so the result is strictly inside (0,1).
  const std::uint64_t w = word_at(seed_, stream, index);
  return (static_cast<double>(w >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t stream, std::uint64_t index) const {
  return normal_quantile(uniform(stream, index));
}

std::vector<double> CounterRng::normal_vector(std::uint64_t stream, std::size_t n,
                                              std::uint64_t index0) const {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = normal(stream, index0 + i);
  return out;
}

std::vector<double> ball_point(const CounterRng& rng, std::uint64_t stream, std::size_t n,
                               double radius) {
  std::vector<double> v = rng.normal_vector(stream, n);
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  const double u = rng.uniform(stream, n);
  const double scale = norm > 0.0 ? radius * std::pow(u, 1.0 / static_cast<double>(n)) / norm : 0.0;
  for (double& x : v) x *= scale;
  return v;
}

// AS241 (PPND16): maximum relative error around 1e-15 over (0,1).
double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw ValidationError("normal_quantile: p must be in (0,1)");

  static const double a[8] = {
      3.3871328727963666080e0,  1.3314166789178437745e+2, 1.9715909503065514427e+3,
      1.3731693765509461125e+4, 4.5921953931549871457e+4, 6.7265770927008700853e+4,
      3.3430575583588128105e+4, 2.5090809287301226727e+3};
  static const double b[8] = {
      1.0,                      4.2313330701600911252e+1, 6.8718700749205790830e+2,
      5.3941960214247511077e+3, 2.1213794301586595867e+4, 3.9307895800092710610e+4,
      2.8729085735721942674e+4, 5.2264952788528545610e+3};
  static const double c[8] = {
      1.42343711074968357734e0,    4.63033784615654529590e0,
      5.76949722146069140550e0,    3.64784832476320460504e0,
      1.27045825245236838258e0,    2.41780725177450611770e-1,
      2.27238449892691845833e-2,   7.74545014278341407640e-4};
  static const double d[8] = {
      1.0,                         2.05319162663775882187e0,
      1.67638483018380384940e0,    6.89767334985100004550e-1,
      1.48103976427480074590e-1,   1.51986665636164571966e-2,
      5.47593808499534494600e-4,   1.05075007164441684324e-9};
  static const double e[8] = {
      6.65790464350110377720e0,    5.46378491116411436990e0,
      1.78482653991729133580e0,    2.96560571828504891230e-1,
      2.65321895265761230930e-2,   1.24266094738807843860e-3,
      2.71155556874348757815e-5,   2.01033439929228813265e-7};
  static const double f[8] = {
      1.0,                         5.99832206555887937690e-1,
      1.36929880922735805310e-1,   1.48753612908506148525e-2,
      7.86869131145613259100e-4,   1.84631831751005468180e-5,
      1.42151175831644588870e-7,   2.04426310338993978564e-15};

  auto ratpoly = [](const double* num, const double* den, double r) {
    double n = num[7];
    double m = den[7];
    for (int i = 6; i >= 0; --i) {
      n = n * r + num[i];
      m = m * r + den[i];
    }
    return n / m;
  };

  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q * ratpoly(a, b, r);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double v;
  if (r <= 5.0) {
    v = ratpoly(c, d, r - 1.6);
  } else {
    v = ratpoly(e, f, r - 5.0);
  }
  return q < 0.0 ? -v : v;
}

}  // namespace chaos
