#include "ars2d/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ars2d {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kMaxAgmIter = 40;

// AGM chain a_0 = 1, b_0 = k'; a_n, c_n in the A&S 16.4 indexing
// (c_n = (a_{n-1} - b_{n-1})/2 belongs to level n).
struct AgmChain {
  double a[kMaxAgmIter + 1];
  double c[kMaxAgmIter + 1];
  int n = 0;  // final level: c_n negligible
};

AgmChain agm_chain(double b0) {
  AgmChain ch;
  double a = 1.0, b = b0;
  ch.a[0] = a;
  ch.c[0] = 0.0;
  for (int i = 1; i <= kMaxAgmIter; ++i) {
    ch.c[i] = 0.5 * (a - b);
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
    ch.a[i] = a;
    ch.n = i;
    if (std::abs(ch.c[i]) <= 1e-17 * a) break;
  }
  return ch;
}

}  // namespace

Modulus::Modulus(double k) {
  if (!(k >= 0.0) || k >= 1.0)
    throw std::domain_error("elliptic modulus must satisfy 0 <= k < 1");
  k_ = k;
  // sqrt((1-k)(1+k)) avoids cancellation for k near 1
  k_prime_ = std::sqrt((1.0 - k) * (1.0 + k));
}

double complete_K(const Modulus& k) {
  const AgmChain ch = agm_chain(k.k_prime());
  return kPi / (2.0 * ch.a[ch.n]);
}

Jacobi jacobi(double u, const Modulus& mod) {
  if (!std::isfinite(u)) throw std::domain_error("jacobi: argument must be finite");

  const double k = mod.k();
  const double kp = mod.k_prime();
  const double m = k * k;

  // Small modulus: trigonometric limit with the first A&S 16.13 correction,
  // error O(m^2) < 1e-16 below the cutoff.
  if (k < 1.2e-4) {
    const double su = std::sin(u), cu = std::cos(u);
    Jacobi j;
    j.sn = su - 0.25 * m * (u - su * cu) * cu;
    j.cn = cu + 0.25 * m * (u - su * cu) * su;
    j.dn = 1.0 - 0.5 * m * su * su;
    return j;
  }

  // Reduce modulo the real period 4K to keep the phase recursion
  // well-conditioned for large arguments.
  const double K = complete_K(mod);
  double ur = std::fmod(u, 4.0 * K);
  if (ur < 0) ur += 4.0 * K;

  const AgmChain ch = agm_chain(kp);
  double phi = std::ldexp(ch.a[ch.n] * ur, ch.n);
  for (int i = ch.n; i >= 1; --i) {
    const double s = std::clamp(ch.c[i] / ch.a[i] * std::sin(phi), -1.0, 1.0);
    phi = 0.5 * (phi + std::asin(s));
  }

  Jacobi j;
  j.sn = std::sin(phi);
  j.cn = std::cos(phi);
  // dn = sqrt(k'^2 + k^2 cn^2): no cancellation, and the defining identity
  // dn^2 + k^2 sn^2 = 1 holds to rounding by construction.
  j.dn = std::sqrt(kp * kp + m * j.cn * j.cn);
  return j;
}

const Modulus& modulus_half() {
  static const Modulus k(std::sqrt(0.5));
  return k;
}

double quarter_period() {
  static const double K = complete_K(modulus_half());
  return K;
}

}  // namespace ars2d
