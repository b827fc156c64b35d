// ars2d - complete elliptic integral K and Jacobi elliptic functions sn, cn, dn.
//
// The computation of K(k) uses the arithmetic-geometric mean,
//   K = pi / (2 agm(1, k')),
// and sn/cn/dn use the descending Landen transformation (the AGM phase
// recursion of Abramowitz & Stegun 16.4), after reduction of the argument
// modulo the real period 4K.  Both converge quadratically and deliver
// machine precision on the whole modulus range [0, 1).

#ifndef ARS2D_ELLIPTIC_HPP
#define ARS2D_ELLIPTIC_HPP

namespace ars2d {

/// Elliptic modulus k restricted to [0, 1); carries the complementary
/// modulus k' with k^2 + k'^2 = 1.  k = 1 (hyperbolic degeneration) is
/// excluded: the tangency-point geodesics all live at k^2 = 1/2.
class Modulus {
 public:
  explicit Modulus(double k);
  double k() const { return k_; }
  double k_prime() const { return k_prime_; }
  double m() const { return k_ * k_; }  // parameter m = k^2

 private:
  double k_;
  double k_prime_;
};

/// Values of the three Jacobi elliptic functions at one argument.
struct Jacobi {
  double sn;
  double cn;
  double dn;
};

/// Complete elliptic integral of the first kind,
///   K(k) = \int_0^{pi/2} dphi / sqrt(1 - k^2 sin^2 phi).
/// Strictly increasing in k; K(0) = pi/2.
double complete_K(const Modulus& k);

/// sn(u,k), cn(u,k), dn(u,k) for finite real u.
/// Throws std::domain_error if u is not finite.
Jacobi jacobi(double u, const Modulus& k);

/// The library-wide modulus k^2 = 1/2 of the tangency-point flow.
const Modulus& modulus_half();

/// K(1/sqrt 2), cached; the quarter period of the nilpotent geodesics.
double quarter_period();

}  // namespace ars2d

#endif
