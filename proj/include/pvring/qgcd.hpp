#ifndef PVRING_QGCD_HPP
#define PVRING_QGCD_HPP

#include "pvring/poly.hpp"
#include "pvring/rational.hpp"

#include <vector>

namespace pvring {

using QPoly = Poly<Rat>;

/// Positive rational c such that p/c has coprime integer coefficients
/// (gcd of numerators 1, common denominator 1). Content of 0 is 1.
Rat int_content(const QPoly& p);

/// p with integer content removed and positive leading coefficient.
QPoly primitive_part(const QPoly& p);

/// Greatest common divisor over Q[vars], computed by content/primitive-part
/// reduction with the subresultant polynomial remainder sequence. The result
/// is integer-primitive with positive leading coefficient; gcd(0, 0) = 0.
QPoly poly_gcd(const QPoly& a, const QPoly& b);

/// lcm normalized the same way; lcm(0, x) = 0.
QPoly poly_lcm(const QPoly& a, const QPoly& b);

namespace gcddetail {
/// View of p as a univariate polynomial in `x`: dense coefficient vector
/// (index = exponent of x), coefficients living in the same ring.
std::vector<QPoly> univariate_view(const QPoly& p, VarId x);
QPoly from_univariate(const std::vector<QPoly>& coeffs, VarId x);
/// Pseudo-remainder prem(a, b) in x: lc_x(b)^(deg a - deg b + 1) * a mod b.
QPoly pseudo_remainder(const QPoly& a, const QPoly& b, VarId x);
} // namespace gcddetail

} // namespace pvring

#endif
