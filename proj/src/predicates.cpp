#include "stl/predicates.hpp"

#include <gmpxx.h>

#include <cmath>

namespace stl {

namespace {

// Static filter constants (machine epsilon based, after Shewchuk).
constexpr double kEps = 1.1102230246251565e-16;  // 2^-53
constexpr double kCcwErrBound = (3.0 + 16.0 * kEps) * kEps;
constexpr double kIccErrBound = (10.0 + 96.0 * kEps) * kEps;

double orient2d_exact(const double* a, const double* b, const double* c) {
  const mpq_class ax(a[0]), ay(a[1]), bx(b[0]), by(b[1]), cx(c[0]), cy(c[1]);
  const mpq_class det = (ax - cx) * (by - cy) - (ay - cy) * (bx - cx);
  return static_cast<double>(sgn(det));
}

double incircle_exact(const double* a, const double* b, const double* c,
                      const double* d) {
  const mpq_class adx = mpq_class(a[0]) - mpq_class(d[0]);
  const mpq_class ady = mpq_class(a[1]) - mpq_class(d[1]);
  const mpq_class bdx = mpq_class(b[0]) - mpq_class(d[0]);
  const mpq_class bdy = mpq_class(b[1]) - mpq_class(d[1]);
  const mpq_class cdx = mpq_class(c[0]) - mpq_class(d[0]);
  const mpq_class cdy = mpq_class(c[1]) - mpq_class(d[1]);

  const mpq_class alift = adx * adx + ady * ady;
  const mpq_class blift = bdx * bdx + bdy * bdy;
  const mpq_class clift = cdx * cdx + cdy * cdy;

  const mpq_class det = alift * (bdx * cdy - bdy * cdx) +
                        blift * (cdx * ady - cdy * adx) +
                        clift * (adx * bdy - ady * bdx);
  return static_cast<double>(sgn(det));
}

}  // namespace

double orient2d(const double* a, const double* b, const double* c) {
  const double detleft = (a[0] - c[0]) * (b[1] - c[1]);
  const double detright = (a[1] - c[1]) * (b[0] - c[0]);
  const double det = detleft - detright;

  double detsum;
  if (detleft > 0.0) {
    if (detright <= 0.0) return det;
    detsum = detleft + detright;
  } else if (detleft < 0.0) {
    if (detright >= 0.0) return det;
    detsum = -detleft - detright;
  } else {
    return det;
  }
  if (std::fabs(det) >= kCcwErrBound * detsum) return det;
  return orient2d_exact(a, b, c);
}

double incircle(const double* a, const double* b, const double* c,
                const double* d) {
  const double adx = a[0] - d[0], ady = a[1] - d[1];
  const double bdx = b[0] - d[0], bdy = b[1] - d[1];
  const double cdx = c[0] - d[0], cdy = c[1] - d[1];

  const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  const double alift = adx * adx + ady * ady;
  const double cdxady = cdx * ady, adxcdy = adx * cdy;
  const double blift = bdx * bdx + bdy * bdy;
  const double adxbdy = adx * bdy, bdxady = bdx * ady;
  const double clift = cdx * cdx + cdy * cdy;

  const double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) +
                     clift * (adxbdy - bdxady);
  const double permanent = (std::fabs(bdxcdy) + std::fabs(cdxbdy)) * alift +
                           (std::fabs(cdxady) + std::fabs(adxcdy)) * blift +
                           (std::fabs(adxbdy) + std::fabs(bdxady)) * clift;
  if (std::fabs(det) > kIccErrBound * permanent) return det;
  return incircle_exact(a, b, c, d);
}

}  // namespace stl
