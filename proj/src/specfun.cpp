#include "lmfmm/specfun.hpp"

#include <algorithm>

namespace lmfmm {

std::vector<double> spherical_bessel_j(int n_max, double x) {
  if (n_max < 0) throw std::invalid_argument("spherical_bessel_j: n_max < 0");
  if (x < 0.0) throw std::invalid_argument("spherical_bessel_j: x < 0");
  std::vector<double> j(n_max + 1, 0.0);
  if (x < 1e-8) {
    // series head: j_n = x^n / (2n+1)!! (1 - x^2/(2(2n+3)))
    double pw = 1.0, dfac = 1.0;
    for (int n = 0; n <= n_max; ++n) {
      j[n] = pw / dfac * (1.0 - x * x / (2.0 * (2 * n + 3)));
      pw *= x;
      dfac *= 2 * n + 3;
    }
    return j;
  }
  // downward recurrence, normalized by j_0 = sin(x)/x
  int start = n_max + 16 + int(x);
  double jp = 0.0, jc = 1e-300;
  std::vector<double> tmp(n_max + 1);
  for (int n = start; n > 0; --n) {
    double jm = (2.0 * n + 1.0) / x * jc - jp;
    jp = jc;
    jc = jm;
    if (n - 1 <= n_max) tmp[n - 1] = jc;
    if (std::abs(jc) > 1e280) {  // rescale to avoid overflow
      double s = 1e-280;
      jc *= s;
      jp *= s;
      for (int q = std::min(n_max, n - 1); q >= n - 1 && q >= 0; --q) tmp[q] *= s;
      for (int q = n; q <= n_max; ++q) tmp[q] *= s;
    }
  }
  double scale = (std::sin(x) / x) / tmp[0];
  for (int n = 0; n <= n_max; ++n) j[n] = tmp[n] * scale;
  return j;
}

std::vector<double> spherical_bessel_y(int n_max, double x) {
  if (x <= 0.0) throw std::invalid_argument("spherical_bessel_y: x <= 0");
  std::vector<double> y(n_max + 1);
  y[0] = -std::cos(x) / x;
  if (n_max >= 1) y[1] = -std::cos(x) / (x * x) - std::sin(x) / x;
  for (int n = 2; n <= n_max; ++n) y[n] = (2.0 * n - 1.0) / x * y[n - 1] - y[n - 2];
  return y;
}

std::vector<cplx> spherical_hankel1(int n_max, double x) {
  if (x <= 0.0) throw std::invalid_argument("spherical_hankel1: x <= 0");
  std::vector<cplx> h(n_max + 1);
  const cplx eix = std::exp(iu * x);
  h[0] = -iu * eix / x;
  if (n_max >= 1) h[1] = -(x + iu) * eix / (x * x);
  for (int n = 2; n <= n_max; ++n) h[n] = (2.0 * n - 1.0) / x * h[n - 1] - h[n - 2];
  return h;
}

namespace {

// Asymptotic Hankel expansions, valid for |z| well above the order.
void cyl_bessel_large(int n_max, cplx z, cplx* out) {
  const cplx zr = 1.0 / z;
  const cplx amp = std::sqrt(2.0 / (pi * z));
  for (int n = 0; n <= std::min(n_max, 1); ++n) {
    cplx s1 = 0.0, s2 = 0.0, term = 1.0;
    double mu = 4.0 * n * n;
    double last = 1e300;
    for (int k = 0; k < 16; ++k) {
      cplx t1 = term * ipow(k), t2 = term * ipow(-k);
      s1 += t1;
      s2 += t2;
      double odd = 2.0 * k + 1.0;
      double fac = (mu - odd * odd) / (8.0 * (k + 1.0));
      term *= fac * zr;
      double mag = std::abs(term);
      if (mag < 1e-17 || mag > last) break;
      last = mag;
    }
    cplx chi = z - (0.5 * n + 0.25) * pi;
    cplx h1 = amp * std::exp(iu * chi) * s1;
    cplx h2 = amp * std::exp(-iu * chi) * s2;
    out[n] = 0.5 * (h1 + h2);
  }
  // upward recurrence is stable while order stays below |z|
  for (int n = 2; n <= n_max; ++n) out[n] = (2.0 * (n - 1.0)) / z * out[n - 1] - out[n - 2];
}

// Miller downward recurrence with the even-order sum normalization.
void cyl_bessel_miller(int n_max, cplx z, cplx* out) {
  double az = std::abs(z);
  int start = n_max + int(az) + 18;
  if (start % 2) ++start;
  std::vector<cplx> buf(start + 2, 0.0);
  buf[start + 1] = 0.0;
  buf[start] = 1e-280;
  for (int n = start; n > 0; --n) {
    buf[n - 1] = (2.0 * n) / z * buf[n] - buf[n + 1];
    if (std::abs(buf[n - 1]) > 1e280) {
      for (int q = n - 1; q <= start + 1; ++q) buf[q] *= 1e-280;
    }
  }
  cplx sum = buf[0];
  for (int n = 2; n <= start; n += 2) sum += 2.0 * buf[n];
  cplx scale = 1.0 / sum;
  for (int n = 0; n <= n_max; ++n) out[n] = buf[n] * scale;
}

}  // namespace

void cyl_bessel_j_seq(int n_max, cplx z, cplx* out) {
  double az = std::abs(z);
  if (az < 1e-12) {
    out[0] = 1.0;
    for (int n = 1; n <= n_max; ++n) out[n] = 0.0;
    if (n_max >= 1) out[1] = 0.5 * z;
    return;
  }
  double up_threshold = std::max(16.0, 1.5 * n_max + 4.0);
  if (az >= up_threshold)
    cyl_bessel_large(n_max, z, out);
  else
    cyl_bessel_miller(n_max, z, out);
}

cplx cyl_bessel_j(int order, cplx z) {
  if (order < 0) throw std::invalid_argument("cyl_bessel_j: negative order (fold via (-1)^n J_n)");
  std::vector<cplx> buf(order + 1);
  cyl_bessel_j_seq(order, z, buf.data());
  return buf[order];
}

cplx sqrt_one_minus_z2(cplx z) {
  cplx c1 = z + 1.0, c2 = z - 1.0;
  double r = std::sqrt(std::abs(c1) * std::abs(c2));
  double th = 0.5 * (std::arg(c1) + std::arg(c2));
  return -iu * r * std::exp(iu * th);
}

ComplexTriangle legendre_normalized_complex(int n_max, cplx z) {
  ComplexTriangle P(n_max);
  P(0, 0) = 1.0 / sqrt4pi;
  const cplx w = sqrt_one_minus_z2(z);
  for (int n = 1; n <= n_max; ++n)
    P(n, n) = std::sqrt((2.0 * n + 1.0) / (2.0 * n)) * w * P(n - 1, n - 1);
  for (int m = 0; m <= n_max; ++m) {
    for (int n = m + 1; n <= n_max; ++n) {
      double a = std::sqrt((2.0 * n - 1.0) * (2.0 * n + 1.0) / ((n - m) * double(n + m)));
      cplx prev2 = (n - m >= 2) ? P(n - 2, m) : cplx(0.0);
      double b = 0.0;
      if (n - m >= 2)
        b = std::sqrt((2.0 * n + 1.0) * (n - m - 1.0) * (n + m - 1.0) /
                      ((2.0 * n - 3.0) * (n + m) * double(n - m)));
      P(n, m) = a * z * P(n - 1, m) - b * prev2;
    }
  }
  for (int n = 1; n <= n_max; ++n)
    for (int m = 1; m <= n; ++m) P(n, -m) = parity(m) * P(n, m);
  return P;
}

TriangularArray<double> legendre_normalized_real(int n_max, double x) {
  TriangularArray<double> P(n_max);
  P(0, 0) = 1.0 / sqrt4pi;
  const double w = std::sqrt(std::max(0.0, 1.0 - x * x));
  for (int n = 1; n <= n_max; ++n)
    P(n, n) = std::sqrt((2.0 * n + 1.0) / (2.0 * n)) * w * P(n - 1, n - 1);
  for (int m = 0; m <= n_max; ++m) {
    for (int n = m + 1; n <= n_max; ++n) {
      double a = std::sqrt((2.0 * n - 1.0) * (2.0 * n + 1.0) / ((n - m) * double(n + m)));
      double b = 0.0;
      if (n - m >= 2)
        b = std::sqrt((2.0 * n + 1.0) * (n - m - 1.0) * (n + m - 1.0) /
                      ((2.0 * n - 3.0) * (n + m) * double(n - m)));
      P(n, m) = a * x * P(n - 1, m) - (n - m >= 2 ? b * P(n - 2, m) : 0.0);
    }
  }
  for (int n = 1; n <= n_max; ++n)
    for (int m = 1; m <= n; ++m) P(n, -m) = parity(m) * P(n, m);
  return P;
}

ComplexTriangle spherical_harmonics(int n_max, double theta, double phi) {
  if (theta < -1e-12 || theta > pi + 1e-12)
    throw std::invalid_argument("spherical_harmonics: theta outside [0, pi]");
  TriangularArray<double> P = legendre_normalized_real(n_max, std::cos(theta));
  ComplexTriangle Y(n_max);
  std::vector<cplx> eim(n_max + 1);
  eim[0] = 1.0;
  const cplx e1 = std::exp(iu * phi);
  for (int m = 1; m <= n_max; ++m) eim[m] = eim[m - 1] * e1;
  for (int n = 0; n <= n_max; ++n) {
    for (int m = 0; m <= n; ++m) {
      Y(n, m) = P(n, m) * eim[m];
      if (m > 0) Y(n, -m) = P(n, -m) * std::conj(eim[m]);
    }
  }
  return Y;
}

namespace {

// log-factorials in long double; plenty for 3j symbols at desk-scale orders
constexpr int kMaxFact = 128;
const long double* log_fact_table() {
  static long double t[kMaxFact + 1] = {};
  static bool init = [] {
    t[0] = 0.0L;
    for (int i = 1; i <= kMaxFact; ++i) t[i] = t[i - 1] + std::log((long double)i);
    return true;
  }();
  (void)init;
  return t;
}

}  // namespace

double wigner3j(int j1, int j2, int j3, int m1, int m2, int m3) {
  if (m1 + m2 + m3 != 0) return 0.0;
  if (j3 < std::abs(j1 - j2) || j3 > j1 + j2) return 0.0;
  if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(m3) > j3) return 0.0;
  const long double* lf = log_fact_table();
  auto L = [&](int n) { return lf[n]; };
  long double pre = 0.5L * (L(j1 + j2 - j3) + L(j1 - j2 + j3) + L(-j1 + j2 + j3) -
                            L(j1 + j2 + j3 + 1) + L(j1 + m1) + L(j1 - m1) + L(j2 + m2) +
                            L(j2 - m2) + L(j3 + m3) + L(j3 - m3));
  int tmin = std::max({0, j2 - j3 - m1, j1 - j3 + m2});
  int tmax = std::min({j1 + j2 - j3, j1 - m1, j2 + m2});
  long double sum = 0.0L;
  for (int t = tmin; t <= tmax; ++t) {
    long double lt = L(t) + L(j3 - j2 + t + m1) + L(j3 - j1 + t - m2) + L(j1 + j2 - j3 - t) +
                     L(j1 - t - m1) + L(j2 - t + m2);
    long double term = std::exp(pre - lt);
    sum += (t & 1) ? -term : term;
  }
  double sign = ((j1 - j2 - m3) & 1) ? -1.0 : 1.0;
  return double(sign * sum);
}

double gaunt(int n, int m, int nu, int mu, int q) {
  if (std::abs(m) > n || std::abs(mu) > nu) return 0.0;
  if (q < std::abs(n - nu) || q > n + nu) return 0.0;
  if ((n + nu + q) & 1) return 0.0;
  if (std::abs(m + mu) > q) return 0.0;
  double S = std::sqrt((2.0 * n + 1.0) * (2.0 * nu + 1.0) * (2.0 * q + 1.0) / (4.0 * pi));
  double w0 = wigner3j(n, nu, q, 0, 0, 0);
  double wm = wigner3j(n, nu, q, m, mu, -m - mu);
  return parity(m + mu) * S * w0 * wm;
}

GauntTable::GauntTable(int p) : p_(p) {
  // layout: [(n,m) tri] x [(nu,mu) tri] x [q-slot], q = qmin + 2*slot
  std::size_t tri = std::size_t(p + 1) * (p + 1);
  v_.assign(tri * tri * (p + 1), 0.0);
  for (int n = 0; n <= p; ++n)
    for (int m = -n; m <= n; ++m)
      for (int nu = 0; nu <= p; ++nu)
        for (int mu = -nu; mu <= nu; ++mu) {
          int qmin = std::max(std::abs(n - nu), std::abs(mu - m));
          if ((n + nu + qmin) & 1) ++qmin;
          for (int q = qmin, s = 0; q <= n + nu; q += 2, ++s)
            v_[idx(n, m, nu, mu, s)] = gaunt(n, m, nu, -mu, q);
        }
}

std::size_t GauntTable::idx(int n, int m, int nu, int mu, int s) const {
  std::size_t tri = std::size_t(p_ + 1) * (p_ + 1);
  std::size_t a = std::size_t(n) * (n + 1) + m;
  std::size_t b = std::size_t(nu) * (nu + 1) + mu;
  return (a * tri + b) * (p_ + 1) + s;
}

double GauntTable::coupling(int n, int m, int nu, int mu, int q) const {
  int qmin = std::max(std::abs(n - nu), std::abs(mu - m));
  if ((n + nu + qmin) & 1) ++qmin;
  if (q < qmin || q > n + nu || ((n + nu + q) & 1)) return 0.0;
  return v_[idx(n, m, nu, mu, (q - qmin) / 2)];
}

}  // namespace lmfmm
