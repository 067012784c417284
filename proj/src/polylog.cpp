#include <map>
#include <mutex>

#include "mahler/error.hpp"
#include "mahler/exactalg.hpp"
#include "mahler/numerics.hpp"

namespace mahler {

namespace {

std::mutex& bernoulli_mutex() {
  static std::mutex mu;
  return mu;
}

std::vector<mpq_class>& bernoulli_table() {
  static std::vector<mpq_class> table{mpq_class(1), mpq_class(-1, 2)};
  return table;
}

}  // namespace

mpq_class bernoulli(unsigned n) {
  std::lock_guard<std::mutex> lock(bernoulli_mutex());
  auto& b = bernoulli_table();
  // B_m = -1/(m+1) sum_{k<m} C(m+1, k) B_k
  while (b.size() <= n) {
    const unsigned m = static_cast<unsigned>(b.size());
    if (m % 2 == 1) {
      b.emplace_back(0);
      continue;
    }
    mpq_class acc = 0;
    for (unsigned k = 0; k < m; ++k) {
      if (k > 1 && k % 2 == 1) continue;
      acc += mpq_class(binomial(m + 1, k)) * b[k];
    }
    acc /= -(static_cast<long>(m) + 1);
    acc.canonicalize();
    b.push_back(acc);
  }
  return b[n];
}

namespace {

Real zeta_positive(long s, int prec) {
  const int wp = prec + 32;
  const long M = wp / 5 + 2;
  const long N = s + 2 * M;
  Real sum(wp);
  for (long n = N - 1; n >= 1; --n) sum += pow(Real(n, wp), -s);
  const Real Nr(N, wp);
  const Real n_s = pow(Nr, -s);
  sum += n_s * Nr / (s - 1);
  sum += n_s / 2L;
  // sum_j B_{2j}/(2j)! * s(s+1)...(s+2j-2) * N^{-s-2j+1}
  Real poch(s, wp);                 // s (s+1) ... (s + 2j - 2)
  Real npow = n_s / Nr;             // N^{-s-2j+1}
  const Real inv_n2 = Real(1L, wp) / (Nr * Nr);
  mpz_class fact = 2;               // (2j)!
  for (long j = 1; j <= M; ++j) {
    sum += Real(bernoulli(2 * j), wp) / Real(fact, wp) * poch * npow;
    poch *= (s + 2 * j - 1) * (s + 2 * j);
    npow *= inv_n2;
    fact *= (2 * j + 1) * (2 * j + 2);
  }
  sum.round_to(prec);
  return sum;
}

}  // namespace

Real zeta(long s, int prec) {
  if (s == 1) fail(ErrorCode::kInvalidArgument, "zeta has a pole at s = 1");
  if (s <= 0) {
    // zeta(-n) = -B_{n+1} / (n+1), with zeta(0) = -1/2.
    const unsigned n = static_cast<unsigned>(-s);
    if (n == 0) return Real(mpq_class(-1, 2), prec);
    mpq_class v = -bernoulli(n + 1) / mpq_class(n + 1);
    return Real(v, prec);
  }
  static std::mutex mu;
  static std::map<std::pair<long, int>, Real> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({s, prec});
    if (it != cache.end()) return it->second;
  }
  Real v = zeta_positive(s, prec);
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(std::make_pair(s, prec), v);
  return v;
}

namespace {

// Li_k(e^mu) = sum_{m != k-1} zeta(k-m) mu^m/m! + mu^{k-1}/(k-1)! (H_{k-1} - log(-mu)),
// valid for 0 < |mu| < 2 pi.
BigComplex polylog_mu(int k, const BigComplex& mu, int prec) {
  const int wp = prec + 40;
  BigComplex m_pow(Real(1L, wp), Real(wp));  // mu^m / m!
  BigComplex sum(wp);
  const Real stop = epsilon_pow2(wp, wp);
  int small_run = 0;
  for (long m = 0;; ++m) {
    BigComplex term(wp);
    if (m == k - 1) {
      Real h(wp);
      for (long j = 1; j <= k - 1; ++j) h += Real(1L, wp) / Real(j, wp);
      const BigComplex lg = log(-mu);
      term = m_pow * (BigComplex(h, Real(wp)) - lg);
    } else {
      const Real z = zeta(k - m, wp);
      if (!z.is_zero()) term = m_pow * z;
    }
    sum += term;
    if (m > k + 1) {
      // zeta vanishes at negative even integers, so every other term is zero.
      small_run = abs(term) < stop ? small_run + 1 : 0;
      if (small_run >= 2) break;
    }
    if (m > 20L * wp) fail(ErrorCode::kNonConvergence, "polylog series did not converge");
    m_pow *= mu;
    m_pow /= Real(m + 1, wp);
  }
  sum.re.round_to(prec);
  sum.im.round_to(prec);
  return sum;
}

BigComplex polylog_direct(int k, const BigComplex& z, int prec) {
  const int wp = prec + 20;
  BigComplex zp = z;
  zp.re.round_to(wp);
  zp.im.round_to(wp);
  BigComplex sum(wp);
  BigComplex zn = zp;
  const Real az = abs(zp);
  const Real stop = epsilon_pow2(wp, wp) * az;
  Real azn = az;
  for (long n = 1;; ++n) {
    const Real nk = pow(Real(n, wp), k);
    sum += zn / nk;
    zn *= zp;
    azn *= az;
    if (azn * 4L / pow(Real(n + 1, wp), k) < stop) break;
  }
  sum.re.round_to(prec);
  sum.im.round_to(prec);
  return sum;
}

}  // namespace

BigComplex polylog_unit(int k, const BigComplex& z, int prec) {
  if (k < 2) fail(ErrorCode::kInvalidArgument, "polylog_unit requires k >= 2");
  if (z.is_zero()) return BigComplex(prec);
  const Real az = abs(z);
  if (az > Real(1L, prec) + epsilon_pow2(prec / 2, prec)) {
    fail(ErrorCode::kInvalidArgument, "polylog_unit requires |z| <= 1");
  }
  if (az <= Real(0.75, prec)) return polylog_direct(k, z, prec);
  BigComplex zp = z;
  zp.re.round_to(prec + 40);
  zp.im.round_to(prec + 40);
  const BigComplex mu = log(zp);
  if (mu.is_zero()) return BigComplex::from_real(zeta(k, prec));
  return polylog_mu(k, mu, prec);
}

BigComplex polylog_unit_angle(int k, const Real& phi, int prec) {
  if (k < 2) fail(ErrorCode::kInvalidArgument, "polylog_unit requires k >= 2");
  const int wp = prec + 40;
  Real t = phi;
  t.round_to(std::max(wp, phi.precision()));
  t = reduce_angle(t);
  const Real pi = Real::pi(t.precision());
  if (t > pi) t -= pi * 2L;
  if (t.is_zero()) return BigComplex::from_real(zeta(k, prec));
  t.round_to(wp);
  return polylog_mu(k, BigComplex(Real(wp), t), prec);
}

}  // namespace mahler
