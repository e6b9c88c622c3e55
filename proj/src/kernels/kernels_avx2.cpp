// AVX2+FMA kernel variants.  This is the only translation unit compiled with
// -mavx2 -mfma; it must not be entered unless cpuid reports both features.

#include <immintrin.h>

#include <cmath>
#include <cstddef>

#include "cogmac/kernels.hpp"

namespace cogmac::kernels {
namespace {

constexpr double kInvLn2 = 1.4426950408889634073599246810;

// exp(x) for x <= ~0.  Inputs below -708 flush to 0, which is the correct
// behaviour for max-shifted log-sum-exp terms.
inline __m256d vexp4(__m256d x) {
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634074);
  const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
  const __m256d lo_cut = _mm256_set1_pd(-708.0);
  const __m256d hi_cut = _mm256_set1_pd(709.0);

  const __m256d under = _mm256_cmp_pd(x, lo_cut, _CMP_LT_OQ);
  x = _mm256_max_pd(x, lo_cut);
  x = _mm256_min_pd(x, hi_cut);

  const __m256d n = _mm256_round_pd(
      _mm256_mul_pd(x, log2e), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, ln2_hi, x);
  r = _mm256_fnmadd_pd(n, ln2_lo, r);

  // Taylor series on |r| <= ln(2)/2; remainder < 1e-17 relative
  __m256d p = _mm256_set1_pd(1.0 / 6227020800.0);  // 1/13!
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 479001600.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 39916800.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 3628800.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 362880.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 40320.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 5040.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 720.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 120.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 24.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 6.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(0.5));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));

  // scale by 2^n via exponent bits; n is an integer in [-1022, 1023] here
  const __m128i n32 = _mm256_cvtpd_epi32(n);
  __m256i ni = _mm256_cvtepi32_epi64(n32);
  ni = _mm256_add_epi64(ni, _mm256_set1_epi64x(1023));
  const __m256d scale = _mm256_castsi256_pd(_mm256_slli_epi64(ni, 52));
  p = _mm256_mul_pd(p, scale);
  return _mm256_andnot_pd(under, p);
}

// ln(x) for normal positive doubles
inline __m256d vlog4(__m256d x) {
  const __m256i mant_mask = _mm256_set1_epi64x(0x000fffffffffffffll);
  const __m256i one_bits = _mm256_set1_epi64x(0x3ff0000000000000ll);
  const __m256i magic = _mm256_set1_epi64x(0x4330000000000000ll);

  const __m256i bits = _mm256_castpd_si256(x);
  // exponent as double: ((bits >> 52) | 2^52-bits) - (2^52 + 1023)
  const __m256i expo_i =
      _mm256_or_si256(_mm256_srli_epi64(bits, 52), magic);
  __m256d e = _mm256_sub_pd(_mm256_castsi256_pd(expo_i),
                            _mm256_set1_pd(4503599627370496.0 + 1023.0));
  __m256d m = _mm256_castsi256_pd(
      _mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits));

  // fold m into [sqrt(1/2), sqrt(2)]
  const __m256d sqrt2 = _mm256_set1_pd(1.4142135623730951);
  const __m256d big = _mm256_cmp_pd(m, sqrt2, _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
  e = _mm256_add_pd(e, _mm256_and_pd(big, _mm256_set1_pd(1.0)));

  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d t =
      _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
  const __m256d t2 = _mm256_mul_pd(t, t);

  // 2*atanh(t) series; |t| <= 0.1716 so the t^19 remainder is < 4e-16
  __m256d p = _mm256_set1_pd(2.0 / 17.0);
  p = _mm256_fmadd_pd(p, t2, _mm256_set1_pd(2.0 / 15.0));
  p = _mm256_fmadd_pd(p, t2, _mm256_set1_pd(2.0 / 13.0));
  p = _mm256_fmadd_pd(p, t2, _mm256_set1_pd(2.0 / 11.0));
  p = _mm256_fmadd_pd(p, t2, _mm256_set1_pd(2.0 / 9.0));
  p = _mm256_fmadd_pd(p, t2, _mm256_set1_pd(2.0 / 7.0));
  p = _mm256_fmadd_pd(p, t2, _mm256_set1_pd(2.0 / 5.0));
  p = _mm256_fmadd_pd(p, t2, _mm256_set1_pd(2.0 / 3.0));
  p = _mm256_fmadd_pd(p, t2, _mm256_set1_pd(2.0));
  const __m256d ln_m = _mm256_mul_pd(p, t);

  const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
  return _mm256_add_pd(_mm256_mul_pd(e, ln2_hi),
                       _mm256_fmadd_pd(e, ln2_lo, ln_m));
}

void avx2_mixture(const double* dist2, std::size_t k, std::size_t n,
                  const double* log_coeff, const double* inv_var,
                  double* out) {
  const __m256d neg_inv_ln2 = _mm256_set1_pd(-kInvLn2);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d mx = _mm256_set1_pd(-HUGE_VAL);
    for (std::size_t c = 0; c < k; ++c) {
      const __m256d d = _mm256_loadu_pd(dist2 + c * n + i);
      const __m256d e = _mm256_fnmadd_pd(d, _mm256_set1_pd(inv_var[c]),
                                         _mm256_set1_pd(log_coeff[c]));
      mx = _mm256_max_pd(mx, e);
    }
    __m256d s = _mm256_setzero_pd();
    for (std::size_t c = 0; c < k; ++c) {
      const __m256d d = _mm256_loadu_pd(dist2 + c * n + i);
      const __m256d e = _mm256_fnmadd_pd(d, _mm256_set1_pd(inv_var[c]),
                                         _mm256_set1_pd(log_coeff[c]));
      s = _mm256_add_pd(s, vexp4(_mm256_sub_pd(e, mx)));
    }
    const __m256d r =
        _mm256_mul_pd(_mm256_add_pd(mx, vlog4(s)), neg_inv_ln2);
    _mm256_storeu_pd(out + i, r);
  }
  for (; i < n; ++i) {
    double m = -HUGE_VAL;
    for (std::size_t c = 0; c < k; ++c) {
      const double e = log_coeff[c] - dist2[c * n + i] * inv_var[c];
      if (e > m) m = e;
    }
    double s = 0.0;
    for (std::size_t c = 0; c < k; ++c)
      s += std::exp(log_coeff[c] - dist2[c * n + i] * inv_var[c] - m);
    out[i] = -(m + std::log(s)) * kInvLn2;
  }
}

void avx2_log2_1p(const double* x, std::size_t n, double scale, double* out) {
  const __m256d fac = _mm256_set1_pd(scale * kInvLn2);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = vlog4(_mm256_add_pd(one, _mm256_loadu_pd(x + i)));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(fac, v));
  }
  for (; i < n; ++i) out[i] = scale * kInvLn2 * std::log1p(x[i]);
}

}  // namespace

namespace detail {
const Impl avx2_impl{avx2_mixture, avx2_log2_1p};
}  // namespace detail

}  // namespace cogmac::kernels
