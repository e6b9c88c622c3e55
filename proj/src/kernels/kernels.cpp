#include "cogmac/kernels.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cogmac::kernels {

namespace {

constexpr double kInvLn2 = 1.4426950408889634073599246810;

void scalar_mixture(const double* dist2, std::size_t k, std::size_t n,
                    const double* log_coeff, const double* inv_var,
                    double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    double m = -HUGE_VAL;
    for (std::size_t c = 0; c < k; ++c) {
      const double e = log_coeff[c] - dist2[c * n + i] * inv_var[c];
      if (e > m) m = e;
    }
    double s = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      const double e = log_coeff[c] - dist2[c * n + i] * inv_var[c];
      s += std::exp(e - m);
    }
    out[i] = -(m + std::log(s)) * kInvLn2;
  }
}

void scalar_log2_1p(const double* x, std::size_t n, double scale,
                    double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = scale * kInvLn2 * std::log1p(x[i]);
}

std::atomic<const detail::Impl*> g_active{nullptr};

const detail::Impl* pick_default() {
#if defined(COGMAC_HAVE_AVX2_TU)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return &detail::avx2_impl;
#endif
  return &detail::scalar_impl;
}

const detail::Impl* active() {
  const detail::Impl* impl = g_active.load(std::memory_order_acquire);
  if (!impl) {
    impl = pick_default();
    g_active.store(impl, std::memory_order_release);
  }
  return impl;
}

}  // namespace

namespace detail {
const Impl scalar_impl{scalar_mixture, scalar_log2_1p};
}  // namespace detail

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
  }
  return "?";
}

bool backend_available(Backend b) {
  if (b == Backend::scalar) return true;
#if defined(COGMAC_HAVE_AVX2_TU)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend active_backend() {
#if defined(COGMAC_HAVE_AVX2_TU)
  if (active() == &detail::avx2_impl) return Backend::avx2;
#endif
  return Backend::scalar;
}

void force_backend(Backend b) {
  if (!backend_available(b))
    throw std::runtime_error(std::string("kernel backend unavailable: ") +
                             backend_name(b));
  if (b == Backend::scalar) {
    g_active.store(&detail::scalar_impl, std::memory_order_release);
    return;
  }
#if defined(COGMAC_HAVE_AVX2_TU)
  g_active.store(&detail::avx2_impl, std::memory_order_release);
#endif
}

void clear_backend_override() {
  g_active.store(pick_default(), std::memory_order_release);
}

void mixture_neglog2_density(const double* dist2, std::size_t n_components,
                             std::size_t n, const double* log_coeff,
                             const double* inv_var, double* out) {
  active()->mixture(dist2, n_components, n, log_coeff, inv_var, out);
}

void log2_one_plus(const double* x, std::size_t n, double scale, double* out) {
  active()->log2_1p(x, n, scale, out);
}

}  // namespace cogmac::kernels
