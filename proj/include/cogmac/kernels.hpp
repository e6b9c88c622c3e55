#pragma once
// Batch numeric kernels behind a runtime-dispatched backend.
//
// Every kernel has a portable scalar reference implementation and, on x86-64
// hosts that support it, an AVX2+FMA variant compiled into its own
// translation unit.  The active backend is chosen once per process from
// cpuid; force_backend() exists so tests can pin a specific implementation
// and compare outputs.  Implementations of a kernel must agree within 1e-12
// (absolute or relative, whichever is looser); the test suite enforces this
// on random inputs.

#include <cstddef>

namespace cogmac::kernels {

enum class Backend { scalar, avx2 };

const char* backend_name(Backend b);
bool backend_available(Backend b);
Backend active_backend();
// Test hook: pin the backend (throws std::runtime_error if unavailable).
void force_backend(Backend b);
void clear_backend_override();

// out[i] = -log2( sum_k exp(log_coeff[k] - dist2[k*n + i] * inv_var[k]) )
//
// Evaluates the negative log2 density of a K-component complex-Gaussian
// mixture at n points, given per-component squared distances to the
// component means.  log_coeff[k] = ln(w_k / (pi * v_k)), inv_var[k] = 1/v_k.
// Uses a max-shifted log-sum-exp; exact for K = 1.
void mixture_neglog2_density(const double* dist2, std::size_t n_components,
                             std::size_t n, const double* log_coeff,
                             const double* inv_var, double* out);

// out[i] = scale * log2(1 + x[i]);  requires x[i] >= 0
void log2_one_plus(const double* x, std::size_t n, double scale, double* out);

namespace detail {
struct Impl {
  void (*mixture)(const double*, std::size_t, std::size_t, const double*,
                  const double*, double*);
  void (*log2_1p)(const double*, std::size_t, double, double*);
};
extern const Impl scalar_impl;
#if defined(COGMAC_HAVE_AVX2_TU)
extern const Impl avx2_impl;
#endif
}  // namespace detail

}  // namespace cogmac::kernels
