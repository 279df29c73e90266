#pragma once

#include <cstddef>

#include "qbattery/types.hpp"

namespace qb::simd {

/// Inner-loop primitives shared by the direct integrators. Every entry has a
/// scalar reference implementation and may have vectorized variants; the
/// active table is picked once at startup from the host CPU. Variants are
/// equivalence-tested against the scalar reference.
struct Kernels {
    const char* name;

    /// sum_{i=0}^{n-1} a[i] * b[n-1-i] (complex, no conjugation).
    /// This is the history convolution of the Volterra integrator.
    Complex (*dot_reversed)(const Complex* a, const Complex* b, std::size_t n);

    /// sum_k w[k] * u[k] * v[k] with real weights.
    Complex (*weighted_dot)(const double* w, const Complex* u, const Complex* v, std::size_t n);

    /// out[k] = alpha * w[k] * conj(u[k]).
    void (*scaled_conj_store)(const double* w, const Complex* u, Complex alpha, Complex* out,
                              std::size_t n);

    /// out[i] = x[i] + alpha * y[i].
    void (*axpy)(Complex alpha, const Complex* x, const Complex* y, Complex* out, std::size_t n);
};

/// Portable reference implementation.
const Kernels& scalar_kernels();

/// AVX2+FMA implementation, or nullptr when the build target or the host CPU
/// lacks support.
const Kernels* avx2_kernels();

/// Best table supported by this process. Honors QBATTERY_SIMD=scalar|avx2|auto
/// for pinning (unknown or unsupported values fall back to auto).
const Kernels& active_kernels();

}  // namespace qb::simd
