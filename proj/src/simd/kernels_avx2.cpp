// AVX2 variants of the inner-loop primitives. This translation unit is built
// with -mavx2 -mfma on x86-64; the dispatcher only hands out the table after a
// runtime CPU feature check.

#include "qbattery/simd/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace qb::simd {

namespace {

inline const double* flat(const Complex* p) { return reinterpret_cast<const double*>(p); }
inline double* flat(Complex* p) { return reinterpret_cast<double*>(p); }

// Packed complex multiply: two complex doubles per __m256d as (re0,im0,re1,im1).
inline __m256d cmul(__m256d a, __m256d b) {
    __m256d b_re = _mm256_movedup_pd(b);
    __m256d b_im = _mm256_permute_pd(b, 0xF);
    __m256d a_sw = _mm256_permute_pd(a, 0x5);
    return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
}

inline Complex reduce(__m256d acc) {
    __m128d lo = _mm256_castpd256_pd128(acc);
    __m128d hi = _mm256_extractf128_pd(acc, 1);
    __m128d s = _mm_add_pd(lo, hi);
    alignas(16) double out[2];
    _mm_store_pd(out, s);
    return Complex(out[0], out[1]);
}

Complex dot_reversed_avx2(const Complex* a, const Complex* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d va0 = _mm256_loadu_pd(flat(a + i));
        __m256d va1 = _mm256_loadu_pd(flat(a + i + 2));
        // b walks backwards; swap the 128-bit lanes to reverse the pair order.
        __m256d vb0 = _mm256_loadu_pd(flat(b + n - 2 - i));
        __m256d vb1 = _mm256_loadu_pd(flat(b + n - 4 - i));
        vb0 = _mm256_permute2f128_pd(vb0, vb0, 0x01);
        vb1 = _mm256_permute2f128_pd(vb1, vb1, 0x01);
        acc0 = _mm256_add_pd(acc0, cmul(va0, vb0));
        acc1 = _mm256_add_pd(acc1, cmul(va1, vb1));
    }
    Complex acc = reduce(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) {
        acc += a[i] * b[n - 1 - i];
    }
    return acc;
}

// (w0, w1) -> (w0, w0, w1, w1)
inline __m256d expand_weights(const double* w) {
    __m256d v = _mm256_castpd128_pd256(_mm_loadu_pd(w));
    return _mm256_permute4x64_pd(v, 0x50);
}

Complex weighted_dot_avx2(const double* w, const Complex* u, const Complex* v, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        __m256d prod = cmul(_mm256_loadu_pd(flat(u + k)), _mm256_loadu_pd(flat(v + k)));
        acc = _mm256_fmadd_pd(prod, expand_weights(w + k), acc);
    }
    Complex out = reduce(acc);
    for (; k < n; ++k) {
        out += w[k] * (u[k] * v[k]);
    }
    return out;
}

void scaled_conj_store_avx2(const double* w, const Complex* u, Complex alpha, Complex* out,
                            std::size_t n) {
    const __m256d conj_mask = _mm256_setr_pd(0.0, -0.0, 0.0, -0.0);
    const __m256d al_re = _mm256_set1_pd(alpha.real());
    const __m256d al_im = _mm256_set1_pd(alpha.imag());
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        __m256d cu = _mm256_xor_pd(_mm256_loadu_pd(flat(u + k)), conj_mask);
        cu = _mm256_mul_pd(cu, expand_weights(w + k));
        __m256d cu_sw = _mm256_permute_pd(cu, 0x5);
        __m256d res = _mm256_fmaddsub_pd(cu, al_re, _mm256_mul_pd(cu_sw, al_im));
        _mm256_storeu_pd(flat(out + k), res);
    }
    for (; k < n; ++k) {
        out[k] = alpha * w[k] * std::conj(u[k]);
    }
}

void axpy_avx2(Complex alpha, const Complex* x, const Complex* y, Complex* out, std::size_t n) {
    const __m256d al_re = _mm256_set1_pd(alpha.real());
    const __m256d al_im = _mm256_set1_pd(alpha.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d vy = _mm256_loadu_pd(flat(y + i));
        __m256d vy_sw = _mm256_permute_pd(vy, 0x5);
        __m256d prod = _mm256_fmaddsub_pd(vy, al_re, _mm256_mul_pd(vy_sw, al_im));
        _mm256_storeu_pd(flat(out + i), _mm256_add_pd(_mm256_loadu_pd(flat(x + i)), prod));
    }
    for (; i < n; ++i) {
        out[i] = x[i] + alpha * y[i];
    }
}

}  // namespace

const Kernels* avx2_table_or_null() {
    static const Kernels table{
        "avx2",
        dot_reversed_avx2,
        weighted_dot_avx2,
        scaled_conj_store_avx2,
        axpy_avx2,
    };
    return &table;
}

}  // namespace qb::simd

#else

namespace qb::simd {
const Kernels* avx2_table_or_null() { return nullptr; }
}  // namespace qb::simd

#endif
