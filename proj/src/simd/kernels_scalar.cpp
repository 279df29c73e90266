#include "qbattery/simd/kernels.hpp"

namespace qb::simd {

namespace {

Complex dot_reversed_scalar(const Complex* a, const Complex* b, std::size_t n) {
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        acc += a[i] * b[n - 1 - i];
    }
    return acc;
}

Complex weighted_dot_scalar(const double* w, const Complex* u, const Complex* v, std::size_t n) {
    Complex acc{0.0, 0.0};
    for (std::size_t k = 0; k < n; ++k) {
        acc += w[k] * (u[k] * v[k]);
    }
    return acc;
}

void scaled_conj_store_scalar(const double* w, const Complex* u, Complex alpha, Complex* out,
                              std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
        out[k] = alpha * w[k] * std::conj(u[k]);
    }
}

void axpy_scalar(Complex alpha, const Complex* x, const Complex* y, Complex* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = x[i] + alpha * y[i];
    }
}

}  // namespace

const Kernels& scalar_kernels() {
    static const Kernels table{
        "scalar",
        dot_reversed_scalar,
        weighted_dot_scalar,
        scaled_conj_store_scalar,
        axpy_scalar,
    };
    return table;
}

}  // namespace qb::simd
