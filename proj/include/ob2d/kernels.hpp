#pragma once

#include "ob2d/aligned.hpp"

#include <cstddef>

namespace ob2d::kernels {

/// Data-parallel inner loops used by the spectral operators, the stepper and
/// the norms. Every variant must reproduce the scalar reference bit for bit:
/// elementwise kernels use the same operation order without FMA, and
/// reductions accumulate into four lanes indexed by i % 4 that are folded as
/// (l0 + l1) + (l2 + l3).
struct KernelTable {
    const char* name;

    // Spectral (complex) kernels, real per-mode symbols.
    void (*scale_real)(Complex* out, const Complex* in, const double* sym, std::size_t n);
    void (*scale_imag)(Complex* out, const Complex* in, const double* sym, std::size_t n);
    void (*accumulate_real)(Complex* acc, const Complex* in, const double* sym, double c, std::size_t n);
    void (*accumulate_imag)(Complex* acc, const Complex* in, const double* sym, double c, std::size_t n);
    /// out = e * (x + h * k), the integrating-factor stage update.
    void (*propagate)(Complex* out, const Complex* x, const Complex* k, const double* e, double h,
                      std::size_t n);

    // Real (physical) kernels.
    void (*axpy)(double* y, const double* x, double c, std::size_t n);
    void (*scale)(double* out, const double* in, double c, std::size_t n);
    void (*mul)(double* out, const double* a, const double* b, std::size_t n);
    /// out = a * b + c * d
    void (*dot2)(double* out, const double* a, const double* b, const double* c, const double* d,
                 std::size_t n);
    /// tau Omega - Omega tau for symmetric tau and skew Omega (entry Omega12 = w).
    void (*corotation)(double* o11, double* o12, double* o22, const double* t11, const double* t12,
                       const double* t22, const double* w, std::size_t n);

    // Reductions.
    double (*sum_squares)(const double* x, std::size_t n);
    double (*weighted_power)(const Complex* x, const double* w, std::size_t n);
    double (*max_abs)(const double* x, std::size_t n);
};

const KernelTable& scalar_table();
/// nullptr when AVX2 is not compiled in or not supported by this CPU.
const KernelTable* avx2_table();

/// Selected once per process: AVX2 when available, unless OB2D_SIMD=scalar.
const KernelTable& active();

} // namespace ob2d::kernels
