// AVX2 variants of the kernel table. Compiled with -mavx2 only; never with
// FMA, so each lane performs exactly the scalar reference's operations.

#include "ob2d/kernels.hpp"

#include <immintrin.h>

#include <cmath>

namespace ob2d::kernels {
namespace {

// (s0, s0, s1, s1) from two consecutive symbol entries.
inline __m256d dup_pairs(const double* s) {
    return _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(s)), 0x50);
}

inline __m256d swap_re_im(__m256d x) { return _mm256_permute_pd(x, 0x5); }

// No namespace-scope vector constants: static initializers would execute AVX
// instructions before dispatch has checked the CPU.
inline __m256d neg_even() { return _mm256_setr_pd(-0.0, 0.0, -0.0, 0.0); }

void scale_real(Complex* out, const Complex* in, const double* sym, std::size_t n) {
    auto* o = reinterpret_cast<double*>(out);
    const auto* x = reinterpret_cast<const double*>(in);
    std::size_t m = 0;
    for (; m + 2 <= n; m += 2) {
        const __m256d s = dup_pairs(sym + m);
        _mm256_storeu_pd(o + 2 * m, _mm256_mul_pd(s, _mm256_loadu_pd(x + 2 * m)));
    }
    for (; m < n; ++m) {
        o[2 * m] = sym[m] * x[2 * m];
        o[2 * m + 1] = sym[m] * x[2 * m + 1];
    }
}

void scale_imag(Complex* out, const Complex* in, const double* sym, std::size_t n) {
    auto* o = reinterpret_cast<double*>(out);
    const auto* x = reinterpret_cast<const double*>(in);
    std::size_t m = 0;
    for (; m + 2 <= n; m += 2) {
        const __m256d s = dup_pairs(sym + m);
        const __m256d t = _mm256_mul_pd(s, swap_re_im(_mm256_loadu_pd(x + 2 * m)));
        _mm256_storeu_pd(o + 2 * m, _mm256_xor_pd(t, neg_even()));
    }
    for (; m < n; ++m) {
        const double re = x[2 * m];
        const double im = x[2 * m + 1];
        o[2 * m] = -(sym[m] * im);
        o[2 * m + 1] = sym[m] * re;
    }
}

void accumulate_real(Complex* acc, const Complex* in, const double* sym, double c, std::size_t n) {
    auto* a = reinterpret_cast<double*>(acc);
    const auto* x = reinterpret_cast<const double*>(in);
    const __m256d cv = _mm256_set1_pd(c);
    std::size_t m = 0;
    for (; m + 2 <= n; m += 2) {
        const __m256d f = _mm256_mul_pd(cv, dup_pairs(sym + m));
        const __m256d r = _mm256_add_pd(_mm256_loadu_pd(a + 2 * m),
                                        _mm256_mul_pd(f, _mm256_loadu_pd(x + 2 * m)));
        _mm256_storeu_pd(a + 2 * m, r);
    }
    for (; m < n; ++m) {
        const double f = c * sym[m];
        a[2 * m] = a[2 * m] + f * x[2 * m];
        a[2 * m + 1] = a[2 * m + 1] + f * x[2 * m + 1];
    }
}

void accumulate_imag(Complex* acc, const Complex* in, const double* sym, double c, std::size_t n) {
    auto* a = reinterpret_cast<double*>(acc);
    const auto* x = reinterpret_cast<const double*>(in);
    const __m256d cv = _mm256_set1_pd(c);
    std::size_t m = 0;
    for (; m + 2 <= n; m += 2) {
        const __m256d f = _mm256_mul_pd(cv, dup_pairs(sym + m));
        const __m256d t = _mm256_mul_pd(f, swap_re_im(_mm256_loadu_pd(x + 2 * m)));
        const __m256d r = _mm256_add_pd(_mm256_loadu_pd(a + 2 * m), _mm256_xor_pd(t, neg_even()));
        _mm256_storeu_pd(a + 2 * m, r);
    }
    for (; m < n; ++m) {
        const double f = c * sym[m];
        const double re = x[2 * m];
        const double im = x[2 * m + 1];
        a[2 * m] = a[2 * m] - f * im;
        a[2 * m + 1] = a[2 * m + 1] + f * re;
    }
}

void propagate(Complex* out, const Complex* x, const Complex* k, const double* e, double h,
               std::size_t n) {
    auto* o = reinterpret_cast<double*>(out);
    const auto* xs = reinterpret_cast<const double*>(x);
    const auto* ks = reinterpret_cast<const double*>(k);
    const __m256d hv = _mm256_set1_pd(h);
    std::size_t m = 0;
    for (; m + 2 <= n; m += 2) {
        const __m256d inner = _mm256_add_pd(_mm256_loadu_pd(xs + 2 * m),
                                            _mm256_mul_pd(hv, _mm256_loadu_pd(ks + 2 * m)));
        _mm256_storeu_pd(o + 2 * m, _mm256_mul_pd(dup_pairs(e + m), inner));
    }
    for (; m < n; ++m) {
        o[2 * m] = e[m] * (xs[2 * m] + h * ks[2 * m]);
        o[2 * m + 1] = e[m] * (xs[2 * m + 1] + h * ks[2 * m + 1]);
    }
}

void axpy(double* y, const double* x, double c, std::size_t n) {
    const __m256d cv = _mm256_set1_pd(c);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i),
                                              _mm256_mul_pd(cv, _mm256_loadu_pd(x + i))));
    for (; i < n; ++i) y[i] = y[i] + c * x[i];
}

void scale(double* out, const double* in, double c, std::size_t n) {
    const __m256d cv = _mm256_set1_pd(c);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, _mm256_mul_pd(cv, _mm256_loadu_pd(in + i)));
    for (; i < n; ++i) out[i] = c * in[i];
}

void mul(double* out, const double* a, const double* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    for (; i < n; ++i) out[i] = a[i] * b[i];
}

void dot2(double* out, const double* a, const double* b, const double* c, const double* d,
          std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d ab = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        const __m256d cd = _mm256_mul_pd(_mm256_loadu_pd(c + i), _mm256_loadu_pd(d + i));
        _mm256_storeu_pd(out + i, _mm256_add_pd(ab, cd));
    }
    for (; i < n; ++i) out[i] = a[i] * b[i] + c[i] * d[i];
}

void corotation(double* o11, double* o12, double* o22, const double* t11, const double* t12,
                const double* t22, const double* w, std::size_t n) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d wv = _mm256_loadu_pd(w + i);
        const __m256d t = _mm256_mul_pd(wv, _mm256_loadu_pd(t12 + i));
        const __m256d twice = _mm256_add_pd(t, t);
        _mm256_storeu_pd(o11 + i, _mm256_xor_pd(twice, sign));
        _mm256_storeu_pd(o22 + i, twice);
        const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(t11 + i), _mm256_loadu_pd(t22 + i));
        _mm256_storeu_pd(o12 + i, _mm256_mul_pd(wv, diff));
    }
    for (; i < n; ++i) {
        const double t = w[i] * t12[i];
        const double twice = t + t;
        o11[i] = -twice;
        o22[i] = twice;
        o12[i] = w[i] * (t11[i] - t22[i]);
    }
}

double fold(__m256d acc, std::size_t tail_start, std::size_t n, const double* tail_terms) {
    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    for (std::size_t i = tail_start; i < n; ++i) lane[i & 3] = lane[i & 3] + tail_terms[i - tail_start];
    return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double sum_squares(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(x + i);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
    }
    double tail[4];
    for (std::size_t t = i; t < n; ++t) tail[t - i] = x[t] * x[t];
    return fold(acc, i, n, tail);
}

double weighted_power(const Complex* x, const double* w, std::size_t n) {
    const auto* xs = reinterpret_cast<const double*>(x);
    __m256d acc = _mm256_setzero_pd();
    std::size_t m = 0;
    for (; m + 4 <= n; m += 4) {
        const __m256d a = _mm256_loadu_pd(xs + 2 * m);
        const __m256d b = _mm256_loadu_pd(xs + 2 * m + 4);
        // (|x0|^2, |x2|^2, |x1|^2, |x3|^2) -> (|x0|^2, |x1|^2, |x2|^2, |x3|^2)
        const __m256d h = _mm256_hadd_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b));
        const __m256d p = _mm256_permute4x64_pd(h, 0xD8);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(w + m), p));
    }
    double tail[4];
    for (std::size_t t = m; t < n; ++t) {
        const double p = xs[2 * t] * xs[2 * t] + xs[2 * t + 1] * xs[2 * t + 1];
        tail[t - m] = w[t] * p;
    }
    return fold(acc, m, n, tail);
}

double max_abs(const double* x, std::size_t n) {
    const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, _mm256_and_pd(_mm256_loadu_pd(x + i), mask));
    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    double m = 0.0;
    for (double v : lane) m = v > m ? v : m;
    for (; i < n; ++i) {
        const double a = std::fabs(x[i]);
        m = a > m ? a : m;
    }
    return m;
}

} // namespace

const KernelTable& avx2_kernels() {
    static const KernelTable table{
        "avx2",     scale_real, scale_imag, accumulate_real, accumulate_imag, propagate, axpy,
        scale,      mul,        dot2,       corotation,      sum_squares,     weighted_power,
        max_abs,
    };
    return table;
}

} // namespace ob2d::kernels
