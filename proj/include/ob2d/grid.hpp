#pragma once

#include "ob2d/aligned.hpp"

#include <cstddef>
#include <memory>
#include <numbers>

namespace ob2d {

class Grid;
using GridPtr = std::shared_ptr<const Grid>;

/// Periodic square box [0, L)^2 sampled on n x n points, together with its
/// half-complex wavenumber lattice and real-to-complex FFT plans.
///
/// Physical arrays are row-major with index i*n + j for the sample at
/// (x1, x2) = (i, j) * L / n. Spectral arrays hold n x (n/2 + 1) modes with
/// index a*(n/2 + 1) + b, where j1 = a (a < n/2) or a - n, and j2 = b. The
/// coefficients are normalized so that f(x) = sum_k fhat(k) exp(i k.x).
class Grid {
public:
    static constexpr double default_length = 2.0 * std::numbers::pi;
    static constexpr double default_dealias = 2.0 / 3.0;

    Grid(int n, double length = default_length, double dealias_fraction = default_dealias);
    ~Grid();
    Grid(const Grid&) = delete;
    Grid& operator=(const Grid&) = delete;

    static GridPtr create(int n, double length = default_length,
                          double dealias_fraction = default_dealias);

    int n() const { return n_; }
    int half() const { return n_ / 2 + 1; }
    double length() const { return length_; }
    double dealias_fraction() const { return dealias_fraction_; }
    double dx() const { return length_ / n_; }
    double cell_area() const { return dx() * dx(); }
    /// Spacing of the wavenumber lattice, 2 pi / L.
    double k0() const { return k0_; }

    std::size_t physical_size() const { return static_cast<std::size_t>(n_) * n_; }
    std::size_t spectral_size() const { return static_cast<std::size_t>(n_) * half(); }

    /// Signed integer lattice indices of spectral slot (a, b).
    int j1(int a) const { return a < n_ / 2 ? a : a - n_; }
    int j2(int b) const { return b; }
    /// Spectral slot for the integer mode (j1, j2) with j2 >= 0.
    std::size_t slot(int j1, int j2) const;

    // Per-mode lattice data, all of spectral_size().
    const RealArray& k1() const { return k1_; }
    const RealArray& k2() const { return k2_; }
    const RealArray& k_squared() const { return ksq_; }
    const RealArray& k_magnitude() const { return kmag_; }
    /// Wavenumbers for odd (first-derivative) symbols: Nyquist rows zeroed.
    const RealArray& d1() const { return d1_; }
    const RealArray& d2() const { return d2_; }
    /// 1 on retained modes, 0 where |j_i| > dealias_fraction * n / 2.
    const RealArray& dealias_mask() const { return mask_; }
    /// Multiplicity of each stored mode in the full spectrum (1 or 2).
    const RealArray& mode_weight() const { return weight_; }
    /// Largest |j_i| kept by the dealias mask.
    int dealias_cutoff() const { return cutoff_; }

    /// Physical -> spectral, normalized by 1/n^2. Thread-safe.
    void forward(const double* physical, Complex* spectral) const;
    /// Spectral -> physical. The input is left untouched. Thread-safe.
    void inverse(const Complex* spectral, double* physical) const;

private:
    int n_;
    double length_;
    double dealias_fraction_;
    double k0_;
    int cutoff_;
    RealArray k1_, k2_, ksq_, kmag_, d1_, d2_, mask_, weight_;
    void* plan_forward_ = nullptr;
    void* plan_inverse_ = nullptr;
};

} // namespace ob2d
