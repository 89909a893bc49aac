#include "ob2d/grid.hpp"

#include "ob2d/error.hpp"
#include "ob2d/kernels.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <string>

namespace ob2d {
namespace {

// The FFTW planner is not re-entrant; execution with new-array functions is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

thread_local ComplexArray inverse_scratch;

} // namespace

Grid::Grid(int n, double length, double dealias_fraction)
    : n_(n), length_(length), dealias_fraction_(dealias_fraction) {
    if (n < 8 || n % 2 != 0)
        throw ConfigError("grid: n must be even and at least 8, got " + std::to_string(n));
    if (!(length > 0.0) || !std::isfinite(length))
        throw ConfigError("grid: length must be positive and finite");
    if (!(dealias_fraction > 0.0 && dealias_fraction <= 1.0))
        throw ConfigError("grid: dealias_fraction must lie in (0, 1]");

    k0_ = 2.0 * std::numbers::pi / length_;
    const double limit = dealias_fraction_ * n_ / 2.0;
    cutoff_ = static_cast<int>(std::floor(limit + 1e-12));

    const std::size_t size = spectral_size();
    k1_.resize(size);
    k2_.resize(size);
    ksq_.resize(size);
    kmag_.resize(size);
    d1_.resize(size);
    d2_.resize(size);
    mask_.resize(size);
    weight_.resize(size);

    const int h = half();
    for (int a = 0; a < n_; ++a) {
        for (int b = 0; b < h; ++b) {
            const std::size_t m = static_cast<std::size_t>(a) * h + b;
            const int ja = j1(a);
            const int jb = j2(b);
            k1_[m] = k0_ * ja;
            k2_[m] = k0_ * jb;
            ksq_[m] = k1_[m] * k1_[m] + k2_[m] * k2_[m];
            kmag_[m] = std::sqrt(ksq_[m]);
            d1_[m] = (a == n_ / 2) ? 0.0 : k1_[m];
            d2_[m] = (b == n_ / 2) ? 0.0 : k2_[m];
            const bool kept = std::abs(ja) <= cutoff_ && jb <= cutoff_;
            mask_[m] = kept ? 1.0 : 0.0;
            weight_[m] = (b == 0 || b == n_ / 2) ? 1.0 : 2.0;
        }
    }

    // FFTW_ESTIMATE keeps the chosen algorithm, and therefore every rounding
    // decision, identical from run to run.
    std::lock_guard<std::mutex> lock(planner_mutex());
    auto* phys = fftw_alloc_real(physical_size());
    auto* spec = fftw_alloc_complex(size);
    plan_forward_ = fftw_plan_dft_r2c_2d(n_, n_, phys, spec, FFTW_ESTIMATE);
    plan_inverse_ = fftw_plan_dft_c2r_2d(n_, n_, spec, phys, FFTW_ESTIMATE);
    fftw_free(phys);
    fftw_free(spec);
    if (plan_forward_ == nullptr || plan_inverse_ == nullptr)
        throw ConfigError("grid: FFTW planning failed for n = " + std::to_string(n));
}

Grid::~Grid() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (plan_forward_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(plan_forward_));
    if (plan_inverse_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(plan_inverse_));
}

GridPtr Grid::create(int n, double length, double dealias_fraction) {
    return std::make_shared<const Grid>(n, length, dealias_fraction);
}

std::size_t Grid::slot(int ja, int jb) const {
    const int a = ja < 0 ? ja + n_ : ja;
    return static_cast<std::size_t>(a) * half() + jb;
}

void Grid::forward(const double* physical, Complex* spectral) const {
    fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_forward_), const_cast<double*>(physical),
                         reinterpret_cast<fftw_complex*>(spectral));
    const double norm = 1.0 / static_cast<double>(physical_size());
    auto* s = reinterpret_cast<double*>(spectral);
    kernels::active().scale(s, s, norm, 2 * spectral_size());
}

void Grid::inverse(const Complex* spectral, double* physical) const {
    // Multi-dimensional c2r transforms overwrite their input.
    inverse_scratch.assign(spectral, spectral + spectral_size());
    fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_inverse_),
                         reinterpret_cast<fftw_complex*>(inverse_scratch.data()), physical);
}

} // namespace ob2d
