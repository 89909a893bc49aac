#pragma once

#include "ob2d/field.hpp"

#include <limits>

namespace ob2d {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

/// Rectangle-rule L^p norm; p = infinity gives max |f|. Vector fields use the
/// pointwise Euclidean magnitude, tensor fields the Frobenius magnitude.
double lp_norm(const ScalarField& f, double p);
double lp_norm(const VectorField& v, double p);
double lp_norm(const SymTensorField& tau, double p);

/// L^p norm of raw pointwise samples on the grid (no transform).
double lp_norm_samples(const Grid& grid, const RealArray& samples, double p);

/// Sum over modes of |fhat|^2 times L^2: the Plancherel value of ||f||_{L^2}^2.
double spectral_energy(const ScalarField& f);

enum class SobolevKind { inhomogeneous, homogeneous };

/// Symbol (1 + |k|^2)^{s/2} (inhomogeneous) or |k|^s (homogeneous, with
/// |k|^0 = 1 on every mode), evaluated through Plancherel.
double sobolev_norm(const ScalarField& f, double s, SobolevKind kind);
double sobolev_norm(const VectorField& v, double s, SobolevKind kind);
double sobolev_norm(const SymTensorField& tau, double s, SobolevKind kind);

/// Sharp dyadic block: j = -1 keeps |k| < 1, j >= 0 keeps 2^j <= |k| < 2^{j+1}.
ScalarField dyadic_block(const ScalarField& f, int j);
/// Largest j whose block is non-empty on this grid.
int max_dyadic_index(const Grid& grid);

/// (sum_{j >= -1} (2^{-j s} ||Delta_j f||_inf)^r)^{1/r}; r = infinity takes the max.
double besov_norm(const ScalarField& f, double s, double r);

} // namespace ob2d
