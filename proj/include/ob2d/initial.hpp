#pragma once

#include "ob2d/config.hpp"

#include <cstdint>

namespace ob2d {

/// Initial state at time 0: u divergence-free, mean-free and supported in the
/// radial band kmin <= |j| <= kmax (taylor_green ignores the band); tau per tau_kind.
/// Random coefficients are drawn in a fixed mode order that depends only on
/// the band, so the same seed gives the same field on every resolution.
State make_initial(const InitialConditionConfig& ic, const GridPtr& grid);

/// Unit perturbation (p_u, p_tau) with ||p_u||^2 + ||p_tau||^2 = 1, p_u divergence-free,
/// supported in the given band.
State make_perturbation(const GridPtr& grid, std::uint64_t seed, double kmin, double kmax);

/// Random real field with spectral support in kmin <= |j| <= kmax and mode
/// amplitudes decaying like (1 + |j|)^{-decay}; unnormalized.
ScalarField random_bandlimited_field(const GridPtr& grid, std::uint64_t seed, double kmin, double kmax,
                                     double decay = 2.0);

} // namespace ob2d
