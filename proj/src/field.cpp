#include "ob2d/field.hpp"

#include "ob2d/error.hpp"
#include "ob2d/kernels.hpp"

#include <cmath>
#include <utility>

namespace ob2d {

ScalarField::ScalarField(GridPtr grid, RealArray values, ComplexArray spectrum, std::string name)
    : grid_(std::move(grid)), values_(std::move(values)), spectrum_(std::move(spectrum)),
      name_(std::move(name)) {}

ScalarField ScalarField::from_physical(GridPtr grid, RealArray values, std::string name) {
    if (!grid) throw ConfigError("field: null grid");
    if (values.size() != grid->physical_size())
        throw ConfigError("field '" + name + "': physical array has wrong size");
    ComplexArray spectrum(grid->spectral_size());
    grid->forward(values.data(), spectrum.data());
    return ScalarField(std::move(grid), std::move(values), std::move(spectrum), std::move(name));
}

ScalarField ScalarField::from_spectral(GridPtr grid, ComplexArray spectrum, std::string name) {
    if (!grid) throw ConfigError("field: null grid");
    if (spectrum.size() != grid->spectral_size())
        throw ConfigError("field '" + name + "': spectral array has wrong size");
    RealArray values(grid->physical_size());
    grid->inverse(spectrum.data(), values.data());
    return ScalarField(std::move(grid), std::move(values), std::move(spectrum), std::move(name));
}

ScalarField ScalarField::zeros(GridPtr grid, std::string name) {
    if (!grid) throw ConfigError("field: null grid");
    RealArray values(grid->physical_size(), 0.0);
    ComplexArray spectrum(grid->spectral_size(), Complex(0.0, 0.0));
    return ScalarField(std::move(grid), std::move(values), std::move(spectrum), std::move(name));
}

Complex ScalarField::mode(int j1, int j2) const {
    if (j2 < 0) return std::conj(spectrum_[grid_->slot(-j1, -j2)]);
    return spectrum_[grid_->slot(j1, j2)];
}

ScalarField ScalarField::renamed(std::string name) const {
    ScalarField out = *this;
    out.name_ = std::move(name);
    return out;
}

bool ScalarField::all_finite() const {
    for (double v : values_)
        if (!std::isfinite(v)) return false;
    return true;
}

void ScalarField::require_finite(const char* context) const {
    if (!all_finite())
        throw NumericalError(std::string(context) + ": non-finite values in field '" +
                             (name_.empty() ? std::string("<unnamed>") : name_) + "'");
}

ScalarField combine(double a, const ScalarField& f, double b, const ScalarField& g) {
    const auto& k = kernels::active();
    const Grid& grid = f.grid();
    RealArray values(grid.physical_size());
    k.scale(values.data(), f.values().data(), a, values.size());
    k.axpy(values.data(), g.values().data(), b, values.size());
    ComplexArray spectrum(grid.spectral_size());
    auto* s = reinterpret_cast<double*>(spectrum.data());
    k.scale(s, reinterpret_cast<const double*>(f.spectrum().data()), a, 2 * spectrum.size());
    k.axpy(s, reinterpret_cast<const double*>(g.spectrum().data()), b, 2 * spectrum.size());
    return ScalarField(f.grid_ptr(), std::move(values), std::move(spectrum), {});
}

ScalarField operator+(const ScalarField& f, const ScalarField& g) { return combine(1.0, f, 1.0, g); }
ScalarField operator-(const ScalarField& f, const ScalarField& g) { return combine(1.0, f, -1.0, g); }
ScalarField operator*(double a, const ScalarField& f) { return combine(a, f, 0.0, f); }

VectorField VectorField::zeros(GridPtr grid) {
    return VectorField{{ScalarField::zeros(grid, "u1"), ScalarField::zeros(grid, "u2")}};
}

VectorField combine(double a, const VectorField& f, double b, const VectorField& g) {
    return VectorField{{combine(a, f[0], b, g[0]), combine(a, f[1], b, g[1])}};
}

const ScalarField& SymTensorField::operator()(int i, int j) const {
    if (i == 0 && j == 0) return xx;
    if (i == 1 && j == 1) return yy;
    return xy;
}

SymTensorField SymTensorField::zeros(GridPtr grid) {
    return SymTensorField{ScalarField::zeros(grid, "tau11"), ScalarField::zeros(grid, "tau12"),
                          ScalarField::zeros(grid, "tau22")};
}

SymTensorField combine(double a, const SymTensorField& f, double b, const SymTensorField& g) {
    return SymTensorField{combine(a, f.xx, b, g.xx), combine(a, f.xy, b, g.xy),
                          combine(a, f.yy, b, g.yy)};
}

} // namespace ob2d
