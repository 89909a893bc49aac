#pragma once

#include "ob2d/aligned.hpp"
#include "ob2d/grid.hpp"

#include <array>
#include <string>

namespace ob2d {

/// Real scalar field on a periodic grid, stored both as physical samples and
/// as half-complex spectral coefficients. Immutable after construction.
class ScalarField {
public:
    ScalarField() = default;

    static ScalarField from_physical(GridPtr grid, RealArray values, std::string name = {});
    static ScalarField from_spectral(GridPtr grid, ComplexArray spectrum, std::string name = {});
    static ScalarField zeros(GridPtr grid, std::string name = {});

    bool empty() const { return grid_ == nullptr; }
    const Grid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    const RealArray& values() const { return values_; }
    const ComplexArray& spectrum() const { return spectrum_; }
    const std::string& name() const { return name_; }

    double at(int i, int j) const { return values_[static_cast<std::size_t>(i) * grid_->n() + j]; }
    /// Spectral coefficient of integer mode (j1, j2), any sign of j2.
    Complex mode(int j1, int j2) const;

    ScalarField renamed(std::string name) const;
    bool all_finite() const;
    /// Throws NumericalError naming the field when a sample is NaN or infinite.
    void require_finite(const char* context) const;

private:
    ScalarField(GridPtr grid, RealArray values, ComplexArray spectrum, std::string name);
    friend ScalarField combine(double a, const ScalarField& f, double b, const ScalarField& g);

    GridPtr grid_;
    RealArray values_;
    ComplexArray spectrum_;
    std::string name_;
};

/// a*f + b*g, formed on both representations without a transform.
ScalarField combine(double a, const ScalarField& f, double b, const ScalarField& g);
ScalarField operator+(const ScalarField& f, const ScalarField& g);
ScalarField operator-(const ScalarField& f, const ScalarField& g);
ScalarField operator*(double a, const ScalarField& f);

struct VectorField {
    std::array<ScalarField, 2> c;

    const ScalarField& operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
    const Grid& grid() const { return c[0].grid(); }
    const GridPtr& grid_ptr() const { return c[0].grid_ptr(); }
    bool all_finite() const { return c[0].all_finite() && c[1].all_finite(); }

    static VectorField zeros(GridPtr grid);
};

VectorField combine(double a, const VectorField& f, double b, const VectorField& g);

/// Symmetric 2x2 tensor field; only (11, 12, 22) are stored so tau^T = tau
/// holds structurally and tau21 aliases tau12.
struct SymTensorField {
    ScalarField xx, xy, yy;

    const ScalarField& operator()(int i, int j) const;
    const Grid& grid() const { return xx.grid(); }
    const GridPtr& grid_ptr() const { return xx.grid_ptr(); }
    bool all_finite() const { return xx.all_finite() && xy.all_finite() && yy.all_finite(); }

    static SymTensorField zeros(GridPtr grid);
};

SymTensorField combine(double a, const SymTensorField& f, double b, const SymTensorField& g);

/// Skew 2x2 tensor field; Omega11 = Omega22 = 0 and Omega21 = -Omega12.
struct SkewTensorField {
    ScalarField xy;

    const Grid& grid() const { return xy.grid(); }
};

} // namespace ob2d
