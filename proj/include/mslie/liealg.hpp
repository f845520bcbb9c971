#pragma once

// Finite-dimensional Lie algebras of vector fields and the Lie systems built on them.

#include <string>
#include <vector>

#include "mslie/calculus.hpp"
#include "mslie/time_coefficients.hpp"

namespace mslie {

struct FieldFamily {
    std::string name;
    ChartPtr chart;
    std::vector<VectorField> fields;

    FieldFamily() = default;
    FieldFamily(std::string name, std::vector<VectorField> fields);
    int size() const { return static_cast<int>(fields.size()); }
    int dim() const { return chart->dim(); }
    const VectorField& operator[](std::size_t i) const { return fields[i]; }
    // Columns are the fields evaluated at x.
    Eigen::MatrixXd componentMatrix(const Point& x) const;
};

// c(a, b, g) is the coefficient of X_g in [X_a, X_b].
struct StructureConstants {
    int r = 0;
    std::vector<double> c;
    std::vector<double> raw;
    double residual = 0.0;
    double jacobiResidual = 0.0;
    bool pointwiseIndependent = true;

    double operator()(int a, int b, int g) const { return c[index(a, b, g)]; }
    double rawAt(int a, int b, int g) const { return raw[index(a, b, g)]; }
    std::size_t index(int a, int b, int g) const {
        return static_cast<std::size_t>((a * r + b) * r + g);
    }
};

inline constexpr double kHalfIntegerSnap = 1e-9;

StructureConstants structureConstants(const FieldFamily& f, const std::vector<Point>& samples,
                                      const DiffBackend& b = DiffBackend::analytic(), double closureTol = 1e-6);
// max |a - scale * b| over all entries
double maxDifference(const StructureConstants& a, const StructureConstants& b, double scale = 1.0);
// Builds a table from a list of nonzero entries (a, b, g, value) with a < b, 0-based.
struct BracketEntry {
    int a, b, g;
    double value;
};
StructureConstants structureConstantsFromTable(int r, const std::vector<BracketEntry>& entries);

struct Unimodularity {
    bool unimodular = false;
    std::vector<double> traces;
};
Unimodularity isUnimodular(const StructureConstants& sc, double tol = 1e-9);

struct LocalAutomorphism {
    bool locallyAutomorphic = false;
    double minAbsDet = 0.0;
};
LocalAutomorphism isLocallyAutomorphic(const FieldFamily& f, const std::vector<Point>& samples, double tol = 1e-9);

std::vector<AlternatingTensor> dualCoframe(const FieldFamily& f, const Point& x);
std::vector<DifferentialForm> dualCoframeForms(const FieldFamily& f);
// (1/det) dx1^...^dxn for the component matrix with the fields as columns.
DifferentialForm invariantVolume(const FieldFamily& f);

// max over fields and samples of |L_{X_a} Theta + Tr(ad X_a) Theta| for the invariant volume.
double adjointTraceIdentity(const FieldFamily& f, const StructureConstants& sc, const std::vector<Point>& samples,
                            const DiffBackend& b = DiffBackend::analytic());

inline constexpr double kSymmetryTolerance = 1e-7;
double lieSymmetryResidual(const VectorField& Y, const FieldFamily& f, const std::vector<Point>& samples,
                           const DiffBackend& b = DiffBackend::analytic());

// G = X1 (x) X3 + X3 (x) X1 - 2 X2 (x) X2 for an sl2 family on a plane.
class CasimirTensor {
public:
    explicit CasimirTensor(FieldFamily f) : f_(std::move(f)) {}
    Eigen::Matrix2d at(const Point& x) const;
    double det(const Point& x) const { return at(x).determinant(); }

private:
    FieldFamily f_;
};
CasimirTensor casimirTensor(const FieldFamily& f, const std::vector<Point>& samples, const DiffBackend& b = DiffBackend::analytic());

struct LieSystem {
    FieldFamily basis;
    TimeCoefficients coefficients;

    Point velocity(double t, const Point& x) const;
    Point velocity(double t, const Point& x, const TimeCoefficients& b) const;
    VectorField at(double t) const;
    VectorField at(double t, const TimeCoefficients& b) const;
};

}  // namespace mslie
