#pragma once

// Tensor fields on a single chart and the operations of Cartan calculus.
// Every field is backed by a jet evaluator: at a point it returns the
// components together with their derivatives up to the requested order.
// Derived fields (brackets, contractions, pullbacks) are evaluated lazily by
// asking their inputs for one more order.

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mslie/exterior.hpp"
#include "mslie/jet.hpp"

namespace mslie {

using Point = Eigen::VectorXd;

struct DiffBackend {
    enum class Mode { Analytic, CentralDifference };
    Mode mode = Mode::Analytic;
    double step = 1e-5;

    static DiffBackend analytic() { return {}; }
    static DiffBackend centralDifference(double step = 1e-5);
    bool isAnalytic() const { return mode == Mode::Analytic; }
};

class Chart {
public:
    Chart(int dim, std::string label, std::function<bool(const Point&)> domain = {});
    int dim() const { return dim_; }
    const std::string& label() const { return label_; }
    bool contains(const Point& x) const;
    void require(const Point& x) const;

private:
    int dim_;
    std::string label_;
    std::function<bool(const Point&)> domain_;
};

using ChartPtr = std::shared_ptr<const Chart>;
ChartPtr makeChart(int dim, std::string label, std::function<bool(const Point&)> domain = {});

using JetEvaluator = std::function<JetVector(const Point& x, int order, const DiffBackend& backend)>;
using ValueFunction = std::function<std::vector<double>(const Point& x)>;

std::vector<double> toStd(const Point& x);
Point toPoint(const std::vector<double>& v);
JetVector valueJets(const std::vector<double>& v);
std::vector<double> jetValues(const JetVector& v);

// Derivatives of a value function by central differences, packed into jets.
JetVector finiteDifferenceJets(const ValueFunction& f, const Point& x, int order, double step);

// Jets of f o phi in the source variables, given jets of f in the target variables.
JetVector compose(const JetVector& outer, const JetVector& inner);

JetEvaluator numericEvaluator(ValueFunction f);

// f is a generic callable taking std::vector<T> and returning std::vector<T>
// for T = double and T = Jet.
template <class F>
JetEvaluator formulaEvaluator(int dim, F f) {
    ValueFunction values = [f](const Point& x) { return f(toStd(x)); };
    return [dim, f, values](const Point& x, int order, const DiffBackend& b) -> JetVector {
        if (order == 0) return valueJets(values(x));
        if (b.isAnalytic() && dim <= kMaxJetDim) {
            std::vector<Jet> v;
            v.reserve(static_cast<std::size_t>(dim));
            for (int i = 0; i < dim; ++i) v.push_back(Jet::variable(x(i), i, dim, order));
            return f(v);
        }
        return finiteDifferenceJets(values, x, order, b.step);
    };
}

class VectorField {
public:
    VectorField() = default;
    VectorField(ChartPtr chart, std::string name, JetEvaluator eval, bool analytic = true);

    template <class F>
    static VectorField fromFormula(ChartPtr chart, std::string name, F f) {
        const int n = chart->dim();
        return VectorField(std::move(chart), std::move(name), formulaEvaluator(n, std::move(f)), true);
    }
    static VectorField fromValues(ChartPtr chart, std::string name, ValueFunction f);
    static VectorField zero(ChartPtr chart, std::string name = "0");
    static VectorField coordinate(ChartPtr chart, int i);

    const ChartPtr& chart() const { return chart_; }
    int dim() const { return chart_->dim(); }
    const std::string& name() const { return name_; }
    bool hasAnalyticJacobian() const { return analytic_; }
    const JetEvaluator& evaluator() const { return eval_; }

    Point operator()(const Point& x) const;
    JetVector jets(const Point& x, int order, const DiffBackend& b) const;
    Eigen::MatrixXd jacobian(const Point& x, const DiffBackend& b = DiffBackend::analytic()) const;
    VectorField renamed(std::string name) const;

private:
    ChartPtr chart_;
    std::string name_;
    JetEvaluator eval_;
    bool analytic_ = false;
};

VectorField linearCombination(const std::vector<VectorField>& fields, const std::vector<double>& coeffs, std::string name = "");
VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(double c, const VectorField& a);

class DifferentialForm {
public:
    DifferentialForm() = default;
    DifferentialForm(ChartPtr chart, int degree, std::string name, JetEvaluator eval, bool analytic = true);

    // f returns a BasicAlternatingTensor<T> of the given degree.
    template <class F>
    static DifferentialForm fromFormula(ChartPtr chart, int degree, std::string name, F f) {
        const int n = chart->dim();
        auto coeffs = [f](const auto& v) { return f(v).coeffs(); };
        return DifferentialForm(std::move(chart), degree, std::move(name), formulaEvaluator(n, coeffs), true);
    }
    static DifferentialForm constant(ChartPtr chart, const AlternatingTensor& t, std::string name = "");
    static DifferentialForm zero(ChartPtr chart, int degree);

    const ChartPtr& chart() const { return chart_; }
    int dim() const { return chart_->dim(); }
    int degree() const { return degree_; }
    const std::string& name() const { return name_; }
    bool analytic() const { return analytic_; }
    const JetEvaluator& evaluator() const { return eval_; }

    AlternatingTensor operator()(const Point& x) const;
    JetTensor jets(const Point& x, int order, const DiffBackend& b) const;
    DifferentialForm renamed(std::string name) const;

private:
    ChartPtr chart_;
    int degree_ = 0;
    std::string name_;
    JetEvaluator eval_;
    bool analytic_ = false;
};

DifferentialForm operator+(const DifferentialForm& a, const DifferentialForm& b);
DifferentialForm operator-(const DifferentialForm& a, const DifferentialForm& b);
DifferentialForm operator*(double c, const DifferentialForm& a);
DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b);
// The 1-form dx^i.
DifferentialForm coordinateDifferential(ChartPtr chart, int i);

class MultiVectorField {
public:
    MultiVectorField() = default;
    MultiVectorField(ChartPtr chart, int degree, std::string name, JetEvaluator eval, bool analytic = true);

    static MultiVectorField wedgeOf(const std::vector<VectorField>& factors, std::string name = "");
    static MultiVectorField fromVectorField(const VectorField& X);

    const ChartPtr& chart() const { return chart_; }
    int dim() const { return chart_->dim(); }
    int degree() const { return degree_; }
    const std::string& name() const { return name_; }
    bool analytic() const { return analytic_; }
    const std::optional<std::vector<VectorField>>& decomposition() const { return decomposition_; }

    AlternatingTensor operator()(const Point& x) const;
    JetTensor jets(const Point& x, int order, const DiffBackend& b) const;

private:
    ChartPtr chart_;
    int degree_ = 0;
    std::string name_;
    JetEvaluator eval_;
    bool analytic_ = false;
    std::optional<std::vector<VectorField>> decomposition_;
};

class SmoothMap {
public:
    SmoothMap() = default;
    SmoothMap(ChartPtr source, ChartPtr target, std::string name, JetEvaluator eval, bool analytic = true);

    template <class F>
    static SmoothMap fromFormula(ChartPtr source, ChartPtr target, std::string name, F f) {
        const int n = source->dim();
        return SmoothMap(std::move(source), std::move(target), std::move(name), formulaEvaluator(n, std::move(f)), true);
    }

    const ChartPtr& source() const { return source_; }
    const ChartPtr& target() const { return target_; }
    const std::string& name() const { return name_; }

    Point operator()(const Point& x) const;
    JetVector jets(const Point& x, int order, const DiffBackend& b) const;
    Eigen::MatrixXd jacobian(const Point& x, const DiffBackend& b = DiffBackend::analytic()) const;

private:
    ChartPtr source_;
    ChartPtr target_;
    std::string name_;
    JetEvaluator eval_;
    bool analytic_ = false;
};

VectorField lieBracket(const VectorField& X, const VectorField& Y, const DiffBackend& b = DiffBackend::analytic());
DifferentialForm exteriorDerivative(const DifferentialForm& w, const DiffBackend& b = DiffBackend::analytic());
DifferentialForm lieDerivativeForm(const VectorField& X, const DifferentialForm& w, const DiffBackend& b = DiffBackend::analytic());
MultiVectorField lieDerivativeMultivector(const VectorField& X, const MultiVectorField& W,
                                          const DiffBackend& b = DiffBackend::analytic());
// Coordinate formula, used for multivectors without a decomposition.
MultiVectorField lieDerivativeMultivectorDense(const VectorField& X, const MultiVectorField& W,
                                               const DiffBackend& b = DiffBackend::analytic());
DifferentialForm contractField(const MultiVectorField& W, const DifferentialForm& w);
DifferentialForm contractField(const VectorField& X, const DifferentialForm& w);
DifferentialForm pullback(const SmoothMap& phi, const DifferentialForm& w, const DiffBackend& b = DiffBackend::analytic());

// y -> Dpi(section(y)) X(section(y)), a field on the target of pi.
VectorField pushforwardField(const SmoothMap& pi, const SmoothMap& section, const VectorField& X,
                             const DiffBackend& b = DiffBackend::analytic());

double maxAbsOver(const DifferentialForm& w, const std::vector<Point>& samples);
double maxAbsOver(const VectorField& X, const std::vector<Point>& samples);
double maxAbsDifference(const DifferentialForm& a, const DifferentialForm& b, const std::vector<Point>& samples);
double maxAbsDifference(const VectorField& a, const VectorField& b, const std::vector<Point>& samples);

}  // namespace mslie
