#include "mslie/calculus.hpp"

#include <algorithm>

namespace mslie {

namespace {

using Core = std::function<JetVector(const Point&, int)>;

// Evaluator for an operation that consumes one derivative order of its inputs.
// When the inputs cannot supply order+1 the node differentiates its own values.
JetEvaluator differentialNode(Core core, DiffBackend b) {
    return [core = std::move(core), b](const Point& x, int order, const DiffBackend&) -> JetVector {
        if (order < kMaxJetOrder) return core(x, order);
        ValueFunction vf = [core](const Point& y) { return jetValues(core(y, 0)); };
        return finiteDifferenceJets(vf, x, order, b.step);
    };
}

using PassCore = std::function<JetVector(const Point&, int, const DiffBackend&)>;

// Evaluator for a pointwise algebraic operation; the caller's backend passes through.
JetEvaluator algebraicNode(PassCore core) { return JetEvaluator(std::move(core)); }

void requireSameChart(const ChartPtr& a, const ChartPtr& b, const char* what) {
    if (a == b) return;
    if (!a || !b || a->dim() != b->dim())
        throw Error(ErrorCode::Dimension, std::string(what) + ": dimension mismatch");
    throw Error(ErrorCode::Chart, std::string(what) + ": objects live on different charts (" + a->label() + ", " + b->label() + ")");
}

JetTensor tensorFrom(JetVector v, int dim, int degree, Variance variance) {
    return JetTensor(dim, degree, variance, std::move(v));
}

}  // namespace

DiffBackend DiffBackend::centralDifference(double step) {
    if (!(step >= 1e-7 && step <= 1e-3)) throw Error(ErrorCode::InvalidArgument, "finite-difference step outside [1e-7, 1e-3]");
    DiffBackend b;
    b.mode = Mode::CentralDifference;
    b.step = step;
    return b;
}

Chart::Chart(int dim, std::string label, std::function<bool(const Point&)> domain)
    : dim_(dim), label_(std::move(label)), domain_(std::move(domain)) {
    if (dim < 1 || dim > kMaxJetDim) throw Error(ErrorCode::Dimension, "chart dimension must be in [1,8]");
}

bool Chart::contains(const Point& x) const {
    if (x.size() != dim_) return false;
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (!std::isfinite(x(i))) return false;
    return !domain_ || domain_(x);
}

void Chart::require(const Point& x) const {
    if (x.size() != dim_) throw Error(ErrorCode::Dimension, "point dimension does not match chart " + label_);
    if (!contains(x)) throw Error(ErrorCode::Chart, "point outside the domain of chart " + label_);
}

ChartPtr makeChart(int dim, std::string label, std::function<bool(const Point&)> domain) {
    return std::make_shared<const Chart>(dim, std::move(label), std::move(domain));
}

std::vector<double> toStd(const Point& x) { return std::vector<double>(x.data(), x.data() + x.size()); }

Point toPoint(const std::vector<double>& v) {
    Point p(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) p(static_cast<Eigen::Index>(i)) = v[i];
    return p;
}

JetVector valueJets(const std::vector<double>& v) {
    JetVector out;
    out.reserve(v.size());
    for (double x : v) out.push_back(Jet::valueOnly(x));
    return out;
}

std::vector<double> jetValues(const JetVector& v) {
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& j : v) out.push_back(j.value());
    return out;
}

JetVector finiteDifferenceJets(const ValueFunction& f, const Point& x, int order, double step) {
    const int n = static_cast<int>(x.size());
    if (n > kMaxJetDim) throw Error(ErrorCode::Dimension, "finite-difference jets limited to 8 variables");
    const std::vector<double> f0 = f(x);
    const std::size_t m = f0.size();
    JetVector out;
    out.reserve(m);
    for (double v : f0) {
        Jet j(v);
        j.setShape(n, order);
        out.push_back(j);
    }
    if (order == 0) return out;
    const double h = step;
    for (int i = 0; i < n; ++i) {
        Point xp = x, xm = x;
        xp(i) += h;
        xm(i) -= h;
        const auto fp = f(xp), fm = f(xm);
        for (std::size_t c = 0; c < m; ++c) out[c].setGrad(i, (fp[c] - fm[c]) / (2.0 * h));
    }
    if (order < 2) return out;
    const double h2 = std::clamp(10.0 * step, step, 1e-3);
    for (int i = 0; i < n; ++i) {
        Point xp = x, xm = x;
        xp(i) += h2;
        xm(i) -= h2;
        const auto fp = f(xp), fm = f(xm);
        for (std::size_t c = 0; c < m; ++c) out[c].setHess(i, i, (fp[c] - 2.0 * f0[c] + fm[c]) / (h2 * h2));
        for (int j = i + 1; j < n; ++j) {
            Point a = x, bq = x, c2 = x, d = x;
            a(i) += h2, a(j) += h2;
            bq(i) += h2, bq(j) -= h2;
            c2(i) -= h2, c2(j) += h2;
            d(i) -= h2, d(j) -= h2;
            const auto fa = f(a), fb = f(bq), fc = f(c2), fd = f(d);
            for (std::size_t c = 0; c < m; ++c) {
                const double v = (fa[c] - fb[c] - fc[c] + fd[c]) / (4.0 * h2 * h2);
                out[c].setHess(i, j, v);
                out[c].setHess(j, i, v);
            }
        }
    }
    return out;
}

JetVector compose(const JetVector& outer, const JetVector& inner) {
    int n = 0;
    int innerOrder = kMaxJetOrder;
    for (const auto& j : inner) {
        n = std::max(n, j.dim());
        innerOrder = std::min(innerOrder, j.order());
    }
    const int m = static_cast<int>(inner.size());
    JetVector out;
    out.reserve(outer.size());
    for (const auto& o : outer) {
        if (o.dim() == 0 && o.order() == kMaxJetOrder) {
            out.emplace_back(o.value());
            continue;
        }
        if (o.dim() != 0 && o.dim() != m) throw Error(ErrorCode::Dimension, "compose: outer jet dimension mismatch");
        Jet r(o.value());
        const int order = std::min(o.order(), innerOrder);
        r.setShape(n, order);
        if (order >= 1)
            for (int a = 0; a < n; ++a) {
                double s = 0.0;
                for (int i = 0; i < o.dim(); ++i) s += o.grad(i) * inner[static_cast<std::size_t>(i)].grad(a);
                r.setGrad(a, s);
            }
        if (order >= 2)
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    double s = 0.0;
                    for (int i = 0; i < o.dim(); ++i) {
                        const auto& gi = inner[static_cast<std::size_t>(i)];
                        s += o.grad(i) * gi.hess(a, b);
                        for (int j = 0; j < o.dim(); ++j) s += o.hess(i, j) * gi.grad(a) * inner[static_cast<std::size_t>(j)].grad(b);
                    }
                    r.setHess(a, b, s);
                }
        out.push_back(r);
    }
    return out;
}

JetEvaluator numericEvaluator(ValueFunction f) {
    return [f = std::move(f)](const Point& x, int order, const DiffBackend& b) -> JetVector {
        if (order == 0) return valueJets(f(x));
        return finiteDifferenceJets(f, x, order, b.step);
    };
}

// ---------------------------------------------------------------- VectorField

VectorField::VectorField(ChartPtr chart, std::string name, JetEvaluator eval, bool analytic)
    : chart_(std::move(chart)), name_(std::move(name)), eval_(std::move(eval)), analytic_(analytic) {
    if (!chart_) throw Error(ErrorCode::Chart, "vector field without chart");
}

VectorField VectorField::fromValues(ChartPtr chart, std::string name, ValueFunction f) {
    return VectorField(std::move(chart), std::move(name), numericEvaluator(std::move(f)), false);
}

VectorField VectorField::zero(ChartPtr chart, std::string name) {
    const int n = chart->dim();
    return VectorField(std::move(chart), std::move(name),
                       [n](const Point&, int, const DiffBackend&) { return JetVector(static_cast<std::size_t>(n), Jet(0.0)); });
}

VectorField VectorField::coordinate(ChartPtr chart, int i) {
    const int n = chart->dim();
    return VectorField(std::move(chart), "d" + std::to_string(i + 1), [n, i](const Point&, int, const DiffBackend&) {
        JetVector v(static_cast<std::size_t>(n), Jet(0.0));
        v[static_cast<std::size_t>(i)] = Jet(1.0);
        return v;
    });
}

Point VectorField::operator()(const Point& x) const { return toPoint(jetValues(jets(x, 0, DiffBackend::analytic()))); }

JetVector VectorField::jets(const Point& x, int order, const DiffBackend& b) const {
    if (!eval_) throw Error(ErrorCode::InvalidArgument, "empty vector field");
    chart_->require(x);
    JetVector r = eval_(x, order, b);
    if (static_cast<int>(r.size()) != dim()) throw Error(ErrorCode::Dimension, "vector field " + name_ + " returned wrong component count");
    return r;
}

Eigen::MatrixXd VectorField::jacobian(const Point& x, const DiffBackend& b) const {
    const JetVector j = jets(x, 1, b);
    const int n = dim();
    Eigen::MatrixXd J(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) J(i, k) = j[static_cast<std::size_t>(i)].grad(k);
    return J;
}

VectorField VectorField::renamed(std::string name) const {
    VectorField r = *this;
    r.name_ = std::move(name);
    return r;
}

VectorField linearCombination(const std::vector<VectorField>& fields, const std::vector<double>& coeffs, std::string name) {
    if (fields.empty()) throw Error(ErrorCode::InvalidArgument, "linear combination of no fields");
    if (fields.size() != coeffs.size()) throw Error(ErrorCode::InvalidArgument, "linear combination: coefficient count mismatch");
    bool analytic = true;
    for (const auto& f : fields) {
        requireSameChart(fields[0].chart(), f.chart(), "linearCombination");
        analytic = analytic && f.hasAnalyticJacobian();
    }
    if (name.empty()) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (coeffs[i] == 0.0) continue;
            if (!name.empty()) name += " + ";
            name += std::to_string(coeffs[i]) + "*" + fields[i].name();
        }
        if (name.empty()) name = "0";
    }
    const int n = fields[0].dim();
    return VectorField(fields[0].chart(), name,
                       [fields, coeffs, n](const Point& x, int order, const DiffBackend& b) {
                           JetVector out(static_cast<std::size_t>(n), Jet(0.0));
                           for (std::size_t k = 0; k < fields.size(); ++k) {
                               if (coeffs[k] == 0.0) continue;
                               const JetVector v = fields[k].jets(x, order, b);
                               for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] += coeffs[k] * v[static_cast<std::size_t>(i)];
                           }
                           return out;
                       },
                       analytic);
}

VectorField operator+(const VectorField& a, const VectorField& b) {
    return linearCombination({a, b}, {1.0, 1.0}, a.name() + " + " + b.name());
}
VectorField operator-(const VectorField& a, const VectorField& b) {
    return linearCombination({a, b}, {1.0, -1.0}, a.name() + " - " + b.name());
}
VectorField operator*(double c, const VectorField& a) { return linearCombination({a}, {c}); }

// ----------------------------------------------------------- DifferentialForm

DifferentialForm::DifferentialForm(ChartPtr chart, int degree, std::string name, JetEvaluator eval, bool analytic)
    : chart_(std::move(chart)), degree_(degree), name_(std::move(name)), eval_(std::move(eval)), analytic_(analytic) {
    if (!chart_) throw Error(ErrorCode::Chart, "form without chart");
    if (degree < 0 || degree > chart_->dim()) throw Error(ErrorCode::Degree, "form degree outside [0, n]");
}

DifferentialForm DifferentialForm::constant(ChartPtr chart, const AlternatingTensor& t, std::string name) {
    if (t.dim() != chart->dim()) throw Error(ErrorCode::Dimension, "constant form dimension mismatch");
    if (t.variance() != Variance::Covariant) throw Error(ErrorCode::Variance, "constant form must be covariant");
    std::vector<double> c = t.coeffs();
    return DifferentialForm(std::move(chart), t.degree(), std::move(name), [c](const Point&, int, const DiffBackend&) {
        JetVector v;
        v.reserve(c.size());
        for (double x : c) v.emplace_back(x);
        return v;
    });
}

DifferentialForm DifferentialForm::zero(ChartPtr chart, int degree) {
    const int n = chart->dim();
    return constant(std::move(chart), AlternatingTensor(n, degree, Variance::Covariant), "0");
}

AlternatingTensor DifferentialForm::operator()(const Point& x) const { return values(jets(x, 0, DiffBackend::analytic())); }

JetTensor DifferentialForm::jets(const Point& x, int order, const DiffBackend& b) const {
    if (!eval_) throw Error(ErrorCode::InvalidArgument, "empty form");
    chart_->require(x);
    return tensorFrom(eval_(x, order, b), dim(), degree_, Variance::Covariant);
}

DifferentialForm DifferentialForm::renamed(std::string name) const {
    DifferentialForm r = *this;
    r.name_ = std::move(name);
    return r;
}

namespace {

DifferentialForm combineForms(const DifferentialForm& a, const DifferentialForm& b, double sb, std::string name) {
    requireSameChart(a.chart(), b.chart(), "form sum");
    if (a.degree() != b.degree()) throw Error(ErrorCode::Degree, "form sum: degree mismatch");
    return DifferentialForm(a.chart(), a.degree(), std::move(name),
                            algebraicNode([a, b, sb](const Point& x, int order, const DiffBackend& be) {
                                JetTensor r = a.jets(x, order, be);
                                JetTensor s = b.jets(x, order, be);
                                r += s * Jet(sb);
                                return r.coeffs();
                            }),
                            a.analytic() && b.analytic());
}

}  // namespace

DifferentialForm operator+(const DifferentialForm& a, const DifferentialForm& b) {
    return combineForms(a, b, 1.0, a.name() + " + " + b.name());
}
DifferentialForm operator-(const DifferentialForm& a, const DifferentialForm& b) {
    return combineForms(a, b, -1.0, a.name() + " - " + b.name());
}
DifferentialForm operator*(double c, const DifferentialForm& a) {
    return DifferentialForm(a.chart(), a.degree(), std::to_string(c) + "*" + a.name(),
                            algebraicNode([a, c](const Point& x, int order, const DiffBackend& be) {
                                JetTensor r = a.jets(x, order, be);
                                r *= Jet(c);
                                return r.coeffs();
                            }),
                            a.analytic());
}

DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b) {
    requireSameChart(a.chart(), b.chart(), "wedge");
    if (a.degree() + b.degree() > a.dim()) throw Error(ErrorCode::Degree, "wedge: total degree exceeds dimension");
    return DifferentialForm(a.chart(), a.degree() + b.degree(), a.name() + "^" + b.name(),
                            algebraicNode([a, b](const Point& x, int order, const DiffBackend& be) {
                                return wedge(a.jets(x, order, be), b.jets(x, order, be))
                                    .coeffs();
                            }),
                            a.analytic() && b.analytic());
}

DifferentialForm coordinateDifferential(ChartPtr chart, int i) {
    const int n = chart->dim();
    return DifferentialForm::constant(std::move(chart), AlternatingTensor::basis(n, {i}, Variance::Covariant),
                                      "dx" + std::to_string(i + 1));
}

// ----------------------------------------------------------- MultiVectorField

MultiVectorField::MultiVectorField(ChartPtr chart, int degree, std::string name, JetEvaluator eval, bool analytic)
    : chart_(std::move(chart)), degree_(degree), name_(std::move(name)), eval_(std::move(eval)), analytic_(analytic) {
    if (!chart_) throw Error(ErrorCode::Chart, "multivector field without chart");
    if (degree < 0 || degree > chart_->dim()) throw Error(ErrorCode::Degree, "multivector degree outside [0, n]");
}

MultiVectorField MultiVectorField::wedgeOf(const std::vector<VectorField>& factors, std::string name) {
    if (factors.empty()) throw Error(ErrorCode::InvalidArgument, "wedge of no vector fields");
    bool analytic = true;
    for (const auto& f : factors) {
        requireSameChart(factors[0].chart(), f.chart(), "wedgeOf");
        analytic = analytic && f.hasAnalyticJacobian();
    }
    if (name.empty())
        for (std::size_t i = 0; i < factors.size(); ++i) name += (i ? "^" : "") + factors[i].name();
    const int n = factors[0].dim();
    if (static_cast<int>(factors.size()) > n) throw Error(ErrorCode::Degree, "wedge of more than n vector fields");
    MultiVectorField W(factors[0].chart(), static_cast<int>(factors.size()), std::move(name),
                       algebraicNode([factors, n](const Point& x, int order, const DiffBackend& be) {
                           std::vector<JetTensor> vs;
                           for (const auto& f : factors)
                               vs.push_back(JetTensor::fromComponents(f.jets(x, order, be), Variance::Contravariant));
                           return wedgeAll(vs, n, Variance::Contravariant).coeffs();
                       }),
                       analytic);
    W.decomposition_ = factors;
    return W;
}

MultiVectorField MultiVectorField::fromVectorField(const VectorField& X) { return wedgeOf({X}, X.name()); }

AlternatingTensor MultiVectorField::operator()(const Point& x) const { return values(jets(x, 0, DiffBackend::analytic())); }

JetTensor MultiVectorField::jets(const Point& x, int order, const DiffBackend& b) const {
    if (!eval_) throw Error(ErrorCode::InvalidArgument, "empty multivector field");
    chart_->require(x);
    return tensorFrom(eval_(x, order, b), dim(), degree_, Variance::Contravariant);
}

// ------------------------------------------------------------------ SmoothMap

SmoothMap::SmoothMap(ChartPtr source, ChartPtr target, std::string name, JetEvaluator eval, bool analytic)
    : source_(std::move(source)), target_(std::move(target)), name_(std::move(name)), eval_(std::move(eval)), analytic_(analytic) {
    if (!source_ || !target_) throw Error(ErrorCode::Chart, "smooth map without charts");
}

Point SmoothMap::operator()(const Point& x) const { return toPoint(jetValues(jets(x, 0, DiffBackend::analytic()))); }

JetVector SmoothMap::jets(const Point& x, int order, const DiffBackend& b) const {
    source_->require(x);
    JetVector r = eval_(x, order, b);
    if (static_cast<int>(r.size()) != target_->dim()) throw Error(ErrorCode::Dimension, "map " + name_ + " returned wrong component count");
    return r;
}

Eigen::MatrixXd SmoothMap::jacobian(const Point& x, const DiffBackend& b) const {
    const JetVector j = jets(x, 1, b);
    Eigen::MatrixXd J(target_->dim(), source_->dim());
    for (int i = 0; i < target_->dim(); ++i)
        for (int k = 0; k < source_->dim(); ++k) J(i, k) = j[static_cast<std::size_t>(i)].grad(k);
    return J;
}

// ----------------------------------------------------------------- operations

VectorField lieBracket(const VectorField& X, const VectorField& Y, const DiffBackend& b) {
    requireSameChart(X.chart(), Y.chart(), "lieBracket");
    const int n = X.dim();
    return VectorField(X.chart(), "[" + X.name() + "," + Y.name() + "]",
                       differentialNode(
                           [X, Y, b, n](const Point& x, int k) {
                               const JetVector xj = X.jets(x, k + 1, b);
                               const JetVector yj = Y.jets(x, k + 1, b);
                               JetVector out(static_cast<std::size_t>(n), Jet(0.0));
                               for (int i = 0; i < n; ++i)
                                   for (int j = 0; j < n; ++j) {
                                       out[static_cast<std::size_t>(i)] += xj[static_cast<std::size_t>(j)] * yj[static_cast<std::size_t>(i)].partial(j);
                                       out[static_cast<std::size_t>(i)] -= yj[static_cast<std::size_t>(j)] * xj[static_cast<std::size_t>(i)].partial(j);
                                   }
                               return out;
                           },
                           b),
                       b.isAnalytic() && X.hasAnalyticJacobian() && Y.hasAnalyticJacobian());
}

DifferentialForm exteriorDerivative(const DifferentialForm& w, const DiffBackend& b) {
    const int n = w.dim();
    const int k = w.degree();
    if (k >= n) throw Error(ErrorCode::Degree, "exterior derivative of a top-degree form");
    return DifferentialForm(w.chart(), k + 1, "d(" + w.name() + ")",
                            differentialNode(
                                [w, b, n, k](const Point& x, int order) {
                                    const JetTensor wj = w.jets(x, order + 1, b);
                                    JetTensor out(n, k + 1, Variance::Covariant);
                                    const auto& idx = multiIndices(n, k + 1);
                                    MultiIndex rest;
                                    for (std::size_t r = 0; r < idx.size(); ++r) {
                                        const MultiIndex& K = idx[r];
                                        for (std::size_t a = 0; a < K.size(); ++a) {
                                            rest = K;
                                            rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(a));
                                            const Jet term = wj[rankOf(rest)].partial(K[a]);
                                            if (a % 2 == 0)
                                                out[r] += term;
                                            else
                                                out[r] -= term;
                                        }
                                    }
                                    return out.coeffs();
                                },
                                b),
                            b.isAnalytic() && w.analytic());
}

DifferentialForm contractField(const MultiVectorField& W, const DifferentialForm& w) {
    requireSameChart(W.chart(), w.chart(), "contractField");
    if (W.degree() > w.degree())
        throw Error(ErrorCode::Degree, "contractField: multivector degree " + std::to_string(W.degree()) + " exceeds form degree " +
                                           std::to_string(w.degree()));
    return DifferentialForm(w.chart(), w.degree() - W.degree(), "i_{" + W.name() + "}" + w.name(),
                            algebraicNode([W, w](const Point& x, int order, const DiffBackend& be) {
                                return interior(W.jets(x, order, be), w.jets(x, order, be)).coeffs();
                            }),
                            W.analytic() && w.analytic());
}

DifferentialForm contractField(const VectorField& X, const DifferentialForm& w) {
    return contractField(MultiVectorField::fromVectorField(X), w);
}

DifferentialForm lieDerivativeForm(const VectorField& X, const DifferentialForm& w, const DiffBackend& b) {
    requireSameChart(X.chart(), w.chart(), "lieDerivativeForm");
    DifferentialForm r;
    if (w.degree() == 0) {
        r = contractField(X, exteriorDerivative(w, b));
    } else {
        r = exteriorDerivative(contractField(X, w), b);
        if (w.degree() < w.dim()) r = contractField(X, exteriorDerivative(w, b)) + r;
    }
    return r.renamed("L_{" + X.name() + "}" + w.name());
}

namespace {

MultiVectorField sumMultivectors(const std::vector<MultiVectorField>& terms, std::string name) {
    const auto& first = terms.front();
    bool analytic = true;
    for (const auto& t : terms) analytic = analytic && t.analytic();
    return MultiVectorField(first.chart(), first.degree(), std::move(name),
                            algebraicNode([terms](const Point& x, int order, const DiffBackend& be) {
                                JetTensor acc = terms.front().jets(x, order, be);
                                for (std::size_t i = 1; i < terms.size(); ++i) acc += terms[i].jets(x, order, be);
                                return acc.coeffs();
                            }),
                            analytic);
}

}  // namespace

MultiVectorField lieDerivativeMultivector(const VectorField& X, const MultiVectorField& W, const DiffBackend& b) {
    requireSameChart(X.chart(), W.chart(), "lieDerivativeMultivector");
    if (!W.decomposition()) return lieDerivativeMultivectorDense(X, W, b);
    const auto& fs = *W.decomposition();
    std::vector<MultiVectorField> terms;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        std::vector<VectorField> g = fs;
        g[i] = lieBracket(X, fs[i], b);
        terms.push_back(MultiVectorField::wedgeOf(g));
    }
    return sumMultivectors(terms, "L_{" + X.name() + "}" + W.name());
}

MultiVectorField lieDerivativeMultivectorDense(const VectorField& X, const MultiVectorField& W, const DiffBackend& b) {
    requireSameChart(X.chart(), W.chart(), "lieDerivativeMultivector");
    const int n = X.dim();
    const int p = W.degree();
    return MultiVectorField(
        X.chart(), p, "L_{" + X.name() + "}" + W.name(),
        differentialNode(
            [X, W, b, n, p](const Point& x, int k) {
                const JetVector xj = X.jets(x, k + 1, b);
                const JetTensor wj = W.jets(x, k + 1, b);
                JetTensor out(n, p, Variance::Contravariant);
                for (std::size_t r = 0; r < out.size(); ++r)
                    for (int j = 0; j < n; ++j) out[r] += xj[static_cast<std::size_t>(j)] * wj[r].partial(j);
                const auto& idx = multiIndices(n, p);
                for (std::size_t r = 0; r < idx.size(); ++r) {
                    const MultiIndex& J = idx[r];
                    for (std::size_t a = 0; a < J.size(); ++a) {
                        // d_{J_1} ^ ... ^ (DX d_{J_a}) ^ ... ^ d_{J_p}
                        std::vector<JetTensor> factors;
                        for (std::size_t t = 0; t < J.size(); ++t) {
                            JetVector comp(static_cast<std::size_t>(n), Jet(0.0));
                            if (t == a)
                                for (int i = 0; i < n; ++i) comp[static_cast<std::size_t>(i)] = xj[static_cast<std::size_t>(i)].partial(J[a]);
                            else
                                comp[static_cast<std::size_t>(J[t])] = Jet(1.0);
                            factors.push_back(JetTensor::fromComponents(comp, Variance::Contravariant));
                        }
                        out -= wedgeAll(factors, n, Variance::Contravariant) * wj[r];
                    }
                }
                return out.coeffs();
            },
            b),
        b.isAnalytic() && X.hasAnalyticJacobian() && W.analytic());
}

DifferentialForm pullback(const SmoothMap& phi, const DifferentialForm& w, const DiffBackend& b) {
    requireSameChart(phi.target(), w.chart(), "pullback");
    const int n = phi.source()->dim();
    const int m = phi.target()->dim();
    const int k = w.degree();
    if (k > n) throw Error(ErrorCode::Degree, "pullback: form degree exceeds source dimension");
    return DifferentialForm(
        phi.source(), k, phi.name() + "^*" + w.name(),
        differentialNode(
            [phi, w, b, n, m, k](const Point& x, int order) {
                const JetVector ph = phi.jets(x, order + 1, b);
                const Point y = toPoint(jetValues(ph));
                const JetTensor wy = w.jets(y, order, b);
                const JetVector wc = compose(wy.coeffs(), ph);
                std::vector<JetTensor> dphi;
                for (int i = 0; i < m; ++i) {
                    JetVector comp;
                    for (int a = 0; a < n; ++a) comp.push_back(ph[static_cast<std::size_t>(i)].partial(a));
                    dphi.push_back(JetTensor::fromComponents(comp, Variance::Covariant));
                }
                JetTensor out(n, k, Variance::Covariant);
                const auto& idx = multiIndices(m, k);
                for (std::size_t r = 0; r < idx.size(); ++r) {
                    if (wc[r].dim() == 0 && wc[r].value() == 0.0) continue;
                    std::vector<JetTensor> fs;
                    for (int i : idx[r]) fs.push_back(dphi[static_cast<std::size_t>(i)]);
                    out += wedgeAll(fs, n, Variance::Covariant) * wc[r];
                }
                return out.coeffs();
            },
            b),
        b.isAnalytic() && w.analytic());
}

VectorField pushforwardField(const SmoothMap& pi, const SmoothMap& section, const VectorField& X, const DiffBackend& b) {
    requireSameChart(pi.source(), X.chart(), "pushforwardField");
    requireSameChart(section.target(), X.chart(), "pushforwardField");
    requireSameChart(section.source(), pi.target(), "pushforwardField");
    const int n = X.dim();
    const int m = pi.target()->dim();
    return VectorField(
        pi.target(), pi.name() + "_*" + X.name(),
        differentialNode(
            [pi, section, X, b, n, m](const Point& y, int order) {
                const JetVector s = section.jets(y, order, b);
                const Point x = toPoint(jetValues(s));
                const JetVector p = pi.jets(x, order + 1, b);
                const JetVector v = X.jets(x, order, b);
                JetVector px;
                for (int i = 0; i < m; ++i) {
                    Jet acc(0.0);
                    for (int j = 0; j < n; ++j) acc += p[static_cast<std::size_t>(i)].partial(j) * v[static_cast<std::size_t>(j)];
                    px.push_back(acc);
                }
                return compose(px, s);
            },
            b),
        b.isAnalytic() && X.hasAnalyticJacobian());
}

double maxAbsOver(const DifferentialForm& w, const std::vector<Point>& samples) {
    double m = 0.0;
    for (const auto& x : samples) m = std::max(m, maxAbs(w(x)));
    return m;
}

double maxAbsOver(const VectorField& X, const std::vector<Point>& samples) {
    double m = 0.0;
    for (const auto& x : samples) m = std::max(m, X(x).cwiseAbs().maxCoeff());
    return m;
}

double maxAbsDifference(const DifferentialForm& a, const DifferentialForm& b, const std::vector<Point>& samples) {
    if (a.degree() != b.degree()) throw Error(ErrorCode::Degree, "maxAbsDifference: degree mismatch");
    double m = 0.0;
    for (const auto& x : samples) m = std::max(m, maxAbs(a(x) - b(x)));
    return m;
}

double maxAbsDifference(const VectorField& a, const VectorField& b, const std::vector<Point>& samples) {
    double m = 0.0;
    for (const auto& x : samples) m = std::max(m, (a(x) - b(x)).cwiseAbs().maxCoeff());
    return m;
}

}  // namespace mslie
