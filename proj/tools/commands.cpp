#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "mslie/error.hpp"
#include "mslie/gallery.hpp"
#include "mslie/integrate.hpp"

namespace mslie::cli {

namespace {

using json = nlohmann::json;

constexpr double kStructureTolerance = 1e-9;
constexpr double kGoldenTolerance = 1e-8;
constexpr double kEquilibriumTolerance = 1e-12;

Error usage(const std::string& what) { return Error(ErrorCode::InvalidArgument, what); }

ExampleBundle load(const Common& c) {
    if (c.example == "dbh" && !c.alpha.empty()) {
        if (c.alpha.size() != 3) throw usage("--alpha needs three values");
        return loadDbh(c.alpha[0], c.alpha[1], c.alpha[2]);
    }
    if (!c.alpha.empty()) throw usage("--alpha only applies to dbh");
    return loadExample(c.example);
}

std::vector<Point> projectAll(const SmoothMap& pi, const std::vector<Point>& xs) {
    std::vector<Point> out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back(pi(x));
    return out;
}

json vec(const Point& x) { return toStd(x); }

TimeCoefficients readCoefficients(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw usage("cannot read coefficient file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw usage("coefficient file " + path + " is not valid JSON: " + e.what());
    }
    return TimeCoefficients::fromJson(j);
}

Point parsePoint(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw usage("cannot read \"" + s + "\" as a comma-separated point");
        }
    }
    return toPoint(v);
}

int finish(const std::string& command, const Common& c, const Report& rep, json results,
           const std::vector<std::string>& artifacts, bool domainExit = false) {
    json doc = {{"command", command},
                {"example", c.example},
                {"seed", c.seed},
                {"checks", rep.toJson()},
                {"artifacts", artifacts},
                {"results", std::move(results)}};
    if (c.report.empty()) {
        std::cout << doc.dump(2) << "\n";
    } else {
        std::ofstream out(c.report);
        if (!out) throw usage("cannot write report " + c.report);
        out << doc.dump(2) << "\n";
    }
    const auto failed = rep.failures();
    std::cerr << command << " " << c.example << ": " << rep.checks().size() << " checks, " << failed.size() << " failed\n";
    for (const auto& f : failed) std::cerr << "  FAIL " << f << "\n";
    if (domainExit) return kDomainExit;
    return failed.empty() ? kPass : kCheckFailure;
}

json tableJson(const StructureConstants& sc, const FieldFamily& f) {
    json out = json::array();
    for (int a = 0; a < sc.r; ++a)
        for (int b = a + 1; b < sc.r; ++b)
            for (int g = 0; g < sc.r; ++g)
                if (sc(a, b, g) != 0.0)
                    out.push_back({{"bracket", {f[static_cast<std::size_t>(a)].name(), f[static_cast<std::size_t>(b)].name()}},
                                   {"field", f[static_cast<std::size_t>(g)].name()},
                                   {"coefficient", sc(a, b, g)}});
    return out;
}

// The reduced system of a scheme, sampled on the projections of the total samples.
struct Reduced {
    ReducedSystem system;
    std::vector<Point> base;
};

Reduced reducedSystem(const ExampleBundle& e, const ReductionScheme& s, const std::vector<Point>& total) {
    auto base = projectAll(s.quotient.projection, total);
    return {reduceSystem(e.bundle, s, total, base), std::move(base)};
}

void requireConstant(const TimeCoefficients& b) {
    for (std::size_t i = 0; i < b.size(); ++i)
        if (b[i].kind() != Coefficient::Kind::Constant) throw usage("equilibria need constant coefficients");
}

}  // namespace

int validate(const Common& c, const ValidateOptions& o) {
    auto e = load(c);
    const auto samples = e.samples(c.samples, c.seed);
    if (o.corruptTheta) {
        const auto& theta = e.bundle.theta;
        const int n = theta.dim();
        const auto bump = DifferentialForm::fromFormula(theta.chart(), 0, "bump", [n](const auto& u) {
            using T = std::decay_t<decltype(u[0])>;
            BasicAlternatingTensor<T> t(n, 0, Variance::Covariant);
            t[0] = 1.0 + 0.5 * u[0] * u[0];
            return t;
        });
        e.bundle.theta = wedge(bump, theta).renamed(theta.name() + "_corrupt");
    }
    const auto& basis = e.bundle.basis();
    Report rep;
    const auto sc = structureConstants(basis, samples);
    rep.add("structure_constants", maxDifference(sc, structureConstantsFromTable(basis.size(), e.golden.brackets.entries)),
            kStructureTolerance, e.golden.brackets.anchor);
    rep.append(validateSystem(e.bundle, samples));
    for (const auto& Y : e.symmetries.fields)
        rep.add("symmetry:" + Y.name(), lieSymmetryResidual(Y, basis, samples), kSymmetryTolerance);

    const auto uni = isUnimodular(sc);
    const auto aut = isLocallyAutomorphic(basis, samples);
    json results = {{"structure_constants", tableJson(sc, basis)},
                    {"unimodular", uni.unimodular},
                    {"traces", uni.traces},
                    {"locally_automorphic", aut.locallyAutomorphic},
                    {"corrupt_theta", o.corruptTheta}};
    return finish("validate", c, rep, std::move(results), {});
}

int reduce(const Common& c, const ReduceOptions& o) {
    const auto e = load(c);
    const auto& s = e.scheme(o.scheme);
    const auto total = e.samples(c.samples, c.seed);
    const auto base = projectAll(s.quotient.projection, total);
    const SchemeGolden* g = e.schemeGolden(s.name);
    Report rep;
    rep.append(verifyQuotient(s.quotient, base, total), "quotient/");
    rep.append(verifyReductionScheme(s, total));

    json reduced = {{"example", e.id}, {"scheme", s.name}, {"base", s.quotient.base()->label()}, {"dim", s.quotient.base()->dim()}};
    std::optional<DifferentialForm> form;
    try {
        const auto red = reduceForm(s, base);
        form = red.form;
        rep.add("fiber_form", red.fiberResidual, kFiberTolerance);
        if (g) rep.add("reduced_form", maxAbsDifference(red.form, g->reducedForm, base), kGoldenTolerance, g->anchor);
    } catch (const Error& err) {
        rep.addFlag("reduced_form", false, err.what());
    }
    const auto& basis = e.bundle.basis();
    std::vector<std::optional<VectorField>> projected;
    for (int a = 0; a < basis.size(); ++a) {
        const auto& X = basis[static_cast<std::size_t>(a)];
        try {
            const auto pf = projectField(X, s.quotient, base);
            rep.add("fiber_field:" + X.name(), pf.wellDefResidual, kFiberTolerance);
            if (g) {
                const auto& want = g->reducedFields[static_cast<std::size_t>(a)];
                rep.add("reduced_field:" + X.name(),
                        want ? maxAbsDifference(pf.field, *want, base) : maxAbsOver(pf.field, base), kGoldenTolerance, g->anchor);
            }
            projected.emplace_back(pf.field);
        } catch (const Error& err) {
            rep.addFlag("reduced_field:" + X.name(), false, err.what());
            projected.emplace_back(std::nullopt);
        }
    }
    try {
        const auto rs = reduceSystem(e.bundle, s, total, base);
        rep.append(validateSystem(rs.system, base), "reduced/");
        const auto& rb = rs.system.basis();
        reduced["kept"] = rs.kept;
        std::vector<std::string> names;
        for (const auto& X : rb.fields) names.push_back(X.name());
        reduced["fields"] = names;
        reduced["coefficients"] = rs.system.system.coefficients.toJson()["b"];
        reduced["structure_constants"] = tableJson(structureConstants(rb, base), rb);
    } catch (const Error& err) {
        rep.addFlag("reduced/system", false, err.what());
    }
    json pts = json::array();
    for (std::size_t i = 0; i < std::min<std::size_t>(5, base.size()); ++i) {
        json p = {{"point", vec(base[i])}};
        if (form) p["theta"] = (*form)(base[i]).coeffs();
        json fields = json::object();
        for (int a = 0; a < basis.size(); ++a)
            if (projected[static_cast<std::size_t>(a)])
                fields[basis[static_cast<std::size_t>(a)].name()] = vec((*projected[static_cast<std::size_t>(a)])(base[i]));
        p["fields"] = fields;
        pts.push_back(p);
    }
    reduced["samples"] = pts;

    std::vector<std::string> artifacts;
    if (!o.out.empty()) {
        std::ofstream out(o.out);
        if (!out) throw usage("cannot write " + o.out);
        out << reduced.dump(2) << "\n";
        artifacts.push_back(o.out);
    }
    return finish("reduce", c, rep, {{"reduced", reduced}}, artifacts);
}

int integrate(const Common& c, const IntegrateOptions& o) {
    const auto e = load(c);
    const auto& basis = e.bundle.basis();
    TimeCoefficients coeffs = o.coeffs.empty() ? e.bundle.system.coefficients : readCoefficients(o.coeffs);
    if (static_cast<int>(coeffs.size()) != basis.size())
        throw usage("coefficient file has " + std::to_string(coeffs.size()) + " entries for " + std::to_string(basis.size()) +
                    " basis fields");
    if (!(o.dtOut > 0.0)) throw usage("--dt-out must be positive");

    LieSystem system = e.bundle.system;
    Point x0 = e.flowTestPoint;
    std::optional<Reduced> red;
    if (!o.scheme.empty()) {
        const auto& s = e.scheme(o.scheme);
        red = reducedSystem(e, s, e.samples(c.samples, c.seed));
        system = red->system.system.system;
        coeffs = coeffs.select(red->system.kept);
        x0 = s.quotient.projection(x0);
    }
    if (!o.x0.empty()) x0 = toPoint(o.x0);
    if (x0.size() != system.basis.dim())
        throw usage("--x0 needs " + std::to_string(system.basis.dim()) + " values");
    if (!system.basis.chart->contains(x0)) throw usage("--x0 lies outside the chart");

    std::vector<NamedFunction> inv;
    for (const auto& name : o.invariants) {
        if (name == "h" && e.id == "schwarz" && o.scheme == "y2") {
            const auto forms = schwarzReduced().hamiltonianForms;
            const Eigen::VectorXd b = coeffs.at(o.t0);
            inv.push_back({name, [forms, b](const Point& y) {
                               double h = 0.0;
                               for (std::size_t i = 0; i < forms.size(); ++i) h += b(static_cast<Eigen::Index>(i)) * forms[i].hamForm(y)[0];
                               return h;
                           }});
        } else if (name == "noether" && o.scheme.empty() && !e.symmetries.fields.empty() &&
                   e.symmetries.size() == e.bundle.theta.degree()) {
            const auto J = contractField(MultiVectorField::wedgeOf(e.symmetries.fields), e.bundle.theta);
            inv.push_back({name, [J](const Point& x) { return J(x)[0]; }});
        } else {
            throw usage("invariant \"" + name + "\" is not available here (h: schwarz --scheme y2; noether: ambient systems)");
        }
    }

    IntegratorOptions opt;
    opt.relTol = o.relTol;
    const auto tr = mslie::integrate(system, coeffs, x0, o.t0, o.tmax, outputGrid(o.t0, o.tmax, o.dtOut), opt);

    const std::string out = o.out.empty() ? e.id + (o.scheme.empty() ? "" : "_" + o.scheme) + "_trajectory.csv" : o.out;
    std::ofstream csv(out);
    if (!csv) throw usage("cannot write " + out);
    writeTrajectoryCsv(csv, tr, inv);
    csv.close();

    Report rep;
    rep.addFlag("completed", tr.completed(), tr.message);
    for (const auto& f : inv) rep.add("drift:" + f.name, monitorInvariant(tr, f.f), o.invariantTol);
    json results = {{"steps", tr.steps},
                    {"rejected", tr.rejected},
                    {"rows", tr.times.size()},
                    {"x0", vec(x0)},
                    {"coefficients", coeffs.toJson()["b"]}};
    if (!tr.completed()) {
        results["exit_time"] = tr.exitTime;
        results["message"] = tr.message;
    }
    return finish("integrate", c, rep, std::move(results), {out}, tr.status == Trajectory::Status::DomainExit);
}

int reconstruct(const Common& c, const ReconstructOptions& o) {
    const auto e = load(c);
    const auto names = o.schemes.empty() ? e.reconstruction : o.schemes;
    if (names.empty()) throw usage("example " + e.id + " has no scheme collection marked for reconstruction");
    const auto total = e.samples(c.samples, c.seed);

    std::vector<QuotientChart> qs;
    std::vector<ReducedInvariant> inv;
    std::vector<LieSystem> systems;
    std::vector<MultiVectorField> Z;
    for (const auto& n : names) {
        const auto& s = e.scheme(n);
        const auto r = reducedSystem(e, s, total);
        qs.push_back(s.quotient);
        inv.push_back({reduceForm(s, r.base).form, s.w, s.quotient});
        Z.push_back(s.w);
        // fields that project to zero still constrain the reconstruction
        std::vector<VectorField> all;
        for (const auto& X : e.bundle.basis().fields) all.push_back(projectField(X, s.quotient, r.base).field);
        systems.push_back({FieldFamily(n + "_reduced", all), e.bundle.system.coefficients});
    }

    Report rep;
    int kernel = 0, annihilator = 0;
    bool mixed = false;
    const int ell = e.bundle.theta.degree();
    for (const auto& g : total) {
        kernel = std::max(kernel, kernelIntersectionDim(qs, g));
        const auto a = annihilatorIntersectionDim(Z, ell, g);
        annihilator = std::max(annihilator, a.dim);
        mixed = mixed || a.mixedDegrees;
    }
    rep.add("kernel_dim", kernel, 0.0, "kernel intersection dimension " + std::to_string(kernel));
    if (kernel == 0) {
        double worst = 0.0;
        try {
            for (double t : {0.0, 0.5, 1.0})
                for (const auto& g : total) {
                    const auto r = reconstructField(systems, qs, g, t);
                    worst = std::max(worst, (r.value - e.bundle.system.velocity(t, g)).cwiseAbs().maxCoeff());
                }
            rep.add("field_residual", worst, kGoldenTolerance);
        } catch (const Error& err) {
            rep.addFlag("field_residual", false, err.what());
        }
    }
    rep.add("annihilator_dim", annihilator, 0.0, "annihilator intersection dimension " + std::to_string(annihilator));
    if (annihilator == 0) {
        double worst = 0.0, solve = 0.0;
        try {
            for (const auto& g : total) {
                const auto r = reconstructForm(inv, ell, g);
                worst = std::max(worst, maxAbs(r.value - e.bundle.theta(g)));
                solve = std::max(solve, r.residual);
            }
            rep.add("theta_residual", worst, kGoldenTolerance);
            rep.add("solve_residual", solve, kGoldenTolerance);
        } catch (const Error& err) {
            rep.addFlag("theta_residual", false, err.what());
        }
    }
    json results = {{"schemes", names}, {"kernel_dim", kernel}, {"annihilator_dim", annihilator}, {"mixed_degrees", mixed}};
    return finish("reconstruct", c, rep, std::move(results), {});
}

int equilibria(const Common& c, const EquilibriaOptions& o) {
    const auto e = load(c);
    const bool schwarzY2 = e.id == "schwarz" && o.scheme == "y2";
    TimeCoefficients coeffs = !o.coeffs.empty() ? readCoefficients(o.coeffs)
                              : schwarzY2        ? TimeCoefficients::constants(schwarzReduced().equilibria.coefficients)
                                                 : e.bundle.system.coefficients;
    if (static_cast<int>(coeffs.size()) != e.bundle.basis().size())
        throw usage("coefficient file has " + std::to_string(coeffs.size()) + " entries for " +
                    std::to_string(e.bundle.basis().size()) + " basis fields");
    requireConstant(coeffs);

    const auto total = e.samples(c.samples, c.seed);
    LieSystem system = e.bundle.system;
    const ReductionScheme* scheme = nullptr;
    std::vector<Point> defaults(total.begin(), total.begin() + std::min<std::ptrdiff_t>(5, std::ssize(total)));
    if (!o.scheme.empty()) {
        scheme = &e.scheme(o.scheme);
        const auto r = reducedSystem(e, *scheme, total);
        system = r.system.system.system;
        coeffs = coeffs.select(r.system.kept);
        defaults = projectAll(scheme->quotient.projection, defaults);
    }
    if (schwarzY2) defaults = schwarzReduced().equilibria.guesses;
    std::vector<Point> guesses;
    for (const auto& s : o.guesses) guesses.push_back(parsePoint(s));
    if (guesses.empty()) guesses = defaults;
    for (const auto& g : guesses)
        if (g.size() != system.basis.dim()) throw usage("guesses need " + std::to_string(system.basis.dim()) + " values");

    const auto X = system.at(0.0, coeffs);
    const auto eq = relativeEquilibria(X, guesses);
    const bool lift = scheme && e.bundle.basis().size() == e.bundle.basis().dim();
    const auto ambient = e.bundle.system.at(0.0, TimeCoefficients::constants([&] {
        std::vector<double> b;
        const Eigen::VectorXd v = (o.coeffs.empty() && schwarzY2) ? TimeCoefficients::constants(schwarzReduced().equilibria.coefficients).at(0.0)
                                  : o.coeffs.empty()             ? e.bundle.system.coefficients.at(0.0)
                                                                 : readCoefficients(o.coeffs).at(0.0);
        for (Eigen::Index i = 0; i < v.size(); ++i) b.push_back(v(i));
        return b;
    }()));

    Report rep;
    json list = json::array();
    for (std::size_t i = 0; i < eq.size(); ++i) {
        const auto& q = eq[i];
        const std::string name = "equilibrium:" + std::to_string(i + 1);
        if (q.converged)
            rep.add(name, X(q.point).norm(), kEquilibriumTolerance);
        else
            rep.addFlag(name, false, "Newton did not converge from guess " + json(vec(q.guess)).dump());
        json ev = json::array();
        for (const auto& z : q.eigenvalues) ev.push_back({z.real(), z.imag()});
        json item = {{"guess", vec(q.guess)},   {"point", vec(q.point)},       {"converged", q.converged},
                     {"iterations", q.iterations}, {"residual", q.residual}, {"eigenvalues", ev}};
        if (lift && q.converged) {
            const Point g = scheme->quotient.section(q.point);
            item["lift"] = {{"point", vec(g)}, {"velocity", vec(ambient(g))}, {"speed", ambient(g).norm()}};
        }
        list.push_back(item);
    }
    return finish("equilibria", c, rep, {{"equilibria", list}, {"coefficients", coeffs.toJson()["b"]}}, {});
}

namespace {

json goldenJson(const ExampleBundle& e, unsigned long seed) {
    const auto pts = e.samples(3, seed);
    json brackets = json::array();
    for (const auto& b : e.golden.brackets.entries)
        brackets.push_back({{"bracket", {e.bundle.basis()[static_cast<std::size_t>(b.a)].name(),
                                         e.bundle.basis()[static_cast<std::size_t>(b.b)].name()}},
                            {"field", e.bundle.basis()[static_cast<std::size_t>(b.g)].name()},
                            {"coefficient", b.value}});
    json theta = json::array();
    for (const auto& x : pts) theta.push_back({{"point", vec(x)}, {"coefficients", e.golden.theta(x).coeffs()}});
    json reductions = json::array();
    for (const auto& g : e.golden.reductions) {
        const auto& s = e.scheme(g.scheme);
        json vals = json::array();
        for (const auto& x : pts) {
            const Point y = s.quotient.projection(x);
            json fields = json::object();
            for (std::size_t a = 0; a < g.reducedFields.size(); ++a)
                fields[e.bundle.basis()[a].name()] = g.reducedFields[a] ? vec((*g.reducedFields[a])(y)) : json(nullptr);
            vals.push_back({{"point", vec(y)}, {"form", g.reducedForm(y).coeffs()}, {"fields", fields}});
        }
        reductions.push_back({{"scheme", g.scheme}, {"anchor", g.anchor}, {"base", s.quotient.base()->label()}, {"values", vals}});
    }
    json out = {{"id", e.id},
                {"title", e.title},
                {"brackets", {{"anchor", e.golden.brackets.anchor}, {"entries", brackets}}},
                {"theta", {{"anchor", e.golden.thetaAnchor}, {"values", theta}}},
                {"reductions", reductions}};
    if (!e.parameters.empty()) out["parameters"] = e.parameters;
    if (e.golden.noetherValue) out["noether_value"] = *e.golden.noetherValue;
    if (e.id == "schwarz") {
        const auto r = schwarzReduced();
        json pts2 = json::array();
        for (const auto& p : r.equilibria.points) pts2.push_back(vec(p));
        out["equilibria"] = {{"anchor", r.equilibria.anchor},
                             {"coefficients", r.equilibria.coefficients},
                             {"points", pts2},
                             {"eigenvalues", r.equilibria.eigenvalues}};
    }
    return out;
}

}  // namespace

int golden(const Common& c, const GoldenOptions& o) {
    std::vector<std::string> ids;
    if (c.example == "all")
        ids = exampleIds();
    else
        ids = {load(c).id};
    Report rep;
    json exported = json::array();
    for (const auto& id : ids) {
        const auto r = goldenCheck(id, c.seed, c.samples);
        rep.append(r, ids.size() > 1 ? id + "/" : "");
        if (!o.exportPath.empty()) exported.push_back(goldenJson(loadExample(id), c.seed));
    }
    std::vector<std::string> artifacts;
    if (!o.exportPath.empty()) {
        std::ofstream out(o.exportPath);
        if (!out) throw usage("cannot write " + o.exportPath);
        out << exported.dump(2) << "\n";
        artifacts.push_back(o.exportPath);
    }
    return finish("golden", c, rep, {{"examples", ids}}, artifacts);
}

}  // namespace mslie::cli
