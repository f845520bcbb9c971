#include "mslie/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace mslie {

namespace {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799, d4 = -10690763975.0 / 1880347072,
                 d5 = 701980252875.0 / 199316789632, d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

constexpr double kMaxStateNorm = 1e12;

bool finite(const Point& x) { return x.allFinite(); }

struct Dense {
    Point r1, r2, r3, r4, r5;
    double t, h;
    Point at(double s) const {
        const double th = (s - t) / h;
        const double th1 = 1.0 - th;
        return r1 + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5)));
    }
};

class Stepper {
public:
    Stepper(const Chart& chart, const OdeRhs& f) : chart_(chart), f_(f) {}

    // Returns false if a stage leaves the chart or produces non-finite values.
    bool eval(double t, const Point& x, Point& out) const {
        if (!finite(x) || x.cwiseAbs().maxCoeff() > kMaxStateNorm || !chart_.contains(x)) return false;
        try {
            out = f_(t, x);
        } catch (const Error&) {
            return false;
        }
        return finite(out);
    }

    const Chart& chart_;
    const OdeRhs& f_;
};

}  // namespace

Trajectory integrateOde(const Chart& chart, const OdeRhs& f, const Point& x0, double t0, double t1,
                        const std::vector<double>& outputTimes, const IntegratorOptions& opt,
                        const std::vector<double>& breakpoints) {
    if (x0.size() != chart.dim()) throw Error(ErrorCode::Dimension, "initial point has the wrong dimension");
    chart.require(x0);
    if (!(opt.relTol > 0.0) || !(opt.absTol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerances must be positive");

    Trajectory traj;
    const double dir = t1 >= t0 ? 1.0 : -1.0;
    std::vector<double> outs = outputTimes;
    if (outs.empty()) outs = {t0, t1};
    for (std::size_t i = 0; i < outs.size(); ++i) {
        if (dir * (outs[i] - t0) < 0.0 || dir * (outs[i] - t1) > 0.0)
            throw Error(ErrorCode::InvalidArgument, "output time outside the integration interval");
        if (i > 0 && dir * (outs[i] - outs[i - 1]) < 0.0) throw Error(ErrorCode::InvalidArgument, "output times out of order");
    }
    std::size_t nextOut = 0;
    auto emit = [&](double t, const Point& x) {
        traj.times.push_back(t);
        traj.states.push_back(x);
        ++nextOut;
    };
    while (nextOut < outs.size() && outs[nextOut] == t0) emit(t0, x0);
    if (t0 == t1) return traj;

    std::vector<double> ends;
    for (double b : breakpoints)
        if (dir * (b - t0) > 0.0 && dir * (t1 - b) > 0.0) ends.push_back(b);
    std::sort(ends.begin(), ends.end(), [dir](double a, double b) { return dir * a < dir * b; });
    ends.push_back(t1);

    const Stepper st(chart, f);
    Point x = x0;
    double t = t0;
    double h = 0.0;
    double errOld = 1e-4;
    const double span = std::abs(t1 - t0);

    for (std::size_t seg = 0; seg < ends.size(); ++seg) {
        const double segStart = t;
        const double segEnd = ends[seg];
        // At a breakpoint the right-hand side is read from inside the current segment.
        auto at = [&](double s) {
            if (seg > 0 && s == segStart) return std::nextafter(s, segEnd);
            if (seg + 1 < ends.size() && s == segEnd) return std::nextafter(s, segStart);
            return s;
        };
        Point k1;
        if (!st.eval(at(t), x, k1)) {
            traj.status = Trajectory::Status::DomainExit;
            traj.exitTime = t;
            traj.message = "right-hand side undefined at t = " + std::to_string(t);
            return traj;
        }
        if (h == 0.0) {
            if (opt.initialStep > 0.0) {
                h = opt.initialStep;
            } else {
                const Eigen::ArrayXd sc = opt.absTol + opt.relTol * x.array().abs();
                const double d0 = std::sqrt((x.array() / sc).square().mean());
                const double d1n = std::sqrt((k1.array() / sc).square().mean());
                h = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
                h = std::min(h, span);
            }
        }
        h = std::abs(h);
        bool lastFailDomain = false;
        while (dir * (segEnd - t) > 0.0) {
            if (traj.steps + traj.rejected >= opt.maxSteps) {
                traj.status = Trajectory::Status::StepUnderflow;
                traj.exitTime = t;
                traj.message = "step budget exhausted at t = " + std::to_string(t);
                return traj;
            }
            const double minStep = 1e-13 * std::max(1.0, std::abs(t));
            if (h < minStep) {
                traj.status = lastFailDomain ? Trajectory::Status::DomainExit : Trajectory::Status::StepUnderflow;
                traj.exitTime = t;
                traj.message = (lastFailDomain ? "left the chart near t = " : "step size underflow at t = ") + std::to_string(t);
                return traj;
            }
            bool last = false;
            if (h >= std::abs(segEnd - t)) {
                h = std::abs(segEnd - t);
                last = true;
            }
            const double hs = dir * h;
            Point k2, k3, k4, k5, k6, k7;
            const bool ok = st.eval(t + c2 * hs, x + hs * (a21 * k1), k2) &&
                            st.eval(t + c3 * hs, x + hs * (a31 * k1 + a32 * k2), k3) &&
                            st.eval(t + c4 * hs, x + hs * (a41 * k1 + a42 * k2 + a43 * k3), k4) &&
                            st.eval(t + c5 * hs, x + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4), k5) &&
                            st.eval(at(last ? segEnd : t + hs), x + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5), k6);
            Point y1;
            bool okEnd = false;
            if (ok) {
                y1 = x + hs * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
                okEnd = st.eval(at(last ? segEnd : t + hs), y1, k7);
            }
            if (!ok || !okEnd) {
                lastFailDomain = true;
                ++traj.rejected;
                h *= 0.25;
                continue;
            }
            const Point errv = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
            const Eigen::ArrayXd sc = opt.absTol + opt.relTol * x.array().abs().max(y1.array().abs());
            const double err = std::sqrt((errv.array() / sc).square().mean());
            if (!(err <= 1.0)) {
                lastFailDomain = false;
                ++traj.rejected;
                h *= std::max(0.2, 0.9 * std::pow(std::isfinite(err) ? err : 1e10, -0.2));
                continue;
            }
            const double tNew = last ? segEnd : t + hs;
            traj.maxErrorEstimate = std::max(traj.maxErrorEstimate, err);
            ++traj.steps;
            if (nextOut < outs.size() && dir * (outs[nextOut] - tNew) <= 0.0) {
                Dense dn;
                dn.t = t;
                dn.h = tNew - t;
                dn.r1 = x;
                dn.r2 = y1 - x;
                dn.r3 = dn.h * k1 - dn.r2;
                dn.r4 = dn.r2 - dn.h * k7 - dn.r3;
                dn.r5 = dn.h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
                while (nextOut < outs.size() && dir * (outs[nextOut] - tNew) <= 0.0) {
                    const double to = outs[nextOut];
                    emit(to, to == tNew ? y1 : dn.at(to));
                }
            }
            t = tNew;
            x = y1;
            k1 = k7;
            lastFailDomain = false;
            double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5.0) * std::pow(errOld, 0.4 / 5.0);
            fac = std::clamp(fac, 0.2, 10.0);
            errOld = std::max(err, 1e-4);
            h *= fac;
        }
    }
    return traj;
}

Trajectory integrate(const LieSystem& s, const TimeCoefficients& coeffs, const Point& x0, double t0, double t1,
                     const std::vector<double>& outputTimes, const IntegratorOptions& opt) {
    if (coeffs.size() != static_cast<std::size_t>(s.basis.size()))
        throw Error(ErrorCode::Dimension, "integrate: " + std::to_string(coeffs.size()) + " coefficients for " +
                                              std::to_string(s.basis.size()) + " fields");
    const OdeRhs f = [&s, &coeffs](double t, const Point& x) { return s.velocity(t, x, coeffs); };
    return integrateOde(*s.basis.chart, f, x0, t0, t1, outputTimes, opt, coeffs.breakpointsIn(t0, t1));
}

std::vector<double> outputGrid(double t0, double t1, double dt) {
    if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "output spacing must be positive");
    const double dir = t1 >= t0 ? 1.0 : -1.0;
    const auto n = static_cast<long>(std::floor(std::abs(t1 - t0) / dt + 1e-9));
    std::vector<double> out;
    for (long i = 0; i <= n; ++i) out.push_back(t0 + dir * static_cast<double>(i) * dt);
    if (std::abs(out.back() - t1) > 1e-12 * std::max(1.0, std::abs(t1))) out.push_back(t1);
    else out.back() = t1;
    return out;
}

Point flow(const VectorField& X, const Point& x0, double s, double tol) {
    if (s == 0.0) return x0;
    const OdeRhs f = [&X](double, const Point& x) { return X(x); };
    IntegratorOptions opt;
    opt.relTol = tol;
    opt.absTol = tol * 1e-2;
    const Trajectory tr = integrateOde(*X.chart(), f, x0, 0.0, s, {s}, opt);
    if (!tr.completed()) throw Error(ErrorCode::DomainExit, "flow of " + X.name() + ": " + tr.message);
    return tr.states.back();
}

double monitorInvariant(const Trajectory& traj, const std::function<double(const Point&)>& f) {
    if (traj.states.empty()) return 0.0;
    const double f0 = f(traj.states.front());
    double m = 0.0;
    for (const auto& x : traj.states) m = std::max(m, std::abs(f(x) - f0));
    return m;
}

double symmetryFlowTest(const LieSystem& s, const TimeCoefficients& coeffs, const VectorField& Y, const Point& x0, double sigma,
                        double t0, double t1, int nSamples, const IntegratorOptions& opt) {
    std::vector<double> ts;
    for (int i = 0; i < nSamples; ++i) ts.push_back(t0 + (t1 - t0) * i / std::max(1, nSamples - 1));
    const Trajectory a = integrate(s, coeffs, x0, t0, t1, ts, opt);
    const Trajectory b = integrate(s, coeffs, flow(Y, x0, sigma), t0, t1, ts, opt);
    if (!a.completed() || !b.completed()) throw Error(ErrorCode::DomainExit, "symmetryFlowTest: trajectory left the chart");
    double m = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) m = std::max(m, (flow(Y, a.states[i], sigma) - b.states[i]).cwiseAbs().maxCoeff());
    return m;
}

SchwarzRegime schwarzRegimeFromString(const std::string& s) {
    if (s == "inside") return SchwarzRegime::Inside;
    if (s == "outside") return SchwarzRegime::Outside;
    if (s == "boundaryPlus" || s == "boundary+") return SchwarzRegime::BoundaryPlus;
    if (s == "boundaryMinus" || s == "boundary-") return SchwarzRegime::BoundaryMinus;
    throw Error(ErrorCode::InvalidArgument, "unknown regime " + s);
}

Point closedFormSchwarzReduced(double c1, double c2, SchwarzRegime regime, double t) {
    Point p(2);
    const double s = t + 2.0 * c1;
    switch (regime) {
        case SchwarzRegime::Inside:
            p << (2.0 * c2 - 1.0) * (1.0 + std::cosh(s)) + std::sinh(s), (1.0 - std::exp(s)) / (std::exp(s) + 1.0);
            break;
        case SchwarzRegime::Outside:
            p << -1.0 - 2.0 * c2 + std::exp(s) * c2 + std::exp(-s) * (1.0 + c2), (1.0 + std::exp(s)) / (1.0 - std::exp(s));
            break;
        case SchwarzRegime::BoundaryPlus:
            p << 1.0 + std::exp(-t) * c2, 1.0;
            break;
        case SchwarzRegime::BoundaryMinus:
            p << -1.0 + std::exp(t) * c2, -1.0;
            break;
    }
    return p;
}

void writeTrajectoryCsv(std::ostream& os, const Trajectory& traj, const std::vector<NamedFunction>& invariants) {
    const auto n = traj.states.empty() ? 0 : traj.states.front().size();
    os << "t";
    for (Eigen::Index i = 0; i < n; ++i) os << ",x" << (i + 1);
    for (const auto& inv : invariants) os << ",inv_" << inv.name;
    os << "\n" << std::setprecision(17);
    for (std::size_t r = 0; r < traj.times.size(); ++r) {
        os << traj.times[r];
        for (Eigen::Index i = 0; i < n; ++i) os << "," << traj.states[r](i);
        for (const auto& inv : invariants) os << "," << inv.f(traj.states[r]);
        os << "\n";
    }
}

}  // namespace mslie
