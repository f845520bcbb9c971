#pragma once

// Adaptive integration of non-autonomous Lie systems.

#include <functional>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "mslie/liealg.hpp"

namespace mslie {

struct IntegratorOptions {
    double relTol = 1e-9;
    double absTol = 1e-11;
    double initialStep = 0.0;  // 0 picks one from the local scale
    int maxSteps = 1000000;
};

struct Trajectory {
    enum class Status { Completed, DomainExit, StepUnderflow };

    std::vector<double> times;
    std::vector<Point> states;
    int steps = 0;
    int rejected = 0;
    double maxErrorEstimate = 0.0;
    Status status = Status::Completed;
    double exitTime = std::numeric_limits<double>::quiet_NaN();
    std::string message;

    bool completed() const { return status == Status::Completed; }
};

using OdeRhs = std::function<Point(double t, const Point& x)>;

// Dormand-Prince 5(4) with PI step control and 4th order dense output.
// States are reported at outputTimes (sorted in the direction of integration),
// which must lie in [t0, t1]. Breakpoints of the right-hand side are hit exactly.
// Leaving the chart, non-finite values and step collapse halt the run; the
// trajectory then holds the output times reached so far.
Trajectory integrateOde(const Chart& chart, const OdeRhs& f, const Point& x0, double t0, double t1,
                        const std::vector<double>& outputTimes, const IntegratorOptions& opt = {},
                        const std::vector<double>& breakpoints = {});

Trajectory integrate(const LieSystem& s, const TimeCoefficients& coeffs, const Point& x0, double t0, double t1,
                     const std::vector<double>& outputTimes, const IntegratorOptions& opt = {});

// Evenly spaced output grid t0, t0 + dt, ..., ending exactly at t1.
std::vector<double> outputGrid(double t0, double t1, double dt);

// Time-s flow of an autonomous field. Throws DomainExit if the flow leaves the chart.
Point flow(const VectorField& X, const Point& x0, double s, double tol = 1e-12);

double monitorInvariant(const Trajectory& traj, const std::function<double(const Point&)>& f);

// max_t |flow_Y^sigma(x(t)) - x_sigma(t)|, with x_sigma started at flow_Y^sigma(x0).
double symmetryFlowTest(const LieSystem& s, const TimeCoefficients& coeffs, const VectorField& Y, const Point& x0, double sigma,
                        double t0, double t1, int nSamples = 51, const IntegratorOptions& opt = {});

enum class SchwarzRegime { Inside, Outside, BoundaryPlus, BoundaryMinus };
SchwarzRegime schwarzRegimeFromString(const std::string& s);
// Closed-form solutions of xbar' = 1 - xbar abar, abar' = (abar^2 - 1)/2.
Point closedFormSchwarzReduced(double c1, double c2, SchwarzRegime regime, double t);

// Header t,x1..xn[,inv_<name>...]; 17 significant digits.
struct NamedFunction {
    std::string name;
    std::function<double(const Point&)> f;
};
void writeTrajectoryCsv(std::ostream& os, const Trajectory& traj, const std::vector<NamedFunction>& invariants = {});

}  // namespace mslie
