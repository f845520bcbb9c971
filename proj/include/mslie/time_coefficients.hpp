#pragma once

// Time-dependent coefficients b_alpha(t) of a Lie system.

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "json.hpp"

namespace mslie {

class Coefficient {
public:
    enum class Kind { Constant, Sine, Polynomial, Piecewise };

    static Coefficient constant(double c);
    // offset + A sin(omega t + phi)
    static Coefficient sine(double A, double omega, double phi, double offset = 0.0);
    // sum_i coeffs[i] t^i
    static Coefficient polynomial(std::vector<double> coeffs);
    // values[i] on [breaks[i-1], breaks[i]); values has one more entry than breaks
    static Coefficient piecewise(std::vector<double> breaks, std::vector<double> values);

    static Coefficient fromJson(const nlohmann::json& j);
    nlohmann::json toJson() const;

    double operator()(double t) const;
    Kind kind() const { return kind_; }
    const std::vector<double>& breakpoints() const { return breaks_; }
    bool isIdenticallyZero() const;

private:
    Kind kind_ = Kind::Constant;
    double c_ = 0.0;
    double A_ = 0.0, omega_ = 0.0, phi_ = 0.0;
    std::vector<double> poly_;
    std::vector<double> breaks_, values_;
};

class TimeCoefficients {
public:
    TimeCoefficients() = default;
    explicit TimeCoefficients(std::vector<Coefficient> b) : b_(std::move(b)) {}
    static TimeCoefficients constants(const std::vector<double>& c);
    static TimeCoefficients fromJson(const nlohmann::json& j);
    nlohmann::json toJson() const;

    std::size_t size() const { return b_.size(); }
    const Coefficient& operator[](std::size_t i) const { return b_[i]; }
    Eigen::VectorXd at(double t) const;
    // Sorted breakpoints strictly inside (t0, t1).
    std::vector<double> breakpointsIn(double t0, double t1) const;
    // Keep only the listed entries, in order.
    TimeCoefficients select(const std::vector<int>& indices) const;

private:
    std::vector<Coefficient> b_;
};

}  // namespace mslie
