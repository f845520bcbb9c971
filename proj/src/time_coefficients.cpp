#include "mslie/time_coefficients.hpp"

#include <algorithm>
#include <cmath>

#include "mslie/error.hpp"

namespace mslie {

Coefficient Coefficient::constant(double c) {
    Coefficient k;
    k.kind_ = Kind::Constant;
    k.c_ = c;
    return k;
}

Coefficient Coefficient::sine(double A, double omega, double phi, double offset) {
    Coefficient k;
    k.kind_ = Kind::Sine;
    k.A_ = A;
    k.omega_ = omega;
    k.phi_ = phi;
    k.c_ = offset;
    return k;
}

Coefficient Coefficient::polynomial(std::vector<double> coeffs) {
    if (coeffs.empty()) throw Error(ErrorCode::InvalidArgument, "polynomial coefficient needs at least one term");
    Coefficient k;
    k.kind_ = Kind::Polynomial;
    k.poly_ = std::move(coeffs);
    return k;
}

Coefficient Coefficient::piecewise(std::vector<double> breaks, std::vector<double> values) {
    if (values.size() != breaks.size() + 1)
        throw Error(ErrorCode::InvalidArgument, "piecewise coefficient needs one more value than breakpoints");
    if (!std::is_sorted(breaks.begin(), breaks.end())) throw Error(ErrorCode::InvalidArgument, "piecewise breakpoints must be sorted");
    Coefficient k;
    k.kind_ = Kind::Piecewise;
    k.breaks_ = std::move(breaks);
    k.values_ = std::move(values);
    return k;
}

Coefficient Coefficient::fromJson(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("type")) throw Error(ErrorCode::InvalidArgument, "coefficient entry needs a \"type\"");
    const std::string type = j.at("type").get<std::string>();
    try {
        if (type == "constant") return constant(j.at("c").get<double>());
        if (type == "sin")
            return sine(j.at("A").get<double>(), j.at("omega").get<double>(), j.value("phi", 0.0), j.value("offset", 0.0));
        if (type == "polynomial") return polynomial(j.at("coeffs").get<std::vector<double>>());
        if (type == "piecewise") return piecewise(j.at("breaks").get<std::vector<double>>(), j.at("values").get<std::vector<double>>());
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("malformed coefficient entry: ") + e.what());
    }
    throw Error(ErrorCode::InvalidArgument, "unknown coefficient type \"" + type + "\"");
}

nlohmann::json Coefficient::toJson() const {
    switch (kind_) {
        case Kind::Constant:
            return {{"type", "constant"}, {"c", c_}};
        case Kind::Sine:
            return {{"type", "sin"}, {"A", A_}, {"omega", omega_}, {"phi", phi_}, {"offset", c_}};
        case Kind::Polynomial:
            return {{"type", "polynomial"}, {"coeffs", poly_}};
        case Kind::Piecewise:
            return {{"type", "piecewise"}, {"breaks", breaks_}, {"values", values_}};
    }
    return {};
}

double Coefficient::operator()(double t) const {
    switch (kind_) {
        case Kind::Constant:
            return c_;
        case Kind::Sine:
            return c_ + A_ * std::sin(omega_ * t + phi_);
        case Kind::Polynomial: {
            double s = 0.0;
            for (auto it = poly_.rbegin(); it != poly_.rend(); ++it) s = s * t + *it;
            return s;
        }
        case Kind::Piecewise: {
            const auto pos = std::upper_bound(breaks_.begin(), breaks_.end(), t) - breaks_.begin();
            return values_[static_cast<std::size_t>(pos)];
        }
    }
    return 0.0;
}

bool Coefficient::isIdenticallyZero() const {
    switch (kind_) {
        case Kind::Constant:
            return c_ == 0.0;
        case Kind::Sine:
            return c_ == 0.0 && A_ == 0.0;
        case Kind::Polynomial:
            return std::all_of(poly_.begin(), poly_.end(), [](double x) { return x == 0.0; });
        case Kind::Piecewise:
            return std::all_of(values_.begin(), values_.end(), [](double x) { return x == 0.0; });
    }
    return false;
}

TimeCoefficients TimeCoefficients::constants(const std::vector<double>& c) {
    std::vector<Coefficient> b;
    for (double x : c) b.push_back(Coefficient::constant(x));
    return TimeCoefficients(std::move(b));
}

TimeCoefficients TimeCoefficients::fromJson(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("b") || !j.at("b").is_array())
        throw Error(ErrorCode::InvalidArgument, "coefficient file needs an array \"b\"");
    std::vector<Coefficient> b;
    for (const auto& e : j.at("b")) b.push_back(Coefficient::fromJson(e));
    return TimeCoefficients(std::move(b));
}

nlohmann::json TimeCoefficients::toJson() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : b_) arr.push_back(c.toJson());
    return {{"b", arr}};
}

Eigen::VectorXd TimeCoefficients::at(double t) const {
    Eigen::VectorXd v(static_cast<Eigen::Index>(b_.size()));
    for (std::size_t i = 0; i < b_.size(); ++i) v(static_cast<Eigen::Index>(i)) = b_[i](t);
    return v;
}

std::vector<double> TimeCoefficients::breakpointsIn(double t0, double t1) const {
    const double lo = std::min(t0, t1), hi = std::max(t0, t1);
    std::vector<double> out;
    for (const auto& c : b_)
        for (double b : c.breakpoints())
            if (b > lo && b < hi) out.push_back(b);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (t1 < t0) std::reverse(out.begin(), out.end());
    return out;
}

TimeCoefficients TimeCoefficients::select(const std::vector<int>& indices) const {
    std::vector<Coefficient> b;
    for (int i : indices) b.push_back(b_.at(static_cast<std::size_t>(i)));
    return TimeCoefficients(std::move(b));
}

}  // namespace mslie
