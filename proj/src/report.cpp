#include "mslie/report.hpp"

#include <algorithm>
#include <cmath>

namespace mslie {

Check& Report::add(std::string name, double residual, double tol, std::string detail) {
    checks_.push_back({std::move(name), residual, tol, !std::isnan(residual) && residual <= tol, std::move(detail)});
    return checks_.back();
}

Check& Report::addFlag(std::string name, bool pass, std::string detail) {
    checks_.push_back({std::move(name), pass ? 0.0 : 1.0, 0.0, pass, std::move(detail)});
    return checks_.back();
}

void Report::append(const Report& other, const std::string& prefix) {
    for (Check c : other.checks_) {
        c.name = prefix + c.name;
        checks_.push_back(std::move(c));
    }
}

bool Report::allPass() const {
    return std::all_of(checks_.begin(), checks_.end(), [](const Check& c) { return c.pass; });
}

const Check* Report::find(const std::string& name) const {
    for (const auto& c : checks_)
        if (c.name == name) return &c;
    return nullptr;
}

std::vector<std::string> Report::failures() const {
    std::vector<std::string> out;
    for (const auto& c : checks_)
        if (!c.pass) out.push_back(c.name);
    return out;
}

nlohmann::json Report::toJson() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : checks_) {
        nlohmann::json j{{"name", c.name}, {"residual", std::isfinite(c.residual) ? nlohmann::json(c.residual) : nlohmann::json(nullptr)},
                         {"tol", c.tol}, {"pass", c.pass}};
        if (!c.detail.empty()) j["detail"] = c.detail;
        arr.push_back(std::move(j));
    }
    return arr;
}

}  // namespace mslie
