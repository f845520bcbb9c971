#pragma once

// Machine-readable pass/fail records shared by the validators and the CLI.

#include <string>
#include <vector>

#include "json.hpp"

namespace mslie {

struct Check {
    std::string name;
    double residual = 0.0;
    double tol = 0.0;
    bool pass = false;
    std::string detail;
};

class Report {
public:
    // pass iff residual <= tol (a NaN residual fails)
    Check& add(std::string name, double residual, double tol, std::string detail = "");
    Check& addFlag(std::string name, bool pass, std::string detail = "");
    void append(const Report& other, const std::string& prefix = "");

    const std::vector<Check>& checks() const { return checks_; }
    bool allPass() const;
    const Check* find(const std::string& name) const;
    std::vector<std::string> failures() const;
    nlohmann::json toJson() const;

private:
    std::vector<Check> checks_;
};

}  // namespace mslie
