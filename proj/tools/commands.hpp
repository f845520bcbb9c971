#pragma once

// Subcommands of the mslie command-line tool. Each returns the process exit code.

#include <string>
#include <vector>

namespace mslie::cli {

enum Exit { kPass = 0, kCheckFailure = 1, kUsage = 2, kDomainExit = 3 };

struct Common {
    std::string example;
    unsigned long seed = 42;
    int samples = 50;
    std::string report;  // empty: print the JSON report on stdout
    std::vector<double> alpha;  // dbh only
};

struct ValidateOptions {
    bool corruptTheta = false;
};

struct ReduceOptions {
    std::string scheme;
    std::string out;
};

struct IntegrateOptions {
    std::string coeffs;
    std::vector<double> x0;
    double t0 = 0.0;
    double tmax = 1.0;
    double dtOut = 0.1;
    std::vector<std::string> invariants;
    std::string scheme;
    std::string out;
    double relTol = 1e-9;
    double invariantTol = 1e-8;
};

struct ReconstructOptions {
    std::vector<std::string> schemes;
};

struct EquilibriaOptions {
    std::string coeffs;
    std::string scheme;
    std::vector<std::string> guesses;
};

struct GoldenOptions {
    std::string exportPath;
};

int validate(const Common& c, const ValidateOptions& o);
int reduce(const Common& c, const ReduceOptions& o);
int integrate(const Common& c, const IntegrateOptions& o);
int reconstruct(const Common& c, const ReconstructOptions& o);
int equilibria(const Common& c, const EquilibriaOptions& o);
int golden(const Common& c, const GoldenOptions& o);

}  // namespace mslie::cli
