#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "mslie/error.hpp"

namespace {

using namespace mslie::cli;

void addCommon(CLI::App* app, Common& c, bool exampleRequired = true) {
    auto* ex = app->add_option("example", c.example, "example id (schwarz, dbh, control5, dqho, osc_spin, r8_volume)");
    if (exampleRequired) ex->required();
    app->add_option("--seed", c.seed, "sampling seed")->capture_default_str();
    app->add_option("--samples", c.samples, "number of sample points")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--report", c.report, "write the JSON report here instead of stdout");
    app->add_option("--alpha", c.alpha, "dbh parameters alpha_1 alpha_2 alpha_3")->expected(3);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multisymplectic Lie systems: validation, reduction, integration and reconstruction"};
    app.require_subcommand(1);

    Common common;
    ValidateOptions vo;
    ReduceOptions ro;
    IntegrateOptions io;
    ReconstructOptions co;
    EquilibriaOptions eo;
    GoldenOptions go;

    auto* validateCmd = app.add_subcommand("validate", "structure constants, Hamiltonian checks and symmetries");
    addCommon(validateCmd, common);
    validateCmd->add_flag("--corrupt-theta", vo.corruptTheta, "multiply Theta by 1 + x1^2/2 before checking");

    auto* reduceCmd = app.add_subcommand("reduce", "reduce by a symmetry scheme");
    addCommon(reduceCmd, common);
    reduceCmd->add_option("scheme", ro.scheme, "scheme name")->required();
    reduceCmd->add_option("--out", ro.out, "write the reduced system as JSON");

    auto* integrateCmd = app.add_subcommand("integrate", "integrate the Lie system and write a CSV trajectory");
    addCommon(integrateCmd, common);
    integrateCmd->add_option("--coeffs", io.coeffs, "JSON file with the coefficients b_alpha(t)");
    integrateCmd->add_option("--x0", io.x0, "initial point")->delimiter(',');
    integrateCmd->add_option("--t0", io.t0)->capture_default_str();
    integrateCmd->add_option("--tmax", io.tmax)->capture_default_str();
    integrateCmd->add_option("--dt-out", io.dtOut, "output spacing")->capture_default_str();
    integrateCmd->add_option("--invariants", io.invariants, "h (schwarz reduced by y2) or noether")->delimiter(',');
    integrateCmd->add_option("--scheme", io.scheme, "integrate the reduced system of this scheme");
    integrateCmd->add_option("--out", io.out, "CSV path");
    integrateCmd->add_option("--rtol", io.relTol)->capture_default_str();
    integrateCmd->add_option("--invariant-tol", io.invariantTol)->capture_default_str();

    auto* reconstructCmd = app.add_subcommand("reconstruct", "recover the system and Theta from several reductions");
    addCommon(reconstructCmd, common);
    reconstructCmd->add_option("--schemes", co.schemes, "schemes to combine")->delimiter(',');

    auto* equilibriaCmd = app.add_subcommand("equilibria", "relative equilibria for constant coefficients");
    addCommon(equilibriaCmd, common);
    equilibriaCmd->add_option("--coeffs", eo.coeffs, "JSON file with constant coefficients");
    equilibriaCmd->add_option("--scheme", eo.scheme, "look for equilibria of this reduced system");
    equilibriaCmd->add_option("--guess", eo.guesses, "Newton starting point, comma separated (repeatable)");

    auto* goldenCmd = app.add_subcommand("golden", "check an example (or all) against its expected values");
    addCommon(goldenCmd, common);
    goldenCmd->add_option("--export", go.exportPath, "write the expected values as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kUsage;
    }

    try {
        if (*validateCmd) return validate(common, vo);
        if (*reduceCmd) return reduce(common, ro);
        if (*integrateCmd) return integrate(common, io);
        if (*reconstructCmd) return reconstruct(common, co);
        if (*equilibriaCmd) return equilibria(common, eo);
        if (*goldenCmd) return golden(common, go);
    } catch (const mslie::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.code()) {
            case mslie::ErrorCode::UnknownEntity:
            case mslie::ErrorCode::InvalidArgument:
                return kUsage;
            case mslie::ErrorCode::DomainExit:
                return kDomainExit;
            default:
                return kCheckFailure;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kCheckFailure;
    }
    return kUsage;
}
