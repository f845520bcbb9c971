#pragma once

// The worked examples: fields, forms, symmetries, reduction schemes and the
// expected values every module is checked against.

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mslie/reconstruction.hpp"
#include "mslie/reduction.hpp"

namespace mslie {

struct Anchored {
    std::string anchor;  // where the value is displayed, or "derived"
};

struct GoldenBrackets : Anchored {
    std::vector<BracketEntry> entries;
};

// A closed-form coframe; exactAt restricts the comparison to listed points when non-empty.
struct GoldenCoframe : Anchored {
    std::vector<DifferentialForm> eta;
    std::vector<Point> exactAt;
};

struct SchemeGolden : Anchored {
    std::string scheme;
    DifferentialForm reducedForm;
    // Index-aligned with the basis; nullopt marks a field that projects to zero.
    std::vector<std::optional<VectorField>> reducedFields;
    bool reducedStructureMatches = false;  // projected constants equal the original ones
};

struct GoldenEquilibria : Anchored {
    std::vector<double> coefficients;  // constant b for the reduced basis
    std::vector<Point> guesses;
    std::vector<Point> points;
    std::vector<double> eigenvalues;  // real parts, sorted, same at every point
};

struct Golden {
    GoldenBrackets brackets;
    std::optional<GoldenBrackets> symmetryBrackets;
    DifferentialForm theta;  // closed-form Theta
    std::string thetaAnchor;
    std::optional<GoldenCoframe> coframe;
    std::vector<std::pair<HamiltonianPair, std::string>> hamiltonianForms;
    std::vector<SchemeGolden> reductions;
    std::optional<double> noetherValue;
};

struct ExampleBundle {
    std::string id;
    std::string title;
    MultisymplecticLieSystem bundle;
    FieldFamily symmetries;  // empty for dbh
    std::vector<ReductionScheme> schemes;
    std::vector<std::string> reconstruction;  // scheme names used together
    Golden golden;
    std::function<Point(std::mt19937_64&)> sampler;
    Point flowTestPoint;
    std::vector<double> parameters;  // dbh alpha

    std::vector<Point> samples(int count, unsigned long seed = 42) const;
    const ReductionScheme& scheme(const std::string& name) const;
    const SchemeGolden* schemeGolden(const std::string& name) const;
};

const std::vector<std::string>& exampleIds();
ExampleBundle loadExample(const std::string& id);
// dbh with (alpha_1, alpha_2, alpha_3)
ExampleBundle loadDbh(double alpha1, double alpha2, double alpha3);

// The reduced Schwarz system and its displayed data.
struct SchwarzReduced {
    MultisymplecticLieSystem bundle;  // basis Xbar_1..3, theta = 1/2 dxbar ^ dabar
    std::vector<HamiltonianPair> hamiltonianForms;
    GoldenEquilibria equilibria;
    // h = abar/2 - xbar abar^2/4 + xbar/4 for b = (-1/4, 0, 1)
    std::function<double(const Point&)> hamiltonian;
};
SchwarzReduced schwarzReduced();

// Runs the checks of every module against the golden data.
Report goldenCheck(const std::string& id, unsigned long seed = 42, int samples = 50);

}  // namespace mslie
