#pragma once
#include <map>
#include <string>
#include <vector>

namespace nutaxis {

enum class Lemma { L21, L22, L23 };

// A monitored quantity z with its companion series:
//   L21: aux "h"            (z' + a z <= h, a a positive constant)
//   L22: aux "a", "b"       (z' <= a z + b)
//   L23: aux "a", "b", "c"  (z' + a z <= b z + c)
struct LemmaSeries {
    std::vector<double> times;
    std::vector<double> z;
    std::map<std::string, std::vector<double>> aux;
    double tau = 1.0;

    void validate(Lemma which) const;
};

// z(t) <= max{z0 + b, b/(a tau) + 2 b}
double lemma21_bound(double z0, double a, double b, double tau);

// z(t) <= (a3/tau + a2) e^{a1}
double lemma22_bound(double a1, double a2, double a3, double tau);

// z(t) <= z0 e^{b1} + c1 e^{2 b1}/(1 - e^{-rho}) + c1 e^{b1}
double lemma23_bound(double z0, double b1, double c1, double rho);

struct LemmaValidation {
    bool hypotheses_hold = false;
    std::map<std::string, double> window_sups;
    double bound = 0.0;
    bool conclusion_holds = false;
    double max_violation = 0.0;
    std::string detail;
};

// Checks the lemma's hypotheses on the sampled series (trapezoidal window
// integrals over every admissible start; differential inequality by forward
// differences with relative slack 1e-6 plus the measurable fd curvature bias),
// computes the bound from the empirical window suprema, and verifies
// max z <= bound (1 + 1e-9).
LemmaValidation validate(const LemmaSeries& s, Lemma which, double a_const = 0.0);

} // namespace nutaxis
