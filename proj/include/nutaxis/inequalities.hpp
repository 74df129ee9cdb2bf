#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "nutaxis/model.hpp"

namespace nutaxis {

enum class FamilyKind { trig, bumps, noise };

// Seeded generator spec for families of smooth strictly positive fields.
struct FieldFamily {
    FamilyKind kind = FamilyKind::trig;
    int count = 20;
    std::uint64_t seed = 1;
    double positivity_floor = 1e-6;
};

FamilyKind family_kind_from_string(const std::string& s);

std::vector<Field> generate_family(const FieldFamily& fam, const Grid2D& g);

// max over the family of int rho^2 / (||grad rho||_L1^2 + ||rho||_L1^2),
// an empirical lower bound for the embedding constant c1(Omega).
double estimate_sobolev_c1(const FieldFamily& fam, const Grid2D& g);

struct InequalityEntry {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;            // lhs / rhs (0 when rhs == 0 and lhs == 0)
    double fitted_constant = 0.0;  // minimal c making lhs <= rhs, where applicable
    bool pass = false;             // lhs <= rhs
};

// int phi^{p+1} psi  <=  c {int psi|grad phi|^2 + int (phi/psi)|grad psi|^2
//                          + int phi psi} int phi^p + c int psi|grad phi|^2
// with c = max{(p+1)^2 c1/2, (p+1)^2 |Omega| c1/2, c1}.
InequalityEntry check_lemma41(const Field& phi, const Field& psi, double p, double c1);

// int phi^{p+1} psi |grad psi|^2 <= eta T1 + c (T2 + T3 + T4) with
//   T1 = int phi^{p-1} psi |grad phi|^2
//   T2 = {||psi||_inf + ||psi||_inf^3/eta} int phi^{p+1} psi int |grad psi|^4/psi^3
//   T3 = ||psi||_inf^2 (int phi)^{2p+1} int |grad psi|^4/psi^3
//   T4 = ||psi||_inf^2 int phi psi
// c < 0 fits the minimal constant; c >= 0 evaluates the stated rhs.
InequalityEntry check_lemma42(const Field& phi, const Field& psi, double p, double eta,
                              double c = -1.0);

struct TrajectoryInequality {
    std::string name;
    double gamma_empirical = 0.0;  // +inf sentinel when unconstrained
    double gamma_structural = 0.0; // q / (8 (q + sqrt 2)^2), for comparison only
    int intervals = 0;
    bool pass = false;             // gamma_empirical > 0
};

// Largest gamma with d/dt G_q(v) + gamma int v^{-q-1}|grad v|^{q+2}
// <= (1/gamma)(int u^{(q+2)/2} v + int v) along the sampled trajectory,
// where G_q(v) = int v^{1-q}|grad v|^q; central time differences between
// consecutive snapshots, other integrals averaged over the pair.
TrajectoryInequality check_lemma52_trajectory(const std::vector<State>& snaps, int q);

} // namespace nutaxis
