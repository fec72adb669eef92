#pragma once

#include <vector>

#include "helmspec/spectral_basis.hpp"

namespace helmspec {

// Small-epsilon expansion of an eigenvalue for Sigma = 2 + sin(2 pi (x + eta/2) / eps)
// on (-1/2, 1/2). order < 0 selects the highest available order.
struct AsymptoticModel {
    BoundaryCondition bc = BoundaryCondition::DD;
    int n = 1;
    double phi = 0.0;  // PP mixing angle
    int order = -1;
};

int max_order(const AsymptoticModel& model);
double eval_asymptotic(const AsymptoticModel& model, double epsilon, double eta);

// Leading-order mean-square deviation after k iterations.
double eval_msd_asymptotic(BoundaryCondition bc, int k, double epsilon, double eta, int n = 1, double phi = 0.0);

// |cos phi| sqrt(pi^4 - 45 cos 2phi - 45)
double reduced_pp_msd(double phi);

double excited_validity_bound(double epsilon);

struct SweepConfig {
    BoundaryCondition bc = BoundaryCondition::DD;
    double eta = 1.0;
    std::vector<double> epsilons{0.2, 0.15, 0.1, 0.075, 0.05};
    std::vector<double> phis{0.0};  // PP only
    int states = 1;                 // DD/ND: n = 1..states (capped by the validity bound)
    int basis = 0;                  // 0: automatic
    int threads = 1;
};

struct SweepRecord {
    BoundaryCondition bc;
    double eta;
    double phi;
    double epsilon;
    int n;
    double e_numeric;
    double e_asymptotic;
    double residual;
    double msd_asymptotic;
};

int default_sweep_basis(const SweepConfig& config);

// Rayleigh-Ritz reference per epsilon, compared with the expansions.
std::vector<SweepRecord> sweep_epsilon(const SweepConfig& config);

// Ground eigenvalue by inverse-power iteration on the oscillating string,
// ansatz sqrt(Sigma) times the lowest nonzero homogeneous mode.
double power_second_opinion(BoundaryCondition bc, double epsilon, double eta, int p_max = 200);

}  // namespace helmspec
