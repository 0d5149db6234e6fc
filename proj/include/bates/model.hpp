#pragma once

#include <cmath>

#include "bates/errors.hpp"

namespace bates {

// Bates model constants. The asset follows Heston dynamics plus a compound
// Poisson jump whose multiplier (J+1) is log-normal with log-mean gamma_j
// and log-std delta_j. Risk-neutral drift is mu_b = r - lambda*xi_b.
struct BatesParams {
    double kappa   = 2.0;    // mean-reversion rate of the variance
    double theta   = 0.01;   // long-run variance level
    double sigma_v = 0.1;    // volatility of variance
    double rho     = -0.5;   // Brownian correlation
    double r       = 0.05;   // risk-free rate
    double lambda  = 0.2;    // jump intensity
    double gamma_j = -0.5;   // mean of log jump size
    double delta_j = 0.1;    // std of log jump size

    // E[J] = exp(gamma_j + delta_j^2/2) - 1; never stored, always derived.
    double xi_b() const { return std::expm1(gamma_j + 0.5 * delta_j * delta_j); }
    double mu_b() const { return r - lambda * xi_b(); }

    void validate() const;
};

struct ContractSpec {
    double strike = 100.0;
    double expiry = 0.5;   // years

    void validate() const;
};

struct MarketPoint {
    double spot;    // S > 0
    double sigma;   // instantaneous variance > 0
    double tau;     // time to expiry, in [0, T]
};

struct SolverCoords {
    double x;    // log-moneyness log(S/K)
    double y;    // scaled variance sigma / sigma_v
    double tau;
};

// Density of the log jump size z = log(J+1): normal with mean gamma_j,
// std delta_j. This is e^z p(e^z) for the log-normal jump density p.
double jump_density_z(double z, const BatesParams& params);

SolverCoords to_solver_coords(const MarketPoint& p, const ContractSpec& c,
                              const BatesParams& params);
MarketPoint from_solver_coords(const SolverCoords& sc, const ContractSpec& c,
                               const BatesParams& params);

// Transformed European put payoff, per unit strike: max(1 - e^x, 0).
double put_payoff_transformed(double x);

// Back-transformation u -> V:  V = K * exp(-(r+lambda)*tau) * u.
double from_solver_value(double u_value, double tau, const ContractSpec& c,
                         const BatesParams& params);

// Growth factor removed by the transformation, exp(-(r+lambda)*tau).
inline double discount_factor(double tau, const BatesParams& params) {
    return std::exp(-(params.r + params.lambda) * tau);
}

} // namespace bates
