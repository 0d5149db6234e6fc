#include "bates/model.hpp"

#include <cmath>
#include <string>

namespace bates {

namespace {
constexpr double kInvSqrt2Pi = 0.3989422804014326779;

void require(bool cond, const std::string& msg) {
    if (!cond) throw ConfigError(msg);
}
} // namespace

void BatesParams::validate() const {
    require(std::isfinite(kappa) && kappa >= 0.0, "model.kappa must be >= 0");
    require(std::isfinite(theta) && theta >= 0.0, "model.theta must be >= 0");
    require(std::isfinite(sigma_v) && sigma_v > 0.0, "model.sigma_v must be > 0");
    require(std::isfinite(rho) && std::abs(rho) <= 1.0, "model.rho must be in [-1,1]");
    require(std::isfinite(r), "model.r must be finite");
    require(std::isfinite(lambda) && lambda >= 0.0, "model.lambda must be >= 0");
    require(std::isfinite(gamma_j), "model.gamma_j must be finite");
    require(std::isfinite(delta_j) && delta_j > 0.0, "model.delta_j must be > 0");
}

void ContractSpec::validate() const {
    require(std::isfinite(strike) && strike > 0.0, "contract.strike must be > 0");
    require(std::isfinite(expiry) && expiry > 0.0, "contract.expiry must be > 0");
}

double jump_density_z(double z, const BatesParams& params) {
    const double t = (z - params.gamma_j) / params.delta_j;
    return kInvSqrt2Pi / params.delta_j * std::exp(-0.5 * t * t);
}

SolverCoords to_solver_coords(const MarketPoint& p, const ContractSpec& c,
                              const BatesParams& params) {
    return {std::log(p.spot / c.strike), p.sigma / params.sigma_v, p.tau};
}

MarketPoint from_solver_coords(const SolverCoords& sc, const ContractSpec& c,
                               const BatesParams& params) {
    return {c.strike * std::exp(sc.x), params.sigma_v * sc.y, sc.tau};
}

double put_payoff_transformed(double x) {
    return x < 0.0 ? -std::expm1(x) : 0.0;
}

double from_solver_value(double u_value, double tau, const ContractSpec& c,
                         const BatesParams& params) {
    return c.strike * discount_factor(tau, params) * u_value;
}

} // namespace bates
