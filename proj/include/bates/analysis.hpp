#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "bates/greeks.hpp"
#include "bates/grid.hpp"
#include "bates/model.hpp"
#include "bates/stepper.hpp"

namespace bates {

enum class Quantity { Price, Vega, Gamma };

const char* quantity_name(Quantity q);

struct NormPair {
    double l2 = 0.0;
    double linf = 0.0;
};

// Grid-scaled error norms on the nodes the coarse grid shares with the
// reference grid. A fixed physical band (default: two nodes of the coarsest
// study mesh, 2 x 0.4) is excluded at every edge so all quantities and all
// mesh sizes are measured over the identical physical node set.
constexpr double kNormBand = 0.8;

NormPair error_norms(const GreekSurface& coarse, const Grid& coarse_grid,
                     const GreekSurface& ref, const Grid& ref_grid,
                     double band = kNormBand);

struct FitResult {
    double m = 0.0;   // slope in log-log coordinates
    double C = 0.0;   // prefactor of eps = C h^m
};

FitResult fit_order(const std::vector<std::pair<double, double>>& h_eps);

struct ConvergencePoint {
    double h = 0.0;
    double eps_l2 = 0.0;
    double eps_linf = 0.0;
};

struct ConvergenceReport {
    SchemeKind scheme = SchemeKind::Hoc4;
    Quantity quantity = Quantity::Price;
    double h_ref = 0.0;
    std::vector<ConvergencePoint> points;   // h strictly decreasing
    FitResult fit_l2, fit_linf;
};

std::string to_csv(const ConvergenceReport& rep);
std::string to_json(const ConvergenceReport& rep);

// Cache of PIDE solves keyed by (scheme, h); convergence studies and hedge
// tables share one solve per grid.
class StudyRunner {
public:
    StudyRunner(const BatesParams& params, const ContractSpec& contract,
                const GridSpec& base, const SolverOptions& options = {});

    const SolveReport& report(SchemeKind scheme, double h);
    const Grid& grid(double h);
    // Solve the given cells, possibly in parallel (each cell independent).
    void prefetch(const std::vector<std::pair<SchemeKind, double>>& cells,
                  int threads);

    const BatesParams& params() const { return params_; }
    const ContractSpec& contract() const { return contract_; }
    const SolverOptions& options() const { return options_; }

private:
    long key_of(double h) const;

    BatesParams params_;
    ContractSpec contract_;
    GridSpec base_;
    SolverOptions options_;
    std::map<long, Grid> grids_;
    std::map<std::pair<int, long>, std::unique_ptr<SolveReport>> reports_;
    std::mutex mu_;
};

GreekSurface quantity_surface(Quantity q, const SolveReport& rep,
                              const Grid& grid, const BatesParams& params,
                              const ContractSpec& contract,
                              bool paper_literal = false);

ConvergenceReport run_convergence_study(StudyRunner& runner, SchemeKind scheme,
                                        Quantity quantity,
                                        const std::vector<double>& h_list,
                                        double h_ref, int threads = 1,
                                        bool paper_literal = false);

} // namespace bates
