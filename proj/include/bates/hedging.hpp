#pragma once

#include <string>
#include <vector>

#include "bates/analysis.hpp"
#include "bates/greeks.hpp"

namespace bates {

// Two-leg put spread neutralized in one greek: quantities are quoted per one
// written (short) option, with ratio = G_short / G_long long options bought.
struct SpreadSpec {
    double spot = 135.0;
    double short_strike = 100.0;   // written leg
    double long_strike = 150.0;    // purchased leg
    double sigma0 = 0.09;          // evaluation variance
    double expiry = 0.5;
    GreekKind greek = GreekKind::Vega;

    // Vega-neutral ratio vertical put spread: short 100-strike puts against
    // long 150-strike puts, spot 135.
    static SpreadSpec example_vega();
    // Delta-gamma example: ratio write spread, options written at a higher
    // strike (120) than purchased (100), spot 100.
    static SpreadSpec example_gamma();
};

struct HedgeRow {
    SchemeKind scheme = SchemeKind::Hoc4;
    double h = 0.0;
    double ratio = 0.0;
    double ratio_ref = 0.0;
    double pct_error = 0.0;
    // Example-2 extras (gamma spread only).
    bool has_extras = false;
    double net_delta = 0.0;
    double underlying_qty = 0.0;   // position to add: -net_delta
    double net_theta = 0.0;
    bool recommend = false;
};

struct HedgeReport {
    SpreadSpec spec;
    double h_ref = 0.0;
    std::vector<HedgeRow> rows;   // sorted by scheme, then h descending
};

// Greek of one leg at the spread's evaluation point, from one normalized
// solve: the x-axis is reinterpreted per strike and the market scaling of
// that strike is applied by the greek builder.
double leg_greek(GreekKind kind, double strike, const SpreadSpec& spec,
                 const BatesParams& params, const SolveReport& rep,
                 const Grid& grid, bool paper_literal = false);

double hedge_ratio(const SpreadSpec& spec, const BatesParams& params,
                   const SolveReport& rep, const Grid& grid,
                   bool paper_literal = false);

HedgeReport hedge_table(StudyRunner& runner, const SpreadSpec& spec,
                        const std::vector<double>& h_list, double h_ref,
                        int threads = 1, bool paper_literal = false);

std::string to_csv(const HedgeReport& rep);
std::string to_json(const HedgeReport& rep);

// Expiry payoff of the spread (per one short option) on a spot range;
// CSV with header "S,payoff".
std::string spread_payoff_csv(const SpreadSpec& spec, double ratio,
                              int n_samples = 401);

} // namespace bates
