#include "bates/hedging.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bates/io.hpp"
#include "json.hpp"

namespace bates {

SpreadSpec SpreadSpec::example_vega() {
    SpreadSpec s;
    s.spot = 135.0;
    s.short_strike = 100.0;
    s.long_strike = 150.0;
    s.sigma0 = 0.09;
    s.expiry = 0.5;
    s.greek = GreekKind::Vega;
    return s;
}

SpreadSpec SpreadSpec::example_gamma() {
    SpreadSpec s;
    s.spot = 100.0;
    s.short_strike = 120.0;
    s.long_strike = 100.0;
    s.sigma0 = 0.09;
    s.expiry = 0.5;
    s.greek = GreekKind::Gamma;
    return s;
}

double leg_greek(GreekKind kind, double strike, const SpreadSpec& spec,
                 const BatesParams& params, const SolveReport& rep,
                 const Grid& grid, bool paper_literal) {
    ContractSpec c;
    c.strike = strike;
    c.expiry = spec.expiry;
    GreekSurface gs;
    switch (kind) {
        case GreekKind::Vega:
            gs = vega_surface(rep.u, grid, params, c, rep.scheme, paper_literal);
            break;
        case GreekKind::Gamma:
            gs = gamma_surface(rep.u, grid, params, c, rep.scheme, paper_literal);
            break;
        case GreekKind::Delta:
            gs = delta_surface(rep.u, grid, params, c, rep.scheme);
            break;
        case GreekKind::Theta:
            gs = theta_surface(rep, grid, params, c);
            break;
        default:
            throw ConfigError("leg_greek: unsupported greek");
    }
    return evaluate_at(gs, spec.spot, spec.sigma0, params);
}

double hedge_ratio(const SpreadSpec& spec, const BatesParams& params,
                   const SolveReport& rep, const Grid& grid,
                   bool paper_literal) {
    if (!(spec.short_strike > 0.0) || !(spec.long_strike > 0.0))
        throw ConfigError("hedge: strikes must be positive");
    const double g_short = leg_greek(spec.greek, spec.short_strike, spec, params,
                                     rep, grid, paper_literal);
    const double g_long = leg_greek(spec.greek, spec.long_strike, spec, params,
                                    rep, grid, paper_literal);
    if (std::abs(g_long) < 1e-12)
        throw NumericError("hedge: long-leg greek below 1e-12 in market units; "
                           "degenerate hedge");
    return g_short / g_long;
}

HedgeReport hedge_table(StudyRunner& runner, const SpreadSpec& spec,
                        const std::vector<double>& h_list, double h_ref,
                        int threads, bool paper_literal) {
    if (h_list.empty()) throw ConfigError("hedge table: empty h list");
    std::vector<double> hs = h_list;
    std::sort(hs.begin(), hs.end(), std::greater<double>());

    std::vector<std::pair<SchemeKind, double>> cells;
    for (SchemeKind s : {SchemeKind::Hoc4, SchemeKind::Central2}) {
        for (double h : hs) cells.emplace_back(s, h);
        cells.emplace_back(s, h_ref);
    }
    runner.prefetch(cells, threads);

    HedgeReport out;
    out.spec = spec;
    out.h_ref = h_ref;
    const BatesParams& params = runner.params();
    for (SchemeKind s : {SchemeKind::Hoc4, SchemeKind::Central2}) {
        const double ref_ratio = hedge_ratio(
            spec, params, runner.report(s, h_ref), runner.grid(h_ref), paper_literal);
        for (double h : hs) {
            const SolveReport& rep = runner.report(s, h);
            const Grid& g = runner.grid(h);
            HedgeRow row;
            row.scheme = s;
            row.h = h;
            row.ratio = hedge_ratio(spec, params, rep, g, paper_literal);
            row.ratio_ref = ref_ratio;
            row.pct_error =
                100.0 * std::abs(row.ratio - ref_ratio) / std::abs(ref_ratio);
            if (spec.greek == GreekKind::Gamma) {
                row.has_extras = true;
                const double d_long = leg_greek(GreekKind::Delta, spec.long_strike,
                                                spec, params, rep, g);
                const double d_short = leg_greek(GreekKind::Delta, spec.short_strike,
                                                 spec, params, rep, g);
                const double t_long = leg_greek(GreekKind::Theta, spec.long_strike,
                                                spec, params, rep, g);
                const double t_short = leg_greek(GreekKind::Theta, spec.short_strike,
                                                 spec, params, rep, g);
                row.net_delta = row.ratio * d_long - d_short;
                row.underlying_qty = -row.net_delta;   // sell if delta positive
                row.net_theta = row.ratio * t_long - t_short;
                row.recommend = row.net_theta > 0.0;
            }
            out.rows.push_back(row);
        }
    }
    return out;
}

std::string to_csv(const HedgeReport& rep) {
    const bool extras = !rep.rows.empty() && rep.rows.front().has_extras;
    std::string out = "scheme,mesh_size,ratio,ratio_ref,pct_error";
    if (extras) out += ",net_delta,underlying_qty,net_theta,recommend";
    out += "\n";
    for (const auto& r : rep.rows) {
        out += std::string(scheme_name(r.scheme)) + "," + fmt17(r.h) + "," +
               fmt17(r.ratio) + "," + fmt17(r.ratio_ref) + "," + fmt17(r.pct_error);
        if (extras)
            out += "," + fmt17(r.net_delta) + "," + fmt17(r.underlying_qty) + "," +
                   fmt17(r.net_theta) + "," + (r.recommend ? "1" : "0");
        out += "\n";
    }
    return out;
}

std::string to_json(const HedgeReport& rep) {
    nlohmann::ordered_json j;
    j["greek"] = greek_name(rep.spec.greek);
    j["spot"] = rep.spec.spot;
    j["short_strike"] = rep.spec.short_strike;
    j["long_strike"] = rep.spec.long_strike;
    j["sigma0"] = rep.spec.sigma0;
    j["expiry"] = rep.spec.expiry;
    j["h_ref"] = rep.h_ref;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : rep.rows) {
        nlohmann::ordered_json row;
        row["scheme"] = scheme_name(r.scheme);
        row["mesh_size"] = r.h;
        row["ratio"] = r.ratio;
        row["ratio_ref"] = r.ratio_ref;
        row["pct_error"] = r.pct_error;
        if (r.has_extras) {
            row["net_delta"] = r.net_delta;
            row["underlying_qty"] = r.underlying_qty;
            row["net_theta"] = r.net_theta;
            row["recommend"] = r.recommend;
        }
        rows.push_back(row);
    }
    j["rows"] = rows;
    return j.dump(2) + "\n";
}

std::string spread_payoff_csv(const SpreadSpec& spec, double ratio,
                              int n_samples) {
    const double s_max = 2.0 * std::max(spec.short_strike, spec.long_strike);
    std::string out = "S,payoff\n";
    for (int i = 0; i < n_samples; ++i) {
        const double s = s_max * i / (n_samples - 1);
        const double payoff = ratio * std::max(spec.long_strike - s, 0.0) -
                              std::max(spec.short_strike - s, 0.0);
        out += fmt17(s) + "," + fmt17(payoff) + "\n";
    }
    return out;
}

} // namespace bates
