#include "bates/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bates/io.hpp"
#include "bates/threads.hpp"
#include "json.hpp"

namespace bates {

const char* quantity_name(Quantity q) {
    switch (q) {
        case Quantity::Price: return "price";
        case Quantity::Vega: return "vega";
        case Quantity::Gamma: return "gamma";
    }
    return "?";
}

NormPair error_norms(const GreekSurface& coarse, const Grid& coarse_grid,
                     const GreekSurface& ref, const Grid& ref_grid,
                     double band) {
    const NodeMap nm = common_nodes(coarse_grid, ref_grid);
    const double eps = 1e-12;
    const double x_lo = -coarse_grid.R1 + band - eps;
    const double x_hi = coarse_grid.R1 - band + eps;
    const double y_lo = coarse_grid.L2 + band - eps;
    const double y_hi = coarse_grid.R2 - band + eps;
    if (x_lo > x_hi || y_lo > y_hi)
        throw ConfigError("error_norms: band leaves no interior nodes");

    double linf = 0.0, sumsq = 0.0;
    long count = 0;
    for (int j = 0; j < coarse_grid.ny(); ++j) {
        if (coarse_grid.y[j] < y_lo || coarse_grid.y[j] > y_hi) continue;
        for (int i = 0; i < coarse_grid.nx(); ++i) {
            if (coarse_grid.x[i] < x_lo || coarse_grid.x[i] > x_hi) continue;
            const double d = coarse.value_at_node(i, j) -
                             ref.value_at_node(i * nm.stride, j * nm.stride);
            linf = std::max(linf, std::abs(d));
            sumsq += d * d;
            ++count;
        }
    }
    if (count == 0) throw ConfigError("error_norms: empty norm domain");
    NormPair np;
    np.linf = linf;
    np.l2 = coarse_grid.h * std::sqrt(sumsq);
    return np;
}

FitResult fit_order(const std::vector<std::pair<double, double>>& h_eps) {
    if (h_eps.size() < 2)
        throw ConfigError("fit_order: need at least two (h, eps) points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(h_eps.size());
    for (const auto& [h, eps] : h_eps) {
        if (!(h > 0.0) || !(eps > 0.0))
            throw ConfigError("fit_order: h and eps must be positive");
        const double lx = std::log(h), ly = std::log(eps);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    }
    const double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-14)
        throw ConfigError("fit_order: degenerate abscissae (single h?)");
    FitResult fr;
    fr.m = (n * sxy - sx * sy) / denom;
    fr.C = std::exp((sy - fr.m * sx) / n);
    return fr;
}

std::string to_csv(const ConvergenceReport& rep) {
    std::string out = "h,eps_l2,eps_linf\n";
    for (const auto& p : rep.points)
        out += fmt17(p.h) + "," + fmt17(p.eps_l2) + "," + fmt17(p.eps_linf) + "\n";
    return out;
}

std::string to_json(const ConvergenceReport& rep) {
    nlohmann::ordered_json j;
    j["scheme"] = scheme_name(rep.scheme);
    j["quantity"] = quantity_name(rep.quantity);
    j["h_ref"] = rep.h_ref;
    j["m_l2"] = rep.fit_l2.m;
    j["C_l2"] = rep.fit_l2.C;
    j["m_linf"] = rep.fit_linf.m;
    j["C_linf"] = rep.fit_linf.C;
    auto pts = nlohmann::ordered_json::array();
    for (const auto& p : rep.points)
        pts.push_back({{"h", p.h}, {"eps_l2", p.eps_l2}, {"eps_linf", p.eps_linf}});
    j["points"] = pts;
    return j.dump(2) + "\n";
}

StudyRunner::StudyRunner(const BatesParams& params, const ContractSpec& contract,
                         const GridSpec& base, const SolverOptions& options)
    : params_(params), contract_(contract), base_(base), options_(options) {
    base_.expiry = contract.expiry;
}

long StudyRunner::key_of(double h) const {
    return std::llround(h * 1e9);
}

const Grid& StudyRunner::grid(double h) {
    std::lock_guard<std::mutex> lock(mu_);
    const long key = key_of(h);
    auto it = grids_.find(key);
    if (it == grids_.end())
        it = grids_.emplace(key, build_grid(base_.with_h(h))).first;
    return it->second;
}

const SolveReport& StudyRunner::report(SchemeKind scheme, double h) {
    const auto key = std::make_pair(static_cast<int>(scheme), key_of(h));
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = reports_.find(key);
        if (it != reports_.end()) return *it->second;
    }
    const Grid& g = grid(h);
    auto rep = std::make_unique<SolveReport>(
        solve_pide(params_, contract_, g, scheme, options_));
    std::lock_guard<std::mutex> lock(mu_);
    auto [it, inserted] = reports_.emplace(key, std::move(rep));
    return *it->second;
}

void StudyRunner::prefetch(const std::vector<std::pair<SchemeKind, double>>& cells,
                           int threads) {
    parallel_blocks(static_cast<long>(cells.size()), threads, [&](long b) {
        report(cells[b].first, cells[b].second);
    });
}

GreekSurface quantity_surface(Quantity q, const SolveReport& rep,
                              const Grid& grid, const BatesParams& params,
                              const ContractSpec& contract, bool paper_literal) {
    switch (q) {
        case Quantity::Price:
            return price_surface(rep.u, grid, params, contract, rep.scheme);
        case Quantity::Vega:
            return vega_surface(rep.u, grid, params, contract, rep.scheme,
                                paper_literal);
        case Quantity::Gamma:
            return gamma_surface(rep.u, grid, params, contract, rep.scheme,
                                 paper_literal);
    }
    throw ConfigError("quantity_surface: unknown quantity");
}

ConvergenceReport run_convergence_study(StudyRunner& runner, SchemeKind scheme,
                                        Quantity quantity,
                                        const std::vector<double>& h_list,
                                        double h_ref, int threads,
                                        bool paper_literal) {
    if (h_list.empty())
        throw ConfigError("convergence study: empty h list");
    std::vector<double> hs = h_list;
    std::sort(hs.begin(), hs.end(), std::greater<double>());

    std::vector<std::pair<SchemeKind, double>> cells;
    for (double h : hs) cells.emplace_back(scheme, h);
    cells.emplace_back(scheme, h_ref);
    runner.prefetch(cells, threads);

    const Grid& gref = runner.grid(h_ref);
    const GreekSurface ref = quantity_surface(
        quantity, runner.report(scheme, h_ref), gref, runner.params(),
        runner.contract(), paper_literal);

    ConvergenceReport rep;
    rep.scheme = scheme;
    rep.quantity = quantity;
    rep.h_ref = h_ref;
    std::vector<std::pair<double, double>> l2_pts, linf_pts;
    for (double h : hs) {
        const Grid& g = runner.grid(h);
        const GreekSurface gs = quantity_surface(
            quantity, runner.report(scheme, h), g, runner.params(),
            runner.contract(), paper_literal);
        const NormPair np = error_norms(gs, g, ref, gref);
        rep.points.push_back({h, np.l2, np.linf});
        l2_pts.emplace_back(h, np.l2);
        linf_pts.emplace_back(h, np.linf);
    }
    rep.fit_l2 = fit_order(l2_pts);
    rep.fit_linf = fit_order(linf_pts);
    return rep;
}

} // namespace bates
