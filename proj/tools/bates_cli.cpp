// Command-line front end: price / converge / hedge / mc-check.
//
// Exit codes: 0 success, 1 failed scientific check, 2 configuration error,
// 3 domain error (query outside the grid).

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bates/analysis.hpp"
#include "bates/config.hpp"
#include "bates/greeks.hpp"
#include "bates/hedging.hpp"
#include "bates/io.hpp"
#include "bates/mc.hpp"
#include "bates/stepper.hpp"

namespace {

struct CliOverrides {
    std::string config_path;
    std::optional<std::string> scheme;
    std::optional<double> h;
    std::vector<double> h_list;
    std::optional<std::string> quantity;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<std::string> out_dir;
    bool paper_literal = false;
};

bates::RunConfig make_config(const CliOverrides& o) {
    bates::RunConfig cfg;
    if (!o.config_path.empty()) cfg = bates::load_config(o.config_path);
    if (o.scheme) cfg.scheme = bates::parse_scheme(*o.scheme);
    if (o.h) cfg.grid.h = *o.h;
    if (!o.h_list.empty()) cfg.h_list = o.h_list;
    if (o.quantity) cfg.quantity = bates::parse_quantity(*o.quantity);
    if (o.seed) cfg.mc.seed = *o.seed;
    if (o.threads) {
        cfg.threads = *o.threads;
    } else if (const char* env = std::getenv("BATES_HOC_THREADS")) {
        cfg.threads = std::max(1, std::atoi(env));
    }
    if (o.out_dir) cfg.out_dir = *o.out_dir;
    if (o.paper_literal) cfg.paper_literal = true;
    cfg.validate();
    return cfg;
}

std::string out_path(const bates::RunConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.out_dir);
    return (std::filesystem::path(cfg.out_dir) / name).string();
}

int cmd_price(const bates::RunConfig& cfg, const std::string& surface_csv,
              const std::string& dump_operator) {
    using namespace bates;
    const Grid grid = build_grid(cfg.grid);
    if (!dump_operator.empty()) {
        const OperatorMatrices mats = assemble(cfg.scheme, cfg.model, grid);
        std::ofstream os(dump_operator, std::ios::binary);
        if (!os) throw ConfigError("cannot open " + dump_operator);
        dump_coo(mats.a_impl, os);
    }
    const SolveReport rep =
        solve_pide(cfg.model, cfg.contract, grid, cfg.scheme, cfg.solver_options());
    const GreekSurface ps =
        price_surface(rep.u, grid, cfg.model, cfg.contract, cfg.scheme);
    const double price = evaluate_at(ps, cfg.query_spot, cfg.query_sigma, cfg.model);

    std::printf("scheme        %s\n", scheme_name(cfg.scheme));
    std::printf("grid          h=%g  nodes=%d  steps=%d  k=%.10g\n", grid.h,
                grid.n_nodes(), grid.n_steps, grid.k);
    std::printf("query         S=%g sigma=%g\n", cfg.query_spot, cfg.query_sigma);
    std::printf("price         %.10f\n", price);
    std::printf("factor_count  %d\n", rep.factor_count);
    std::printf("solve_count   %ld\n", rep.solve_count);
    std::printf("wall_seconds  %.3f\n", rep.wall_seconds);

    if (!surface_csv.empty()) {
        std::ostringstream os;
        export_csv(ps, cfg.model, os);
        write_text_file(surface_csv, os.str());
        std::printf("surface_csv   %s\n", surface_csv.c_str());
    }
    nlohmann::ordered_json j;
    j["scheme"] = scheme_name(cfg.scheme);
    j["h"] = grid.h;
    j["k"] = grid.k;
    j["n_steps"] = grid.n_steps;
    j["price"] = price;
    j["spot"] = cfg.query_spot;
    j["sigma"] = cfg.query_sigma;
    j["factor_count"] = rep.factor_count;
    j["solve_count"] = rep.solve_count;
    j["wall_seconds"] = rep.wall_seconds;
    write_text_file(out_path(cfg, "price_report.json"), j.dump(2) + "\n");
    return 0;
}

int cmd_converge(const bates::RunConfig& cfg) {
    using namespace bates;
    if (cfg.h_list.empty()) throw ConfigError("converge: empty h_list");
    StudyRunner runner(cfg.model, cfg.contract, cfg.grid, cfg.solver_options());
    const ConvergenceReport rep =
        run_convergence_study(runner, cfg.scheme, cfg.quantity, cfg.h_list,
                              cfg.h_ref, cfg.threads, cfg.paper_literal);
    const std::string base = std::string("converge_") +
                             quantity_name(cfg.quantity) + "_" +
                             scheme_name(cfg.scheme);
    write_text_file(out_path(cfg, base + ".csv"), to_csv(rep));
    write_text_file(out_path(cfg, base + ".json"), to_json(rep));
    std::printf("%s %s: m_l2=%.4f C_l2=%.6g m_linf=%.4f C_linf=%.6g\n",
                scheme_name(cfg.scheme), quantity_name(cfg.quantity),
                rep.fit_l2.m, rep.fit_l2.C, rep.fit_linf.m, rep.fit_linf.C);
    for (const auto& p : rep.points)
        std::printf("  h=%-6g eps_l2=%-12.6g eps_linf=%-12.6g\n", p.h, p.eps_l2,
                    p.eps_linf);
    return 0;
}

int cmd_hedge(const bates::RunConfig& cfg) {
    using namespace bates;
    if (cfg.h_list.empty()) throw ConfigError("hedge: empty h_list");
    const bool is_gamma = cfg.hedge_example == "gamma";
    const SpreadSpec& spec = is_gamma ? cfg.hedge_gamma : cfg.hedge_vega;
    StudyRunner runner(cfg.model, cfg.contract, cfg.grid, cfg.solver_options());
    const HedgeReport rep = hedge_table(runner, spec, cfg.h_list, cfg.h_ref,
                                        cfg.threads, cfg.paper_literal);
    const std::string base = std::string("hedge_") + cfg.hedge_example;
    write_text_file(out_path(cfg, base + ".csv"), to_csv(rep));
    write_text_file(out_path(cfg, base + ".json"), to_json(rep));

    // Fig.-4-style payoff data for the finest-grid HOC ratio.
    const HedgeRow* finest = nullptr;
    for (const auto& r : rep.rows)
        if (r.scheme == SchemeKind::Hoc4 && (!finest || r.h < finest->h))
            finest = &r;
    if (finest)
        write_text_file(out_path(cfg, base + "_payoff.csv"),
                        spread_payoff_csv(spec, finest->ratio));

    std::printf("%s hedge (spot=%g short K=%g long K=%g sigma0=%g, ref h=%g)\n",
                greek_name(spec.greek), spec.spot, spec.short_strike,
                spec.long_strike, spec.sigma0, rep.h_ref);
    std::printf("%-10s %-10s %-14s %-14s\n", "scheme", "mesh", "ratio",
                "pct_error");
    for (const auto& r : rep.rows) {
        std::printf("%-10s %-10g %-14.8f %-14.6f\n", scheme_name(r.scheme), r.h,
                    r.ratio, r.pct_error);
        if (r.has_extras)
            std::printf("    net_delta=%.6f underlying=%.6f net_theta=%.6f %s\n",
                        r.net_delta, r.underlying_qty, r.net_theta,
                        r.recommend ? "RECOMMEND" : "reject");
    }
    return 0;
}

int cmd_mc_check(const bates::RunConfig& cfg, long n_paths_override,
                 double drift_bump) {
    using namespace bates;
    const long n_paths = n_paths_override > 0 ? n_paths_override : cfg.mc.n_paths;

    const Grid grid = build_grid(cfg.grid);
    const SolveReport rep =
        solve_pide(cfg.model, cfg.contract, grid, cfg.scheme, cfg.solver_options());
    const GreekSurface ps =
        price_surface(rep.u, grid, cfg.model, cfg.contract, cfg.scheme);
    const double pide = evaluate_at(ps, cfg.query_spot, cfg.query_sigma, cfg.model);

    const McResult mc =
        mc_price(cfg.model, cfg.contract, cfg.query_spot, cfg.query_sigma,
                 n_paths, cfg.mc.n_steps, cfg.mc.seed, cfg.threads, McPayoff::Put,
                 drift_bump);

    const double diff = std::abs(pide - mc.price);
    const bool ok = diff < 3.0 * mc.stderr_;
    std::printf("pide_price  %.8f\n", pide);
    std::printf("mc_price    %.8f\n", mc.price);
    std::printf("mc_stderr   %.8f\n", mc.stderr_);
    std::printf("abs_diff    %.8f (%.2f stderr)\n", diff,
                mc.stderr_ > 0 ? diff / mc.stderr_ : 0.0);
    std::printf("verdict     %s\n", ok ? "PASS" : "FAIL");
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bates-model PIDE pricer with high-order compact differences"};
    // --h is a documented option; keep only the long help flag.
    app.set_help_flag("--help", "print help and exit");
    app.require_subcommand(1);

    CliOverrides o;
    app.add_option("--config", o.config_path, "JSON config file");
    app.add_option("--scheme", o.scheme, "hoc4 | central2");
    app.add_option("--threads", o.threads, "worker threads (default 1)");
    app.add_option("--out", o.out_dir, "output directory");
    app.add_option("--seed", o.seed, "Monte Carlo seed");
    app.add_flag("--paper-literal-greeks", o.paper_literal,
                 "use the paper's printed vega/gamma formulas");

    auto* price = app.add_subcommand("price", "solve once and price a point");
    price->set_help_flag("--help", "print help and exit");
    price->fallthrough(true);
    double q_spot = -1.0, q_sigma = -1.0;
    std::string surface_csv, dump_op;
    price->add_option("--h", o.h, "space step");
    price->add_option("--spot", q_spot, "query spot");
    price->add_option("--sigma", q_sigma, "query variance");
    price->add_option("--surface-csv", surface_csv, "write the price surface");
    price->add_option("--dump-operator", dump_op,
                      "write the implicit matrix in row/col/value form");

    auto* conv = app.add_subcommand("converge", "grid-refinement study");
    conv->fallthrough(true);
    conv->add_option("--quantity", o.quantity, "price | vega | gamma");
    conv->add_option("--h-list", o.h_list, "mesh sizes");

    std::string example;
    auto* hedge = app.add_subcommand("hedge", "hedge-ratio tables");
    hedge->fallthrough(true);
    hedge->add_option("--example", example, "vega | gamma");
    hedge->add_option("--h-list", o.h_list, "mesh sizes");

    auto* mc = app.add_subcommand("mc-check", "PIDE vs Monte Carlo cross-check");
    mc->set_help_flag("--help", "print help and exit");
    mc->fallthrough(true);
    long mc_paths = 0;
    double drift_bump = 0.0;
    mc->add_option("--h", o.h, "space step");
    mc->add_option("--paths", mc_paths, "number of MC paths");
    mc->add_option("--spot", q_spot, "query spot");
    mc->add_option("--sigma", q_sigma, "query variance");
    mc->add_option("--drift-bump", drift_bump, "corrupt the drift (test hook)")
        ->group("");   // hidden

    CLI11_PARSE(app, argc, argv);

    try {
        bates::RunConfig cfg = make_config(o);
        if (q_spot > 0.0) cfg.query_spot = q_spot;
        if (q_sigma > 0.0) cfg.query_sigma = q_sigma;
        if (!example.empty()) {
            if (example != "vega" && example != "gamma")
                throw bates::ConfigError("hedge: --example must be vega or gamma");
            cfg.hedge_example = example;
        }
        if (price->parsed()) return cmd_price(cfg, surface_csv, dump_op);
        if (conv->parsed()) return cmd_converge(cfg);
        if (hedge->parsed()) return cmd_hedge(cfg);
        if (mc->parsed()) return cmd_mc_check(cfg, mc_paths, drift_bump);
        return 2;
    } catch (const bates::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const bates::DomainError& e) {
        std::fprintf(stderr, "domain error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
