#include "bates/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace bates {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        if (!allowed.count(key)) {
            throw ConfigError("config: unknown field '" + key + "' in " + where);
        }
    }
}

double num(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number())
        throw ConfigError(std::string("config: field '") + key + "' must be a number");
    return j[key].get<double>();
}

// The spread expiry always follows the contract; it is not a JSON field.
void parse_spread(const json& j, SpreadSpec& s, const std::string& where) {
    check_keys(j, {"example", "spot", "short_strike", "long_strike", "sigma0"},
               where);
    s.spot = num(j, "spot", s.spot);
    s.short_strike = num(j, "short_strike", s.short_strike);
    s.long_strike = num(j, "long_strike", s.long_strike);
    s.sigma0 = num(j, "sigma0", s.sigma0);
}

} // namespace

SchemeKind parse_scheme(const std::string& name) {
    if (name == "hoc4") return SchemeKind::Hoc4;
    if (name == "central2") return SchemeKind::Central2;
    throw ConfigError("config: scheme must be 'hoc4' or 'central2', got '" +
                      name + "'");
}

Quantity parse_quantity(const std::string& name) {
    if (name == "price") return Quantity::Price;
    if (name == "vega") return Quantity::Vega;
    if (name == "gamma") return Quantity::Gamma;
    throw ConfigError("config: quantity must be price|vega|gamma, got '" + name +
                      "'");
}

PayoffSmoothing parse_smoothing(const std::string& name) {
    if (name == "auto") return PayoffSmoothing::Auto;
    if (name == "none") return PayoffSmoothing::None;
    if (name == "ktw4") return PayoffSmoothing::Ktw4;
    throw ConfigError("config: payoff_smoothing must be auto|none|ktw4, got '" +
                      name + "'");
}

void RunConfig::validate() const {
    model.validate();
    contract.validate();
    if (!(jump_tol > 0.0 && jump_tol < 1.0))
        throw ConfigError("config: jump_tol must be in (0, 1)");
    if (threads < 1) throw ConfigError("config: threads must be >= 1");
    if (!(h_ref > 0.0)) throw ConfigError("config: h_ref must be > 0");
    for (double h : h_list)
        if (!(h > 0.0)) throw ConfigError("config: h_list entries must be > 0");
}

RunConfig config_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: top level must be an object");

    RunConfig cfg;
    check_keys(j, {"model", "contract", "grid", "query", "hedge", "mc",
                   "jump_tol", "scheme", "payoff_smoothing", "h_list", "h_ref",
                   "quantity", "threads", "paper_literal_greeks", "out_dir"},
               "top level");

    if (j.contains("model")) {
        const json& m = j["model"];
        check_keys(m, {"kappa", "theta", "sigma_v", "rho", "r", "lambda",
                       "gamma_j", "delta_j"}, "section 'model'");
        cfg.model.kappa = num(m, "kappa", cfg.model.kappa);
        cfg.model.theta = num(m, "theta", cfg.model.theta);
        cfg.model.sigma_v = num(m, "sigma_v", cfg.model.sigma_v);
        cfg.model.rho = num(m, "rho", cfg.model.rho);
        cfg.model.r = num(m, "r", cfg.model.r);
        cfg.model.lambda = num(m, "lambda", cfg.model.lambda);
        cfg.model.gamma_j = num(m, "gamma_j", cfg.model.gamma_j);
        cfg.model.delta_j = num(m, "delta_j", cfg.model.delta_j);
    }
    if (j.contains("contract")) {
        const json& c = j["contract"];
        check_keys(c, {"strike", "expiry"}, "section 'contract'");
        cfg.contract.strike = num(c, "strike", cfg.contract.strike);
        cfg.contract.expiry = num(c, "expiry", cfg.contract.expiry);
    }
    if (j.contains("grid")) {
        const json& g = j["grid"];
        check_keys(g, {"R1", "L2", "R2", "h", "mesh_ratio"}, "section 'grid'");
        cfg.grid.R1 = num(g, "R1", cfg.grid.R1);
        cfg.grid.L2 = num(g, "L2", cfg.grid.L2);
        cfg.grid.R2 = num(g, "R2", cfg.grid.R2);
        cfg.grid.h = num(g, "h", cfg.grid.h);
        cfg.grid.mesh_ratio = num(g, "mesh_ratio", cfg.grid.mesh_ratio);
    }
    if (j.contains("query")) {
        const json& q = j["query"];
        check_keys(q, {"spot", "sigma"}, "section 'query'");
        cfg.query_spot = num(q, "spot", cfg.query_spot);
        cfg.query_sigma = num(q, "sigma", cfg.query_sigma);
    }
    if (j.contains("hedge")) {
        const json& hj = j["hedge"];
        if (hj.contains("example")) {
            const std::string ex = hj["example"].get<std::string>();
            if (ex != "vega" && ex != "gamma")
                throw ConfigError("config: hedge.example must be 'vega' or 'gamma'");
            cfg.hedge_example = ex;
        }
        if (cfg.hedge_example == "vega")
            parse_spread(hj, cfg.hedge_vega, "section 'hedge'");
        else
            parse_spread(hj, cfg.hedge_gamma, "section 'hedge'");
    }
    if (j.contains("mc")) {
        const json& m = j["mc"];
        check_keys(m, {"n_paths", "n_steps", "seed"}, "section 'mc'");
        if (m.contains("n_paths")) cfg.mc.n_paths = m["n_paths"].get<long>();
        if (m.contains("n_steps")) cfg.mc.n_steps = m["n_steps"].get<int>();
        if (m.contains("seed")) cfg.mc.seed = m["seed"].get<std::uint64_t>();
    }
    cfg.jump_tol = num(j, "jump_tol", cfg.jump_tol);
    if (j.contains("scheme")) cfg.scheme = parse_scheme(j["scheme"].get<std::string>());
    if (j.contains("payoff_smoothing"))
        cfg.smoothing = parse_smoothing(j["payoff_smoothing"].get<std::string>());
    if (j.contains("h_list")) {
        cfg.h_list.clear();
        for (const auto& v : j["h_list"]) cfg.h_list.push_back(v.get<double>());
    }
    cfg.h_ref = num(j, "h_ref", cfg.h_ref);
    if (j.contains("quantity"))
        cfg.quantity = parse_quantity(j["quantity"].get<std::string>());
    if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
    if (j.contains("paper_literal_greeks"))
        cfg.paper_literal = j["paper_literal_greeks"].get<bool>();
    if (j.contains("out_dir")) cfg.out_dir = j["out_dir"].get<std::string>();

    cfg.grid.expiry = cfg.contract.expiry;
    cfg.hedge_vega.expiry = cfg.contract.expiry;
    cfg.hedge_gamma.expiry = cfg.contract.expiry;
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("config: cannot open file: " + path);
    std::ostringstream buf;
    buf << is.rdbuf();
    return config_from_json_text(buf.str());
}

} // namespace bates
