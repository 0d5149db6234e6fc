#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bates/analysis.hpp"
#include "bates/grid.hpp"
#include "bates/hedging.hpp"
#include "bates/model.hpp"
#include "bates/stepper.hpp"

namespace bates {

struct McConfig {
    long n_paths = 1000000;
    int n_steps = 250;
    std::uint64_t seed = 42;
};

// Full run configuration. JSON files may set any subset of fields; missing
// fields keep these defaults, unknown fields are rejected.
struct RunConfig {
    BatesParams model;
    ContractSpec contract;
    GridSpec grid;
    double jump_tol = 1e-10;
    SchemeKind scheme = SchemeKind::Hoc4;
    PayoffSmoothing smoothing = PayoffSmoothing::Auto;
    double query_spot = 100.0;
    double query_sigma = 0.01;
    std::vector<double> h_list = {0.4, 0.2, 0.1, 0.05};
    double h_ref = 0.025;
    Quantity quantity = Quantity::Price;
    std::string hedge_example = "vega";
    SpreadSpec hedge_vega = SpreadSpec::example_vega();
    SpreadSpec hedge_gamma = SpreadSpec::example_gamma();
    McConfig mc;
    int threads = 1;
    bool paper_literal = false;
    std::string out_dir = ".";

    SolverOptions solver_options() const {
        SolverOptions o;
        o.smoothing = smoothing;
        o.jump_tol = jump_tol;
        o.threads = threads;
        return o;
    }
    void validate() const;
};

RunConfig load_config(const std::string& path);
RunConfig config_from_json_text(const std::string& text);

SchemeKind parse_scheme(const std::string& name);
Quantity parse_quantity(const std::string& name);
PayoffSmoothing parse_smoothing(const std::string& name);

} // namespace bates
