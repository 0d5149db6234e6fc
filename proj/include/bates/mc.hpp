#pragma once

#include <array>
#include <cstdint>

#include "bates/model.hpp"

namespace bates {

// Counter-based random stream (Philox4x32-10). Every draw is addressed by
// (key, counter), so path simulations are reproducible for any thread count
// and common-random-number reuse is a matter of reusing indices.
std::array<std::uint32_t, 4> philox4x32(const std::array<std::uint32_t, 4>& ctr,
                                        const std::array<std::uint32_t, 2>& key);

enum class McPayoff { Put, TerminalSpot };

struct McResult {
    double price = 0.0;
    double stderr_ = 0.0;
    long n_paths = 0;
};

// Risk-neutral Monte Carlo: log-Euler for the asset with full-truncation
// Euler for the CIR variance, compound Poisson jumps with log-normal sizes,
// antithetic Brownian pairs (jumps shared within a pair). drift_bump is a
// test hook that corrupts the drift to exercise negative controls.
McResult mc_price(const BatesParams& params, const ContractSpec& contract,
                  double spot, double sigma0, long n_paths, int n_steps,
                  std::uint64_t seed, int threads = 1,
                  McPayoff payoff = McPayoff::Put, double drift_bump = 0.0);

} // namespace bates
