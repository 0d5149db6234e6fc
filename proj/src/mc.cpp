#include "bates/mc.hpp"

#include <cmath>
#include <vector>

#include "bates/threads.hpp"

namespace bates {

namespace {

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

} // namespace

std::array<std::uint32_t, 4> philox4x32(const std::array<std::uint32_t, 4>& ctr,
                                        const std::array<std::uint32_t, 2>& key) {
    std::uint32_t c0 = ctr[0], c1 = ctr[1], c2 = ctr[2], c3 = ctr[3];
    std::uint32_t k0 = key[0], k1 = key[1];
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, c0, hi0, lo0);
        mulhilo(kPhiloxM1, c2, hi1, lo1);
        const std::uint32_t n0 = hi1 ^ c1 ^ k0;
        const std::uint32_t n1 = lo1;
        const std::uint32_t n2 = hi0 ^ c3 ^ k1;
        const std::uint32_t n3 = lo0;
        c0 = n0; c1 = n1; c2 = n2; c3 = n3;
        k0 += kPhiloxW0;
        k1 += kPhiloxW1;
    }
    return {c0, c1, c2, c3};
}

namespace {

constexpr double kTwoPow32Inv = 1.0 / 4294967296.0;

inline double to_uniform(std::uint32_t x) {
    return (static_cast<double>(x) + 0.5) * kTwoPow32Inv;
}

struct DrawStream {
    std::array<std::uint32_t, 2> key;
    std::uint64_t pair_index;

    std::array<double, 4> uniforms(std::uint32_t step, std::uint32_t sub) const {
        const std::array<std::uint32_t, 4> ctr = {
            static_cast<std::uint32_t>(pair_index),
            static_cast<std::uint32_t>(pair_index >> 32), step, sub};
        const auto b = philox4x32(ctr, key);
        return {to_uniform(b[0]), to_uniform(b[1]), to_uniform(b[2]),
                to_uniform(b[3])};
    }
};

inline void box_muller(double u1, double u2, double& z0, double& z1) {
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    z0 = r * std::cos(a);
    z1 = r * std::sin(a);
}

// Inversion sampling; lam_dt is small so the loop rarely iterates.
inline int poisson_draw(double u, double lam_dt, double exp_neg) {
    double p = exp_neg, cdf = exp_neg;
    int k = 0;
    while (u > cdf && k < 200) {
        ++k;
        p *= lam_dt / k;
        cdf += p;
    }
    return k;
}

} // namespace

McResult mc_price(const BatesParams& params, const ContractSpec& contract,
                  double spot, double sigma0, long n_paths, int n_steps,
                  std::uint64_t seed, int threads, McPayoff payoff,
                  double drift_bump) {
    params.validate();
    contract.validate();
    if (n_paths < 10000)
        throw ConfigError("mc: n_paths must be at least 10^4");
    if (n_steps < 1) throw ConfigError("mc: n_steps must be >= 1");
    if (!(spot > 0.0) || !(sigma0 > 0.0))
        throw ConfigError("mc: spot and sigma0 must be > 0");

    const long n_pairs = (n_paths + 1) / 2;
    const double dt = contract.expiry / n_steps;
    const double sdt = std::sqrt(dt);
    const double mu = params.mu_b() + drift_bump;
    const double rho = params.rho;
    const double rho_c = std::sqrt(1.0 - rho * rho);
    const double lam_dt = params.lambda * dt;
    const double exp_neg_lam_dt = std::exp(-lam_dt);
    const double disc = std::exp(-params.r * contract.expiry);
    const double x0 = std::log(spot);

    const std::array<std::uint32_t, 2> key = {
        static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};

    // Fixed-size blocks summed sequentially inside, reduced in block order:
    // identical totals for any thread count.
    constexpr long kBlock = 4096;
    const long n_blocks = (n_pairs + kBlock - 1) / kBlock;
    std::vector<double> blk_sum(n_blocks, 0.0), blk_sum2(n_blocks, 0.0);

    auto leg_payoff = [&](double x) {
        if (payoff == McPayoff::TerminalSpot) return std::exp(x);
        const double s = std::exp(x);
        return s < contract.strike ? contract.strike - s : 0.0;
    };

    parallel_blocks(n_blocks, threads, [&](long blk) {
        const long p0 = blk * kBlock;
        const long p1 = std::min(n_pairs, p0 + kBlock);
        double acc = 0.0, acc2 = 0.0;
        for (long p = p0; p < p1; ++p) {
            DrawStream stream{key, static_cast<std::uint64_t>(p)};
            double x = x0, xa = x0;
            double var = sigma0, vara = sigma0;
            for (int s = 0; s < n_steps; ++s) {
                const auto u = stream.uniforms(static_cast<std::uint32_t>(s), 0);
                double z1, z2;
                box_muller(u[0], u[1], z1, z2);
                const double zs = z1;
                const double zv = rho * z1 + rho_c * z2;

                double jump_sum = 0.0;
                const int nj = poisson_draw(u[2], lam_dt, exp_neg_lam_dt);
                for (int j = 0; j < nj; j += 2) {
                    const auto uj = stream.uniforms(static_cast<std::uint32_t>(s),
                                                    1 + static_cast<std::uint32_t>(j / 2));
                    double g0, g1;
                    box_muller(uj[0], uj[1], g0, g1);
                    jump_sum += params.gamma_j + params.delta_j * g0;
                    if (j + 1 < nj)
                        jump_sum += params.gamma_j + params.delta_j * g1;
                }

                const double vp = var > 0.0 ? var : 0.0;
                const double vpa = vara > 0.0 ? vara : 0.0;
                x += (mu - 0.5 * vp) * dt + std::sqrt(vp) * sdt * zs + jump_sum;
                xa += (mu - 0.5 * vpa) * dt - std::sqrt(vpa) * sdt * zs + jump_sum;
                var += params.kappa * (params.theta - vp) * dt +
                       params.sigma_v * std::sqrt(vp) * sdt * zv;
                vara += params.kappa * (params.theta - vpa) * dt -
                        params.sigma_v * std::sqrt(vpa) * sdt * zv;
            }
            const double w = disc * 0.5 * (leg_payoff(x) + leg_payoff(xa));
            acc += w;
            acc2 += w * w;
        }
        blk_sum[blk] = acc;
        blk_sum2[blk] = acc2;
    });

    double sum = 0.0, sum2 = 0.0;
    for (long b = 0; b < n_blocks; ++b) {
        sum += blk_sum[b];
        sum2 += blk_sum2[b];
    }
    McResult res;
    res.n_paths = 2 * n_pairs;
    res.price = sum / n_pairs;
    const double varhat =
        (sum2 / n_pairs - res.price * res.price) * n_pairs / (n_pairs - 1.0);
    res.stderr_ = std::sqrt(varhat > 0.0 ? varhat / n_pairs : 0.0);
    return res;
}

} // namespace bates
