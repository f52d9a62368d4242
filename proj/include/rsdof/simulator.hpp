#pragma once

#include "rsdof/profile.hpp"
#include "rsdof/rational.hpp"
#include "rsdof/scheme.hpp"
#include "rsdof/synthesizer.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace rsdof {

/// Condition-number ceiling for the stacked estimate directions; realizations
/// beyond it are redrawn (degenerate-channel guard).
inline constexpr double kEstimateConditionLimit = 1e8;
inline constexpr int kResampleLimit = 256;

struct SimConfig {
    CsitProfile profile;
    int tx_antennas = 0; // M, requires M >= K
    RsScheme scheme;
    std::vector<double> snr_grid; // linear powers, strictly increasing, all > 1
    int trials_per_point = 1000;
    std::uint64_t seed = 0;
};

namespace simdetail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Independent, order-insensitive stream per (seed, point, trial).
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    std::uint64_t x = splitmix64(seed ^ 0xD1B54A32D192ED03ull);
    x = splitmix64(x ^ splitmix64(a + 1));
    x = splitmix64(x ^ splitmix64(b + 1));
    return x;
}

} // namespace simdetail

/// Channel-estimation-error variance at SNR P: sigma_i^2 = min(1, P^-alpha_i).
inline double csit_error_variance(const rational& alpha, double snr) {
    return std::min(1.0, std::pow(snr, -to_double(alpha)));
}

/// Per-trial channel draw. Column i holds user i's M-vector; the estimate and
/// error are independent circularly-symmetric Gaussians with variances
/// 1 - sigma_i^2 and sigma_i^2 per entry, and truth = estimate + error.
struct ChannelRealization {
    Eigen::MatrixXcd estimate;
    Eigen::MatrixXcd error;
    Eigen::MatrixXcd truth;
};

inline ChannelRealization sample_channel(const CsitProfile& profile, int tx_antennas, double snr,
                                         std::mt19937_64& rng) {
    if (snr <= 1) throw std::invalid_argument("sample_channel: SNR must exceed 1");
    const std::size_t K = profile.user_count();
    const int M = tx_antennas;
    ChannelRealization ch;
    ch.estimate.resize(M, static_cast<Eigen::Index>(K));
    ch.error.resize(M, static_cast<Eigen::Index>(K));
    std::normal_distribution<double> unit_normal(0.0, 1.0);
    for (std::size_t i = 0; i < K; ++i) {
        const double err_var = csit_error_variance(profile.alpha(i), snr);
        const double est_sd = std::sqrt((1.0 - err_var) / 2.0);
        for (int m = 0; m < M; ++m)
            ch.estimate(m, static_cast<Eigen::Index>(i)) =
                std::complex<double>(est_sd * unit_normal(rng), est_sd * unit_normal(rng));
    }
    for (std::size_t i = 0; i < K; ++i) {
        const double err_sd = std::sqrt(csit_error_variance(profile.alpha(i), snr) / 2.0);
        for (int m = 0; m < M; ++m)
            ch.error(m, static_cast<Eigen::Index>(i)) =
                std::complex<double>(err_sd * unit_normal(rng), err_sd * unit_normal(rng));
    }
    ch.truth = ch.estimate + ch.error;
    return ch;
}

/// Condition number of the normalized nonzero estimate directions of the
/// active users. Zero columns (no CSIT at all) impose no ZF constraint and
/// are excluded.
inline double estimate_condition(const Eigen::MatrixXcd& estimate,
                                 const std::vector<bool>& active) {
    std::vector<Eigen::Index> cols;
    for (Eigen::Index i = 0; i < estimate.cols(); ++i)
        if (active[static_cast<std::size_t>(i)] && estimate.col(i).norm() > 0) cols.push_back(i);
    if (cols.size() < 2) return 1.0;
    Eigen::MatrixXcd dirs(estimate.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k)
        dirs.col(static_cast<Eigen::Index>(k)) = estimate.col(cols[k]).normalized();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(dirs);
    const double smallest = svd.singularValues().tail(1)(0);
    if (smallest <= 0) return std::numeric_limits<double>::infinity();
    return svd.singularValues()(0) / smallest;
}

/// Unit precoders: each active user's private direction is its estimate
/// projected onto the orthogonal complement of all other active users'
/// estimates; the common direction is an independent random unit vector.
struct Precoders {
    Eigen::MatrixXcd private_dirs; // column j meaningful iff user j active
    Eigen::VectorXcd common_dir;
};

inline Precoders zf_precoders(const Eigen::MatrixXcd& estimate, const std::vector<bool>& active,
                              std::mt19937_64& rng) {
    const Eigen::Index M = estimate.rows();
    const Eigen::Index K = estimate.cols();

    Precoders pre;
    std::normal_distribution<double> unit_normal(0.0, 1.0);
    pre.common_dir.resize(M);
    for (Eigen::Index m = 0; m < M; ++m)
        pre.common_dir(m) = std::complex<double>(unit_normal(rng), unit_normal(rng));
    pre.common_dir.normalize();

    pre.private_dirs = Eigen::MatrixXcd::Zero(M, K);
    for (Eigen::Index j = 0; j < K; ++j) {
        if (!active[static_cast<std::size_t>(j)]) continue;
        std::vector<Eigen::Index> others;
        for (Eigen::Index l = 0; l < K; ++l)
            if (l != j && active[static_cast<std::size_t>(l)] && estimate.col(l).norm() > 0)
                others.push_back(l);
        if (others.empty()) {
            // Unconstrained: transmit along the own estimate when one exists.
            if (estimate.col(j).norm() > 0)
                pre.private_dirs.col(j) = estimate.col(j).normalized();
            else
                pre.private_dirs.col(j) = Eigen::VectorXcd::Unit(M, 0);
            continue;
        }
        if (static_cast<Eigen::Index>(others.size()) >= M)
            throw std::runtime_error("zf_precoders: more ZF constraints than antennas");
        Eigen::MatrixXcd stacked(M, static_cast<Eigen::Index>(others.size()));
        for (std::size_t k = 0; k < others.size(); ++k)
            stacked.col(static_cast<Eigen::Index>(k)) = estimate.col(others[k]);
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(stacked);
        const Eigen::MatrixXcd full_q = qr.householderQ() * Eigen::MatrixXcd::Identity(M, M);
        const Eigen::MatrixXcd basis = full_q.leftCols(static_cast<Eigen::Index>(others.size()));
        Eigen::VectorXcd projected = estimate.col(j) - basis * (basis.adjoint() * estimate.col(j));
        const double scale = std::max(estimate.col(j).norm(), 1.0);
        if (projected.norm() <= 1e-14 * scale)
            // Estimate sits in the span of the others (or vanishes): any
            // complement direction zero-forces them.
            projected = full_q.col(static_cast<Eigen::Index>(others.size()));
        pre.private_dirs.col(j) = projected.normalized();
    }
    return pre;
}

/// Deterministic power allocation: private powers P^{a_j} / (K+1) for active
/// users, everything left to the common symbol, so the budget holds exactly
/// and the common power stays of order P.
struct PowerAllocation {
    std::vector<double> private_power;
    double common_power = 0;
};

inline PowerAllocation power_allocation(const RsScheme& scheme, double snr) {
    const std::size_t K = scheme.user_count();
    PowerAllocation alloc;
    alloc.private_power.assign(K, 0.0);
    double spent = 0;
    for (std::size_t j = 0; j < K; ++j) {
        if (!scheme.active[j]) continue;
        alloc.private_power[j] =
            std::pow(snr, to_double(scheme.levels[j])) / static_cast<double>(K + 1);
        spent += alloc.private_power[j];
    }
    alloc.common_power = snr - spent;
    return alloc;
}

/// Per-realization rates: every user decodes the common symbol treating all
/// private symbols as noise, then cancels it and decodes its own private
/// symbol under the residual interference.
struct InstantRates {
    std::vector<double> common;
    std::vector<double> private_rate;
};

inline InstantRates instantaneous_rates(const ChannelRealization& ch, const Precoders& pre,
                                        const RsScheme& scheme, double snr) {
    const std::size_t K = scheme.user_count();
    const PowerAllocation alloc = power_allocation(scheme, snr);
    InstantRates rates;
    rates.common.assign(K, 0.0);
    rates.private_rate.assign(K, 0.0);
    for (std::size_t j = 0; j < K; ++j) {
        const auto user = static_cast<Eigen::Index>(j);
        std::vector<double> received(K, 0.0); // private power i as seen by user j
        double all_private = 0;
        for (std::size_t i = 0; i < K; ++i) {
            if (!scheme.active[i]) continue;
            received[i] =
                alloc.private_power[i] *
                std::norm(ch.truth.col(user).dot(pre.private_dirs.col(static_cast<Eigen::Index>(i))));
            all_private += received[i];
        }
        const double common_gain = std::norm(ch.truth.col(user).dot(pre.common_dir));
        rates.common[j] = std::log2(1.0 + alloc.common_power * common_gain / (1.0 + all_private));
        if (scheme.active[j]) {
            double cross = 0;
            for (std::size_t i = 0; i < K; ++i)
                if (i != j) cross += received[i];
            rates.private_rate[j] = std::log2(1.0 + received[j] / (1.0 + cross));
        }
    }
    return rates;
}

struct SlopeFit {
    double slope = 0;
    double intercept = 0;
    double half_width = 0;   // 95% confidence half-width of the slope
    double residual_rms = 0; // RMS of the fit residuals
};

/// Ordinary least squares of y against x.
inline SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double sse = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = y[i] - (fit.intercept + fit.slope * x[i]);
        sse += e * e;
    }
    fit.residual_rms = std::sqrt(sse / static_cast<double>(n));
    if (n > 2) fit.half_width = 1.96 * std::sqrt(sse / static_cast<double>(n - 2) / sxx);
    return fit;
}

/// Ergodic-rate sweep over the SNR grid plus least-squares DoF slopes.
/// Per point: the common rate is the min over users of the mean
/// common-decoding rate; each user's total rate adds its private rate and its
/// proportional share common_split_j / common_dof of the common rate.
struct SweepResult {
    std::vector<double> snr_grid;
    std::vector<double> common_rate;                 // per point
    std::vector<std::vector<double>> private_rates;  // [point][user]
    std::vector<std::vector<double>> total_rates;    // [point][user]
    std::vector<SlopeFit> user_fits;
    SlopeFit common_fit;
};

namespace simdetail {

inline void check_config(const CsitProfile& profile, int tx_antennas,
                         const std::vector<double>& snr_grid, int trials) {
    if (tx_antennas < static_cast<int>(profile.user_count()))
        throw std::invalid_argument("simulator requires at least as many antennas as users");
    if (snr_grid.size() < 3)
        throw std::invalid_argument("SNR grid needs at least 3 points for a slope fit");
    for (std::size_t p = 0; p < snr_grid.size(); ++p) {
        if (snr_grid[p] <= 1) throw std::invalid_argument("SNR grid entries must exceed 1");
        if (p > 0 && snr_grid[p] <= snr_grid[p - 1])
            throw std::invalid_argument("SNR grid must be strictly increasing");
    }
    if (trials < 1) throw std::invalid_argument("trials per point must be positive");
}

/// Redraws the channel until the active estimate directions are acceptably
/// conditioned; the retry uses the same stream, so the result is still a
/// deterministic function of the stream seed.
inline ChannelRealization sample_admissible_channel(const CsitProfile& profile, int tx_antennas,
                                                    double snr, const std::vector<bool>& active,
                                                    std::mt19937_64& rng) {
    for (int attempt = 0; attempt < kResampleLimit; ++attempt) {
        ChannelRealization ch = sample_channel(profile, tx_antennas, snr, rng);
        if (estimate_condition(ch.estimate, active) <= kEstimateConditionLimit) return ch;
    }
    throw std::runtime_error("channel resampling failed to find a well-conditioned estimate");
}

} // namespace simdetail

inline SweepResult run_sweep(const SimConfig& config) {
    const CsitProfile& profile = config.profile;
    const std::size_t K = profile.user_count();
    simdetail::check_config(profile, config.tx_antennas, config.snr_grid,
                            config.trials_per_point);
    if (auto issues = validate_scheme(config.scheme, profile); !issues.empty()) {
        std::string msg = "invalid scheme for simulation:";
        for (const std::string& s : issues) msg += " [" + s + "]";
        throw std::invalid_argument(msg);
    }

    const rational pool = common_dof(config.scheme);
    std::vector<double> share(K, 0.0);
    if (pool > 0)
        for (std::size_t j = 0; j < K; ++j)
            share[j] = to_double(config.scheme.common_split[j] / pool);

    SweepResult result;
    result.snr_grid = config.snr_grid;
    result.common_rate.resize(config.snr_grid.size());
    result.private_rates.assign(config.snr_grid.size(), std::vector<double>(K, 0.0));
    result.total_rates.assign(config.snr_grid.size(), std::vector<double>(K, 0.0));

    for (std::size_t p = 0; p < config.snr_grid.size(); ++p) {
        const double snr = config.snr_grid[p];
        std::vector<double> common_sum(K, 0.0);
        std::vector<double> private_sum(K, 0.0);
        for (int t = 0; t < config.trials_per_point; ++t) {
            std::mt19937_64 rng(simdetail::stream_seed(config.seed, p, static_cast<std::uint64_t>(t)));
            const ChannelRealization ch = simdetail::sample_admissible_channel(
                profile, config.tx_antennas, snr, config.scheme.active, rng);
            const Precoders pre = zf_precoders(ch.estimate, config.scheme.active, rng);
            const InstantRates rates = instantaneous_rates(ch, pre, config.scheme, snr);
            for (std::size_t j = 0; j < K; ++j) {
                if (!std::isfinite(rates.common[j]) || !std::isfinite(rates.private_rate[j]))
                    throw std::runtime_error("non-finite rate sample at P = " + std::to_string(snr) +
                                             ", user " + std::to_string(j + 1) + ", trial " +
                                             std::to_string(t));
                common_sum[j] += rates.common[j];
                private_sum[j] += rates.private_rate[j];
            }
        }
        double common_min = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < K; ++j)
            common_min = std::min(common_min, common_sum[j] / config.trials_per_point);
        result.common_rate[p] = common_min;
        for (std::size_t j = 0; j < K; ++j) {
            result.private_rates[p][j] = private_sum[j] / config.trials_per_point;
            result.total_rates[p][j] = result.private_rates[p][j] + share[j] * common_min;
        }
    }

    std::vector<double> log_snr(config.snr_grid.size());
    for (std::size_t p = 0; p < log_snr.size(); ++p) log_snr[p] = std::log2(config.snr_grid[p]);
    result.user_fits.resize(K);
    for (std::size_t j = 0; j < K; ++j) {
        std::vector<double> y(config.snr_grid.size());
        for (std::size_t p = 0; p < y.size(); ++p) y[p] = result.total_rates[p][j];
        result.user_fits[j] = fit_slope(log_snr, y);
    }
    result.common_fit = fit_slope(log_snr, result.common_rate);
    return result;
}

/// Sweep for a whole time-sharing plan: each component runs on its own
/// derived seed stream and contributes weight * rate (a silence component
/// contributes nothing), exactly what operating the schemes over fractions
/// of the channel uses would yield ergodically.
inline SweepResult simulate_plan(const CsitProfile& profile, int tx_antennas,
                                 const TimeSharingPlan& plan, const std::vector<double>& snr_grid,
                                 int trials_per_point, std::uint64_t seed) {
    simdetail::check_config(profile, tx_antennas, snr_grid, trials_per_point);
    const std::size_t K = profile.user_count();
    SweepResult combined;
    combined.snr_grid = snr_grid;
    combined.common_rate.assign(snr_grid.size(), 0.0);
    combined.private_rates.assign(snr_grid.size(), std::vector<double>(K, 0.0));
    combined.total_rates.assign(snr_grid.size(), std::vector<double>(K, 0.0));

    for (std::size_t m = 0; m < plan.components.size(); ++m) {
        const PlanComponent& component = plan.components[m];
        if (!component.scheme) continue;
        SimConfig config{profile, tx_antennas, *component.scheme, snr_grid, trials_per_point,
                         simdetail::splitmix64(seed ^ (0xA0761D6478BD642Full * (m + 1)))};
        const SweepResult part = run_sweep(config);
        const double weight = to_double(component.weight);
        for (std::size_t p = 0; p < snr_grid.size(); ++p) {
            combined.common_rate[p] += weight * part.common_rate[p];
            for (std::size_t j = 0; j < K; ++j) {
                combined.private_rates[p][j] += weight * part.private_rates[p][j];
                combined.total_rates[p][j] += weight * part.total_rates[p][j];
            }
        }
    }

    std::vector<double> log_snr(snr_grid.size());
    for (std::size_t p = 0; p < log_snr.size(); ++p) log_snr[p] = std::log2(snr_grid[p]);
    combined.user_fits.resize(K);
    for (std::size_t j = 0; j < K; ++j) {
        std::vector<double> y(snr_grid.size());
        for (std::size_t p = 0; p < y.size(); ++p) y[p] = combined.total_rates[p][j];
        combined.user_fits[j] = fit_slope(log_snr, y);
    }
    combined.common_fit = fit_slope(log_snr, combined.common_rate);
    return combined;
}

/// Mean residual leakage power |h_i^H v_j|^2 of every cross pair (all users
/// active), with a log-log slope fit per pair. ZF against the estimate leaves
/// a residual of order P^{-alpha_i}, so the fitted slope estimates -alpha_i.
struct LeakageSweep {
    std::vector<double> snr_grid;
    std::vector<Eigen::MatrixXd> mean_gain;             // per point, (observer i, precoder j)
    std::vector<std::vector<SlopeFit>> pair_fits;        // [i][j], j != i
};

inline LeakageSweep leakage_sweep(const CsitProfile& profile, int tx_antennas,
                                  const std::vector<double>& snr_grid, int trials_per_point,
                                  std::uint64_t seed) {
    simdetail::check_config(profile, tx_antennas, snr_grid, trials_per_point);
    const std::size_t K = profile.user_count();
    const std::vector<bool> all_active(K, true);
    LeakageSweep sweep;
    sweep.snr_grid = snr_grid;
    for (std::size_t p = 0; p < snr_grid.size(); ++p) {
        Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(K),
                                                    static_cast<Eigen::Index>(K));
        for (int t = 0; t < trials_per_point; ++t) {
            std::mt19937_64 rng(simdetail::stream_seed(seed, p, static_cast<std::uint64_t>(t)));
            const ChannelRealization ch = simdetail::sample_admissible_channel(
                profile, tx_antennas, snr_grid[p], all_active, rng);
            const Precoders pre = zf_precoders(ch.estimate, all_active, rng);
            for (std::size_t i = 0; i < K; ++i)
                for (std::size_t j = 0; j < K; ++j) {
                    if (i == j) continue;
                    acc(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += std::norm(
                        ch.truth.col(static_cast<Eigen::Index>(i))
                            .dot(pre.private_dirs.col(static_cast<Eigen::Index>(j))));
                }
        }
        sweep.mean_gain.push_back(acc / trials_per_point);
    }
    std::vector<double> log_snr(snr_grid.size());
    for (std::size_t p = 0; p < log_snr.size(); ++p) log_snr[p] = std::log2(snr_grid[p]);
    sweep.pair_fits.assign(K, std::vector<SlopeFit>(K));
    for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = 0; j < K; ++j) {
            if (i == j) continue;
            std::vector<double> y(snr_grid.size());
            for (std::size_t p = 0; p < y.size(); ++p)
                y[p] = std::log2(sweep.mean_gain[p](static_cast<Eigen::Index>(i),
                                                    static_cast<Eigen::Index>(j)));
            sweep.pair_fits[i][j] = fit_slope(log_snr, y);
        }
    return sweep;
}

} // namespace rsdof
