#include "collinlab/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "collinlab/errors.hpp"
#include "collinlab/regression.hpp"

namespace collinlab {

namespace {

// splitmix64 finalizer; also used to fold seed components together.
std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

const char* to_string(NoiseDistribution d) {
    switch (d) {
        case NoiseDistribution::exponential: return "exponential";
        case NoiseDistribution::gaussian: return "gaussian";
        case NoiseDistribution::uniform: return "uniform";
    }
    return "?";
}

NoiseDistribution parse_noise_distribution(const std::string& name) {
    if (name == "exponential") return NoiseDistribution::exponential;
    if (name == "gaussian") return NoiseDistribution::gaussian;
    if (name == "uniform") return NoiseDistribution::uniform;
    throw Error("unknown noise distribution: " + name +
                " (expected exponential, gaussian, or uniform)");
}

NoiseStream::NoiseStream(std::uint64_t seed, std::uint64_t trial, std::uint64_t column)
    : state_(mix64(mix64(mix64(seed) ^ trial) ^ column)) {}

std::uint64_t NoiseStream::next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double NoiseStream::next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double NoiseStream::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // Polar method: rejection-sample a point in the unit disc, then map the
    // pair to two independent normals.
    double v1 = 0.0;
    double v2 = 0.0;
    double s = 0.0;
    do {
        v1 = 2.0 * next_unit() - 1.0;
        v2 = 2.0 * next_unit() - 1.0;
        s = v1 * v1 + v2 * v2;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v2 * f;
    has_spare_ = true;
    return v1 * f;
}

double NoiseStream::exponential() {
    // next_unit() < 1, so the argument stays strictly positive.
    return -std::log(1.0 - next_unit());
}

double NoiseStream::uniform() {
    return 2.0 * next_unit() - 1.0;
}

double NoiseStream::draw(NoiseDistribution dist) {
    switch (dist) {
        case NoiseDistribution::exponential: return exponential();
        case NoiseDistribution::gaussian: return gaussian();
        case NoiseDistribution::uniform: return uniform();
    }
    return 0.0;
}

Vector NoiseStream::draws(std::size_t n, NoiseDistribution dist) {
    Vector out(n);
    for (double& v : out) {
        v = draw(dist);
    }
    return out;
}

Vector NoiseStream::gaussians(std::size_t n) {
    return draws(n, NoiseDistribution::gaussian);
}

void PerturbationConfig::validate() const {
    if (!(pct >= 0.0) || !std::isfinite(pct)) {
        throw Error("perturbation fraction must be finite and non-negative");
    }
}

Vector perturb_vector(const Vector& x, double pct, const Vector& noise) {
    if (noise.size() != x.size()) {
        throw DimensionMismatchError("noise vector must match the perturbed vector");
    }
    const double x_norm = euclidean_norm(x);
    if (x_norm == 0.0) {
        throw ZeroNormError("cannot perturb a zero vector");
    }
    const double noise_norm = euclidean_norm(noise);
    if (noise_norm == 0.0) {
        throw ZeroNormError("noise direction has zero norm");
    }
    const double scale = pct * x_norm / noise_norm;
    Vector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = x[i] + scale * noise[i];
    }
    return out;
}

Vector perturb_vector(const Vector& x, double pct, NoiseStream& stream,
                      NoiseDistribution dist) {
    Vector noise;
    do {
        noise = stream.draws(x.size(), dist);
    } while (euclidean_norm(noise) == 0.0);
    return perturb_vector(x, pct, noise);
}

Matrix perturb_design(const Matrix& x, double pct, std::uint64_t seed, std::uint64_t trial,
                      bool skip_first_column, NoiseDistribution dist) {
    std::vector<std::uint64_t> streams(x.cols());
    for (std::size_t j = 0; j < x.cols(); ++j) {
        streams[j] = j;
    }
    if (skip_first_column && !streams.empty()) {
        streams[0] = kFrozenColumn;
    }
    return perturb_design(x, pct, seed, trial, streams, dist);
}

Matrix perturb_design(const Matrix& x, double pct, std::uint64_t seed, std::uint64_t trial,
                      const std::vector<std::uint64_t>& column_streams,
                      NoiseDistribution dist) {
    if (column_streams.size() != x.cols()) {
        throw DimensionMismatchError("one stream id is required per design column");
    }
    Matrix out = x;
    for (std::size_t j = 0; j < x.cols(); ++j) {
        if (column_streams[j] == kFrozenColumn) {
            continue;
        }
        NoiseStream stream(seed, trial, column_streams[j]);
        out.set_column(j, perturb_vector(x.column(j), pct, stream, dist));
    }
    return out;
}

Dataset perturb_design(const Dataset& data, const PerturbationConfig& config,
                       std::uint64_t trial) {
    config.validate();
    const bool skip_first = data.has_intercept && !config.perturb_intercept;
    Dataset out = data;
    out.X = perturb_design(data.X, config.pct, config.seed, trial, skip_first,
                           config.distribution);
    return out;
}

double coefficient_shift(const Vector& beta, const Vector& beta_p) {
    if (beta.size() != beta_p.size()) {
        throw DimensionMismatchError("coefficient vectors must have equal length");
    }
    const double base_norm = euclidean_norm(beta);
    if (base_norm == 0.0) {
        throw ZeroNormError("coefficient vector has zero norm");
    }
    return 100.0 * distance(beta, beta_p) / base_norm;
}

PerturbationSummary monte_carlo_stability(const Dataset& data,
                                          const PerturbationConfig& config) {
    config.validate();
    data.validate();
    const FitResult base = fit_ols(data);

    PerturbationSummary summary;
    summary.pct = config.pct;
    summary.trials = config.trials;
    summary.seed = config.seed;
    summary.distribution = config.distribution;

    // Results are indexed by trial, so the partition of trials across
    // threads cannot change the output.
    std::vector<double> shift_by_trial(config.trials, 0.0);
    std::vector<char> ok_by_trial(config.trials, 0);

    const auto run_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; ++t) {
            try {
                const Dataset perturbed = perturb_design(data, config, t);
                const FitResult refit = fit_ols(perturbed);
                shift_by_trial[t] = coefficient_shift(base.beta, refit.beta);
                ok_by_trial[t] = 1;
            } catch (const Error&) {
                // Perturbed design could not be refit; recorded as failed.
            }
        }
    };

    unsigned threads = config.threads;
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(
        std::min<std::size_t>(threads, std::max<std::size_t>(config.trials, 1)));

    if (threads <= 1 || config.trials < 2) {
        run_range(0, config.trials);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        const std::size_t chunk = (config.trials + threads - 1) / threads;
        for (unsigned w = 0; w < threads; ++w) {
            const std::size_t begin = static_cast<std::size_t>(w) * chunk;
            const std::size_t end = std::min(config.trials, begin + chunk);
            if (begin >= end) {
                break;
            }
            pool.emplace_back(run_range, begin, end);
        }
        for (std::thread& worker : pool) {
            worker.join();
        }
    }

    summary.shifts.reserve(config.trials);
    for (std::size_t t = 0; t < config.trials; ++t) {
        if (ok_by_trial[t]) {
            summary.shifts.push_back(shift_by_trial[t]);
        } else {
            ++summary.failed;
        }
    }

    if (summary.shifts.empty()) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        summary.mean = summary.sd = summary.min = summary.max = nan;
        return summary;
    }

    double sum = 0.0;
    summary.min = summary.shifts.front();
    summary.max = summary.shifts.front();
    for (const double s : summary.shifts) {
        sum += s;
        summary.min = std::min(summary.min, s);
        summary.max = std::max(summary.max, s);
    }
    summary.mean = sum / static_cast<double>(summary.shifts.size());

    double ss = 0.0;
    for (const double s : summary.shifts) {
        const double d = s - summary.mean;
        ss += d * d;
    }
    summary.sd = summary.shifts.size() > 1
                     ? std::sqrt(ss / static_cast<double>(summary.shifts.size() - 1))
                     : 0.0;
    return summary;
}

}  // namespace collinlab
