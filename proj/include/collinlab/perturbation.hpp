#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "collinlab/dataset.hpp"
#include "collinlab/linalg.hpp"

namespace collinlab {

/// Entry distribution of the random perturbation direction.
///
/// The default is exponential(1): a positive-support, unit-coefficient-of-
/// variation distribution whose Monte Carlo shift statistics match the
/// reference results this module reproduces.  Zero-mean choices (gaussian,
/// uniform in (-1,1)) produce markedly smaller mean shifts on replicated
/// samples because the direction has no component along the intercept.
enum class NoiseDistribution { exponential, gaussian, uniform };

const char* to_string(NoiseDistribution d);
NoiseDistribution parse_noise_distribution(const std::string& name);

/// Deterministic pseudo-random stream of noise draws.
///
/// Every (seed, trial, column) triple owns an independent substream, so a
/// Monte Carlo run produces bit-identical results no matter how trials are
/// scheduled across threads or in which order columns are processed.  The
/// generator is a splitmix64 counter; gaussians use the polar method.  The
/// bit stream is stable for a given platform and toolchain.
class NoiseStream {
public:
    NoiseStream(std::uint64_t seed, std::uint64_t trial, std::uint64_t column);

    /// One standard normal draw.
    double gaussian();

    /// One exponential(1) draw.
    double exponential();

    /// One uniform draw in (-1, 1).
    double uniform();

    double draw(NoiseDistribution dist);
    Vector draws(std::size_t n, NoiseDistribution dist);

    /// `n` standard normal draws.
    Vector gaussians(std::size_t n);

private:
    std::uint64_t next_u64();
    double next_unit();  // uniform in [0, 1)

    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Stream id that marks a column as frozen (copied through unperturbed).
inline constexpr std::uint64_t kFrozenColumn = std::numeric_limits<std::uint64_t>::max();

struct PerturbationConfig {
    double pct = 0.01;           ///< perturbation size as a fraction of each column norm
    std::size_t trials = 1000;   ///< Monte Carlo repetitions
    std::uint64_t seed = 0;      ///< base seed; substreams derive from it
    NoiseDistribution distribution = NoiseDistribution::exponential;
    bool perturb_intercept = false;  ///< also perturb the constant column
    unsigned threads = 0;        ///< worker threads; 0 means hardware concurrency

    void validate() const;
};

struct PerturbationSummary {
    // Echo of the configuration that produced the run.
    double pct = 0.0;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    NoiseDistribution distribution = NoiseDistribution::exponential;

    /// Per-trial coefficient shifts (percent), successful trials only,
    /// in trial order.
    Vector shifts;

    /// Trials whose perturbed design could not be refit (e.g. the noise made
    /// the matrix numerically rank deficient).  Excluded from the statistics.
    std::size_t failed = 0;

    double mean = 0.0;
    double sd = 0.0;  ///< sample standard deviation (n - 1 divisor)
    double min = 0.0;
    double max = 0.0;
};

/// `x + pct * ||x|| * noise / ||noise||`: the noise direction scaled so the
/// perturbation norm is exactly `pct * ||x||`.  Throws ZeroNormError when
/// either vector has zero norm.
Vector perturb_vector(const Vector& x, double pct, const Vector& noise);

/// As above with the noise direction drawn from `stream`.
Vector perturb_vector(const Vector& x, double pct, NoiseStream& stream,
                      NoiseDistribution dist = NoiseDistribution::exponential);

/// Perturbs every column of `x`, skipping the first when `skip_first_column`
/// is set (the intercept).  Column `j` uses the substream for `(seed, trial, j)`.
Matrix perturb_design(const Matrix& x, double pct, std::uint64_t seed, std::uint64_t trial,
                      bool skip_first_column,
                      NoiseDistribution dist = NoiseDistribution::exponential);

/// As above, but with an explicit stream id per column.  `kFrozenColumn`
/// leaves a column untouched.  Assigning the same ids to reordered columns
/// reproduces the same noise regardless of column position.
Matrix perturb_design(const Matrix& x, double pct, std::uint64_t seed, std::uint64_t trial,
                      const std::vector<std::uint64_t>& column_streams,
                      NoiseDistribution dist = NoiseDistribution::exponential);

/// Dataset-level form: perturbs the design only (never the response), leaving
/// the intercept column untouched unless `config.perturb_intercept` is set.
Dataset perturb_design(const Dataset& data, const PerturbationConfig& config,
                       std::uint64_t trial);

/// `100 * ||beta - beta_p|| / ||beta||`, the percent displacement of the full
/// coefficient vector.  Throws ZeroNormError when `beta` has zero norm.
double coefficient_shift(const Vector& beta, const Vector& beta_p);

/// Repeatedly perturbs the design of `data`, refits, and summarises the
/// distribution of coefficient shifts.  Deterministic for a fixed seed:
/// trial `t` always consumes the `(seed, t, column)` substreams, so results
/// are independent of the thread count.
PerturbationSummary monte_carlo_stability(const Dataset& data,
                                          const PerturbationConfig& config = {});

}  // namespace collinlab
