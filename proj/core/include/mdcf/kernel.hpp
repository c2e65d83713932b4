#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <utility>

#include "mdcf/errors.hpp"

namespace mdcf {

/*!
 * Gamma distribution in shape/rate form: density rate^shape x^(shape-1)
 * e^(-rate x) / Gamma(shape). The degradation literature often calls the
 * rate "scale"; the density is what counts here.
 */
class GammaLaw
{
  public:
    GammaLaw(double shape, double rate);

    double shape() const noexcept { return shape_; }
    double rate() const noexcept { return rate_; }
    double mean() const noexcept { return shape_ / rate_; }
    double variance() const noexcept { return shape_ / (rate_ * rate_); }

  private:
    double shape_;
    double rate_;
};

/*!
 * Normal distribution. A law built with degenerate() is a point mass at its
 * mean (stdev 0); the regular constructor requires stdev > 0.
 */
class NormalLaw
{
  public:
    NormalLaw(double mean, double stdev);

    static NormalLaw degenerate(double value);

    double mean() const noexcept { return mean_; }
    double stdev() const noexcept { return stdev_; }
    bool is_degenerate() const noexcept { return stdev_ == 0.0; }

  private:
    struct PointMass
    {};
    NormalLaw(double mean, PointMass) noexcept : mean_(mean), stdev_(0.0) {}

    double mean_;
    double stdev_;
};

// Special functions and distribution evaluations

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double regularized_gamma_p(double a, double x);

double gamma_pdf(double x, const GammaLaw& law);
double gamma_cdf(double x, const GammaLaw& law);

double normal_pdf(double x, const NormalLaw& law);
double normal_cdf(double x, const NormalLaw& law);

/*!
 * Probability of exactly `count` events by time t for the facilitation
 * process with intensity (1 + eta i) lambda0(t), given the integrated base
 * intensity big_lambda = int_0^t lambda0. Negative binomial with size 1/eta
 * and success probability 1 - exp(-eta big_lambda); evaluated in log space
 * with a generalized binomial coefficient so 1/eta need not be an integer.
 */
double facilitation_pmf(std::uint64_t count, double eta, double big_lambda);

/// Law of the sum of m iid draws; nullopt for m = 0 (point mass at zero).
std::optional<NormalLaw> iid_sum_normal(std::uint64_t m, const NormalLaw& law);

// Quadrature

struct QuadratureOptions
{
    double tol = 1e-9;
    int max_subdivisions = 2000;
};

/*!
 * Globally adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
 *
 * The interval with the largest |K15 - G7| is bisected until the summed
 * error estimate drops to tol. Throws NumericError (carrying the best
 * estimate) when max_subdivisions is exhausted.
 */
double integrate(const std::function<double(double)>& f, double a, double b,
                 QuadratureOptions options = {});

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol)
{
    return integrate(f, a, b, QuadratureOptions{tol});
}

// Samplers. All take a UniformRandomBitGenerator with 64-bit output and
// consume it in a platform-independent way (no std:: distributions).

/// Uniform on the open interval (0, 1) from 53 random bits.
template<class Rng>
double uniform_open(Rng& rng)
{
    static_assert(Rng::max() == UINT64_MAX && Rng::min() == 0);
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Marsaglia polar method; the second variate is discarded.
template<class Rng>
double standard_normal(Rng& rng)
{
    for (;;)
    {
        const double u = 2.0 * uniform_open(rng) - 1.0;
        const double v = 2.0 * uniform_open(rng) - 1.0;
        const double s = u * u + v * v;
        if (s < 1.0 && s > 0.0)
        {
            return u * std::sqrt(-2.0 * std::log(s) / s);
        }
    }
}

/// Two independent standard normals from exactly two uniforms (Box-Muller).
template<class Rng>
std::pair<double, double> standard_normal_pair(Rng& rng)
{
    const double r = std::sqrt(-2.0 * std::log(uniform_open(rng)));
    const double angle = 2.0 * std::numbers::pi * uniform_open(rng);
    return {r * std::cos(angle), r * std::sin(angle)};
}

template<class Rng>
double sample_normal(const NormalLaw& law, Rng& rng)
{
    if (law.is_degenerate())
    {
        return law.mean();
    }
    return law.mean() + law.stdev() * standard_normal(rng);
}

/*!
 * Marsaglia-Tsang squeeze sampler. For shape < 1 draws Gamma(shape + 1)
 * and applies the U^(1/shape) boost, so tiny per-step shapes (alpha dt << 1)
 * cost the same as shape 1.
 */
template<class Rng>
double sample_gamma(const GammaLaw& law, Rng& rng)
{
    const double shape = law.shape();
    const bool boosted = shape < 1.0;
    const double d = (boosted ? shape + 1.0 : shape) - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);

    for (;;)
    {
        double x;
        double v;
        do
        {
            x = standard_normal(rng);
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform_open(rng);
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2 ||
            std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v)))
        {
            const double value = d * v / law.rate();
            if (boosted)
            {
                // Draws below the double range round to 0; harmless for wear increments.
                return value * std::pow(uniform_open(rng), 1.0 / shape);
            }
            return value;
        }
    }
}

/// Inverse-CDF Poisson draw from a single uniform. Nondecreasing in mean
/// for a fixed u, which is what keeps paired-seed runs ordered.
std::uint64_t poisson_inverse(double mean, double u);

}  // namespace mdcf
