#include "mdcf/kernel.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <queue>
#include <string>
#include <vector>

namespace mdcf {

namespace {

constexpr double kEpsilon = std::numeric_limits<double>::epsilon();

void require_finite(double x, const char* what)
{
    if (!std::isfinite(x))
    {
        throw DomainError(std::string(what) + " must be finite");
    }
}

// Series expansion, converges for x < a + 1.
double gamma_p_series(double a, double x, double log_prefactor)
{
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 100000; ++n)
    {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEpsilon)
        {
            return sum * std::exp(log_prefactor);
        }
    }
    throw NumericError("incomplete gamma series did not converge",
                       sum * std::exp(log_prefactor));
}

// Continued fraction for Q(a, x) via modified Lentz, converges for x >= a + 1.
double gamma_q_fraction(double a, double x, double log_prefactor)
{
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 100000; ++i)
    {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny)
            d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny)
            c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEpsilon)
        {
            return std::exp(log_prefactor) * h;
        }
    }
    throw NumericError("incomplete gamma continued fraction did not converge",
                       std::exp(log_prefactor) * h);
}

}  // namespace

GammaLaw::GammaLaw(double shape, double rate) : shape_(shape), rate_(rate)
{
    if (!(shape > 0.0) || !std::isfinite(shape))
    {
        throw DomainError("gamma shape must be positive and finite");
    }
    if (!(rate > 0.0) || !std::isfinite(rate))
    {
        throw DomainError("gamma rate must be positive and finite");
    }
}

NormalLaw::NormalLaw(double mean, double stdev) : mean_(mean), stdev_(stdev)
{
    require_finite(mean, "normal mean");
    if (!(stdev > 0.0) || !std::isfinite(stdev))
    {
        throw DomainError("normal stdev must be positive and finite");
    }
}

NormalLaw NormalLaw::degenerate(double value)
{
    require_finite(value, "point mass location");
    return NormalLaw(value, PointMass{});
}

double regularized_gamma_p(double a, double x)
{
    require_finite(x, "x");
    if (!(a > 0.0) || !std::isfinite(a))
    {
        throw DomainError("incomplete gamma requires a > 0");
    }
    if (x < 0.0)
    {
        throw DomainError("incomplete gamma requires x >= 0");
    }
    if (x == 0.0)
    {
        return 0.0;
    }
    const double log_prefactor = a * std::log(x) - x - std::lgamma(a);
    if (x < a + 1.0)
    {
        return std::min(1.0, gamma_p_series(a, x, log_prefactor));
    }
    return std::max(0.0, 1.0 - gamma_q_fraction(a, x, log_prefactor));
}

double gamma_pdf(double x, const GammaLaw& law)
{
    require_finite(x, "x");
    if (x < 0.0)
    {
        return 0.0;
    }
    const double a = law.shape();
    const double b = law.rate();
    if (x == 0.0)
    {
        if (a < 1.0)
            return std::numeric_limits<double>::infinity();
        return a == 1.0 ? b : 0.0;
    }
    return std::exp(a * std::log(b) + (a - 1.0) * std::log(x) - b * x - std::lgamma(a));
}

double gamma_cdf(double x, const GammaLaw& law)
{
    require_finite(x, "x");
    if (x < 0.0)
    {
        throw DomainError("gamma_cdf requires x >= 0");
    }
    return regularized_gamma_p(law.shape(), law.rate() * x);
}

double normal_pdf(double x, const NormalLaw& law)
{
    require_finite(x, "x");
    if (law.is_degenerate())
    {
        return x == law.mean() ? std::numeric_limits<double>::infinity() : 0.0;
    }
    const double z = (x - law.mean()) / law.stdev();
    return std::exp(-0.5 * z * z) / (law.stdev() * std::sqrt(2.0 * std::numbers::pi));
}

double normal_cdf(double x, const NormalLaw& law)
{
    require_finite(x, "x");
    if (law.is_degenerate())
    {
        return x >= law.mean() ? 1.0 : 0.0;
    }
    const double z = (x - law.mean()) / law.stdev();
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double facilitation_pmf(std::uint64_t count, double eta, double big_lambda)
{
    if (!(eta > 0.0) || !std::isfinite(eta))
    {
        throw DomainError("facilitation factor eta must be positive");
    }
    if (!(big_lambda >= 0.0) || !std::isfinite(big_lambda))
    {
        throw DomainError("integrated intensity must be nonnegative and finite");
    }
    // (e^{-eta L})^{1/eta} = e^{-L}
    if (count == 0)
    {
        return std::exp(-big_lambda);
    }
    if (big_lambda == 0.0)
    {
        return 0.0;
    }
    const double n = static_cast<double>(count);
    // -expm1(-eta L) / eta -> L as eta -> 0, which keeps the Poisson limit exact.
    const double p_over_eta = -std::expm1(-eta * big_lambda) / eta;
    double log_pmf = -big_lambda - std::lgamma(n + 1.0);
    if (count <= 256)
    {
        // C(1/eta + i - 1, i) (1 - e^{-eta L})^i = prod_k (1 + k eta) p/eta / i!
        for (std::uint64_t k = 0; k < count; ++k)
        {
            log_pmf += std::log1p(static_cast<double>(k) * eta) + std::log(p_over_eta);
        }
    }
    else
    {
        const double r = 1.0 / eta;
        log_pmf += std::lgamma(r + n) - std::lgamma(r) + n * std::log(eta * p_over_eta);
    }
    return std::exp(log_pmf);
}

std::optional<NormalLaw> iid_sum_normal(std::uint64_t m, const NormalLaw& law)
{
    if (m == 0)
    {
        return std::nullopt;
    }
    const double k = static_cast<double>(m);
    if (law.is_degenerate())
    {
        return NormalLaw::degenerate(k * law.mean());
    }
    return NormalLaw(k * law.mean(), std::sqrt(k) * law.stdev());
}

namespace {

constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel
{
    double a;
    double b;
    double value;
    double error;

    bool operator<(const Panel& other) const noexcept { return error < other.error; }
};

Panel gauss_kronrod(const std::function<double(double)>& f, double a, double b)
{
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    for (int j = 0; j < 7; ++j)
    {
        const double dx = half * kKronrodNodes[j];
        const double pair = f(center - dx) + f(center + dx);
        kronrod += kKronrodWeights[j] * pair;
        if (j % 2 == 1)
        {
            gauss += kGaussWeights[j / 2] * pair;
        }
    }
    if (!std::isfinite(kronrod))
    {
        throw DomainError("integrand is not finite on the integration interval");
    }
    return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 QuadratureOptions options)
{
    require_finite(a, "lower limit");
    require_finite(b, "upper limit");
    if (a > b)
    {
        throw DomainError("integration requires a <= b");
    }
    if (!(options.tol > 0.0))
    {
        throw DomainError("quadrature tolerance must be positive");
    }
    if (a == b)
    {
        return 0.0;
    }

    std::priority_queue<Panel> panels;
    panels.push(gauss_kronrod(f, a, b));
    double value = panels.top().value;
    double error = panels.top().error;

    for (int splits = 0; error > options.tol; ++splits)
    {
        if (splits >= options.max_subdivisions)
        {
            throw NumericError("adaptive quadrature reached " +
                                   std::to_string(options.max_subdivisions) +
                                   " subdivisions with error estimate " +
                                   std::to_string(error),
                               value);
        }
        const Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b)
        {
            throw NumericError("adaptive quadrature interval underflow", value);
        }
        const Panel left = gauss_kronrod(f, worst.a, mid);
        const Panel right = gauss_kronrod(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
    }

    // Re-sum to shed the drift of the running update.
    value = 0.0;
    error = 0.0;
    while (!panels.empty())
    {
        value += panels.top().value;
        error += panels.top().error;
        panels.pop();
    }
    return value;
}

std::uint64_t poisson_inverse(double mean, double u)
{
    if (!(mean >= 0.0) || !std::isfinite(mean))
    {
        throw DomainError("poisson mean must be nonnegative and finite");
    }
    if (!(u > 0.0 && u < 1.0))
    {
        throw DomainError("poisson_inverse requires u in (0, 1)");
    }
    // P(0) = e^{-mean} >= 1 - mean, so most draws at small mean skip the exp.
    if (u <= 1.0 - mean)
    {
        return 0;
    }
    double p = std::exp(-mean);
    double cdf = p;
    std::uint64_t k = 0;
    const auto cap = static_cast<std::uint64_t>(mean + 40.0 * std::sqrt(mean) + 64.0);
    while (u > cdf && k < cap)
    {
        ++k;
        p *= mean / static_cast<double>(k);
        cdf += p;
        if (p == 0.0)
            break;
    }
    return k;
}

}  // namespace mdcf
