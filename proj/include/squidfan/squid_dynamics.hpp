#ifndef SQUIDFAN_SQUID_DYNAMICS_HPP
#define SQUIDFAN_SQUID_DYNAMICS_HPP

#include "squidfan/constants.hpp"
#include "squidfan/errors.hpp"
#include "squidfan/ode.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <future>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace squidfan
{

/// Symmetric two-junction SQUID. Currents in amperes, inductance in henries.
struct SquidParams
{
    double ic;               // junction critical current
    double bias_ratio;       // I_b / I_c carried by each junction at zero flux
    double l_sq;             // geometric loop inductance
    double beta_c  = 0.0;    // Stewart-McCumber parameter, 0 = overdamped
    double r_shunt = 1.0;    // shunt resistance relative to the rate normalization

    /// β_L = 1 loop: l_sq = Φ0 / (2 Ic).
    static SquidParams standard(double bias_ratio, double ic = 300e-6)
    {
        return {ic, bias_ratio, kPhi0 / (2.0 * ic)};
    }

    [[nodiscard]] double beta_l() const { return 2.0 * l_sq * ic / kPhi0; }

    void validate() const
    {
        detail::require(ic > 0.0, "ic must be positive");
        detail::require(bias_ratio >= 0.0 && bias_ratio < 1.0, "bias_ratio must lie in [0, 1)");
        detail::require(l_sq > 0.0, "l_sq must be positive");
        detail::require(beta_c >= 0.0, "beta_c must be non-negative");
        detail::require(r_shunt > 0.0, "r_shunt must be positive");
    }
};

struct ResponseSample
{
    double phi_applied; // Φ0 units
    double r_fq;        // fluxons per Φ0/(Ic R)
};

struct ResponseCurve
{
    double bias_ratio;
    std::vector< ResponseSample > samples;

    [[nodiscard]] double max_rate() const
    {
        double best = 0.0;
        for (const auto& s : samples)
            best = std::max(best, s.r_fq);
        return best;
    }
};

/// Durations are in normalized time τ = t · 2π Ic R / Φ0.
struct SimulationSettings
{
    double t_settle     = 200.0;
    double t_measure    = 4000.0;
    unsigned slip_target = 40; // stop measuring once this many full slips are timed
    ode::StepControl step{};
};

/// Rates below this are reported as zero.
inline constexpr double kRateCutoff = 1e-6;

/// Phase velocity below which the junctions are considered stationary.
inline constexpr double kStationaryVelocity = 1e-10;

namespace detail
{

// Cubic Hermite interpolation of the mean phase over one step, solved for the
// time the phase passes `level`.
inline double crossing_time(double t0, double t1, double y0, double y1, double d0, double d1, double level)
{
    const double h = t1 - t0;
    auto eval      = [&](double s) {
        const double s2 = s * s, s3 = s2 * s;
        return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * d0 + (-2 * s3 + 3 * s2) * y1 +
               (s3 - s2) * h * d1;
    };
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 60; ++i)
    {
        const double mid = 0.5 * (lo + hi);
        if (eval(mid) < level)
            lo = mid;
        else
            hi = mid;
    }
    return t0 + 0.5 * (lo + hi) * h;
}

template < std::size_t N, typename Rhs >
double measure_rate(Rhs rhs, ode::State< N > y0, const SimulationSettings& settings)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    ode::DormandPrince< N, Rhs > solver{std::move(rhs), y0, 0.0, settings.step};

    while (solver.time() < settings.t_settle)
        solver.step(settings.t_settle);

    auto mean_phase = [](const ode::State< N >& y) { return 0.5 * (y[0] + y[1]); };

    const double t_end = settings.t_settle + settings.t_measure;
    long index         = static_cast< long >(std::floor(mean_phase(solver.state()) / two_pi));
    std::vector< double > crossings;
    while (solver.time() < t_end && crossings.size() <= settings.slip_target)
    {
        // Settled onto a stationary state: no further slips can occur.
        if (crossings.empty() && std::ranges::all_of(solver.derivative(),
                                                     [](double v) { return std::abs(v) < kStationaryVelocity; }))
            return 0.0;

        const double t0 = solver.time();
        const double y0p = mean_phase(solver.state());
        const double d0  = mean_phase(solver.derivative());
        solver.step(t_end);
        const double y1p = mean_phase(solver.state());
        const long next  = static_cast< long >(std::floor(y1p / two_pi));
        // Backward slips are ignored; only forward progress of the phase counts.
        for (long level = index + 1; level <= next; ++level)
            crossings.push_back(
                crossing_time(t0, solver.time(), y0p, y1p, d0, mean_phase(solver.derivative()), two_pi * level));
        index = std::max(index, next);
    }

    if (crossings.size() < 2)
        return 0.0;
    const double span = crossings.back() - crossings.front();
    const double rate = two_pi * static_cast< double >(crossings.size() - 1) / span;
    return rate < kRateCutoff ? 0.0 : rate;
}

} // namespace detail

/// Time-averaged fluxon production rate of the SQUID at a given applied flux
/// (Φ0 units), in units of Ic R / Φ0 (equal to the normalized mean junction
/// voltage). The rate is timed from whole 2π slips of the mean junction phase
/// after the settle transient, so it is the limit-cycle rate rather than a
/// window average.
inline double simulate_rfq(const SquidParams& params, double phi_applied, const SimulationSettings& settings = {})
{
    params.validate();
    squidfan::detail::require(settings.t_settle >= 0.0 && settings.t_measure >= 0.0, "durations must be non-negative");
    squidfan::detail::require(std::isfinite(phi_applied), "applied flux must be finite");

    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double ib         = params.bias_ratio;
    const double beta_l     = params.beta_l();
    const double phi_a      = phi_applied;

    // Loop quantization: φ2 - φ1 = 2π(Φa + L J)/Φ0, with J = (I1 - I2)/2 in units of Ic:
    // j = ((φ2 - φ1)/2π - Φa) * 2/β_L.
    auto circulating = [=](double p1, double p2) { return ((p2 - p1) / two_pi - phi_a) * 2.0 / beta_l; };

    // The start point differs between fluxes only through φ2, so shifting Φa by
    // one quantum shifts φ2 by exactly 2π.
    double rate = 0.0;
    if (params.beta_c == 0.0)
    {
        auto rhs = [=](double, const ode::State< 2 >& y) {
            const double j = circulating(y[0], y[1]);
            return ode::State< 2 >{ib + j - std::sin(y[0]), ib - j - std::sin(y[1])};
        };
        rate = detail::measure_rate< 2 >(rhs, {0.0, two_pi * phi_a}, settings);
    }
    else
    {
        const double inv_bc = 1.0 / params.beta_c;
        auto rhs            = [=](double, const ode::State< 4 >& y) {
            const double j = circulating(y[0], y[1]);
            return ode::State< 4 >{y[2], y[3], (ib + j - std::sin(y[0]) - y[2]) * inv_bc,
                                   (ib - j - std::sin(y[1]) - y[3]) * inv_bc};
        };
        rate = detail::measure_rate< 4 >(rhs, {0.0, two_pi * phi_a, 0.0, 0.0}, settings);
    }
    return rate * params.r_shunt;
}

/// Same as simulate_rfq with explicit settle and measurement windows.
inline double simulate_rfq(const SquidParams& params, double phi_applied, double t_settle, double t_measure)
{
    squidfan::detail::require(t_settle >= 0.0 && t_measure >= 0.0, "durations must be non-negative");
    SimulationSettings settings;
    settings.t_settle  = t_settle;
    settings.t_measure = t_measure;
    return simulate_rfq(params, phi_applied, settings);
}

/// Evaluates simulate_rfq on n_points equally spaced fluxes in [phi_min, phi_max].
/// Points are computed concurrently; ordering follows the flux grid.
inline ResponseCurve sweep_response(const SquidParams& params, double phi_min, double phi_max, std::size_t n_points,
                                    const SimulationSettings& settings = {})
{
    params.validate();
    squidfan::detail::require(phi_min < phi_max, "phi_min must be below phi_max");
    squidfan::detail::require(n_points >= 2, "n_points must be at least 2");

    ResponseCurve curve{params.bias_ratio, std::vector< ResponseSample >(n_points)};
    const double step = (phi_max - phi_min) / static_cast< double >(n_points - 1);
    for (std::size_t i = 0; i < n_points; ++i)
        curve.samples[i].phi_applied = i + 1 == n_points ? phi_max : phi_min + step * static_cast< double >(i);

    const std::size_t workers = std::clamp< std::size_t >(std::thread::hardware_concurrency(), 1, n_points);
    std::vector< std::future< void > > jobs;
    jobs.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        jobs.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < n_points; i += workers)
            {
                auto& sample = curve.samples[i];
                try
                {
                    sample.r_fq = simulate_rfq(params, sample.phi_applied, settings);
                }
                catch (const IntegrationError& e)
                {
                    std::ostringstream msg;
                    msg << e.what() << " (phi_applied = " << sample.phi_applied << ")";
                    throw IntegrationError(msg.str());
                }
            }
        }));
    for (auto& job : jobs)
        job.get();
    return curve;
}

/// Smallest applied flux in [0, 1/2] Φ0 producing a nonzero rate, by bisection
/// to within tol. The returned value always has a nonzero rate.
inline double find_threshold_flux(const SquidParams& params, double tol, const SimulationSettings& settings = {})
{
    params.validate();
    squidfan::detail::require(params.bias_ratio > 0.0, "bias_ratio must be positive for a threshold search");
    squidfan::detail::require(tol > 0.0, "tolerance must be positive");

    double lo = 0.0;
    double hi = 0.5;
    if (simulate_rfq(params, hi, settings) <= 0.0)
        throw NoThresholdError("no nonzero rate on [0, 0.5] phi0 at bias_ratio " + std::to_string(params.bias_ratio));
    if (simulate_rfq(params, lo, settings) > 0.0)
        return lo;
    while (hi - lo > tol)
    {
        const double mid = 0.5 * (lo + hi);
        if (simulate_rfq(params, mid, settings) > 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

} // namespace squidfan

#endif
