#ifndef SQUIDFAN_FANIN_ANALYTICS_HPP
#define SQUIDFAN_FANIN_ANALYTICS_HPP

#include "squidfan/constants.hpp"
#include "squidfan/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>

namespace squidfan
{

/// Checked integer power; empty on overflow of uint64.
constexpr std::optional< std::uint64_t > checked_pow(std::uint64_t base, unsigned exponent)
{
    std::uint64_t result = 1;
    for (unsigned i = 0; i < exponent; ++i)
    {
        if (base != 0 && result > std::numeric_limits< std::uint64_t >::max() / base)
            return std::nullopt;
        result *= base;
    }
    return result;
}

/// Homogeneous dendritic tree: fan-in n at every node, depth H, N = n^H synapses.
class TreeTopology
{
public:
    TreeTopology(std::uint64_t n, unsigned h_depth) : n_{n}, h_depth_{h_depth}
    {
        detail::require(n >= 1, "fan-in factor n must be >= 1");
        detail::require(h_depth >= 1, "depth H must be >= 1");
        const auto synapses = checked_pow(n, h_depth);
        if (!synapses)
            throw CapacityError("n^H overflows 64-bit synapse count (n=" + std::to_string(n) +
                                ", H=" + std::to_string(h_depth) + ")");
        n_synapses_ = *synapses;
    }

    [[nodiscard]] std::uint64_t n() const { return n_; }
    [[nodiscard]] unsigned h_depth() const { return h_depth_; }
    [[nodiscard]] std::uint64_t n_synapses() const { return n_synapses_; }

    friend bool operator==(const TreeTopology&, const TreeTopology&) = default;

private:
    std::uint64_t n_;
    unsigned h_depth_;
    std::uint64_t n_synapses_{};
};

/// Normalized bias I_b/I_c in [0, 1].
class BiasPoint
{
public:
    explicit BiasPoint(double bias_ratio) : bias_ratio_{bias_ratio}
    {
        detail::require(bias_ratio >= 0.0 && bias_ratio <= 1.0, "bias_ratio must lie in [0, 1]");
    }
    [[nodiscard]] double ratio() const { return bias_ratio_; }

private:
    double bias_ratio_;
};

struct ActivityResult
{
    double fraction_continuous;
    std::uint64_t p_integer; // meaningful only when reachable
    bool reachable;
};

/// Flux delivered by one maximally weighted input, in Φ0 units: the half-quantum
/// budget shared equally by the n inputs of a node.
inline double synapse_flux_quota(const TreeTopology& tree)
{
    return 0.5 / static_cast< double >(tree.n());
}

/// Fraction p/n of saturated inputs needed to drive one SQUID node to threshold.
/// Values above 1 mean the node cannot fire with its flux limited to Φ0/2.
inline double point_activity_fraction(BiasPoint bias)
{
    return kActivityPrefactor * (1.0 - bias.ratio());
}

/// Smallest integer count of saturated inputs with count >= n * fraction.
/// Products landing within 1e-9 of an integer are treated as that integer, so a
/// node sitting exactly on threshold counts as firing.
inline std::uint64_t min_active_inputs(std::uint64_t n, double fraction)
{
    const double target = static_cast< double >(n) * fraction;
    if (target <= 0.0)
        return 0;
    const double nearest = std::round(target);
    if (std::abs(target - nearest) <= 1e-9 * std::max(1.0, target))
        return static_cast< std::uint64_t >(nearest);
    return static_cast< std::uint64_t >(std::ceil(target));
}

inline ActivityResult activity_result(BiasPoint bias, std::uint64_t n)
{
    const double f        = point_activity_fraction(bias);
    const auto p          = min_active_inputs(n, f);
    const bool reachable  = p <= n;
    return {f, reachable ? p : 0, reachable};
}

/// P/N = (p/n)^H for a homogeneous tree of depth H.
inline double tree_activity_fraction(BiasPoint bias, unsigned h_depth)
{
    detail::require(h_depth >= 1, "depth H must be >= 1");
    const double f = point_activity_fraction(bias);
    double result  = 1.0;
    for (unsigned h = 0; h < h_depth; ++h)
        result *= f;
    return result;
}

/// Fraction of all units (synapses, dendrites, soma) active at threshold:
/// sum_{h=0..H} p^h / sum_{h=0..H} n^h.
inline double total_unit_fraction(BiasPoint bias, const TreeTopology& tree, bool integer_mode)
{
    const double n = static_cast< double >(tree.n());
    double p       = n * point_activity_fraction(bias);
    if (integer_mode)
    {
        const auto result = activity_result(bias, tree.n());
        if (!result.reachable)
            throw UnreachableThresholdError("activity fraction " + std::to_string(result.fraction_continuous) +
                                            " exceeds 1; threshold unreachable at this bias");
        p = static_cast< double >(result.p_integer);
    }
    double active_sum = 0.0;
    double unit_sum   = 0.0;
    double p_pow      = 1.0;
    double n_pow      = 1.0;
    for (unsigned h = 0; h <= tree.h_depth(); ++h)
    {
        active_sum += p_pow;
        unit_sum += n_pow;
        p_pow *= p;
        n_pow *= n;
    }
    return active_sum / unit_sum;
}

struct TreeGeometry
{
    TreeTopology topology; // uses rounded n when inexact
    bool exact;
    double n_real;                    // N^(1/H)
    std::uint64_t dendrite_count;     // sum_{h=1}^{H-1} n^h for the integer n
    double dendrite_count_real;       // same sum evaluated at n_real
    std::string rounding_report;      // empty when exact
};

/// Fan-in factor and intermediate dendrite count for N synapses at depth H.
/// A non-integral root is not an error: the result carries the real-valued n,
/// the nearest integer tree and a report of the rounding.
inline TreeGeometry tree_geometry(std::uint64_t n_synapses, unsigned h_depth)
{
    detail::require(n_synapses >= 1, "synapse count must be >= 1");
    detail::require(h_depth >= 1, "depth H must be >= 1");

    const double n_real  = std::pow(static_cast< double >(n_synapses), 1.0 / h_depth);
    const auto candidate = static_cast< std::uint64_t >(std::llround(n_real));

    std::optional< std::uint64_t > exact_root;
    for (std::uint64_t c : {candidate == 0 ? 0 : candidate - 1, candidate, candidate + 1})
    {
        if (c == 0)
            continue;
        if (const auto power = checked_pow(c, h_depth); power && *power == n_synapses)
            exact_root = c;
    }

    const std::uint64_t n = exact_root.value_or(std::max< std::uint64_t >(1, candidate));
    TreeTopology topology{n, h_depth};

    std::uint64_t dendrites = 0;
    double dendrites_real   = 0.0;
    std::uint64_t level     = 1;
    for (unsigned h = 1; h < h_depth; ++h)
    {
        level *= n;
        dendrites += level;
        dendrites_real += std::pow(n_real, static_cast< double >(h));
    }

    std::string report;
    if (!exact_root)
        report = "no integer n with n^" + std::to_string(h_depth) + " = " + std::to_string(n_synapses) +
                 "; real n = " + std::to_string(n_real) + ", rounded to " + std::to_string(n) + " giving N = " +
                 std::to_string(topology.n_synapses());
    if (exact_root)
        dendrites_real = static_cast< double >(dendrites);

    return {topology, exact_root.has_value(), exact_root ? static_cast< double >(n) : n_real, dendrites, dendrites_real,
            report};
}

} // namespace squidfan

#endif
