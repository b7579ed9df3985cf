#ifndef SQUIDFAN_TREE_ENGINE_HPP
#define SQUIDFAN_TREE_ENGINE_HPP

#include "squidfan/errors.hpp"
#include "squidfan/fanin_analytics.hpp"
#include "squidfan/inductance_designer.hpp"
#include "squidfan/squid_dynamics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace squidfan
{

/// Largest tree build_tree will materialize.
inline constexpr std::uint64_t kMaxTreeNodes = std::uint64_t{1} << 26;

/// Largest leaf count for the exhaustive subset search.
inline constexpr std::uint64_t kMaxExhaustiveLeaves = 24;

struct TreeNode
{
    unsigned level;          // 0 = soma, H = synapse
    std::size_t parent;      // soma points at itself
    std::size_t first_child; // children are contiguous; unused for leaves
};

/// Complete n-ary tree stored level by level: level h occupies indices
/// [offset(h), offset(h) + n^h), and node k of level h owns children
/// k*n .. k*n + n - 1 of level h + 1.
class DendriticTree
{
public:
    DendriticTree(TreeTopology topology, double bias_ratio) : topology_{topology}, bias_ratio_{bias_ratio}
    {
        detail::require(bias_ratio >= 0.0 && bias_ratio <= 1.0, "bias_ratio must lie in [0, 1]");
        const auto n = topology.n();
        std::uint64_t total = 0;
        std::uint64_t width = 1;
        for (unsigned h = 0; h <= topology.h_depth(); ++h)
        {
            offsets_.push_back(static_cast< std::size_t >(total));
            total += width;
            if (total > kMaxTreeNodes)
                throw CapacityError("tree with n=" + std::to_string(n) + ", H=" + std::to_string(topology.h_depth()) +
                                    " exceeds " + std::to_string(kMaxTreeNodes) + " nodes");
            if (h < topology.h_depth())
                width *= n;
        }
        offsets_.push_back(static_cast< std::size_t >(total));

        nodes_.reserve(static_cast< std::size_t >(total));
        for (unsigned h = 0; h <= topology.h_depth(); ++h)
            for (std::size_t k = 0; k < level_size(h); ++k)
            {
                const std::size_t parent = h == 0 ? 0 : offsets_[h - 1] + k / n;
                const std::size_t child  = h == topology.h_depth() ? 0 : offsets_[h + 1] + k * n;
                nodes_.push_back({h, parent, child});
            }
    }

    [[nodiscard]] const TreeTopology& topology() const { return topology_; }
    [[nodiscard]] double bias_ratio() const { return bias_ratio_; }
    [[nodiscard]] std::size_t fan_in() const { return static_cast< std::size_t >(topology_.n()); }
    [[nodiscard]] unsigned depth() const { return topology_.h_depth(); }
    [[nodiscard]] std::size_t node_count() const { return nodes_.size(); }
    [[nodiscard]] std::size_t leaf_count() const { return level_size(depth()); }
    [[nodiscard]] std::size_t dendrite_count() const { return offsets_[depth()] - 1; }
    [[nodiscard]] std::size_t level_offset(unsigned h) const { return offsets_[h]; }
    [[nodiscard]] std::size_t level_size(unsigned h) const { return offsets_[h + 1] - offsets_[h]; }
    [[nodiscard]] const TreeNode& node(std::size_t i) const { return nodes_[i]; }
    [[nodiscard]] std::size_t leaf_node(std::size_t leaf) const { return offsets_[depth()] + leaf; }
    [[nodiscard]] std::span< const TreeNode > nodes() const { return nodes_; }

private:
    TreeTopology topology_;
    double bias_ratio_;
    std::vector< std::size_t > offsets_;
    std::vector< TreeNode > nodes_;
};

inline DendriticTree build_tree(std::uint64_t n, unsigned h_depth, double bias_ratio)
{
    return DendriticTree{TreeTopology{n, h_depth}, bias_ratio};
}

/// Per-node state after propagation, indexed like DendriticTree nodes. Leaves
/// carry zero applied flux; their fired flag marks a saturated synapse.
struct PropagationResult
{
    std::vector< double > applied_flux; // Φ0 units
    std::vector< bool > fired;
    bool soma_fired = false;
};

/// Binary cascade: a fired child delivers its full quota 1/(2n) Φ0 to its parent,
/// a silent child nothing. A node fires once its flux reaches
/// point_activity_fraction * Φ0/2, i.e. once at least p children fired.
inline PropagationResult propagate_binary(const DendriticTree& tree, std::span< const std::size_t > active_leaves)
{
    const std::size_t n   = tree.fan_in();
    const unsigned depth  = tree.depth();
    const double quota    = synapse_flux_quota(tree.topology());
    const auto p_required = min_active_inputs(n, point_activity_fraction(BiasPoint{tree.bias_ratio()}));

    PropagationResult result{std::vector< double >(tree.node_count(), 0.0), std::vector< bool >(tree.node_count()),
                             false};
    for (const auto leaf : active_leaves)
    {
        detail::require(leaf < tree.leaf_count(), "active leaf index " + std::to_string(leaf) + " out of range");
        result.fired[tree.leaf_node(leaf)] = true;
    }

    for (unsigned h = depth; h-- > 0;)
        for (std::size_t i = tree.level_offset(h); i < tree.level_offset(h) + tree.level_size(h); ++i)
        {
            const std::size_t first = tree.node(i).first_child;
            std::uint64_t count     = 0;
            for (std::size_t c = first; c < first + n; ++c)
                count += result.fired[c] ? 1 : 0;
            result.applied_flux[i] = static_cast< double >(count) * quota;
            result.fired[i]        = count >= p_required;
        }
    result.soma_fired = result.fired[0];
    return result;
}

enum class SearchMode
{
    exhaustive,
    constructive
};

struct MinActiveResult
{
    bool reachable;
    std::uint64_t count;                // minimum number of saturated synapses; 0 when unreachable
    std::vector< std::size_t > witness; // sorted leaf indices
};

namespace detail
{

// Soma firing for a leaf bitmask (bit i = leaf i), levels collapsed bitwise.
inline bool soma_fires(std::uint32_t leaves, std::size_t n, unsigned depth, std::uint64_t p_required)
{
    const std::uint32_t group = n >= 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << n) - 1;
    std::uint32_t level       = leaves;
    std::size_t width         = 1;
    for (unsigned h = 1; h < depth; ++h)
        width *= n;
    for (unsigned h = depth; h > 0; --h)
    {
        std::uint32_t next = 0;
        for (std::size_t k = 0; k < width; ++k)
            if (static_cast< std::uint64_t >(std::popcount((level >> (k * n)) & group)) >= p_required)
                next |= std::uint32_t{1} << k;
        level = next;
        width /= n;
    }
    return (level & 1U) != 0;
}

// Advances a sorted k-combination of {0..m-1} to its lexicographic successor.
inline bool next_combination(std::vector< std::size_t >& idx, std::size_t m)
{
    const std::size_t k = idx.size();
    for (std::size_t i = k; i-- > 0;)
        if (idx[i] < m - k + i)
        {
            ++idx[i];
            for (std::size_t j = i + 1; j < k; ++j)
                idx[j] = idx[j - 1] + 1;
            return true;
        }
    return false;
}

} // namespace detail

/// Minimum number of saturated synapses that fires the soma.
///
/// Exhaustive mode enumerates leaf subsets in order of size, and within a size
/// in lexicographic order, so the witness is the lexicographically smallest
/// minimum subset. It is limited to kMaxExhaustiveLeaves leaves.
///
/// Constructive mode saturates the first p inputs of every node on the path
/// down from the soma, giving p^H synapses without a search.
inline MinActiveResult min_active_synapses(const DendriticTree& tree, SearchMode mode)
{
    const std::size_t n   = tree.fan_in();
    const unsigned depth  = tree.depth();
    const auto p_required = min_active_inputs(n, point_activity_fraction(BiasPoint{tree.bias_ratio()}));

    if (mode == SearchMode::constructive)
    {
        if (p_required > n)
            return {false, 0, {}};
        std::vector< std::size_t > witness;
        std::vector< std::size_t > digits(depth, 0);
        if (p_required > 0)
            for (;;)
            {
                std::size_t leaf = 0;
                for (auto d : digits)
                    leaf = leaf * n + d;
                witness.push_back(leaf);
                std::size_t pos = depth;
                while (pos > 0 && ++digits[pos - 1] == p_required)
                    digits[--pos] = 0;
                if (pos == 0)
                    break;
            }
        return {true, static_cast< std::uint64_t >(witness.size()), std::move(witness)};
    }

    const std::size_t leaves = tree.leaf_count();
    if (leaves > kMaxExhaustiveLeaves)
        throw CapacityError("exhaustive search limited to " + std::to_string(kMaxExhaustiveLeaves) + " leaves (tree has " +
                            std::to_string(leaves) + "); use constructive mode");

    for (std::size_t k = 0; k <= leaves; ++k)
    {
        std::vector< std::size_t > idx(k);
        for (std::size_t i = 0; i < k; ++i)
            idx[i] = i;
        do
        {
            std::uint32_t mask = 0;
            for (auto i : idx)
                mask |= std::uint32_t{1} << i;
            if (detail::soma_fires(mask, n, depth, p_required))
                return {true, static_cast< std::uint64_t >(k), idx};
        } while (k > 0 && detail::next_combination(idx, leaves));
    }
    return {false, 0, {}};
}

/// DI-loop currents of the synapses (analog mode). Currents stay within [0, i_sat].
class SynapseState
{
public:
    SynapseState(std::vector< double > currents, double i_sat, std::optional< double > decay_tau = std::nullopt)
        : currents_{std::move(currents)}, i_sat_{i_sat}, decay_tau_{decay_tau}
    {
        detail::require(i_sat > 0.0, "i_sat must be positive");
        detail::require(!decay_tau || *decay_tau > 0.0, "decay time constant must be positive");
        for (double c : currents_)
        {
            detail::require(c >= 0.0, "synapse current must be non-negative");
            if (c > i_sat_)
                throw SaturationError("synapse current " + std::to_string(c) + " A exceeds i_sat " +
                                      std::to_string(i_sat_) + " A");
        }
    }

    /// Binary input pattern: listed leaves at i_sat, the rest at zero.
    static SynapseState saturated(std::size_t leaf_count, std::span< const std::size_t > active, double i_sat)
    {
        std::vector< double > currents(leaf_count, 0.0);
        for (auto leaf : active)
        {
            detail::require(leaf < leaf_count, "active leaf index out of range");
            currents[leaf] = i_sat;
        }
        return {std::move(currents), i_sat};
    }

    [[nodiscard]] std::span< const double > currents() const { return currents_; }
    [[nodiscard]] double i_sat() const { return i_sat_; }
    [[nodiscard]] std::optional< double > decay_tau() const { return decay_tau_; }

    /// Exponential leak over dt (same time unit as decay_tau); no-op without a leak.
    void decay(double dt)
    {
        detail::require(dt >= 0.0, "dt must be non-negative");
        if (!decay_tau_)
            return;
        const double factor = std::exp(-dt / *decay_tau_);
        for (auto& c : currents_)
            c *= factor;
    }

private:
    std::vector< double > currents_;
    double i_sat_;
    std::optional< double > decay_tau_;
};

struct DynamicalOptions
{
    // Steady-state DI current per unit rate; empty maps the rate at phi_max to i_sat.
    std::optional< double > accumulation_gain;
    SimulationSettings simulation{};
};

struct DynamicalResult
{
    PropagationResult propagation;
    std::vector< double > rate;       // fluxon rate per node, 0 for leaves
    std::vector< double > di_current; // output DI current per node (amperes)
    double accumulation_gain;
};

/// Level-by-level steady state: each dendrite's flux comes from its children's
/// DI currents through the collection loop; its own DI current is the
/// saturating map min(gain * rate, i_sat). The SQUID parameters are taken from
/// `squid` with the bias replaced by the tree's bias.
inline DynamicalResult propagate_dynamical(const DendriticTree& tree, const SynapseState& leaf_currents,
                                           SquidParams squid, const CollectionLoopDesign& design,
                                           const DynamicalOptions& options = {})
{
    detail::require(design.n == tree.topology().n(), "collection design fan-in must match the tree");
    detail::require(leaf_currents.currents().size() == tree.leaf_count(), "one synapse current per leaf required");
    check_collection_constraint(design);
    squid.bias_ratio = tree.bias_ratio();
    squid.validate();

    const double i_sat = design.i_sat();
    detail::require(std::abs(leaf_currents.i_sat() - i_sat) <= 1e-12 * i_sat,
                    "synapse saturation current must match the design");

    std::map< double, double > rate_cache;
    auto rate_at = [&](double flux) {
        if (auto it = rate_cache.find(flux); it != rate_cache.end())
            return it->second;
        const double r = simulate_rfq(squid, flux, options.simulation);
        rate_cache.emplace(flux, r);
        return r;
    };

    double gain = 0.0;
    if (options.accumulation_gain)
    {
        detail::require(*options.accumulation_gain >= 0.0, "accumulation gain must be non-negative");
        gain = *options.accumulation_gain;
    }
    else if (const double r_max = rate_at(design.phi_max); r_max > 0.0)
        gain = i_sat / r_max;

    const std::size_t count = tree.node_count();
    const std::size_t n     = tree.fan_in();
    DynamicalResult result{{std::vector< double >(count, 0.0), std::vector< bool >(count), false},
                           std::vector< double >(count, 0.0),
                           std::vector< double >(count, 0.0),
                           gain};

    for (std::size_t leaf = 0; leaf < tree.leaf_count(); ++leaf)
    {
        const auto node                  = tree.leaf_node(leaf);
        result.di_current[node]          = leaf_currents.currents()[leaf];
        result.propagation.fired[node]   = result.di_current[node] >= i_sat;
    }

    std::vector< double > inputs(n);
    for (unsigned h = tree.depth(); h-- > 0;)
        for (std::size_t i = tree.level_offset(h); i < tree.level_offset(h) + tree.level_size(h); ++i)
        {
            const std::size_t first = tree.node(i).first_child;
            std::copy_n(result.di_current.begin() + static_cast< std::ptrdiff_t >(first), n, inputs.begin());
            const double flux               = applied_flux_collection(design, inputs);
            const double rate               = rate_at(flux);
            result.propagation.applied_flux[i] = flux;
            result.rate[i]                  = rate;
            result.propagation.fired[i]     = rate > 0.0;
            result.di_current[i]            = std::min(gain * rate, i_sat);
        }
    result.propagation.soma_fired = result.propagation.fired[0];
    return result;
}

} // namespace squidfan

#endif
