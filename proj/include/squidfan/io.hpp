#ifndef SQUIDFAN_IO_HPP
#define SQUIDFAN_IO_HPP

#include "squidfan/fanin_analytics.hpp"
#include "squidfan/squid_dynamics.hpp"
#include "squidfan/tree_engine.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <system_error>
#include <vector>

namespace squidfan::io
{

inline constexpr const char* kVersion = "0.1.0";

/// Locale-independent rendering with 12 significant digits.
inline std::string format_number(double value)
{
    if (value == 0.0)
        value = 0.0; // drop the sign of -0
    char buffer[64];
    const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value, std::chars_format::general, 12);
    if (ec != std::errc{})
        return "nan";
    return {buffer, end};
}

/// The value a reader of format_number would recover; used to keep JSON output
/// at the same precision as CSV.
inline double round_significant(double value)
{
    if (!std::isfinite(value))
        return value;
    const auto text = format_number(value);
    double parsed   = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), parsed);
    return parsed;
}

inline nlohmann::json to_json(const TreeTopology& t)
{
    return {{"n", t.n()}, {"H", t.h_depth()}, {"N", t.n_synapses()}};
}

inline nlohmann::json to_json(const ResponseCurve& curve)
{
    nlohmann::json samples = nlohmann::json::array();
    for (const auto& s : curve.samples)
        samples.push_back({{"phi_over_phi0", round_significant(s.phi_applied)},
                           {"r_fq_normalized", round_significant(s.r_fq)}});
    return {{"bias_ratio", round_significant(curve.bias_ratio)}, {"samples", std::move(samples)}};
}

/// Snapshot schema:
///   {"topology": {"n","H","N"}, "bias_ratio": b, "soma_fired": bool,
///    "nodes": [{"index","level","parent","applied_flux_phi0","fired"[,"r_fq"][,"di_current_A"]}]}
/// Nodes are listed level by level from the soma (index 0); the soma's parent is null.
inline nlohmann::json snapshot(const DendriticTree& tree, const PropagationResult& state,
                               std::span< const double > rates = {}, std::span< const double > currents = {})
{
    nlohmann::json nodes = nlohmann::json::array();
    for (std::size_t i = 0; i < tree.node_count(); ++i)
    {
        const auto& node = tree.node(i);
        nlohmann::json entry{{"index", i},
                             {"level", node.level},
                             {"parent", i == 0 ? nlohmann::json(nullptr) : nlohmann::json(node.parent)},
                             {"applied_flux_phi0", round_significant(state.applied_flux[i])},
                             {"fired", static_cast< bool >(state.fired[i])}};
        if (!rates.empty())
            entry["r_fq"] = round_significant(rates[i]);
        if (!currents.empty())
            entry["di_current_A"] = round_significant(currents[i]);
        nodes.push_back(std::move(entry));
    }
    return {{"topology", to_json(tree.topology())},
            {"bias_ratio", round_significant(tree.bias_ratio())},
            {"soma_fired", state.soma_fired},
            {"nodes", std::move(nodes)}};
}

} // namespace squidfan::io

#endif
