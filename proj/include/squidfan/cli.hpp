#ifndef SQUIDFAN_CLI_HPP
#define SQUIDFAN_CLI_HPP

#include "squidfan/design_config.hpp"
#include "squidfan/errors.hpp"
#include "squidfan/fanin_analytics.hpp"
#include "squidfan/inductance_designer.hpp"
#include "squidfan/io.hpp"
#include "squidfan/squid_dynamics.hpp"
#include "squidfan/tree_engine.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace squidfan::cli
{

enum ExitCode : int
{
    kSuccess             = 0,
    kUsage               = 2,
    kNumericalFailure    = 3,
    kConstraintViolation = 4,
    kDisagreement        = 5,
};

// Raised inside a command when a per-row self-check fails.
class InternalCheckFailure : public Error
{
public:
    using Error::Error;
};

class VerificationDisagreement : public Error
{
public:
    using Error::Error;
};

namespace detail
{

struct Range
{
    double start;
    double stop;
    std::optional< double > step;
};

inline double parse_double(const std::string& text, const std::string& what)
{
    double value = 0.0;
    const auto* first = text.data();
    const auto* last  = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw ArgumentError("cannot parse " + what + " '" + text + "' as a number");
    return value;
}

inline std::vector< std::string > split(const std::string& text, char sep)
{
    std::vector< std::string > parts;
    std::string current;
    std::istringstream in{text};
    while (std::getline(in, current, sep))
        parts.push_back(current);
    if (!text.empty() && text.back() == sep)
        parts.emplace_back();
    return parts;
}

inline std::vector< double > parse_list(const std::string& text, const std::string& what)
{
    std::vector< double > values;
    for (const auto& part : split(text, ','))
        values.push_back(parse_double(part, what));
    if (values.empty())
        throw ArgumentError(what + " list is empty");
    return values;
}

// "a:b" or "a:b:step"
inline Range parse_range(const std::string& text, const std::string& what)
{
    const auto parts = split(text, ':');
    if (parts.size() != 2 && parts.size() != 3)
        throw ArgumentError(what + " must look like start:stop or start:stop:step");
    Range r{parse_double(parts[0], what), parse_double(parts[1], what), std::nullopt};
    if (parts.size() == 3)
        r.step = parse_double(parts[2], what);
    if (!(r.start <= r.stop))
        throw ArgumentError(what + " start must not exceed stop");
    if (r.step && !(*r.step > 0.0))
        throw ArgumentError(what + " step must be positive");
    return r;
}

inline std::vector< double > range_values(const Range& r)
{
    const double step = r.step.value_or(1.0);
    const auto count  = static_cast< std::size_t >(std::floor((r.stop - r.start) / step + 1e-9)) + 1;
    std::vector< double > values(count);
    for (std::size_t i = 0; i < count; ++i)
        values[i] = r.start + step * static_cast< double >(i);
    return values;
}

struct Output
{
    std::string path;
    std::string format = "csv";
};

inline void add_output_options(CLI::App* cmd, Output& output)
{
    cmd->add_option("--output,-o", output.path, "Write results to this file instead of standard output");
    cmd->add_option("--format", output.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

inline void emit(const Output& output, const std::string& text, std::ostream& out)
{
    if (output.path.empty())
    {
        out << text;
        return;
    }
    std::ofstream file{output.path, std::ios::binary};
    if (!file)
        throw ArgumentError("cannot open output file '" + output.path + "'");
    file << text;
}

inline std::string header_comment(const std::string& invocation)
{
    return std::string{"# squidfan "} + io::kVersion + " | " + invocation + "\n";
}

inline std::string dump_json(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

} // namespace detail

struct ResponseArgs
{
    std::string bias = "0.5,0.7,0.9";
    std::string range = "0:1";
    std::size_t points = 201;
    double ic_ua = 300.0;
    double beta_l = 1.0;
    double beta_c = 0.0;
    double t_settle = 200.0;
    double t_measure = 4000.0;
    detail::Output output;
};

inline int cmd_response(const ResponseArgs& args, const std::string& invocation, std::ostream& out)
{
    const auto biases = detail::parse_list(args.bias, "bias");
    const auto range  = detail::parse_range(args.range, "--range");
    if (range.step)
        throw ArgumentError("--range takes start:stop; use --points for the sample count");
    if (!(range.start < range.stop))
        throw ArgumentError("--range start must be below stop");

    SimulationSettings settings;
    settings.t_settle  = args.t_settle;
    settings.t_measure = args.t_measure;

    std::vector< ResponseCurve > curves;
    for (double bias : biases)
    {
        const double ic = units::from_uA(args.ic_ua);
        SquidParams params{ic, bias, args.beta_l * kPhi0 / (2.0 * ic), args.beta_c};
        curves.push_back(sweep_response(params, range.start, range.stop, args.points, settings));
    }

    std::string text;
    if (args.output.format == "json")
    {
        nlohmann::json doc{{"version", io::kVersion}, {"invocation", invocation}, {"curves", nlohmann::json::array()}};
        for (const auto& c : curves)
            doc["curves"].push_back(io::to_json(c));
        text = detail::dump_json(doc);
    }
    else
    {
        std::ostringstream csv;
        csv << detail::header_comment(invocation) << "bias_ratio,phi_over_phi0,r_fq_normalized\n";
        for (const auto& c : curves)
            for (const auto& s : c.samples)
                csv << io::format_number(c.bias_ratio) << ',' << io::format_number(s.phi_applied) << ','
                    << io::format_number(s.r_fq) << '\n';
        text = csv.str();
    }
    detail::emit(args.output, text, out);
    return kSuccess;
}

struct ActivityArgs
{
    std::string bias_range = "0:1:0.01";
    std::string depths     = "1,2,3,4,5";
    bool integer_mode      = false;
    std::uint64_t n        = 10;
    detail::Output output;
};

inline int cmd_activity(const ActivityArgs& args, const std::string& invocation, std::ostream& out)
{
    const auto range = detail::parse_range(args.bias_range, "--bias-range");
    if (range.start < 0.0 || range.stop > 1.0)
        throw ArgumentError("--bias-range must lie within [0, 1]");
    if (!range.step)
        throw ArgumentError("--bias-range needs a step (start:stop:step)");
    std::vector< unsigned > depths;
    for (double d : detail::parse_list(args.depths, "depth"))
    {
        if (d < 1 || d != std::floor(d))
            throw ArgumentError("depths must be positive integers");
        depths.push_back(static_cast< unsigned >(d));
    }
    if (args.n < 1)
        throw ArgumentError("--n must be >= 1");

    struct Row
    {
        double bias;
        unsigned h;
        double fraction;
        bool unreachable;
    };
    std::vector< Row > rows;
    for (double bias : detail::range_values(range))
    {
        bias = std::min(bias, 1.0);
        const BiasPoint point{bias};
        for (unsigned h : depths)
        {
            const double f = point_activity_fraction(point);
            Row row{bias, h, tree_activity_fraction(point, h), f > 1.0};
            if (args.integer_mode && !row.unreachable)
            {
                const auto result = activity_result(point, args.n);
                row.fraction      = std::pow(static_cast< double >(result.p_integer) / static_cast< double >(args.n), h);
            }
            rows.push_back(row);
        }
    }

    std::string text;
    if (args.output.format == "json")
    {
        nlohmann::json doc{{"version", io::kVersion},
                           {"invocation", invocation},
                           {"integer_mode", args.integer_mode},
                           {"rows", nlohmann::json::array()}};
        if (args.integer_mode)
            doc["n"] = args.n;
        for (const auto& r : rows)
            doc["rows"].push_back({{"bias_ratio", io::round_significant(r.bias)},
                                   {"H", r.h},
                                   {"activity_fraction", io::round_significant(r.fraction)},
                                   {"status", r.unreachable ? "unreachable" : "ok"}});
        text = detail::dump_json(doc);
    }
    else
    {
        std::ostringstream csv;
        csv << detail::header_comment(invocation) << "bias_ratio,H,activity_fraction,status\n";
        for (const auto& r : rows)
            csv << io::format_number(r.bias) << ',' << r.h << ',' << io::format_number(r.fraction) << ','
                << (r.unreachable ? "unreachable" : "ok") << '\n';
        text = csv.str();
    }
    detail::emit(args.output, text, out);
    return kSuccess;
}

struct DesignArgs
{
    std::string config;
    std::string mode  = "collection";
    std::string sweep = "n=2:100";
    std::string k_list;
    std::string ic_list;
    std::string report;
    bool sfq = false;
    detail::Output output;
};

inline int cmd_design(const DesignArgs& args, const std::string& invocation, std::ostream& out, std::ostream& err)
{
    DesignConfig cfg = args.config.empty() ? DesignConfig{} : load_design_config(args.config);
    if (args.sfq)
        cfg.no_collection.sfq_mode = true;

    const auto eq = args.sweep.find('=');
    if (eq == std::string::npos || args.sweep.substr(0, eq) != "n")
        throw ArgumentError("--sweep must look like n=start:stop[:step]");
    const auto n_range = detail::parse_range(args.sweep.substr(eq + 1), "--sweep");
    if (n_range.start < 1 || n_range.start != std::floor(n_range.start) || n_range.stop != std::floor(n_range.stop) ||
        (n_range.step && *n_range.step != std::floor(*n_range.step)))
        throw ArgumentError("--sweep over n needs positive integer bounds and step");
    std::vector< std::uint64_t > ns;
    for (double v : detail::range_values(n_range))
        ns.push_back(static_cast< std::uint64_t >(v));

    const bool needs_k = args.mode != "sfq";
    std::vector< double > ks = args.k_list.empty()
                                   ? std::vector< double >{args.mode == "collection" ? cfg.collection.k1
                                                                                     : cfg.no_collection.k}
                                   : detail::parse_list(args.k_list, "k");
    if (!needs_k)
        ks = {0.0};
    std::vector< double > ics = args.ic_list.empty() ? std::vector< double >{cfg.collection.ic}
                                                     : detail::parse_list(args.ic_list, "ic_uA");
    if (!args.ic_list.empty())
        for (auto& ic : ics)
            ic = units::from_uA(ic);

    struct Row
    {
        double k;
        double ic;
        std::uint64_t n;
        double l_di2;
        std::optional< double > ic_di;
        double check_error;
    };
    std::vector< Row > rows;
    nlohmann::json feasibility = nlohmann::json::array();
    nlohmann::json consistency = nlohmann::json::array();

    auto fail_check = [](double error, const std::string& what) {
        if (!(error <= 1e-12))
            throw InternalCheckFailure(what + " round-trip check failed (relative error " +
                                       io::format_number(error) + ")");
    };

    for (double ic : ics)
        for (double k : ks)
            for (auto n : ns)
            {
                Row row{k, ic, n, 0.0, std::nullopt, 0.0};
                if (args.mode == "collection")
                {
                    auto d  = cfg.collection;
                    d.ic    = ic;
                    d.n     = n;
                    if (!args.k_list.empty())
                        d.k1 = d.k2 = k;
                    row.k     = d.k1;
                    d         = with_designed_ldi2(d);
                    row.l_di2 = d.l_di2;
                    const std::vector< double > saturated(n, d.i_sat());
                    const double flux = applied_flux_collection(d, saturated);
                    row.check_error   = std::abs(flux - d.phi_max) / d.phi_max;
                    fail_check(row.check_error, "collection-loop flux");
                }
                else if (args.mode == "no_collection")
                {
                    auto d      = cfg.no_collection;
                    d.n         = n;
                    d.k         = k;
                    d.ic_dr     = args.ic_list.empty() ? d.ic_dr : ic;
                    d.ic_di     = args.ic_list.empty() ? d.ic_di : ic;
                    row.ic      = d.ic_dr;
                    row.l_di2   = design_no_collection(d, cfg.phi_max);
                    row.ic_di   = d.ic_di;
                    const double l_dr1 = d.l_dr1 > 0.0 ? d.l_dr1 : washer_segment(n, d.ic_dr);
                    const double flux =
                        static_cast< double >(n) * k * std::sqrt(row.l_di2 * l_dr1) * d.ic_di / kPhi0;
                    row.check_error = std::abs(flux - cfg.phi_max) / cfg.phi_max;
                    fail_check(row.check_error, "no-collection flux");
                }
                else if (args.mode == "sfq")
                {
                    row.k           = sfq_coupling(n);
                    row.l_di2       = no_collection_shared_ic(n, row.k, ic);
                    row.check_error = std::abs(row.l_di2 * ic / kPhi0 - 1.0);
                    fail_check(row.check_error, "single-flux inductance");
                }
                else // vary_ic
                {
                    const auto& d      = cfg.no_collection;
                    const double ic_dr = args.ic_list.empty() ? d.ic_dr : ic;
                    row.ic             = ic_dr;
                    const auto result  = vary_ic_no_collection(n, k, ic_dr, d.sfq_mode, d.ic_di);
                    row.l_di2          = result.l_di2;
                    row.ic_di          = result.ic_di;
                    if (d.sfq_mode)
                    {
                        row.check_error = std::abs(result.l_di2 * result.ic_di / kPhi0 - 1.0);
                        fail_check(row.check_error, "single-flux inductance");
                        const auto report = sfq_ic_consistency(n, k, ic_dr);
                        consistency.push_back({{"n", n},
                                               {"k", io::round_significant(k)},
                                               {"ic_dr_A", io::round_significant(ic_dr)},
                                               {"ic_di_as_stated_A", io::round_significant(report.ic_di_as_stated)},
                                               {"ic_di_consistent_A", io::round_significant(report.ic_di_consistent)},
                                               {"ratio", io::round_significant(report.ratio)},
                                               {"phi_max_as_stated_phi0", io::round_significant(report.phi_max_as_stated)},
                                               {"phi_max_consistent_phi0",
                                                io::round_significant(report.phi_max_consistent)},
                                               {"consistent", report.consistent}});
                    }
                    else
                    {
                        const double flux = static_cast< double >(n) * k *
                                            std::sqrt(result.l_di2 * washer_segment(n, ic_dr)) * result.ic_di / kPhi0;
                        row.check_error = std::abs(flux - 0.5) / 0.5;
                        fail_check(row.check_error, "separate-Ic flux");
                    }
                }
                const auto note = assess_inductance("l_di2", row.l_di2);
                if (note.difficult)
                    feasibility.push_back({{"row", rows.size()},
                                           {"n", n},
                                           {"k", io::round_significant(row.k)},
                                           {"ic_A", io::round_significant(row.ic)},
                                           {"l_di2_pH", io::round_significant(units::to_pH(row.l_di2))},
                                           {"message", note.message}});
                rows.push_back(row);
            }

    std::string text;
    if (args.output.format == "json")
    {
        nlohmann::json doc{{"version", io::kVersion}, {"invocation", invocation}, {"mode", args.mode},
                           {"rows", nlohmann::json::array()}};
        for (const auto& r : rows)
        {
            nlohmann::json row{{"k", io::round_significant(r.k)},
                               {"ic_uA", io::round_significant(units::to_uA(r.ic))},
                               {"n", r.n},
                               {"l_di2_pH", io::round_significant(units::to_pH(r.l_di2))},
                               {"check_rel_error", io::round_significant(r.check_error)}};
            if (r.ic_di)
                row["ic_di_uA"] = io::round_significant(units::to_uA(*r.ic_di));
            doc["rows"].push_back(std::move(row));
        }
        text = detail::dump_json(doc);
    }
    else
    {
        std::ostringstream csv;
        csv << detail::header_comment(invocation) << "mode,k,ic_uA,n,l_di2_pH,ic_di_uA,check_rel_error\n";
        for (const auto& r : rows)
            csv << args.mode << ',' << io::format_number(r.k) << ',' << io::format_number(units::to_uA(r.ic)) << ','
                << r.n << ',' << io::format_number(units::to_pH(r.l_di2)) << ','
                << (r.ic_di ? io::format_number(units::to_uA(*r.ic_di)) : "") << ','
                << io::format_number(r.check_error) << '\n';
        text = csv.str();
    }
    detail::emit(args.output, text, out);

    nlohmann::json report{{"version", io::kVersion},
                          {"invocation", invocation},
                          {"mode", args.mode},
                          {"fabrication_floor_pH", io::round_significant(units::to_pH(kFabricationFloor))},
                          {"feasibility_warnings", feasibility}};
    nlohmann::json sfq_levels = nlohmann::json::array();
    for (double ic : ics)
        sfq_levels.push_back({{"ic_uA", io::round_significant(units::to_uA(ic))},
                              {"l_di2_sfq_pH", io::round_significant(units::to_pH(kPhi0 / ic))}});
    report["sfq_level"] = sfq_levels;
    if (args.mode == "vary_ic" && cfg.no_collection.sfq_mode)
    {
        report["sfq_ic_consistency"] = consistency;
        report["sfq_ic_consistency_note"] = sfq_ic_consistency(ns.front(), ks.front(), cfg.no_collection.ic_dr).summary;
    }

    std::string report_path = args.report;
    if (report_path.empty() && !args.output.path.empty())
        report_path = args.output.path + ".report.json";
    if (report_path.empty())
        err << detail::dump_json(report);
    else
    {
        std::ofstream file{report_path, std::ios::binary};
        if (!file)
            throw ArgumentError("cannot open report file '" + report_path + "'");
        file << detail::dump_json(report);
    }
    return kSuccess;
}

struct TreeVerifyArgs
{
    std::uint64_t n  = 2;
    unsigned h_depth = 3;
    double bias      = 0.7;
    std::string mode;
    bool snapshot = false;
    detail::Output output{{}, "json"};
};

inline int cmd_tree_verify(const TreeVerifyArgs& args, const std::string& invocation, std::ostream& out)
{
    const auto tree     = build_tree(args.n, args.h_depth, args.bias);
    const bool can_scan = tree.leaf_count() <= kMaxExhaustiveLeaves;
    const std::string mode = args.mode.empty() ? (can_scan ? "exhaustive" : "constructive") : args.mode;
    if (mode == "exhaustive" && !can_scan)
        throw ArgumentError("exhaustive mode requires n^H <= " + std::to_string(kMaxExhaustiveLeaves));

    const auto analytic      = activity_result(BiasPoint{args.bias}, args.n);
    const auto constructive  = min_active_synapses(tree, SearchMode::constructive);
    std::optional< std::uint64_t > p_analytic;
    if (analytic.reachable)
        p_analytic = *checked_pow(analytic.p_integer, args.h_depth);

    nlohmann::json doc{{"version", io::kVersion},
                       {"invocation", invocation},
                       {"mode", mode},
                       {"topology", io::to_json(tree.topology())},
                       {"bias_ratio", io::round_significant(args.bias)},
                       {"fraction", io::round_significant(analytic.fraction_continuous)},
                       {"reachable", analytic.reachable},
                       {"p", analytic.reachable ? nlohmann::json(analytic.p_integer) : nlohmann::json(nullptr)},
                       {"P_analytic", p_analytic ? nlohmann::json(*p_analytic) : nlohmann::json(nullptr)}};

    bool agree = false;
    std::vector< std::size_t > witness;
    if (mode == "exhaustive")
    {
        const auto brute = min_active_synapses(tree, SearchMode::exhaustive);
        doc["P_bruteforce"] = brute.reachable ? nlohmann::json(brute.count) : nlohmann::json(nullptr);
        agree   = brute.reachable == analytic.reachable && (!brute.reachable || brute.count == *p_analytic);
        witness = brute.witness;
    }
    else
    {
        doc["P_constructive"] = constructive.reachable ? nlohmann::json(constructive.count) : nlohmann::json(nullptr);
        agree = constructive.reachable == analytic.reachable &&
                (!constructive.reachable ||
                 (constructive.count == *p_analytic && propagate_binary(tree, constructive.witness).soma_fired));
        witness = constructive.witness;
    }

    if (mode == "dynamical")
    {
        CollectionLoopDesign design;
        design.n        = args.n;
        design          = with_designed_ldi2(design);
        const auto squid = SquidParams::standard(std::min(args.bias, 1.0 - 1e-12), design.ic);
        const auto all   = [&] {
            std::vector< std::size_t > leaves(tree.leaf_count());
            for (std::size_t i = 0; i < leaves.size(); ++i)
                leaves[i] = i;
            return leaves;
        }();
        const auto run = [&](std::span< const std::size_t > active) {
            return propagate_dynamical(tree, SynapseState::saturated(tree.leaf_count(), active, design.i_sat()), squid,
                                       design);
        };
        const auto dyn_full  = run(all);
        const auto dyn_empty = run({});
        const auto dyn_wit   = run(witness);
        const bool bin_full  = propagate_binary(tree, all).soma_fired;
        const bool bin_empty = propagate_binary(tree, {}).soma_fired;
        const bool extremes  = dyn_full.propagation.soma_fired == bin_full && dyn_empty.propagation.soma_fired == bin_empty;
        doc["dynamical"] = {{"all_saturated_soma_fired", dyn_full.propagation.soma_fired},
                            {"all_zero_soma_fired", dyn_empty.propagation.soma_fired},
                            {"binary_all_saturated_soma_fired", bin_full},
                            {"binary_all_zero_soma_fired", bin_empty},
                            {"extremes_agree", extremes},
                            {"witness_soma_fired", dyn_wit.propagation.soma_fired},
                            {"witness_soma_r_fq", io::round_significant(dyn_wit.rate[0])},
                            {"accumulation_gain_A", io::round_significant(dyn_wit.accumulation_gain)}};
        agree = agree && extremes;
        if (args.snapshot)
            doc["snapshot"] = io::snapshot(tree, dyn_wit.propagation, dyn_wit.rate, dyn_wit.di_current);
    }
    else if (args.snapshot)
        doc["snapshot"] = io::snapshot(tree, propagate_binary(tree, witness));

    doc["agree"]   = agree;
    doc["witness"] = witness;

    std::string text;
    if (args.output.format == "csv")
    {
        std::ostringstream csv;
        csv << detail::header_comment(invocation) << "field,value\n";
        for (const auto& key : {"mode", "bias_ratio", "fraction", "reachable", "p", "P_analytic", "P_bruteforce",
                                "P_constructive", "agree"})
            if (doc.contains(key))
                csv << key << ',' << (doc[key].is_string() ? doc[key].get< std::string >() : doc[key].dump()) << '\n';
        text = csv.str();
    }
    else
        text = detail::dump_json(doc);
    detail::emit(args.output, text, out);

    if (!agree)
        throw VerificationDisagreement("analytic and searched minimum activity disagree");
    return kSuccess;
}

/// Runs the command line; returns the process exit code.
inline int run(const std::vector< std::string >& argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    CLI::App app{"Design and verification toolkit for SQUID neurons with dendritic trees", "squidfan"};
    app.set_version_flag("--version", std::string{"squidfan "} + io::kVersion);
    app.require_subcommand(1);

    ResponseArgs response;
    auto* rsp = app.add_subcommand("response", "Simulated SQUID response curves (fluxon rate vs applied flux)");
    rsp->add_option("--bias", response.bias, "Comma-separated bias ratios I_b/I_c");
    rsp->add_option("--range", response.range, "Applied flux range start:stop in phi0 units");
    rsp->add_option("--points", response.points, "Samples per curve")->check(CLI::Range(2, 1000000));
    rsp->add_option("--ic-uA", response.ic_ua, "Junction critical current in microamperes");
    rsp->add_option("--beta-l", response.beta_l, "Screening parameter 2 L Ic / phi0");
    rsp->add_option("--beta-c", response.beta_c, "Stewart-McCumber damping parameter");
    rsp->add_option("--t-settle", response.t_settle, "Settle time (normalized)");
    rsp->add_option("--t-measure", response.t_measure, "Measurement window (normalized)");
    detail::add_output_options(rsp, response.output);

    ActivityArgs activity;
    auto* act = app.add_subcommand("activity", "Threshold activity fraction vs bias for several tree depths");
    act->add_option("--bias-range", activity.bias_range, "Bias grid start:stop:step within [0, 1]");
    act->add_option("--depths,--H", activity.depths, "Comma-separated tree depths");
    act->add_flag("--integer", activity.integer_mode, "Round p up to an integer count of inputs");
    act->add_option("--n", activity.n, "Fan-in used for integer mode");
    detail::add_output_options(act, activity.output);

    DesignArgs design;
    auto* dsg = app.add_subcommand("design", "Inductance design tables");
    dsg->add_option("--config", design.config, "Design configuration JSON");
    dsg->add_option("--mode", design.mode, "Circuit variant")
        ->check(CLI::IsMember({"collection", "no_collection", "sfq", "vary_ic"}));
    dsg->add_option("--sweep", design.sweep, "Fan-in sweep n=start:stop[:step]");
    dsg->add_option("--k", design.k_list, "Comma-separated coupling factors (overrides config)");
    dsg->add_option("--ic-uA", design.ic_list, "Comma-separated critical currents in uA (overrides config)");
    dsg->add_flag("--sfq", design.sfq, "Single-flux storage in vary_ic mode (overrides config sfq_mode)");
    dsg->add_option("--report", design.report, "Feasibility report path (default: <output>.report.json)");
    detail::add_output_options(dsg, design.output);

    TreeVerifyArgs verify;
    auto* tv = app.add_subcommand("tree-verify", "Check the minimum active synapse count against p^H");
    tv->add_option("n", verify.n, "Fan-in factor")->required()->check(CLI::PositiveNumber);
    tv->add_option("H", verify.h_depth, "Tree depth")->required()->check(CLI::PositiveNumber);
    tv->add_option("bias", verify.bias, "Bias ratio I_b/I_c")->required()->check(CLI::Range(0.0, 1.0));
    tv->add_option("--mode", verify.mode, "exhaustive | constructive | dynamical")
        ->check(CLI::IsMember({"exhaustive", "constructive", "dynamical"}));
    tv->add_flag("--snapshot", verify.snapshot, "Include the per-node state of the witness propagation");
    detail::add_output_options(tv, verify.output);

    std::vector< std::string > reversed(argv.rbegin(), argv.rend() - (argv.empty() ? 0 : 1));
    std::string invocation = "squidfan";
    for (std::size_t i = 1; i < argv.size(); ++i)
        invocation += " " + argv[i];

    try
    {
        app.parse(reversed);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsage;
    }

    try
    {
        if (rsp->parsed())
            return cmd_response(response, invocation, out);
        if (act->parsed())
            return cmd_activity(activity, invocation, out);
        if (dsg->parsed())
            return cmd_design(design, invocation, out, err);
        if (tv->parsed())
            return cmd_tree_verify(verify, invocation, out);
    }
    catch (const VerificationDisagreement& e)
    {
        err << "error: " << e.what() << '\n';
        return kDisagreement;
    }
    catch (const InternalCheckFailure& e)
    {
        err << "error: " << e.what() << '\n';
        return kConstraintViolation;
    }
    catch (const ConstraintViolation& e)
    {
        err << "error: " << e.what() << '\n';
        return kConstraintViolation;
    }
    catch (const IntegrationError& e)
    {
        err << "error: " << e.what() << '\n';
        return kNumericalFailure;
    }
    catch (const Error& e)
    {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

} // namespace squidfan::cli

#endif
