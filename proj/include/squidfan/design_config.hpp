#ifndef SQUIDFAN_DESIGN_CONFIG_HPP
#define SQUIDFAN_DESIGN_CONFIG_HPP

#include "squidfan/constants.hpp"
#include "squidfan/errors.hpp"
#include "squidfan/inductance_designer.hpp"

#include <json.hpp>

#include <array>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>

namespace squidfan
{

/// Design configuration file.
///
/// A JSON object. Physical quantities are given either under their SI name
/// (`ic`, `l_dc1`, ...), which requires the tag `"units": "SI"`, or under a
/// unit-suffixed key (`ic_uA`, `ic_A`, `l_dc1_pH`, `l_di1_nH`, ...). Unknown
/// keys are rejected. Recognized quantities:
///
///   currents:     ic, ic_dr, ic_di                      (A, uA)
///   inductances:  l_dc1, l_dc3, l_di1, l_di2, l_dr1     (H, pH, nH)
///   plain:        n, alpha, k, k1, k2, gamma, phi_max (Φ0 units), sfq_mode
///
/// `k` sets k1 = k2 = k for the collection loop and k for the no-collection
/// variants. `ic` is the shared junction Ic; ic_dr and ic_di default to it.
struct DesignConfig
{
    CollectionLoopDesign collection{};
    NoCollectionDesign no_collection{};
    double phi_max = 0.5;
};

class ConfigError : public ArgumentError
{
public:
    using ArgumentError::ArgumentError;
};

namespace detail
{

struct UnitSuffix
{
    std::string_view suffix;
    double scale;
};

inline constexpr std::array< UnitSuffix, 3 > kCurrentUnits{{{"_A", 1.0}, {"_mA", 1e-3}, {"_uA", 1e-6}}};
inline constexpr std::array< UnitSuffix, 4 > kInductanceUnits{{{"_H", 1.0}, {"_nH", 1e-9}, {"_pH", 1e-12}, {"_fH", 1e-15}}};

inline double number_field(const nlohmann::json& value, const std::string& key)
{
    if (!value.is_number())
        throw ConfigError("config key '" + key + "' must be a number");
    return value.get< double >();
}

} // namespace detail

inline DesignConfig parse_design_config(const nlohmann::json& doc)
{
    if (!doc.is_object())
        throw ConfigError("design config must be a JSON object");

    bool si_tagged = false;
    if (auto it = doc.find("units"); it != doc.end())
    {
        if (!it->is_string() || it->get< std::string >() != "SI")
            throw ConfigError("\"units\" must be \"SI\"");
        si_tagged = true;
    }

    std::optional< double > ic, ic_dr, ic_di, l_dc1, l_dc3, l_di1, l_di2, l_dr1;
    std::optional< double > k, k1, k2, alpha, gamma, phi_max;
    std::optional< std::uint64_t > n;
    std::optional< bool > sfq_mode;

    struct Physical
    {
        std::string_view name;
        std::optional< double >* target;
        bool is_current;
    };
    const std::array< Physical, 8 > physical{{{"ic", &ic, true},
                                              {"ic_dr", &ic_dr, true},
                                              {"ic_di", &ic_di, true},
                                              {"l_dc1", &l_dc1, false},
                                              {"l_dc3", &l_dc3, false},
                                              {"l_di1", &l_di1, false},
                                              {"l_di2", &l_di2, false},
                                              {"l_dr1", &l_dr1, false}}};
    struct Plain
    {
        std::string_view name;
        std::optional< double >* target;
    };
    const std::array< Plain, 6 > plain{
        {{"k", &k}, {"k1", &k1}, {"k2", &k2}, {"alpha", &alpha}, {"gamma", &gamma}, {"phi_max", &phi_max}}};

    auto assign = [](std::optional< double >& slot, double value, const std::string& key) {
        if (slot)
            throw ConfigError("config quantity given twice (key '" + key + "')");
        slot = value;
    };

    for (const auto& [key, value] : doc.items())
    {
        if (key == "units")
            continue;
        if (key == "n")
        {
            if (!value.is_number_integer() || value.get< std::int64_t >() < 1)
                throw ConfigError("config key 'n' must be a positive integer");
            n = value.get< std::uint64_t >();
            continue;
        }
        if (key == "sfq_mode")
        {
            if (!value.is_boolean())
                throw ConfigError("config key 'sfq_mode' must be a boolean");
            sfq_mode = value.get< bool >();
            continue;
        }
        if (key == "phi_max_phi0")
        {
            assign(phi_max, detail::number_field(value, key), key);
            continue;
        }

        bool matched = false;
        for (const auto& p : plain)
            if (key == p.name)
            {
                assign(*p.target, detail::number_field(value, key), key);
                matched = true;
            }
        for (const auto& p : physical)
        {
            if (matched)
                break;
            if (key == p.name)
            {
                if (!si_tagged)
                    throw ConfigError("config key '" + key + "' has no unit; add \"units\": \"SI\" or use a suffixed key");
                assign(*p.target, detail::number_field(value, key), key);
                matched = true;
                break;
            }
            auto try_units = [&](auto const& table) {
                for (const auto& u : table)
                    if (key.size() == p.name.size() + u.suffix.size() && key.starts_with(p.name) &&
                        key.ends_with(u.suffix))
                    {
                        assign(*p.target, detail::number_field(value, key) * u.scale, key);
                        return true;
                    }
                return false;
            };
            matched = p.is_current ? try_units(detail::kCurrentUnits) : try_units(detail::kInductanceUnits);
        }
        if (!matched)
            throw ConfigError("unknown config key '" + key + "'");
    }

    DesignConfig cfg;
    auto& c = cfg.collection;
    if (ic)
        c.ic = *ic;
    if (n)
        c.n = *n;
    if (l_dc1)
        c.l_dc1 = *l_dc1;
    if (l_dc3)
        c.l_dc3 = *l_dc3;
    if (l_di1)
        c.l_di1 = *l_di1;
    if (l_di2)
        c.l_di2 = *l_di2;
    if (alpha)
        c.alpha = *alpha;
    if (gamma)
        c.gamma = *gamma;
    if (k)
        c.k1 = c.k2 = *k;
    if (k1)
        c.k1 = *k1;
    if (k2)
        c.k2 = *k2;
    if (phi_max)
        c.phi_max = cfg.phi_max = *phi_max;

    auto& nc = cfg.no_collection;
    nc.n     = c.n;
    nc.k     = k.value_or(c.k1);
    nc.ic_dr = ic_dr.value_or(c.ic);
    nc.ic_di = ic_di.value_or(c.ic);
    if (l_dr1)
        nc.l_dr1 = *l_dr1;
    if (sfq_mode)
        nc.sfq_mode = *sfq_mode;

    c.validate_inputs();
    nc.validate();
    return cfg;
}

inline DesignConfig load_design_config(const std::string& path)
{
    std::ifstream in{path};
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    nlohmann::json doc;
    try
    {
        in >> doc;
    }
    catch (const nlohmann::json::parse_error& e)
    {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_design_config(doc);
}

} // namespace squidfan

#endif
