#ifndef SQUIDFAN_INDUCTANCE_DESIGNER_HPP
#define SQUIDFAN_INDUCTANCE_DESIGNER_HPP

#include "squidfan/constants.hpp"
#include "squidfan/errors.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace squidfan
{

// All quantities are SI (henries, amperes) except flux budgets, which are in Φ0 units.

/// Receiving (DR) SQUID inductances for β_L = 1.
struct DrLoopSpec
{
    double ic;
    double l_washer; // Φ0 / (2 Ic)
    double l_total;  // washer plus both junction inductances, (Φ0/Ic)(3π+2)/(4π)
};

inline DrLoopSpec size_squid(double ic)
{
    detail::require(ic > 0.0, "ic must be positive");
    return {ic, kPhi0 / (2.0 * ic), kPhi0 / ic * kTotalInductancePrefactor};
}

/// Dendrite with a collection (DC) loop: n integration (DI) loops couple into the
/// DC loop through washers L^dc1; the DC loop couples into the receiving SQUID
/// through L^dc3. L^dc2 = alpha * L^dc3 is the loop's parasitic inductance.
struct CollectionLoopDesign
{
    double ic        = 300e-6;
    std::uint64_t n  = 10;
    double l_dc1     = 10e-12;
    double alpha     = 0.05;
    double l_dc3     = 100e-12;
    double k1        = 0.5;
    double k2        = 0.5;
    double l_di1     = 1e-9;
    double l_di2     = 0.0; // designed quantity; 0 until designed
    double gamma     = 1.0;
    double phi_max   = 0.5;

    [[nodiscard]] double i_sat() const { return gamma * ic; }
    [[nodiscard]] double l_washer() const { return kPhi0 / (2.0 * ic); }

    /// Validates everything except l_di2.
    void validate_inputs() const
    {
        detail::require(ic > 0.0, "ic must be positive");
        detail::require(n >= 1, "n must be >= 1");
        detail::require(l_dc1 > 0.0 && l_dc3 > 0.0 && l_di1 > 0.0, "inductances must be positive");
        detail::require(alpha >= 0.0, "alpha must be non-negative");
        detail::require(k1 > 0.0 && k1 <= 1.0 && k2 > 0.0 && k2 <= 1.0, "coupling factors must lie in (0, 1]");
        detail::require(gamma > 0.0, "gamma must be positive");
        detail::require(phi_max > 0.0 && phi_max <= 0.5, "phi_max must lie in (0, 0.5]");
    }

    void validate() const
    {
        validate_inputs();
        detail::require(l_di2 > 0.0, "l_di2 must be positive (run design_ldi2_collection)");
    }
};

/// Total DC loop inductance n L^dc1 + (1 + alpha) L^dc3.
inline double dc_loop_inductance(const CollectionLoopDesign& d)
{
    return static_cast< double >(d.n) * d.l_dc1 + (1.0 + d.alpha) * d.l_dc3;
}

inline double mutual_dc_di(const CollectionLoopDesign& d) { return d.k1 * std::sqrt(d.l_di2 * d.l_dc1); }
inline double mutual_dr_dc(const CollectionLoopDesign& d) { return d.k2 * std::sqrt(d.l_dc3 * d.l_washer()); }

/// Flux applied to the receiving SQUID (Φ0 units) for the given DI loop currents.
inline double applied_flux_collection(const CollectionLoopDesign& d, std::span< const double > di_currents)
{
    d.validate();
    detail::require(di_currents.size() == d.n, "expected " + std::to_string(d.n) + " DI currents, got " +
                                                   std::to_string(di_currents.size()));
    const double i_sat = d.i_sat();
    double total       = 0.0;
    for (std::size_t i = 0; i < di_currents.size(); ++i)
    {
        const double current = di_currents[i];
        detail::require(current >= 0.0, "DI current must be non-negative");
        if (current > i_sat * (1.0 + 1e-12))
            throw SaturationError("DI current " + std::to_string(current) + " A on input " + std::to_string(i) +
                                  " exceeds saturation current " + std::to_string(i_sat) + " A");
        total += current;
    }
    // Homogeneous inputs share one M^dc|di, so the sum factors out.
    const double flux = mutual_dr_dc(d) / dc_loop_inductance(d) * mutual_dc_di(d) * total;
    return flux / kPhi0;
}

/// L^di2 that makes n saturated inputs deliver exactly phi_max to the SQUID.
inline double design_ldi2_collection(const CollectionLoopDesign& d)
{
    d.validate_inputs();
    const double n      = static_cast< double >(d.n);
    const double budget = d.phi_max * kPhi0 / (d.k1 * d.k2 * d.i_sat());
    const double bracket =
        std::sqrt(d.l_dc1 / d.l_dc3) + std::sqrt(d.l_dc3 / d.l_dc1) * (1.0 + d.alpha) / n;
    const double root = budget * bracket;
    return root * root / d.l_washer();
}

inline CollectionLoopDesign with_designed_ldi2(CollectionLoopDesign d)
{
    d.l_di2 = design_ldi2_collection(d);
    return d;
}

/// Large-n limit of design_ldi2_collection.
inline double ldi2_collection_asymptote(const CollectionLoopDesign& d)
{
    d.validate_inputs();
    const double budget = d.phi_max * kPhi0 / (d.k1 * d.k2 * d.i_sat());
    return budget * budget * (d.l_dc1 / d.l_dc3) / d.l_washer();
}

/// Throws ConstraintViolation when l_di2 departs from the flux-limiting value.
inline void check_collection_constraint(const CollectionLoopDesign& d, double rel_tol = 1e-9)
{
    d.validate();
    const double required = design_ldi2_collection(d);
    if (std::abs(d.l_di2 - required) > rel_tol * required)
    {
        std::ostringstream msg;
        msg << "l_di2 = " << d.l_di2 << " H violates the flux-limiting constraint (required " << required << " H)";
        throw ConstraintViolation(msg.str());
    }
}

/// Fraction p/n of saturated inputs that brings the receiving SQUID to its
/// threshold current Ic - Ib, worked through the circuit's mutual inductances.
inline double threshold_fraction_circuit(const CollectionLoopDesign& d, double bias_ratio)
{
    detail::require(bias_ratio > 0.0 && bias_ratio < 1.0, "bias_ratio must lie in (0, 1)");
    check_collection_constraint(d);
    const double flux_per_input = mutual_dr_dc(d) * mutual_dc_di(d) * d.i_sat() / dc_loop_inductance(d);
    const double threshold_flux = size_squid(d.ic).l_total * (d.ic - bias_ratio * d.ic);
    const double p              = threshold_flux / flux_per_input;
    return p / static_cast< double >(d.n);
}

/// Current induced in one DI loop when p sibling inputs are saturated.
inline double crosstalk_current(const CollectionLoopDesign& d, std::uint64_t p_active)
{
    d.validate();
    detail::require(p_active <= d.n, "p_active must not exceed n");
    const double l_di_total = d.l_di1 + d.l_di2;
    return static_cast< double >(p_active) *
           (d.k1 * d.k1 * d.l_di2 * d.l_dc1 / (dc_loop_inductance(d) * l_di_total)) * d.i_sat();
}

/// Dendrite without a collection loop: each DI loop couples straight into its
/// own segment L^dr1 of the receiving SQUID washer.
struct NoCollectionDesign
{
    std::uint64_t n = 10;
    double k        = 0.5;
    double ic_dr    = 300e-6;
    double ic_di    = 300e-6;
    double l_dr1    = 0.0; // 0 selects washer_segment(n, ic_dr)
    bool sfq_mode   = false;

    void validate() const
    {
        detail::require(n >= 1, "n must be >= 1");
        detail::require(k > 0.0 && k <= 1.0, "k must lie in (0, 1]");
        detail::require(ic_dr > 0.0 && ic_di > 0.0, "critical currents must be positive");
        detail::require(l_dr1 >= 0.0, "l_dr1 must be non-negative");
    }
};

/// Washer segment per input: the β_L = 1 washer Φ0/(2 Ic) split into n equal
/// parts, so the general and the shared-Ic constraints coincide.
inline double washer_segment(std::uint64_t n, double ic_dr)
{
    detail::require(n >= 1 && ic_dr > 0.0, "washer_segment needs n >= 1 and ic_dr > 0");
    return kPhi0 / (2.0 * static_cast< double >(n) * ic_dr);
}

/// L^di2 = (1/L^dr1) (phi_max / (n k I_sat))^2 with I_sat = Ic of the DI junctions.
inline double design_no_collection(const NoCollectionDesign& d, double phi_max = 0.5)
{
    d.validate();
    detail::require(phi_max > 0.0 && phi_max <= 0.5, "phi_max must lie in (0, 0.5]");
    const double l_dr1 = d.l_dr1 > 0.0 ? d.l_dr1 : washer_segment(d.n, d.ic_dr);
    const double root  = phi_max * kPhi0 / (static_cast< double >(d.n) * d.k * d.ic_di);
    return root * root / l_dr1;
}

/// Shared-Ic closed form Φ0 / (2 n k^2 Ic).
inline double no_collection_shared_ic(std::uint64_t n, double k, double ic)
{
    detail::require(n >= 1 && k > 0.0 && ic > 0.0, "no_collection_shared_ic needs n >= 1, k > 0, ic > 0");
    return kPhi0 / (2.0 * static_cast< double >(n) * k * k * ic);
}

/// Coupling at which the shared-Ic constraint yields single-flux storage L^di2 = Φ0/Ic.
inline double sfq_coupling(std::uint64_t n)
{
    detail::require(n >= 1, "n must be >= 1");
    return 1.0 / std::sqrt(2.0 * static_cast< double >(n));
}

struct VaryIcResult
{
    double l_di2;
    double ic_di;
};

/// Separate DI and DR junction critical currents. Outside SFQ mode ic_di is an
/// input; in SFQ mode it is set to ic_dr / (n k^2) and L^di2 to Φ0 / ic_di.
inline VaryIcResult vary_ic_no_collection(std::uint64_t n, double k, double ic_dr, bool sfq_mode,
                                          std::optional< double > ic_di = std::nullopt)
{
    detail::require(n >= 1, "n must be >= 1");
    detail::require(k > 0.0 && k <= 1.0, "k must lie in (0, 1]");
    detail::require(ic_dr > 0.0, "ic_dr must be positive");
    const double nk2 = static_cast< double >(n) * k * k;
    if (sfq_mode)
    {
        const double ic = ic_dr / nk2;
        return {kPhi0 / ic, ic};
    }
    const double ic = ic_di.value_or(ic_dr);
    detail::require(ic > 0.0, "ic_di must be positive");
    return {kPhi0 / (2.0 * nk2) * ic_dr / (ic * ic), ic};
}

/// Compares the SFQ-mode DI critical current stated for separate Ics,
/// ic_dr / (n k^2), against the value implied by combining the flux-limiting
/// constraint with single-flux storage, ic_dr / (2 n k^2).
struct SfqIcConsistencyReport
{
    std::uint64_t n;
    double k;
    double ic_dr;
    double ic_di_as_stated;     // ic_dr / (n k^2)
    double ic_di_consistent;    // ic_dr / (2 n k^2)
    double ratio;               // as_stated / consistent
    double phi_max_as_stated;   // max applied flux (Φ0 units) with ic_di_as_stated and L^di2 = Φ0/ic_di
    double phi_max_consistent;  // same with ic_di_consistent; 0.5 by construction
    bool consistent;
    std::string summary;
};

inline SfqIcConsistencyReport sfq_ic_consistency(std::uint64_t n, double k, double ic_dr)
{
    const auto stated = vary_ic_no_collection(n, k, ic_dr, true);
    const double nk2  = static_cast< double >(n) * k * k;
    const double ic_c = ic_dr / (2.0 * nk2);

    // Max flux for n saturated SFQ inputs into washer segments Φ0/(2 n ic_dr).
    auto max_flux = [&](double ic_di) {
        const double l_di2 = kPhi0 / ic_di;
        const double m     = k * std::sqrt(l_di2 * washer_segment(n, ic_dr));
        return static_cast< double >(n) * m * ic_di / kPhi0;
    };

    SfqIcConsistencyReport r{n, k, ic_dr, stated.ic_di, ic_c, stated.ic_di / ic_c, max_flux(stated.ic_di),
                             max_flux(ic_c), false, {}};
    r.consistent = std::abs(r.ratio - 1.0) < 1e-12;
    std::ostringstream msg;
    msg << "SFQ with separate Ic: stated ic_di = ic_dr/(n k^2) = " << r.ic_di_as_stated
        << " A; flux limit plus single-flux storage implies ic_di = ic_dr/(2 n k^2) = " << r.ic_di_consistent
        << " A (ratio " << r.ratio << "). With the stated value the maximum applied flux is " << r.phi_max_as_stated
        << " phi0 instead of " << r.phi_max_consistent << " phi0.";
    r.summary = msg.str();
    return r;
}

/// Inductors below this are flagged as hard to fabricate.
inline constexpr double kFabricationFloor = 0.1e-12;

struct FeasibilityNote
{
    std::string quantity;
    double value;
    bool difficult;
    std::string message;
};

inline FeasibilityNote assess_inductance(const std::string& quantity, double henries)
{
    const bool difficult = henries < kFabricationFloor;
    std::ostringstream msg;
    msg << quantity << " = " << units::to_pH(henries) << " pH";
    if (difficult)
        msg << " is below " << units::to_pH(kFabricationFloor) << " pH and difficult to fabricate";
    return {quantity, henries, difficult, msg.str()};
}

} // namespace squidfan

#endif
