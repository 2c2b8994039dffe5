#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "berkdil/clusters.hpp"

namespace berkdil {

/**
 * One problem instance as read from a JSON file: the prime of the base
 * field, the covering degree, the labeled point configuration and optional
 * pairing, and the knobs of the numeric oracle.  Point values stay strings
 * ("inf" or a rational "a/b") until point_set() assembles and validates the
 * PointSet.
 */
struct Instance {
    unsigned long prime_ell = 2;
    unsigned long p = 2;
    ValQ vp{0};                 // defaults to 1 when prime_ell == p, else 0
    bool vp_overridden = false; // the file supplied its own vp
    std::vector<std::string> labels;
    std::vector<std::string> values;
    std::optional<std::vector<std::array<std::string, 2>>> pairing; // label pairs
    bool optimal = false;
    long precision = 0; // relative ell-adic digits for roots of unity (odd p)
    int max_words = 12; // truncation cap of the numeric oracle

    ValQ default_vp() const { return prime_ell == p ? ValQ(1) : ValQ(0); }
    bool vp_consistent() const { return vp == default_vp(); }

    PointSet point_set() const;
    // resolves pairing labels to indices; BadInput when absent or not a
    // partition into 2-blocks
    Pairing pairing_blocks(const PointSet& S) const;
    bool has_pairing() const { return pairing.has_value(); }
};

/** Parse and validate; BadInput names the offending field (dotted path). */
Instance instance_from_json(const std::string& text);
Instance instance_from_file(const std::string& path);

/** Canonical serialization; parses back to an equivalent instance. */
std::string instance_to_json(const Instance& inst);

} // namespace berkdil
