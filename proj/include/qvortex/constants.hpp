#pragma once

#include "qvortex/errors.hpp"

#include <cmath>

namespace qvx {

/// Unit system for a run. Natural units (hbar = m = c = 1) are the default;
/// any consistent system works because every formula carries its constants.
struct PhysicalConstants {
    double hbar = 1.0;
    double mass = 1.0;
    double charge = 1.0;
    double c = 1.0;

    static PhysicalConstants natural() { return {}; }

    void validate() const {
        if (!(hbar > 0.0) || !std::isfinite(hbar))
            throw InvalidArgument("constants: hbar must be positive and finite");
        if (!(mass > 0.0) || !std::isfinite(mass))
            throw InvalidArgument("constants: mass must be positive and finite");
        if (!(c > 0.0) || !std::isfinite(c))
            throw InvalidArgument("constants: c must be positive and finite");
        if (!std::isfinite(charge))
            throw InvalidArgument("constants: charge must be finite");
    }

    bool operator==(const PhysicalConstants&) const = default;
};

}  // namespace qvx
