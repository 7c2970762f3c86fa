#pragma once

#include <string>

#include "prior.hpp"
#include "states.hpp"

namespace bqpe {

// "flat" | "trunc:<lo>..<hi>" | "grid:<csv-path>"
// Grid files hold one "phi,density" pair per line; a header line is skipped.
Prior parse_prior_spec(const std::string& spec);

// "noon:<n>" | "bs:<n>:<tau>" | "coeffs:[re,im;re,im;...]"
// Coefficient lists are normalized.
FockSuperposition parse_state_spec(const std::string& spec);

}  // namespace bqpe
