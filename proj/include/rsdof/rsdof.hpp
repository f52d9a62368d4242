#pragma once

// Umbrella header for the rsdof toolkit: exact DoF-region construction and
// queries, rate-splitting scheme synthesis, brute-force verification, and
// finite-SNR Monte Carlo validation for the K-user MISO broadcast channel
// with partial CSIT.

#include "rsdof/rational.hpp"
#include "rsdof/profile.hpp"
#include "rsdof/region.hpp"
#include "rsdof/scheme.hpp"
#include "rsdof/synthesizer.hpp"
#include "rsdof/oracle.hpp"
#include "rsdof/simulator.hpp"
#include "rsdof/slice.hpp"
#include "rsdof/serialization.hpp"
