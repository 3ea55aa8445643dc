#ifndef TPEQW_TPEQW_HPP
#define TPEQW_TPEQW_HPP

// Umbrella header for the quantum-well two-photon entangled-pair source
// model: matrix elements, cavity density of states, absolute pair rates,
// emission statistics and Bell-test analysis.

#include "tpeqw/band_model.hpp"
#include "tpeqw/cavity.hpp"
#include "tpeqw/commands.hpp"
#include "tpeqw/config.hpp"
#include "tpeqw/constants.hpp"
#include "tpeqw/entanglement.hpp"
#include "tpeqw/errors.hpp"
#include "tpeqw/events.hpp"
#include "tpeqw/rate_engine.hpp"
#include "tpeqw/report.hpp"
#include "tpeqw/rng.hpp"

#endif // TPEQW_TPEQW_HPP
